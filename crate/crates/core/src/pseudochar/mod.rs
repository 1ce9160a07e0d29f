//! Pseudocharacters on finite-dimensional algebras: central functionals T
//! with S_{d+1}(T) = 0, their kernels, quotients, corner restrictions,
//! exterior powers and residual decompositions.
//!
//! The coefficient ring A is artinian local over the base field; the
//! algebra is stored flattened over the base field with the A-module
//! structure carried by a central embedding of A.

pub mod identities;
pub mod residual;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FlatAlgebra, Provenance};
use crate::coeff::{ArtinianCoeff, Coeff};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{kernel_basis, row_space, Mat, Subspace};

use identities::TraceEnv;

/// How identity checks pick their verification tuples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VerifyMode {
    /// Exhaustive over basis tuples when (basis size)^(arity) stays within
    /// the budget, randomized otherwise.
    Auto,
    Exhaustive,
    Randomized { trials: u64 },
}

pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 1_000_000;
pub const DEFAULT_TRIALS: u64 = 200;

/// What a verification actually did, and what it saw.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub property: String,
    pub ok: bool,
    pub exhaustive: bool,
    pub tuples_checked: u64,
    pub seed: u64,
    pub witness: Option<Vec<usize>>,
}

/// A central linear functional with a claimed dimension, on a flattened
/// algebra. `iota` embeds the coefficient ring into the center; `t` holds
/// the A-valued trace of each algebra basis vector.
#[derive(Clone, Debug)]
pub struct Pseudocharacter<C: ArtinianCoeff> {
    pub coeff: C,
    pub alg: Arc<FlatAlgebra<C::F>>,
    pub iota: Vec<Vec<<C::F as Field>::Elem>>,
    pub t: Vec<C::Elem>,
    pub d: usize,
}

impl<C: ArtinianCoeff> TraceEnv<C> for Pseudocharacter<C> {
    type X = Vec<<C::F as Field>::Elem>;

    fn coeff(&self) -> &C {
        &self.coeff
    }
    fn x_one(&self) -> Self::X {
        self.alg.one.clone()
    }
    fn x_mul(&self, a: &Self::X, b: &Self::X) -> Self::X {
        self.alg.mul(a, b)
    }
    fn x_add(&self, a: &Self::X, b: &Self::X) -> Self::X {
        self.alg.add(a, b)
    }
    fn x_scale(&self, c: &C::Elem, a: &Self::X) -> Self::X {
        // multiply by the central image of c
        let img = self.iota_of(c);
        self.alg.mul(&img, a)
    }
    fn trace(&self, x: &Self::X) -> C::Elem {
        self.t_of(x)
    }
}

impl<C: ArtinianCoeff> Pseudocharacter<C> {
    /// Assemble and sanity-check a pseudocharacter from raw parts.
    /// Verifies that iota is a central unital embedding, that t is
    /// A-linear through it, and that T(1) = d.
    pub fn new(
        coeff: C,
        alg: Arc<FlatAlgebra<C::F>>,
        iota: Vec<Vec<<C::F as Field>::Elem>>,
        t: Vec<C::Elem>,
        d: usize,
    ) -> Result<Self> {
        if iota.len() != coeff.fdim() || t.len() != alg.dim {
            return Err(Error::Shape("iota/t lengths".into()));
        }
        let psc = Pseudocharacter {
            coeff,
            alg,
            iota,
            t,
            d,
        };
        psc.validate_structure()?;
        Ok(psc)
    }

    fn validate_structure(&self) -> Result<()> {
        let c = &self.coeff;
        let alg = &self.alg;
        // iota(1) = 1
        if self.iota_of(&c.one()) != alg.one {
            return Err(Error::Internal("iota(1) is not the unit".into()));
        }
        // iota is multiplicative and central; enough to check on A-basis
        // and algebra basis
        for a in 0..c.fdim() {
            let ia = self.iota_of(&c.basis_elem(a));
            for b in 0..c.fdim() {
                let ib = self.iota_of(&c.basis_elem(b));
                let prod = alg.mul(&ia, &ib);
                let expect = self.iota_of(&c.mul(&c.basis_elem(a), &c.basis_elem(b)));
                if prod != expect {
                    return Err(Error::Internal("iota not multiplicative".into()));
                }
            }
            for i in 0..alg.dim {
                let bi = alg.basis_vec(i);
                if alg.mul(&ia, &bi) != alg.mul(&bi, &ia) {
                    return Err(Error::Internal("iota image not central".into()));
                }
            }
        }
        // A-linearity of T: T(iota(a) x) = a T(x)
        for a in 0..c.fdim() {
            let ia = self.iota_of(&c.basis_elem(a));
            for i in 0..alg.dim {
                let lhs = self.t_of(&alg.mul(&ia, &alg.basis_vec(i)));
                let rhs = c.mul(&c.basis_elem(a), &self.t[i]);
                if lhs != rhs {
                    return Err(Error::Internal("T is not A-linear".into()));
                }
            }
        }
        // T(1) = d
        if self.t_of(&alg.one) != c.from_int(self.d as i64) {
            return Err(Error::Precondition(format!(
                "T(1) != {} in the coefficient ring",
                self.d
            )));
        }
        Ok(())
    }

    pub fn iota_of(&self, a: &C::Elem) -> Vec<<C::F as Field>::Elem> {
        let f = self.coeff.field();
        let coords = self.coeff.coords(a);
        let mut out = self.alg.zero_vec();
        for (c, col) in coords.iter().zip(&self.iota) {
            if f.is_zero(c) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(col) {
                *o = f.add(o, &f.mul(c, x));
            }
        }
        out
    }

    pub fn t_of(&self, x: &[<C::F as Field>::Elem]) -> C::Elem {
        let f = self.coeff.field();
        let mut acc = self.coeff.zero();
        for (c, tv) in x.iter().zip(&self.t) {
            if f.is_zero(c) {
                continue;
            }
            acc = self.coeff.add(&acc, &self.coeff.scale(c, tv));
        }
        acc
    }

    /// Centrality T(xy) = T(yx), checked on all basis pairs (complete by
    /// bilinearity).
    pub fn check_central(&self) -> Option<(usize, usize)> {
        for i in 0..self.alg.dim {
            let bi = self.alg.basis_vec(i);
            for j in 0..i {
                let bj = self.alg.basis_vec(j);
                let xy = self.t_of(&self.alg.mul(&bi, &bj));
                let yx = self.t_of(&self.alg.mul(&bj, &bi));
                if xy != yx {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// S_n on a tuple of basis indices, with a shortcut when all basis
    /// products are monomial (group algebras, matrix units).
    pub fn s_n_basis(&self, idx: &[usize]) -> C::Elem {
        let c = &self.coeff;
        let f = c.field();
        let monomial = matches!(
            self.alg.provenance,
            Provenance::GroupAlgebra { .. } | Provenance::MatrixAlgebra { .. }
        );
        if !monomial {
            let xs: Vec<_> = idx.iter().map(|&i| self.alg.basis_vec(i)).collect();
            return identities::s_n(self, &xs);
        }
        let mut acc = c.zero();
        identities::for_each_permutation(idx.len(), |perm| {
            let mut term = c.one();
            let mut coeff_f = f.one();
            let mut dead = false;
            for cyc in identities::cycles_of(perm) {
                // product of basis elements stays monomial
                let mut cur = idx[cyc[0]];
                let mut scalar = f.one();
                for &k in &cyc[1..] {
                    match self.alg.table(cur, idx[k]).first() {
                        Some((next, co)) => {
                            scalar = f.mul(&scalar, co);
                            cur = *next;
                        }
                        None => {
                            dead = true;
                            break;
                        }
                    }
                }
                if dead {
                    break;
                }
                if f.is_zero(&scalar) || c.is_zero(&self.t[cur]) {
                    dead = true;
                    break;
                }
                coeff_f = f.mul(&coeff_f, &scalar);
                term = c.mul(&term, &self.t[cur]);
            }
            if !dead {
                let mut v = c.scale(&coeff_f, &term);
                if identities::permutation_sign(perm) < 0 {
                    v = c.neg(&v);
                }
                acc = c.add(&acc, &v);
            }
        });
        acc
    }

    /// Verify that a multilinear symmetric identity vanishes, by checking
    /// basis tuples of the given arity (multilinearity makes basis tuples
    /// complete; randomized mode samples them uniformly).
    fn verify_vanishing<P: Fn(&[usize]) -> bool>(
        &self,
        property: &str,
        arity: usize,
        mode: VerifyMode,
        seed: u64,
        budget: u64,
        pred: P,
    ) -> Result<Certificate> {
        let n = self.alg.dim as u64;
        let total = n.checked_pow(arity as u32);
        let exhaustive = match mode {
            VerifyMode::Exhaustive => true,
            VerifyMode::Randomized { .. } => false,
            VerifyMode::Auto => total.map_or(false, |t| t <= DEFAULT_EXHAUSTIVE_BUDGET.min(budget)),
        };
        if exhaustive {
            let total = total.ok_or(Error::BudgetExceeded {
                needed: u64::MAX,
                budget,
            })?;
            if total > budget {
                return Err(Error::BudgetExceeded {
                    needed: total,
                    budget,
                });
            }
            let mut idx = vec![0usize; arity];
            let mut checked = 0u64;
            loop {
                if !pred(&idx) {
                    return Ok(Certificate {
                        property: property.into(),
                        ok: false,
                        exhaustive: true,
                        tuples_checked: checked,
                        seed,
                        witness: Some(idx.clone()),
                    });
                }
                checked += 1;
                // odometer
                let mut k = 0;
                loop {
                    if k == arity {
                        return Ok(Certificate {
                            property: property.into(),
                            ok: true,
                            exhaustive: true,
                            tuples_checked: checked,
                            seed,
                            witness: None,
                        });
                    }
                    idx[k] += 1;
                    if idx[k] < self.alg.dim {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        } else {
            let trials = match mode {
                VerifyMode::Randomized { trials } => trials,
                _ => DEFAULT_TRIALS,
            };
            if trials > budget {
                return Err(Error::BudgetExceeded {
                    needed: trials,
                    budget,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for k in 0..trials {
                let idx: Vec<usize> =
                    (0..arity).map(|_| rng.gen_range(0..self.alg.dim)).collect();
                if !pred(&idx) {
                    return Ok(Certificate {
                        property: property.into(),
                        ok: false,
                        exhaustive: false,
                        tuples_checked: k,
                        seed,
                        witness: Some(idx),
                    });
                }
            }
            Ok(Certificate {
                property: property.into(),
                ok: true,
                exhaustive: false,
                tuples_checked: trials,
                seed,
                witness: None,
            })
        }
    }

    /// Centrality plus vanishing of S_{d+1}, with a certificate recording
    /// what was checked.
    pub fn is_pseudocharacter(
        &self,
        mode: VerifyMode,
        seed: u64,
        budget: u64,
    ) -> Result<(bool, Vec<Certificate>)> {
        if self.coeff.inv_factorial(self.d as u64).is_none() {
            return Err(Error::FactorialNotInvertible(self.d as u64));
        }
        let mut certs = Vec::new();
        let central = self.check_central();
        certs.push(Certificate {
            property: "centrality".into(),
            ok: central.is_none(),
            exhaustive: true,
            tuples_checked: (self.alg.dim * self.alg.dim) as u64,
            seed,
            witness: central.map(|(i, j)| vec![i, j]),
        });
        if central.is_some() {
            return Ok((false, certs));
        }
        let cert = self.verify_vanishing(
            "S_{d+1} = 0",
            self.d + 1,
            mode,
            seed,
            budget,
            |idx| self.coeff.is_zero(&self.s_n_basis(idx)),
        )?;
        let ok = cert.ok;
        certs.push(cert);
        Ok((ok, certs))
    }

    /// Vanishing of the d-linear Cayley-Hamilton map on verification
    /// tuples.
    pub fn is_cayley_hamilton(
        &self,
        mode: VerifyMode,
        seed: u64,
        budget: u64,
    ) -> Result<Certificate> {
        self.verify_vanishing("CH(T) = 0", self.d, mode, seed, budget, |idx| {
            let xs: Vec<_> = idx.iter().map(|&i| self.alg.basis_vec(i)).collect();
            match identities::ch_map(self, &xs) {
                Ok(v) => self.alg.is_zero_vec(&v),
                Err(_) => false,
            }
        })
    }

    /// The two-sided ideal {x : T(xy) = 0 for all y}.
    pub fn kernel(&self) -> Subspace<<C::F as Field>::Elem> {
        let f = self.coeff.field();
        let adim = self.coeff.fdim();
        let n = self.alg.dim;
        let mut rows = Vec::with_capacity(n * adim);
        for j in 0..n {
            let bj = self.alg.basis_vec(j);
            // row block: x -> coords(T(x b_j))
            let mut cols: Vec<Vec<<C::F as Field>::Elem>> = Vec::with_capacity(n);
            for i in 0..n {
                let prod = self.alg.mul(&self.alg.basis_vec(i), &bj);
                cols.push(self.coeff.coords(&self.t_of(&prod)));
            }
            for c in 0..adim {
                rows.push((0..n).map(|i| cols[i][c].clone()).collect());
            }
        }
        let m = Mat::from_rows(rows);
        let ker = kernel_basis(f, &m);
        row_space(f, &ker, n)
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().dim() == 0
    }

    /// Quotient by the kernel; the induced pseudocharacter is faithful and
    /// Cayley-Hamilton, and both facts are re-verified.
    pub fn faithful_quotient(&self, seed: u64) -> Result<(Pseudocharacter<C>, Certificate)> {
        let ker = self.kernel();
        let (quo, proj) = self.alg.quotient_by(&ker)?;
        let qdim = quo.dim;
        // T descends since T(ker) = 0; its value on the surviving basis
        // vector equals the value on the ambient one
        let survivors: Vec<usize> = {
            let pivset: std::collections::BTreeSet<usize> = ker.pivots.iter().copied().collect();
            (0..self.alg.dim).filter(|i| !pivset.contains(i)).collect()
        };
        let t: Vec<C::Elem> = survivors.iter().map(|&i| self.t[i].clone()).collect();
        let f = self.coeff.field();
        let iota: Vec<Vec<<C::F as Field>::Elem>> = self
            .iota
            .iter()
            .map(|col| {
                // project the ambient vector
                let mut out = vec![f.zero(); qdim];
                for (i, c) in col.iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    for (o, x) in out.iter_mut().zip(&proj[i]) {
                        *o = f.add(o, &f.mul(c, x));
                    }
                }
                out
            })
            .collect();
        let out = Pseudocharacter::new(self.coeff.clone(), Arc::new(quo), iota, t, self.d)?;
        if !out.is_faithful() {
            return Err(Error::Internal("faithful quotient is not faithful".into()));
        }
        let cert = out.is_cayley_hamilton(VerifyMode::Auto, seed, DEFAULT_EXHAUSTIVE_BUDGET)?;
        if !cert.ok {
            return Err(Error::Internal(
                "faithful quotient fails Cayley-Hamilton".into(),
            ));
        }
        Ok((out, cert))
    }

    /// T(e) for an idempotent must be an integer 0..=d; returns it.
    pub fn idempotent_trace(&self, e: &[<C::F as Field>::Elem]) -> Result<usize> {
        let te = self.t_of(e);
        for k in 0..=self.d {
            if te == self.coeff.from_int(k as i64) {
                return Ok(k);
            }
        }
        Err(Error::InvalidIdempotentTrace(format!(
            "T(e) = {} is not an integer in 0..={}",
            self.coeff.fmt_elem(&te),
            self.d
        )))
    }

    /// Restriction to the corner algebra eRe; dimension T(e).
    pub fn restrict_to_idempotent(
        &self,
        e: &[<C::F as Field>::Elem],
    ) -> Result<Pseudocharacter<C>> {
        let alg = &self.alg;
        if alg.mul(e, e) != *e {
            return Err(Error::Precondition("e is not idempotent".into()));
        }
        let de = self.idempotent_trace(e)?;
        let f = self.coeff.field();
        // basis of eRe
        let vecs: Vec<Vec<<C::F as Field>::Elem>> = (0..alg.dim)
            .map(|i| alg.mul(&alg.mul(e, &alg.basis_vec(i)), e))
            .collect();
        let space = row_space(f, &vecs, alg.dim);
        let cdim = space.dim();
        let coords_of = |v: &[<C::F as Field>::Elem]| {
            crate::coeff::module::in_basis_coords(f, &space, v)
                .ok_or_else(|| Error::Internal("corner product escaped the corner".into()))
        };
        let mut mul_table = vec![Vec::new(); cdim * cdim];
        for i in 0..cdim {
            for j in 0..cdim {
                let prod = alg.mul(&space.basis[i], &space.basis[j]);
                let co = coords_of(&prod)?;
                mul_table[i * cdim + j] = co
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !f.is_zero(c))
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
            }
        }
        let one = coords_of(e)?;
        let corner = FlatAlgebra {
            field: f.clone(),
            dim: cdim,
            labels: (0..cdim).map(|i| format!("c{i}")).collect(),
            mul_table,
            one,
            provenance: Provenance::Other,
        };
        let t: Vec<C::Elem> = space.basis.iter().map(|v| self.t_of(v)).collect();
        let iota: Vec<Vec<<C::F as Field>::Elem>> = (0..self.coeff.fdim())
            .map(|a| {
                let ia = self.iota_of(&self.coeff.basis_elem(a));
                let eae = alg.mul(&alg.mul(e, &ia), e);
                coords_of(&eae)
            })
            .collect::<Result<Vec<_>>>()?;
        Pseudocharacter::new(self.coeff.clone(), Arc::new(corner), iota, t, de)
    }

    /// Exterior power on a group algebra: Lambda^m(T)(g) = e_m of the
    /// power traces of g, the 1/m! multiple of the diagonal S_m.
    pub fn exterior_power(&self, m: usize) -> Result<(Pseudocharacter<C>, ExteriorNote<C>)> {
        let elements = match &self.alg.provenance {
            Provenance::GroupAlgebra { elements } => elements.clone(),
            _ => {
                return Err(Error::Precondition(
                    "exterior powers are defined on group algebras".into(),
                ))
            }
        };
        if self.coeff.inv_factorial(m as u64).is_none() {
            return Err(Error::FactorialNotInvertible(m as u64));
        }
        let c = &self.coeff;
        let newd = binomial(self.d, m);
        let mut t = Vec::with_capacity(self.alg.dim);
        for g in &elements {
            // power traces via the group structure
            let mut p = Vec::with_capacity(m);
            let mut cur = g.clone();
            for i in 0..m {
                let idx = elements
                    .iter()
                    .position(|h| *h == cur)
                    .ok_or_else(|| Error::Internal("group not closed".into()))?;
                p.push(self.t[idx].clone());
                if i + 1 < m {
                    cur = crate::algebra::compose(&cur, g);
                }
            }
            let e = identities::newton_elementary(c, &p)?;
            t.push(e[m - 1].clone());
        }
        let note = {
            // record both printed normalizations of the projector scalar on
            // a sample element: 1/m! (trace-matching) and 2/m!
            let sample = t.get(1).cloned().unwrap_or_else(|| t[0].clone());
            ExteriorNote {
                scalar_one_over_mfact: sample.clone(),
                scalar_two_over_mfact: c.add(&sample, &sample),
            }
        };
        let psc = Pseudocharacter::new(
            self.coeff.clone(),
            self.alg.clone(),
            self.iota.clone(),
            t,
            newd,
        )?;
        Ok((psc, note))
    }
}

/// The exterior-power projector is printed with scalar 2/m! in places;
/// only 1/m! is idempotent and matches exterior-power traces. Both values
/// are carried for transparency.
#[derive(Clone, Debug)]
pub struct ExteriorNote<C: Coeff> {
    pub scalar_one_over_mfact: C::Elem,
    pub scalar_two_over_mfact: C::Elem,
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Flatten a free A-algebra of rank n with A-valued structure constants
/// into a FlatAlgebra over the base field, returning the central embedding
/// of A alongside.
pub fn flatten_free_algebra<C: ArtinianCoeff>(
    coeff: &C,
    rank: usize,
    mul: impl Fn(usize, usize) -> Vec<C::Elem>,
    unit: &[C::Elem],
    label: impl Fn(usize) -> String,
    provenance: Provenance,
) -> (Arc<FlatAlgebra<C::F>>, Vec<Vec<<C::F as Field>::Elem>>) {
    let f = coeff.field().clone();
    let adim = coeff.fdim();
    let dim = rank * adim;
    let flat_index = |i: usize, a: usize| i * adim + a;
    let mut mul_table = vec![Vec::new(); dim * dim];
    for i in 0..rank {
        for j in 0..rank {
            let prod = mul(i, j); // coordinates of e_i e_j over A
            for a in 0..adim {
                for b in 0..adim {
                    let ab = coeff.mul(&coeff.basis_elem(a), &coeff.basis_elem(b));
                    let mut sparse = Vec::new();
                    for (l, cl) in prod.iter().enumerate() {
                        let v = coeff.coords(&coeff.mul(cl, &ab));
                        for (c, x) in v.iter().enumerate() {
                            if !f.is_zero(x) {
                                sparse.push((flat_index(l, c), x.clone()));
                            }
                        }
                    }
                    sparse.sort_by_key(|(k, _)| *k);
                    mul_table[flat_index(i, a) * dim + flat_index(j, b)] = sparse;
                }
            }
        }
    }
    let mut one = vec![f.zero(); dim];
    for (i, u) in unit.iter().enumerate() {
        let v = coeff.coords(u);
        for (a, x) in v.iter().enumerate() {
            one[flat_index(i, a)] = x.clone();
        }
    }
    let mut labels = Vec::with_capacity(dim);
    for i in 0..rank {
        for a in 0..adim {
            let la = coeff.basis_label(a);
            if la == "1" {
                labels.push(label(i));
            } else {
                labels.push(format!("{}*{}", label(i), la));
            }
        }
    }
    let alg = Arc::new(FlatAlgebra {
        field: f,
        dim,
        labels,
        mul_table,
        one,
        provenance,
    });
    // iota(b_a) = unit scaled by b_a
    let iota: Vec<Vec<<C::F as Field>::Elem>> = (0..adim)
        .map(|a| {
            let ba = coeff.basis_elem(a);
            let mut v = alg.zero_vec();
            for (i, u) in unit.iter().enumerate() {
                let coords = coeff.coords(&coeff.mul(u, &ba));
                for (c, x) in coords.iter().enumerate() {
                    v[flat_index(i, c)] = x.clone();
                }
            }
            v
        })
        .collect();
    (alg, iota)
}

/// The trace pseudocharacter of M_n over an artinian coefficient ring.
pub fn matrix_trace<C: ArtinianCoeff>(coeff: C, n: usize) -> Result<Pseudocharacter<C>> {
    let rank = n * n;
    let unit: Vec<C::Elem> = (0..rank)
        .map(|i| {
            if i % n == i / n {
                coeff.one()
            } else {
                coeff.zero()
            }
        })
        .collect();
    let cf = coeff.clone();
    let mul = move |i: usize, j: usize| -> Vec<C::Elem> {
        let (r1, c1) = (i / n, i % n);
        let (r2, c2) = (j / n, j % n);
        let mut out = vec![cf.zero(); rank];
        if c1 == r2 {
            out[r1 * n + c2] = cf.one();
        }
        out
    };
    let (alg, iota) = flatten_free_algebra(
        &coeff,
        rank,
        mul,
        &unit,
        |i| format!("E[{},{}]", i / n + 1, i % n + 1),
        Provenance::MatrixAlgebra { n },
    );
    let adim = coeff.fdim();
    let mut t = Vec::with_capacity(alg.dim);
    for i in 0..rank {
        let diag = i / n == i % n;
        for a in 0..adim {
            t.push(if diag {
                coeff.basis_elem(a)
            } else {
                coeff.zero()
            });
        }
    }
    Pseudocharacter::new(coeff, alg, iota, t, n)
}

/// A pseudocharacter on a group algebra over the base field, from the
/// values of a class function on the group elements (in the algebra's
/// basis order).
pub fn group_pseudocharacter<C: ArtinianCoeff>(
    coeff: C,
    alg: Arc<FlatAlgebra<C::F>>,
    values: Vec<C::Elem>,
    d: usize,
) -> Result<Pseudocharacter<C>> {
    if !matches!(alg.provenance, Provenance::GroupAlgebra { .. }) {
        return Err(Error::Precondition("expected a group algebra".into()));
    }
    let iota = vec![alg.one.clone(); coeff.fdim()];
    // iota for a field coefficient is just the unit column; general artinian
    // coefficients over a group algebra flatten through flatten_free_algebra
    // instead.
    if coeff.fdim() != 1 {
        return Err(Error::Precondition(
            "group pseudocharacters here take base-field coefficients".into(),
        ));
    }
    Pseudocharacter::new(coeff, alg, iota, values, d)
}

impl<C: ArtinianCoeff> Pseudocharacter<C> {
    /// dim over the residue field of (E_i R E_j) / (A' + m (E_i R E_j)),
    /// where A' is the span of products through the other corners: the
    /// Ext dimension at the maximal ideal, read off a pseudocharacter
    /// that carries designated corner idempotents. Used to cross-check
    /// the module-level computation and to rerun it on quotients.
    pub fn corner_ext_dim(
        &self,
        e_caps: &[Vec<<C::F as Field>::Elem>],
        i: usize,
        j: usize,
    ) -> usize {
        let f = self.coeff.field();
        let alg = &self.alg;
        let corner = |a: usize, b: usize| -> Vec<Vec<<C::F as Field>::Elem>> {
            (0..alg.dim)
                .map(|p| alg.mul(&alg.mul(&e_caps[a], &alg.basis_vec(p)), &e_caps[b]))
                .collect()
        };
        let cij = row_space(f, &corner(i, j), alg.dim);
        let mut sub = Vec::new();
        for k in 0..e_caps.len() {
            if k == i || k == j {
                continue;
            }
            for x in &corner(i, k) {
                for y in &corner(k, j) {
                    sub.push(alg.mul(x, y));
                }
            }
        }
        for a in 1..self.coeff.fdim() {
            let ia = self.iota_of(&self.coeff.basis_elem(a));
            for v in &cij.basis {
                sub.push(alg.mul(&ia, v));
            }
        }
        let subspace = row_space(f, &sub, alg.dim);
        cij.dim() - subspace.dim()
    }
}

/// The kernel of the reduction map R -> (R/mR)/ker(T mod m); for a
/// Cayley-Hamilton T over a local ring this is the Jacobson radical.
pub fn radical_via_pseudocharacter<C: ArtinianCoeff>(
    psc: &Pseudocharacter<C>,
) -> Result<Subspace<<C::F as Field>::Elem>> {
    let (resid, proj) = residual::residual_reduction(psc)?;
    let ker_bar = resid.kernel();
    let f = psc.coeff.field();
    // pull back: x in R maps into ker_bar
    let n = psc.alg.dim;
    let mut rows = Vec::new();
    // rows: for each complement functional of ker_bar, the composite with
    // projection. Use the quotient by ker_bar: x -> proj(x) reduced mod
    // ker_bar must vanish.
    for i in 0..n {
        let mut v = proj[i].clone();
        crate::linalg::reduce_against(f, &mut v, &ker_bar.basis, &ker_bar.pivots);
        rows.push(v);
    }
    // kernel of the map sending x = sum x_i b_i to sum x_i rows[i]
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m = crate::linalg::zeros(f, cols, n);
    for (i, r) in rows.iter().enumerate() {
        for (c, x) in r.iter().enumerate() {
            *m.at_mut(c, i) = x.clone();
        }
    }
    let ker = kernel_basis(f, &m);
    Ok(row_space(f, &ker, n))
}
