//! Residual decomposition: reduce a pseudocharacter modulo the maximal
//! ideal, split the semisimple quotient into matrix blocks over the
//! residue field, and match each block to an irreducible residual
//! representation with a multiplicity.

use std::sync::Arc;

use crate::algebra::FlatAlgebra;
use crate::coeff::{ArtinianCoeff, FieldCoeff};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{kernel_basis, row_space, zeros, Mat, Subspace};
use crate::poly::{p_divmod, p_gcd, p_one, Poly};

use super::Pseudocharacter;

/// An irreducible residual representation: one matrix per basis vector of
/// the original algebra.
#[derive(Clone, Debug)]
pub struct ResidualRep<F: Field> {
    pub dim: usize,
    pub matrices: Vec<Mat<F::Elem>>,
}

#[derive(Clone, Debug)]
pub struct ResidualDecomposition<F: Field> {
    pub blocks: Vec<(ResidualRep<F>, usize)>,
    pub multiplicity_free: bool,
}

/// T mod m on R/mR, plus the projection images of the original basis.
pub fn residual_reduction<C: ArtinianCoeff>(
    psc: &Pseudocharacter<C>,
) -> Result<(
    Pseudocharacter<FieldCoeff<C::F>>,
    Vec<Vec<<C::F as Field>::Elem>>,
)> {
    let f = psc.coeff.field().clone();
    let alg = &psc.alg;
    // the ideal iota(m) R
    let mut gens = Vec::new();
    for a in 1..psc.coeff.fdim() {
        let ia = psc.iota_of(&psc.coeff.basis_elem(a));
        for i in 0..alg.dim {
            gens.push(alg.mul(&ia, &alg.basis_vec(i)));
        }
    }
    let ideal = row_space(&f, &gens, alg.dim);
    let (quo, proj) = alg.quotient_by(&ideal)?;
    let survivors: Vec<usize> = {
        let pivset: std::collections::BTreeSet<usize> = ideal.pivots.iter().copied().collect();
        (0..alg.dim).filter(|i| !pivset.contains(i)).collect()
    };
    let t: Vec<<C::F as Field>::Elem> = survivors
        .iter()
        .map(|&i| psc.coeff.residue(&psc.t[i]))
        .collect();
    let fc = FieldCoeff::new(f);
    let quo = Arc::new(quo);
    let iota = vec![quo.one.clone()];
    let resid = Pseudocharacter::new(fc, quo, iota, t, psc.d)?;
    Ok((resid, proj))
}

/// Try to write mu = f*g with gcd(f, g) = 1, deg f, deg g >= 1, by
/// splitting off roots in the base field.
fn coprime_split<F: Field>(f: &F, mu: &Poly<F::Elem>) -> Option<(Poly<F::Elem>, Poly<F::Elem>)> {
    let deg = mu.degree()?;
    if deg < 2 {
        return None;
    }
    for root in rational_root_candidates(f, mu) {
        let lin = Poly {
            coeffs: vec![f.neg(&root), f.one()],
        };
        // full multiplicity of the root
        let mut power = p_one(f);
        let mut rest = mu.clone();
        loop {
            let (q, r) = p_divmod(f, &rest, &lin);
            if !r.is_zero() {
                break;
            }
            rest = q;
            power = crate::poly::p_mul(f, &power, &lin);
        }
        if power.degree() == Some(0) {
            continue; // not a root
        }
        if rest.degree().map_or(true, |d| d == 0) {
            continue; // mu is a pure power of the linear factor
        }
        let g = p_gcd(f, &power, &rest);
        if g.degree() == Some(0) {
            return Some((power, rest));
        }
    }
    None
}

/// Root candidates: for a prime field, every element; over the rationals,
/// divisor ratios of the (integer-scaled) constant and leading terms.
fn rational_root_candidates<F: Field>(f: &F, mu: &Poly<F::Elem>) -> Vec<F::Elem> {
    let p = f.characteristic();
    if p != 0 {
        return (0..p as i64).map(|i| f.from_i64(i)).collect();
    }
    // evaluate at small candidates; exact rational root finding for the
    // desk-scale polynomials here
    let mut out = Vec::new();
    for num in -24i64..=24 {
        for den in 1i64..=6 {
            if num % den != 0 && den > 1 {
                // non-integer candidates too
            }
            let cand = match f.inv(&f.from_i64(den)) {
                Some(dinv) => f.mul(&f.from_i64(num), &dinv),
                None => continue,
            };
            if f.is_zero(&crate::poly::p_eval(f, mu, &cand)) && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out
}

fn bezout<F: Field>(
    f: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> (Poly<F::Elem>, Poly<F::Elem>) {
    // returns (u, v) with u a + v b = gcd (monic)
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = p_one(f);
    let mut s1 = crate::poly::p_zero(f);
    let mut t0 = crate::poly::p_zero(f);
    let mut t1 = p_one(f);
    while !r1.is_zero() {
        let (q, r) = p_divmod(f, &r0, &r1);
        let new_s = crate::poly::p_sub(f, &s0, &crate::poly::p_mul(f, &q, &s1));
        let new_t = crate::poly::p_sub(f, &t0, &crate::poly::p_mul(f, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = new_s;
        t0 = t1;
        t1 = new_t;
    }
    // normalize to monic gcd
    let lead = r0.coeffs.last().unwrap().clone();
    let linv = f.inv(&lead).unwrap();
    (
        crate::poly::p_scale(f, &linv, &s0),
        crate::poly::p_scale(f, &linv, &t0),
    )
}

/// Splitting-element candidates inside a unital subspace of the algebra.
fn candidates<F: Field>(
    alg: &FlatAlgebra<F>,
    space: &Subspace<F::Elem>,
) -> Vec<Vec<F::Elem>> {
    let f = &alg.field;
    let mut out: Vec<Vec<F::Elem>> = space.basis.clone();
    for i in 0..space.basis.len() {
        for j in 0..i {
            out.push(crate::linalg::vec_add(f, &space.basis[i], &space.basis[j]));
            out.push(crate::linalg::vec_sub(f, &space.basis[i], &space.basis[j]));
            out.push(alg.mul(&space.basis[i], &space.basis[j]));
        }
    }
    // small deterministic combinations
    for k in 2..4u64 {
        let mut v = alg.zero_vec();
        for (i, b) in space.basis.iter().enumerate() {
            let c = f.from_i64(((i as u64 + 1) * k % 7 + 1) as i64);
            v = crate::linalg::vec_add(f, &v, &crate::linalg::vec_scale(f, &c, b));
        }
        out.push(v);
    }
    out
}

/// Decompose a split semisimple commutative-center algebra into its simple
/// blocks: returns the primitive central idempotents.
fn central_idempotents<F: Field>(alg: &FlatAlgebra<F>) -> Result<Vec<Vec<F::Elem>>> {
    let f = &alg.field;
    // center: z with z b_i = b_i z for all i
    let n = alg.dim;
    let mut rows = Vec::new();
    for i in 0..n {
        let bi = alg.basis_vec(i);
        // commutator with each basis vector, as linear conditions on z
        for r in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let bj = alg.basis_vec(j);
                let c = alg.sub(&alg.mul(&bj, &bi), &alg.mul(&bi, &bj));
                row.push(c[r].clone());
            }
            rows.push(row);
        }
    }
    let m = Mat::from_rows(rows);
    let center = row_space(f, &kernel_basis(f, &m), n);

    // split the commutative algebra spanned by `center` by repeatedly
    // finding elements whose minimal polynomial factors
    let mut parts: Vec<Vec<F::Elem>> = vec![alg.one.clone()];
    loop {
        let mut changed = false;
        let mut next = Vec::new();
        for e in &parts {
            // the center of the corner eRe is e*center*e
            let corner_center: Vec<Vec<F::Elem>> = center
                .basis
                .iter()
                .map(|z| alg.mul(&alg.mul(e, z), e))
                .collect();
            let cspace = row_space(f, &corner_center, n);
            if cspace.dim() <= 1 {
                next.push(e.clone());
                continue;
            }
            let mut split = None;
            for z in candidates(alg, &cspace) {
                // minimal polynomial of z within the corner: translate by
                // using e as the unit
                let mu = min_poly_in_corner(alg, e, &z);
                if let Some((fp, gp)) = coprime_split(f, &mu) {
                    let idem = crt_idempotent_corner(alg, e, &z, &fp, &gp);
                    let sq = alg.mul(&idem, &idem);
                    if sq == idem && !alg.is_zero_vec(&idem) && idem != *e {
                        split = Some(idem);
                        break;
                    }
                }
            }
            match split {
                Some(idem) => {
                    let rest = alg.sub(e, &idem);
                    next.push(idem);
                    next.push(rest);
                    changed = true;
                }
                None => {
                    return Err(Error::EnlargeResidueField(format!(
                        "a central component of dimension {} admits no split over the base field",
                        cspace.dim()
                    )))
                }
            }
        }
        parts = next;
        if !changed {
            return Ok(parts);
        }
    }
}

fn min_poly_in_corner<F: Field>(
    alg: &FlatAlgebra<F>,
    e: &[F::Elem],
    z: &[F::Elem],
) -> Poly<F::Elem> {
    // powers of z relative to the corner unit e
    let f = &alg.field;
    let mut powers: Vec<Vec<F::Elem>> = vec![e.to_vec()];
    loop {
        let next = alg.mul(powers.last().unwrap(), z);
        let space = row_space(f, &powers, alg.dim);
        if crate::coeff::module::in_basis_coords(f, &space, &next).is_some() {
            let k = powers.len();
            let mut m = zeros(f, alg.dim, k);
            for (j, p) in powers.iter().enumerate() {
                for i in 0..alg.dim {
                    *m.at_mut(i, j) = p[i].clone();
                }
            }
            let sol = crate::linalg::solve(f, &m, &next).expect("consistent");
            let mut coeffs = vec![f.zero(); k + 1];
            for (j, s) in sol.iter().enumerate() {
                coeffs[j] = f.neg(s);
            }
            coeffs[k] = f.one();
            return Poly { coeffs };
        }
        powers.push(next);
    }
}

fn crt_idempotent_corner<F: Field>(
    alg: &FlatAlgebra<F>,
    e: &[F::Elem],
    z: &[F::Elem],
    fpart: &Poly<F::Elem>,
    gpart: &Poly<F::Elem>,
) -> Vec<F::Elem> {
    let f = &alg.field;
    let (u, _v) = bezout(f, fpart, gpart);
    let uf = crate::poly::p_mul(f, &u, fpart);
    // Horner with e as the unit
    let mut acc = alg.zero_vec();
    for c in uf.coeffs.iter().rev() {
        acc = alg.mul(&acc, z);
        let cu = alg.scale(c, e);
        acc = alg.add(&acc, &cu);
    }
    acc
}

/// Full residual decomposition of a pseudocharacter over an artinian local
/// coefficient ring.
pub fn residual_decomposition<C: ArtinianCoeff>(
    psc: &Pseudocharacter<C>,
) -> Result<ResidualDecomposition<C::F>> {
    let f = psc.coeff.field().clone();
    let (resid, proj) = residual_reduction(psc)?;
    // semisimple quotient
    let (ss, _cert) = resid.faithful_quotient(0)?;
    // sanity: no radical left
    if crate::algebra::radical(&ss.alg).map(|r| r.dim()).unwrap_or(0) != 0 {
        return Err(Error::Internal("semisimple quotient has radical".into()));
    }
    let idems = central_idempotents(&ss.alg)?;
    // composite projection R -> ss
    let ss_proj: Vec<Vec<<C::F as Field>::Elem>> = {
        // proj: R -> resid; then resid -> ss via its own kernel quotient
        let ker = resid.kernel();
        let (_, proj2) = resid.alg.quotient_by(&ker)?;
        proj.iter()
            .map(|v| {
                let mut out = vec![f.zero(); ss.alg.dim];
                for (i, c) in v.iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    for (o, x) in out.iter_mut().zip(&proj2[i]) {
                        *o = f.add(o, &f.mul(c, x));
                    }
                }
                out
            })
            .collect()
    };

    let mut blocks = Vec::new();
    let mut mf = true;
    let mut total = 0usize;
    for e in &idems {
        // the block B = e S e with unit e
        let vecs: Vec<Vec<<C::F as Field>::Elem>> = (0..ss.alg.dim)
            .map(|i| ss.alg.mul(&ss.alg.mul(e, &ss.alg.basis_vec(i)), e))
            .collect();
        let bspace = row_space(&f, &vecs, ss.alg.dim);
        // find a primitive idempotent inside the block
        let prim = primitive_idempotent(&ss.alg, e, &bspace)?;
        // V = B * prim as a left module over the ss algebra
        let vvecs: Vec<Vec<<C::F as Field>::Elem>> = bspace
            .basis
            .iter()
            .map(|b| ss.alg.mul(b, &prim))
            .collect();
        let vspace = row_space(&f, &vvecs, ss.alg.dim);
        let ndim = vspace.dim();
        if ndim * ndim != bspace.dim() {
            return Err(Error::EnlargeResidueField(format!(
                "block of dimension {} is not split (minimal module has dimension {})",
                bspace.dim(),
                ndim
            )));
        }
        // representation matrices: original algebra basis acting on V
        let mut matrices = Vec::with_capacity(psc.alg.dim);
        for i in 0..psc.alg.dim {
            let img = &ss_proj[i];
            let mut m = zeros(&f, ndim, ndim);
            for (j, v) in vspace.basis.iter().enumerate() {
                let av = ss.alg.mul(img, v);
                let co = crate::coeff::module::in_basis_coords(&f, &vspace, &av)
                    .ok_or_else(|| Error::Internal("module not invariant".into()))?;
                for r in 0..ndim {
                    *m.at_mut(r, j) = co[r].clone();
                }
            }
            matrices.push(m);
        }
        // multiplicity from T-bar(e) = mult * ndim
        let te = resid_t_of(&ss, e);
        let mut mult = None;
        for k in 1..=psc.d {
            if te == f.from_i64((k * ndim) as i64) {
                mult = Some(k);
                break;
            }
        }
        let mult = mult.ok_or_else(|| {
            Error::Internal("block trace is not an integer multiple of its dimension".into())
        })?;
        if mult > 1 {
            mf = false;
        }
        total += mult * ndim;
        blocks.push((
            ResidualRep {
                dim: ndim,
                matrices,
            },
            mult,
        ));
    }
    if total != psc.d {
        return Err(Error::Internal(format!(
            "block dimensions sum to {total}, expected {}",
            psc.d
        )));
    }
    // canonical order: by dimension then by the trace vector, so reports
    // are deterministic
    blocks.sort_by(|a, b| {
        a.0.dim.cmp(&b.0.dim).then_with(|| {
            let ta: Vec<String> = a.0.matrices.iter().map(|m| trace_str(&f, m)).collect();
            let tb: Vec<String> = b.0.matrices.iter().map(|m| trace_str(&f, m)).collect();
            ta.cmp(&tb)
        })
    });
    Ok(ResidualDecomposition {
        blocks,
        multiplicity_free: mf,
    })
}

fn trace_str<F: Field>(f: &F, m: &Mat<F::Elem>) -> String {
    let mut acc = f.zero();
    for i in 0..m.rows {
        acc = f.add(&acc, m.at(i, i));
    }
    f.fmt_elem(&acc)
}

fn resid_t_of<F: Field>(
    ss: &Pseudocharacter<FieldCoeff<F>>,
    v: &[F::Elem],
) -> F::Elem {
    ss.t_of(v)
}

/// A primitive idempotent of the simple block with unit e: descend through
/// corner splits until no candidate splits further.
fn primitive_idempotent<F: Field>(
    alg: &FlatAlgebra<F>,
    e: &[F::Elem],
    bspace: &Subspace<F::Elem>,
) -> Result<Vec<F::Elem>> {
    let f = &alg.field;
    let mut cur = e.to_vec();
    let mut cur_space = bspace.clone();
    loop {
        if cur_space.dim() <= 1 {
            return Ok(cur);
        }
        let mut found = None;
        for z in candidates(alg, &cur_space) {
            // force z into the corner
            let z = alg.mul(&alg.mul(&cur, &z), &cur);
            if alg.is_zero_vec(&z) {
                continue;
            }
            let mu = min_poly_in_corner(alg, &cur, &z);
            if let Some((fp, gp)) = coprime_split(f, &mu) {
                let idem = crt_idempotent_corner(alg, &cur, &z, &fp, &gp);
                let sq = alg.mul(&idem, &idem);
                if sq == idem && !alg.is_zero_vec(&idem) && idem != cur {
                    found = Some(idem);
                    break;
                }
            }
        }
        match found {
            Some(idem) => {
                // recurse into the smaller corner
                let vecs: Vec<Vec<F::Elem>> = cur_space
                    .basis
                    .iter()
                    .map(|b| alg.mul(&alg.mul(&idem, b), &idem))
                    .collect();
                cur_space = row_space(f, &vecs, alg.dim);
                cur = idem;
            }
            None => {
                // no split found; primitive if the corner is 1-dimensional,
                // otherwise we cannot split over this field
                return Err(Error::EnlargeResidueField(format!(
                    "corner of dimension {} admits no idempotent split",
                    cur_space.dim()
                )));
            }
        }
    }
}
