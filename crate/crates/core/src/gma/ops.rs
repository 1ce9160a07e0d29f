//! Operations on a built GMA: the trace pseudocharacter's certificates,
//! residual multiplicity-freeness, reducibility ideals, Ext dimensions,
//! explicit extensions, and decomposition over a reducibility locus.

use std::sync::Arc;

use crate::coeff::artinian::{AElem, Artinian};
use crate::coeff::{ArtinianCoeff, Coeff, Ideal};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{row_space, Mat};
use crate::pseudochar::{Certificate, Pseudocharacter, VerifyMode};

use super::{unit_vec, GmaAlgebra};

impl<F: Field> GmaAlgebra<F> {
    /// Certify the trace: central, S_{d+1} = 0, Cayley-Hamilton.
    pub fn certify_trace(&self, seed: u64, budget: u64) -> Result<(bool, Vec<Certificate>)> {
        let (ok, mut certs) = self.psc.is_pseudocharacter(VerifyMode::Auto, seed, budget)?;
        let ch = self.psc.is_cayley_hamilton(VerifyMode::Auto, seed, budget)?;
        let all = ok && ch.ok;
        certs.push(ch);
        Ok((all, certs))
    }

    /// Residually multiplicity free: T(A_{i,j} A_{j,i}) inside the maximal
    /// ideal for every i != j.
    pub fn is_residually_mf(&self) -> bool {
        let data = &self.data;
        let coeff = &data.coeff;
        let r = data.r();
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                for g in 0..data.slots[i][j].fdim {
                    for h in 0..data.slots[j][i].fdim {
                        let x = unit_vec(&coeff.field, data.slots[i][j].fdim, g);
                        let y = unit_vec(&coeff.field, data.slots[j][i].fdim, h);
                        let v = data.eval_phi(i, j, i, &x, &y);
                        if !coeff.in_max_ideal(&AElem(v)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The reducibility ideal of a partition: generated by the pairing
    /// values phi_{i,j,i}(g, h) over generator pairs with i, j in
    /// different parts.
    pub fn reducibility_ideal(&self, partition: &[Vec<usize>]) -> Result<Ideal<F>> {
        self.check_partition(partition)?;
        let data = &self.data;
        let coeff = data.coeff.clone();
        let part_of = self.part_index(partition);
        let mut gens = Vec::new();
        let r = data.r();
        for i in 0..r {
            for j in 0..r {
                if i == j || part_of[i] == part_of[j] {
                    continue;
                }
                for g in &data.slots[i][j].generators {
                    for h in &data.slots[j][i].generators {
                        let v = data.eval_phi(i, j, i, g, h);
                        gens.push(AElem(v));
                    }
                }
            }
        }
        Ok(Ideal::new(coeff, gens))
    }

    fn check_partition(&self, partition: &[Vec<usize>]) -> Result<()> {
        let r = self.data.r();
        let mut seen = vec![false; r];
        for part in partition {
            for &i in part {
                if i >= r || seen[i] {
                    return Err(Error::Shape("not a partition of the blocks".into()));
                }
                seen[i] = true;
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::Shape("partition misses blocks".into()))
        }
    }

    fn part_index(&self, partition: &[Vec<usize>]) -> Vec<usize> {
        let r = self.data.r();
        let mut out = vec![0usize; r];
        for (l, part) in partition.iter().enumerate() {
            for &i in part {
                out[i] = l;
            }
        }
        out
    }

    /// A'_{i,j} = sum over k != i,j of A_{i,k} A_{k,j}, as a subspace of
    /// the (i,j) slot.
    pub fn a_prime(&self, i: usize, j: usize) -> crate::linalg::Subspace<F::Elem> {
        let data = &self.data;
        let f = &data.coeff.field;
        let mut vecs = Vec::new();
        for k in 0..data.r() {
            if k == i || k == j {
                continue;
            }
            let left = &data.slots[i][k];
            let right = &data.slots[k][j];
            for b1 in 0..left.fdim {
                for b2 in 0..right.fdim {
                    let x = unit_vec(f, left.fdim, b1);
                    let y = unit_vec(f, right.fdim, b2);
                    vecs.push(data.eval_phi(i, k, j, &x, &y));
                }
            }
        }
        row_space(f, &vecs, data.slots[i][j].fdim)
    }

    /// dim over the residue field of Hom_A(A_{i,j}/A'_{i,j}, A/J).
    ///
    /// For J = m this is the minimal generator count of A_{i,j}/A'_{i,j}.
    pub fn ext_dimension(&self, i: usize, j: usize, jideal: &Ideal<F>) -> Result<usize> {
        let data = &self.data;
        let coeff = &data.coeff;
        let f = &coeff.field;
        // the partition with {i}, {j} singletons and the rest lumped
        let mut rest = Vec::new();
        for k in 0..data.r() {
            if k != i && k != j {
                rest.push(k);
            }
        }
        let mut partition = vec![vec![i], vec![j]];
        if !rest.is_empty() {
            partition.push(rest);
        }
        let ip = self.reducibility_ideal(&partition)?;
        for g in &ip.generators {
            if !jideal.contains(g) {
                return Err(Error::PartitionNotSplit(coeff.fmt_elem(g)));
            }
        }
        let slot = &data.slots[i][j];
        if slot.fdim == 0 {
            return Ok(0);
        }
        let aprime = self.a_prime(i, j);
        // A/J as an F-space: quotient coordinates
        let jspace = &jideal.space;
        let qdim = coeff.fdim() - jspace.dim();
        let surv: Vec<usize> = {
            let piv: std::collections::BTreeSet<usize> = jspace.pivots.iter().copied().collect();
            (0..coeff.fdim()).filter(|c| !piv.contains(c)).collect()
        };
        let reduce_mod_j = |a: &AElem<F>| -> Vec<F::Elem> {
            let mut v = a.0.clone();
            crate::linalg::reduce_against(f, &mut v, &jspace.basis, &jspace.pivots);
            surv.iter().map(|&c| v[c].clone()).collect()
        };
        // unknowns: f(basis_b) in A/J coordinates: slot.fdim * qdim
        let unknowns = slot.fdim * qdim;
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        // A-linearity: f(b_a . x) = b_a f(x) for all algebra basis a and
        // slot basis x
        for a in 0..coeff.fdim() {
            let ba = coeff.basis_elem(a);
            for x in 0..slot.fdim {
                let ax = slot.act(coeff, &ba, &unit_vec(f, slot.fdim, x));
                // row per A/J coordinate
                for c in 0..qdim {
                    let mut row = vec![f.zero(); unknowns];
                    // f(ax): sum over basis of ax
                    for (b, co) in ax.iter().enumerate() {
                        if !f.is_zero(co) {
                            row[b * qdim + c] = f.add(&row[b * qdim + c], co);
                        }
                    }
                    // minus b_a * f(x): multiply unknown f(x) (A/J elem) by
                    // b_a in A/J: need the quotient multiplication
                    for cc in 0..qdim {
                        // b_a * (surv[cc] basis of A/J) reduced mod J
                        let prod = coeff.mul(&ba, &coeff.basis_elem(surv[cc]));
                        let red = reduce_mod_j(&prod);
                        row[x * qdim + cc] = f.sub(&row[x * qdim + cc], &red[c]);
                    }
                    rows.push(row);
                }
            }
        }
        // vanishing on A'
        for v in &aprime.basis {
            for c in 0..qdim {
                let mut row = vec![f.zero(); unknowns];
                for (b, co) in v.iter().enumerate() {
                    if !f.is_zero(co) {
                        row[b * qdim + c] = co.clone();
                    }
                }
                rows.push(row);
            }
        }
        let m = Mat::from_rows(rows);
        Ok(crate::linalg::kernel_basis(f, &m).len())
    }

    /// The quotient coefficient ring A/J as a new artinian algebra, with
    /// the reduction map on elements.
    pub fn quotient_coeff(&self, jideal: &Ideal<F>) -> Result<(Arc<Artinian<F>>, QuotMap<F>)> {
        quotient_algebra(&self.data.coeff, jideal)
    }

    /// The explicit two-block extension: x -> [[a_ii(x), f(a_ij(x))], [0,
    /// a_jj(x)]] over A/J, for a functional f on A_{i,j} vanishing on
    /// A'_{i,j}. Returns the representation matrices on the flat basis and
    /// a nonsplitness verdict.
    pub fn extension_rep(
        &self,
        i: usize,
        j: usize,
        func: &[Vec<F::Elem>],
        jideal: &Ideal<F>,
    ) -> Result<ExtensionRep<F>> {
        let data = &self.data;
        let coeff = &data.coeff;
        let f = &coeff.field;
        let slot = &data.slots[i][j];
        let (quot, qmap) = quotient_algebra(coeff, jideal)?;
        if func.len() != slot.fdim || func.iter().any(|v| v.len() != quot.fdim()) {
            return Err(Error::Shape("functional shape (slot basis x A/J coords)".into()));
        }
        // split check data
        let aprime = self.a_prime(i, j);
        for v in &aprime.basis {
            let mut acc = vec![f.zero(); quot.fdim()];
            for (b, co) in v.iter().enumerate() {
                if f.is_zero(co) {
                    continue;
                }
                for (o, x) in acc.iter_mut().zip(&func[b]) {
                    *o = f.add(o, &f.mul(co, x));
                }
            }
            if !crate::linalg::vec_is_zero(f, &acc) {
                return Err(Error::Precondition(
                    "functional does not vanish on A'_{i,j}".into(),
                ));
            }
        }
        // the representation on the flat algebra basis
        let (di, dj) = (data.block_sizes[i], data.block_sizes[j]);
        let n = di + dj;
        let alg = &self.psc.alg;
        let mut mats = Vec::with_capacity(alg.dim);
        for p in 0..alg.dim {
            let x = alg.basis_vec(p);
            mats.push(self.extension_matrix(i, j, func, &qmap, &x, n)?);
        }
        // multiplicativity on basis pairs
        let quot_f = QuotField { quot: quot.clone() };
        for p in 0..alg.dim {
            for q in 0..alg.dim {
                let prod = alg.mul(&alg.basis_vec(p), &alg.basis_vec(q));
                let lhs = self.extension_matrix(i, j, func, &qmap, &prod, n)?;
                let rhs = mat_mul_quot(&quot_f, &mats[p], &mats[q]);
                if lhs != rhs {
                    return Err(Error::Internal(format!(
                        "extension not multiplicative at basis pair ({p},{q})"
                    )));
                }
            }
        }
        // nonsplit iff the class is not a coboundary c(x) = rho_i(x) M - M rho_j(x)
        let nonsplit = !self.extension_splits(i, j, func, &qmap)?;
        Ok(ExtensionRep {
            quot,
            matrices: mats,
            nonsplit,
        })
    }

    fn extension_matrix(
        &self,
        i: usize,
        j: usize,
        func: &[Vec<F::Elem>],
        qmap: &QuotMap<F>,
        x: &[F::Elem],
        n: usize,
    ) -> Result<Mat<AElem<F>>> {
        let data = &self.data;
        let coeff = &data.coeff;
        let quot = &qmap.quot;
        let (di, dj) = (data.block_sizes[i], data.block_sizes[j]);
        let mut m = Mat::filled(n, n, quot.zero());
        // a_ii block
        for a in 0..di {
            for b in 0..di {
                let v = self.extract(x, i, i, a, b);
                *m.at_mut(a, b) = qmap.reduce(coeff, &AElem(v));
            }
        }
        // a_jj block
        for a in 0..dj {
            for b in 0..dj {
                let v = self.extract(x, j, j, a, b);
                *m.at_mut(di + a, di + b) = qmap.reduce(coeff, &AElem(v));
            }
        }
        // f(a_ij) block
        let fq = &coeff.field;
        for a in 0..di {
            for b in 0..dj {
                let v = self.extract(x, i, j, a, b);
                let mut acc = vec![fq.zero(); quot.fdim()];
                for (bb, co) in v.iter().enumerate() {
                    if fq.is_zero(co) {
                        continue;
                    }
                    for (o, t) in acc.iter_mut().zip(&func[bb]) {
                        *o = fq.add(o, &fq.mul(co, t));
                    }
                }
                *m.at_mut(a, di + b) = AElem(acc);
            }
        }
        Ok(m)
    }

    fn extension_splits(
        &self,
        i: usize,
        j: usize,
        func: &[Vec<F::Elem>],
        qmap: &QuotMap<F>,
    ) -> Result<bool> {
        // solve c(x) = rho_i(x) M - M rho_j(x) for M over A/J, x basis
        let data = &self.data;
        let coeff = &data.coeff;
        let f = &coeff.field;
        let quot = &qmap.quot;
        let (di, dj) = (data.block_sizes[i], data.block_sizes[j]);
        let qd = quot.fdim();
        let unknowns = di * dj * qd;
        let alg = &self.psc.alg;
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        let mut rhs: Vec<F::Elem> = Vec::new();
        for p in 0..alg.dim {
            let x = alg.basis_vec(p);
            // rho_i(x), rho_j(x), c(x)
            let rho_i: Vec<Vec<AElem<F>>> = (0..di)
                .map(|a| {
                    (0..di)
                        .map(|b| qmap.reduce(coeff, &AElem(self.extract(&x, i, i, a, b))))
                        .collect()
                })
                .collect();
            let rho_j: Vec<Vec<AElem<F>>> = (0..dj)
                .map(|a| {
                    (0..dj)
                        .map(|b| qmap.reduce(coeff, &AElem(self.extract(&x, j, j, a, b))))
                        .collect()
                })
                .collect();
            for a in 0..di {
                for b in 0..dj {
                    let v = self.extract(&x, i, j, a, b);
                    let mut cval = vec![f.zero(); qd];
                    for (bb, co) in v.iter().enumerate() {
                        if f.is_zero(co) {
                            continue;
                        }
                        for (o, t) in cval.iter_mut().zip(&func[bb]) {
                            *o = f.add(o, &f.mul(co, t));
                        }
                    }
                    // rows per A/J coordinate
                    for c in 0..qd {
                        let mut row = vec![f.zero(); unknowns];
                        // (rho_i(x) M)_{a,b} = sum_k rho_i[a][k] M[k][b]
                        for k in 0..di {
                            let coq = &rho_i[a][k];
                            for cc in 0..qd {
                                let prod = quot.mul(coq, &quot.basis_elem(cc));
                                row[(k * dj + b) * qd + cc] =
                                    f.add(&row[(k * dj + b) * qd + cc], &prod.0[c]);
                            }
                        }
                        // -(M rho_j(x))_{a,b} = -sum_k M[a][k] rho_j[k][b]
                        for k in 0..dj {
                            let coq = &rho_j[k][b];
                            for cc in 0..qd {
                                let prod = quot.mul(coq, &quot.basis_elem(cc));
                                row[(a * dj + k) * qd + cc] =
                                    f.sub(&row[(a * dj + k) * qd + cc], &prod.0[c]);
                            }
                        }
                        rows.push(row);
                        rhs.push(cval[c].clone());
                    }
                }
            }
        }
        let m = Mat::from_rows(rows);
        Ok(crate::linalg::solve(f, &m, &rhs).is_some())
    }

    /// Decompose T over A/J along a partition with I_P inside J: returns
    /// the pseudocharacters T_l(x) = T(f_l x f_l) mod J, each verified,
    /// with sum T mod J.
    pub fn decompose_on_locus(
        &self,
        partition: &[Vec<usize>],
        jideal: &Ideal<F>,
        seed: u64,
    ) -> Result<Vec<Pseudocharacter<std::sync::Arc<Artinian<F>>>>> {
        let ip = self.reducibility_ideal(partition)?;
        for g in &ip.generators {
            if !jideal.contains(g) {
                return Err(Error::PartitionNotSplit(self.data.coeff.fmt_elem(g)));
            }
        }
        let coeff = &self.data.coeff;
        let f = &coeff.field;
        let (quot, qmap) = quotient_algebra(coeff, jideal)?;
        // flat algebra over A/J: quotient by iota(J) R
        let alg = &self.psc.alg;
        let mut gens = Vec::new();
        for jv in &jideal.space.basis {
            let ij = self.psc.iota_of(&AElem(jv.clone()));
            for p in 0..alg.dim {
                gens.push(alg.mul(&ij, &alg.basis_vec(p)));
            }
        }
        let ideal = row_space(f, &gens, alg.dim);
        let (qalg, proj) = alg.quotient_by(&ideal)?;
        let qalg = Arc::new(qalg);
        let survivors: Vec<usize> = {
            let piv: std::collections::BTreeSet<usize> = ideal.pivots.iter().copied().collect();
            (0..alg.dim).filter(|p| !piv.contains(p)).collect()
        };
        let iota_q: Vec<Vec<F::Elem>> = (0..quot.fdim())
            .map(|a| {
                // lift A/J basis to A, map through iota, project
                let lifted = qmap.lift(coeff, a);
                let img = self.psc.iota_of(&lifted);
                project_vec(f, &img, &proj, qalg.dim)
            })
            .collect();
        let mut out = Vec::new();
        let mut sum_check: Vec<AElem<F>> = vec![quot.zero(); qalg.dim];
        for part in partition {
            let mut fl = alg.zero_vec();
            for &i in part {
                fl = alg.add(&fl, &self.e[i]);
            }
            // T_l on the quotient basis: T(f_l b f_l) mod J
            let t: Vec<AElem<F>> = survivors
                .iter()
                .map(|&p| {
                    let v = alg.mul(&alg.mul(&fl, &alg.basis_vec(p)), &fl);
                    qmap.reduce(coeff, &self.psc.t_of(&v))
                })
                .collect();
            for (s, tv) in sum_check.iter_mut().zip(&t) {
                *s = quot.add(s, tv);
            }
            let dl: usize = part.iter().map(|&i| self.data.block_sizes[i]).sum();
            let psc = Pseudocharacter::new(quot.clone(), qalg.clone(), iota_q.clone(), t, dl)?;
            let (ok, _) = psc.is_pseudocharacter(VerifyMode::Auto, seed, 200_000)?;
            if !ok {
                return Err(Error::Internal(
                    "decomposition summand fails the pseudocharacter identities".into(),
                ));
            }
            out.push(psc);
        }
        // sum equals T mod J
        for (p, &s) in survivors.iter().enumerate() {
            let expect = qmap.reduce(coeff, &self.psc.t[s]);
            if sum_check[p] != expect {
                return Err(Error::Internal("summands do not add up to T mod J".into()));
            }
        }
        Ok(out)
    }
}

/// A two-block extension representation over A/J.
#[derive(Clone, Debug)]
pub struct ExtensionRep<F: Field> {
    pub quot: Arc<Artinian<F>>,
    /// One (d_i + d_j)-square matrix over A/J per flat basis vector.
    pub matrices: Vec<Mat<AElem<F>>>,
    pub nonsplit: bool,
}

/// Reduction data for A -> A/J.
#[derive(Clone, Debug)]
pub struct QuotMap<F: Field> {
    pub quot: Arc<Artinian<F>>,
    survivors: Vec<usize>,
    jbasis: Vec<Vec<F::Elem>>,
    jpivots: Vec<usize>,
}

impl<F: Field> QuotMap<F> {
    pub fn reduce(&self, coeff: &Artinian<F>, a: &AElem<F>) -> AElem<F> {
        let f = &coeff.field;
        let mut v = a.0.clone();
        crate::linalg::reduce_against(f, &mut v, &self.jbasis, &self.jpivots);
        AElem(self.survivors.iter().map(|&c| v[c].clone()).collect())
    }
    pub fn lift(&self, coeff: &Artinian<F>, quot_basis_idx: usize) -> AElem<F> {
        let f = &coeff.field;
        let mut v = vec![f.zero(); coeff.fdim()];
        v[self.survivors[quot_basis_idx]] = f.one();
        AElem(v)
    }
}

/// A/J as a new artinian local algebra (J inside the maximal ideal).
pub fn quotient_algebra<F: Field>(
    coeff: &Arc<Artinian<F>>,
    jideal: &Ideal<F>,
) -> Result<(Arc<Artinian<F>>, QuotMap<F>)> {
    let f = &coeff.field;
    let jspace = &jideal.space;
    for v in &jspace.basis {
        if !f.is_zero(&v[0]) {
            return Err(Error::CollapsedAlgebra("J contains a unit".into()));
        }
    }
    let piv: std::collections::BTreeSet<usize> = jspace.pivots.iter().copied().collect();
    let survivors: Vec<usize> = (0..coeff.fdim()).filter(|c| !piv.contains(c)).collect();
    let qdim = survivors.len();
    let reduce = |a: &AElem<F>| -> Vec<F::Elem> {
        let mut v = a.0.clone();
        crate::linalg::reduce_against(f, &mut v, &jspace.basis, &jspace.pivots);
        survivors.iter().map(|&c| v[c].clone()).collect()
    };
    let mut mul_table = vec![vec![vec![]; qdim]; qdim];
    for (qi, &si) in survivors.iter().enumerate() {
        for (qj, &sj) in survivors.iter().enumerate() {
            let prod = coeff.mul(&coeff.basis_elem(si), &coeff.basis_elem(sj));
            mul_table[qi][qj] = reduce(&prod);
        }
    }
    let labels = survivors
        .iter()
        .map(|&c| coeff.labels[c].clone())
        .collect();
    let max_ideal = (1..qdim).collect();
    let quot = Arc::new(Artinian::from_table(
        f.clone(),
        labels,
        mul_table,
        max_ideal,
    )?);
    Ok((
        quot.clone(),
        QuotMap {
            quot,
            survivors,
            jbasis: jspace.basis.clone(),
            jpivots: jspace.pivots.clone(),
        },
    ))
}

fn project_vec<F: Field>(
    f: &F,
    v: &[F::Elem],
    proj: &[Vec<F::Elem>],
    qdim: usize,
) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); qdim];
    for (i, c) in v.iter().enumerate() {
        if f.is_zero(c) {
            continue;
        }
        for (o, x) in out.iter_mut().zip(&proj[i]) {
            *o = f.add(o, &f.mul(c, x));
        }
    }
    out
}

struct QuotField<F: Field> {
    quot: Arc<Artinian<F>>,
}

fn mat_mul_quot<F: Field>(
    q: &QuotField<F>,
    a: &Mat<AElem<F>>,
    b: &Mat<AElem<F>>,
) -> Mat<AElem<F>> {
    let quot = &q.quot;
    let mut out = Mat::filled(a.rows, b.cols, quot.zero());
    for i in 0..a.rows {
        for k in 0..a.cols {
            for j in 0..b.cols {
                let t = quot.mul(a.at(i, k), b.at(k, j));
                *out.at_mut(i, j) = quot.add(out.at(i, j), &t);
            }
        }
    }
    out
}
