//! Nilpotent matrices over the localized polynomial ring: residual type at
//! t = 0 versus generic type over k(t), the dominance inequality between
//! them, and a Jordan normal form over the local ring when the two agree.
//!
//! The module arithmetic is column reduction with valuation pivots, which
//! is exact over a discrete valuation ring.

use crate::coeff::localpoly::LocalPoly;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{rank, row_space, Mat};
use crate::poly::{rf_is_zero, RatFunc, RatFuncField};

use super::{jordan_matrix, jordan_type, Partition};

type RF<F> = RatFunc<<F as Field>::Elem>;

#[derive(Clone, Debug)]
pub struct DvrCompareReport<F: Field> {
    pub residual_type: Partition,
    pub generic_type: Partition,
    pub residual_below_generic: bool,
    pub strict: bool,
    /// Present exactly when the two types agree.
    pub normal_form: Option<Mat<RF<F>>>,
}

/// A free module over k[t]_(t) inside R^d, held as a triangular basis with
/// tracked preimages under whatever map produced the generators.
#[derive(Clone, Debug)]
struct DvrModule<F: Field> {
    basis: Vec<Vec<RF<F>>>,
    preimages: Vec<Vec<RF<F>>>,
    pivots: Vec<usize>,
}

pub struct DvrNilpotent<F: Field> {
    pub ring: LocalPoly<F>,
    pub mat: Mat<RF<F>>,
}

impl<F: Field> DvrNilpotent<F> {
    /// Entries must be regular at t = 0.
    pub fn new(ring: LocalPoly<F>, mat: Mat<RF<F>>) -> Result<Self> {
        if mat.rows != mat.cols {
            return Err(Error::Shape("matrix must be square".into()));
        }
        for e in &mat.data {
            ring.require_integral(e)?;
        }
        let n = DvrNilpotent { ring, mat };
        let ff = n.ring.fraction_field();
        let d = n.mat.rows;
        let mut p = crate::linalg::identity(&ff, d);
        for _ in 0..d {
            p = crate::linalg::mat_mul(&ff, &p, &n.mat);
        }
        if p.data.iter().any(|e| !rf_is_zero(e)) {
            return Err(Error::Precondition("matrix is not nilpotent".into()));
        }
        Ok(n)
    }

    pub fn residual_matrix(&self) -> Mat<F::Elem> {
        let f = self.ring.field();
        let d = self.mat.rows;
        let mut m = crate::linalg::zeros(f, d, d);
        for i in 0..d {
            for j in 0..d {
                *m.at_mut(i, j) = self.ring.residue(self.mat.at(i, j));
            }
        }
        m
    }

    pub fn residual_type(&self) -> Result<Partition> {
        jordan_type(self.ring.field(), &self.residual_matrix())
    }

    pub fn generic_type(&self) -> Result<Partition> {
        let ff = self.ring.fraction_field();
        jordan_type(&ff, &self.mat)
    }

    /// Residual versus generic with the dominance verdict; when they
    /// coincide, the normal form over the local ring is constructed.
    pub fn compare(&self) -> Result<DvrCompareReport<F>> {
        let residual = self.residual_type()?;
        let generic = self.generic_type()?;
        let leq = residual.dominance_leq(&generic)?;
        let strict = leq && residual != generic;
        let normal_form = if residual == generic {
            Some(self.normal_form(&residual)?)
        } else {
            None
        };
        Ok(DvrCompareReport {
            residual_type: residual,
            generic_type: generic,
            residual_below_generic: leq,
            strict,
            normal_form,
        })
    }

    fn apply_power(&self, v: &[RF<F>], k: usize) -> Vec<RF<F>> {
        let ff = self.ring.fraction_field();
        let mut out = v.to_vec();
        for _ in 0..k {
            out = crate::linalg::mat_vec(&ff, &self.mat, &out);
        }
        out
    }

    /// The image module of n^k with preimage bookkeeping.
    fn image_module(&self, k: usize) -> DvrModule<F> {
        let d = self.mat.rows;
        let ff = self.ring.fraction_field();
        let mut gens = Vec::new();
        let mut pres = Vec::new();
        for j in 0..d {
            let mut e = vec![ff.zero(); d];
            e[j] = ff.one();
            gens.push(self.apply_power(&e, k));
            pres.push(e);
        }
        hnf(&self.ring, gens, pres)
    }

    /// Saturated kernel module of n.
    fn kernel_module(&self) -> Vec<Vec<RF<F>>> {
        let ff = self.ring.fraction_field();
        let ker = crate::linalg::kernel_basis(&ff, &self.mat);
        saturate(&self.ring, ker, self.mat.rows)
    }

    /// Construct the Jordan form over the local ring, assuming residual =
    /// generic type.
    pub fn normal_form(&self, partition: &Partition) -> Result<Mat<RF<F>>> {
        let ring = &self.ring;
        let f = ring.field().clone();
        let ff = ring.fraction_field();
        let d = self.mat.rows;
        let ker = self.kernel_module();
        let mut chains: Vec<(Vec<RF<F>>, usize)> = Vec::new();
        for i in (0..d).rev() {
            let tops: Vec<Vec<F::Elem>> = chains
                .iter()
                .map(|(v, size)| self.residue_of(&self.apply_power(v, size - 1)))
                .collect();
            let mut span = row_space(&f, &tops, d);
            let img = self.image_module(i);
            // W = ker cap image: coefficients (a, b) with K a = I b
            let w = intersect(ring, &ker, &img.basis, d);
            for v in &w {
                let rv = self.residue_of(v);
                if crate::linalg::subspace_contains(&f, &span, &rv) {
                    continue;
                }
                let mut vecs = span.basis.clone();
                vecs.push(rv);
                span = row_space(&f, &vecs, d);
                // preimage: n^i x = v
                let x = solve_in_module(ring, &img, v)
                    .ok_or_else(|| Error::Internal("chain top has no preimage".into()))?;
                chains.push((x, i + 1));
            }
        }
        chains.sort_by(|a, b| b.1.cmp(&a.1));
        let total: usize = chains.iter().map(|(_, s)| s).sum();
        if total != d {
            return Err(Error::Internal(format!(
                "chains cover {total} of {d} dimensions"
            )));
        }
        let mut g = crate::linalg::zeros(&ff, d, d);
        let mut col = 0;
        for (v, size) in &chains {
            for s in (0..*size).rev() {
                let img = self.apply_power(v, s);
                for r in 0..d {
                    *g.at_mut(r, col) = img[r].clone();
                }
                col += 1;
            }
        }
        // g must be invertible over the local ring: residual determinant a unit
        let resid_g = {
            let mut m = crate::linalg::zeros(&f, d, d);
            for i in 0..d {
                for j in 0..d {
                    *m.at_mut(i, j) = ring
                        .residue(g.at(i, j));
                }
            }
            m
        };
        if crate::linalg::inverse(&f, &resid_g).is_none() {
            return Err(Error::Internal("base change not invertible over the local ring".into()));
        }
        let ginv = crate::linalg::inverse(&ff, &g)
            .ok_or_else(|| Error::Internal("base change singular".into()))?;
        let conj = crate::linalg::mat_mul(&ff, &crate::linalg::mat_mul(&ff, &ginv, &self.mat), &g);
        let jt = jordan_matrix(&f, partition);
        for i in 0..d {
            for j in 0..d {
                let expect = ring.lift(jt.at(i, j));
                if conj.at(i, j) != &expect {
                    return Err(Error::Internal(
                        "conjugated matrix is not the Jordan matrix".into(),
                    ));
                }
            }
        }
        Ok(g)
    }

    fn residue_of(&self, v: &[RF<F>]) -> Vec<F::Elem> {
        v.iter().map(|e| self.ring.residue(e)).collect()
    }
}

/// Column reduction with minimal-valuation pivots; returns a triangular
/// module basis with preimages carried along.
fn hnf<F: Field>(
    ring: &LocalPoly<F>,
    gens: Vec<Vec<RF<F>>>,
    pres: Vec<Vec<RF<F>>>,
) -> DvrModule<F> {
    let ff = ring.fraction_field();
    let d = gens.first().map_or(0, |v| v.len());
    let mut work: Vec<(Vec<RF<F>>, Vec<RF<F>>)> = gens.into_iter().zip(pres).collect();
    let mut basis = Vec::new();
    let mut preimages = Vec::new();
    let mut pivots = Vec::new();
    for row in 0..d {
        // pick the minimal-valuation entry at this row
        let mut best: Option<(usize, i64)> = None;
        for (idx, (v, _)) in work.iter().enumerate() {
            if rf_is_zero(&v[row]) {
                continue;
            }
            let val = ring.valuation(&v[row]).unwrap();
            if best.map_or(true, |(_, bv)| val < bv) {
                best = Some((idx, val));
            }
        }
        let (idx, _) = match best {
            Some(b) => b,
            None => continue,
        };
        let (pv, pp) = work.remove(idx);
        for (v, p) in work.iter_mut() {
            if rf_is_zero(&v[row]) {
                continue;
            }
            let c = ff.mul(&v[row], &crate::poly::rf_inv(&ring.base, &pv[row]).unwrap());
            for (vx, px) in v.iter_mut().zip(pv.iter()) {
                *vx = ff.sub(vx, &ff.mul(&c, px));
            }
            for (vx, px) in p.iter_mut().zip(pp.iter()) {
                *vx = ff.sub(vx, &ff.mul(&c, px));
            }
        }
        basis.push(pv);
        preimages.push(pp);
        pivots.push(row);
    }
    DvrModule {
        basis,
        preimages,
        pivots,
    }
}

/// Membership with coefficient recovery: w = sum c_b basis_b with c in the
/// local ring; returns sum c_b preimages_b.
fn solve_in_module<F: Field>(
    ring: &LocalPoly<F>,
    module: &DvrModule<F>,
    w: &[RF<F>],
) -> Option<Vec<RF<F>>> {
    let ff = ring.fraction_field();
    let mut w = w.to_vec();
    let d = w.len();
    let mut acc = vec![ff.zero(); module.preimages.first().map_or(d, |p| p.len())];
    for ((b, p), &piv) in module.basis.iter().zip(&module.preimages).zip(&module.pivots) {
        if rf_is_zero(&w[piv]) {
            continue;
        }
        let c = ff.mul(&w[piv], &crate::poly::rf_inv(&ring.base, &b[piv]).unwrap());
        if !ring.is_integral(&c) {
            return None;
        }
        for (wx, bx) in w.iter_mut().zip(b) {
            *wx = ff.sub(wx, &ff.mul(&c, bx));
        }
        for (ax, px) in acc.iter_mut().zip(p) {
            *ax = ff.add(ax, &ff.mul(&c, px));
        }
    }
    if w.iter().all(rf_is_zero) {
        Some(acc)
    } else {
        None
    }
}

/// Basis of (k(t)-span of gens) intersected with R^d, i.e. the saturation.
fn saturate<F: Field>(
    ring: &LocalPoly<F>,
    gens: Vec<Vec<RF<F>>>,
    d: usize,
) -> Vec<Vec<RF<F>>> {
    let ff = ring.fraction_field();
    let f = ring.field().clone();
    // first make integral and primitive, then triangularize
    let mut vecs: Vec<Vec<RF<F>>> = gens
        .into_iter()
        .filter(|v| v.iter().any(|e| !rf_is_zero(e)))
        .map(|v| {
            let minv = v
                .iter()
                .filter_map(|e| ring.valuation(e))
                .min()
                .unwrap();
            let scale = ring.uniformizer_pow(-minv);
            v.iter().map(|e| ff.mul(&scale, e)).collect()
        })
        .collect();
    loop {
        let module = hnf(ring, vecs.clone(), vecs.clone());
        let mut basis = module.basis;
        // primitive again after reduction
        for v in basis.iter_mut() {
            let minv = v.iter().filter_map(|e| ring.valuation(e)).min();
            if let Some(mv) = minv {
                if mv > 0 {
                    let scale = ring.uniformizer_pow(-mv);
                    for e in v.iter_mut() {
                        *e = ff.mul(&scale, e);
                    }
                }
            }
        }
        // saturated iff residues are independent
        let resid: Vec<Vec<F::Elem>> = basis
            .iter()
            .map(|v| v.iter().map(|e| ring.residue(e)).collect())
            .collect();
        let rk = row_space(&f, &resid, d).dim();
        if rk == basis.len() {
            return basis;
        }
        // a dependent residue combination is divisible by t: divide and loop
        let mut m = crate::linalg::zeros(&f, d, basis.len());
        for (j, v) in resid.iter().enumerate() {
            for i in 0..d {
                *m.at_mut(i, j) = v[i].clone();
            }
        }
        let kerv = crate::linalg::kernel_basis(&f, &m);
        let co = &kerv[0];
        let mut combo = vec![ff.zero(); d];
        for (j, c) in co.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let cl = ring.lift(c);
            for (cx, bx) in combo.iter_mut().zip(&basis[j]) {
                *cx = ff.add(cx, &ff.mul(&cl, bx));
            }
        }
        let tinv = ring.uniformizer_pow(-1);
        let combo: Vec<RF<F>> = combo.iter().map(|e| ff.mul(&tinv, e)).collect();
        // replace one participating basis vector
        let j = co.iter().position(|c| !f.is_zero(c)).unwrap();
        basis[j] = combo;
        vecs = basis;
    }
}

/// Intersection of a saturated module K with an arbitrary module N, both
/// inside R^d: solve K a = N b over the ring.
fn intersect<F: Field>(
    ring: &LocalPoly<F>,
    kbasis: &[Vec<RF<F>>],
    nbasis: &[Vec<RF<F>>],
    d: usize,
) -> Vec<Vec<RF<F>>> {
    if kbasis.is_empty() || nbasis.is_empty() {
        return vec![];
    }
    let ff = ring.fraction_field();
    let cols = kbasis.len() + nbasis.len();
    let mut m = crate::linalg::zeros(&ff, d, cols);
    for (j, v) in kbasis.iter().enumerate() {
        for i in 0..d {
            *m.at_mut(i, j) = v[i].clone();
        }
    }
    for (j, v) in nbasis.iter().enumerate() {
        for i in 0..d {
            *m.at_mut(i, kbasis.len() + j) = ff.neg(&v[i]);
        }
    }
    let ker = crate::linalg::kernel_basis(&ff, &m);
    let coeff_sols = saturate(ring, ker, cols);
    // the intersection vectors, as a module
    let gens: Vec<Vec<RF<F>>> = coeff_sols
        .iter()
        .map(|sol| {
            let mut v = vec![ff.zero(); d];
            for (j, kb) in kbasis.iter().enumerate() {
                if rf_is_zero(&sol[j]) {
                    continue;
                }
                for (vx, bx) in v.iter_mut().zip(kb) {
                    *vx = ff.add(vx, &ff.mul(&sol[j], bx));
                }
            }
            v
        })
        .collect();
    let module = hnf(ring, gens.clone(), gens);
    module.basis
}

/// Rank over the fraction field, for callers that only need generic data.
pub fn generic_rank<F: Field>(ring: &LocalPoly<F>, m: &Mat<RF<F>>) -> usize {
    let ff: RatFuncField<F> = ring.fraction_field();
    rank(&ff, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn ring() -> LocalPoly<Rationals> {
        LocalPoly::new(Rationals)
    }

    fn mat(r: &LocalPoly<Rationals>, rows: Vec<Vec<&str>>) -> Mat<RF<Rationals>> {
        Mat::from_rows(
            rows.into_iter()
                .map(|row| row.into_iter().map(|s| r.parse(s).unwrap()).collect())
                .collect(),
        )
    }

    #[test]
    fn t_matrix_is_strictly_smaller_residually() {
        let r = ring();
        let n = DvrNilpotent::new(r.clone(), mat(&r, vec![vec!["0", "t"], vec!["0", "0"]])).unwrap();
        let rep = n.compare().unwrap();
        assert_eq!(rep.residual_type, Partition(vec![1, 1]));
        assert_eq!(rep.generic_type, Partition(vec![2]));
        assert!(rep.residual_below_generic);
        assert!(rep.strict);
        assert!(rep.normal_form.is_none());
    }

    #[test]
    fn constant_matrix_gets_a_normal_form() {
        let r = ring();
        let n = DvrNilpotent::new(r.clone(), mat(&r, vec![vec!["0", "1"], vec!["0", "0"]])).unwrap();
        let rep = n.compare().unwrap();
        assert_eq!(rep.residual_type, rep.generic_type);
        assert!(rep.normal_form.is_some());
    }

    #[test]
    fn three_by_three_with_types_21_and_3() {
        let r = ring();
        let n = DvrNilpotent::new(
            r.clone(),
            mat(
                &r,
                vec![
                    vec!["0", "1", "0"],
                    vec!["0", "0", "t"],
                    vec!["0", "0", "0"],
                ],
            ),
        )
        .unwrap();
        let rep = n.compare().unwrap();
        assert_eq!(rep.residual_type, Partition(vec![2, 1]));
        assert_eq!(rep.generic_type, Partition(vec![3]));
        assert!(rep.residual_below_generic && rep.strict);
    }

    #[test]
    fn denominator_vanishing_at_zero_is_an_error() {
        let r = ring();
        let e = r.parse("1/t").unwrap();
        let ff = r.fraction_field();
        let mut m = crate::linalg::zeros(&ff, 2, 2);
        *m.at_mut(0, 1) = e;
        assert!(DvrNilpotent::new(r, m).is_err());
    }

    #[test]
    fn twisted_conjugate_still_gets_normal_form() {
        // conjugate J_2 by an invertible matrix over the local ring; the
        // residual and generic types agree, so a normal form must come back
        let r = ring();
        let ff = r.fraction_field();
        let g = mat(&r, vec![vec!["1", "t"], vec!["t", "1 + t"]]);
        let ginv = crate::linalg::inverse(&ff, &g).unwrap();
        let j = mat(&r, vec![vec!["0", "1"], vec!["0", "0"]]);
        let conj = crate::linalg::mat_mul(&ff, &crate::linalg::mat_mul(&ff, &ginv, &j), &g);
        let n = DvrNilpotent::new(r, conj).unwrap();
        let rep = n.compare().unwrap();
        assert_eq!(rep.residual_type, rep.generic_type);
        assert!(rep.normal_form.is_some());
    }
}
