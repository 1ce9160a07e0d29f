//! Filtered phi-modules with distinct eigenvalues and weights: weak
//! admissibility, refinements as eigenvalue orderings, induced weights,
//! (numerical) non-criticality and regularity.

pub mod sigma;
pub mod unramified;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{padic_valuation, Field, Rationals};
use crate::linalg::{rank, row_space, Mat, Subspace};

/// Eigenbasis = standard basis; phi = diag(eigenvalues); weights strictly
/// increasing; Fil^{k_i} = span(w_i, ..., w_d), constant between jumps.
#[derive(Clone, Debug)]
pub struct FilteredPhiModule {
    pub p: u64,
    pub d: usize,
    pub eigenvalues: Vec<BigRational>,
    pub weights: Vec<i64>,
    pub flag: Vec<Vec<BigRational>>,
}

/// An ordering of the eigenvalue indices; the flag F_i is the span of the
/// first i chosen eigenlines.
#[derive(Clone, Debug, PartialEq)]
pub struct Refinement(pub Vec<usize>);

impl FilteredPhiModule {
    pub fn new(
        p: u64,
        eigenvalues: Vec<BigRational>,
        weights: Vec<i64>,
        flag: Vec<Vec<BigRational>>,
    ) -> Result<Self> {
        let d = eigenvalues.len();
        let f = Rationals;
        if weights.len() != d || flag.len() != d {
            return Err(Error::Shape("eigenvalues, weights, flag must agree in length".into()));
        }
        for i in 0..d {
            if f.is_zero(&eigenvalues[i]) {
                return Err(Error::Precondition("eigenvalues must be nonzero".into()));
            }
            for j in 0..i {
                if eigenvalues[i] == eigenvalues[j] {
                    return Err(Error::Precondition("eigenvalues must be distinct".into()));
                }
            }
        }
        if !weights.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Precondition("weights must be strictly increasing".into()));
        }
        for v in &flag {
            if v.len() != d {
                return Err(Error::Shape("flag vectors must have length d".into()));
            }
        }
        let m = Mat::from_rows(flag.clone());
        if rank(&f, &m) != d {
            return Err(Error::Precondition("flag vectors must be independent".into()));
        }
        Ok(FilteredPhiModule {
            p,
            d,
            eigenvalues,
            weights,
            flag,
        })
    }

    pub fn valuation(&self, i: usize) -> i64 {
        padic_valuation(self.p, &self.eigenvalues[i]).expect("nonzero eigenvalue")
    }

    /// Fil^{k_i} as a subspace: span of w_i..w_d (1-based step index).
    fn fil_step(&self, step: usize) -> Subspace<BigRational> {
        let f = Rationals;
        row_space(&f, &self.flag[step..], self.d)
    }

    /// Induced Hodge jumps on a subspace W: multiset of k_i with
    /// multiplicity dim(W cap Fil^{k_i}) - dim(W cap Fil^{k_{i+1}}).
    pub fn induced_jumps(&self, w: &Subspace<BigRational>) -> Vec<i64> {
        let f = Rationals;
        let mut dims = Vec::with_capacity(self.d + 1);
        for step in 0..self.d {
            let fil = self.fil_step(step);
            dims.push(crate::linalg::subspace_intersect(&f, w, &fil).dim());
        }
        dims.push(0); // Fil^{k_d + 1} = 0
        let mut out = Vec::new();
        for i in 0..self.d {
            for _ in 0..dims[i] - dims[i + 1] {
                out.push(self.weights[i]);
            }
        }
        out.sort_unstable();
        out
    }

    fn eigen_subset_space(&self, subset: &[usize]) -> Subspace<BigRational> {
        let f = Rationals;
        let vecs: Vec<Vec<BigRational>> = subset
            .iter()
            .map(|&i| {
                let mut v = vec![f.zero(); self.d];
                v[i] = f.one();
                v
            })
            .collect();
        row_space(&f, &vecs, self.d)
    }

    /// t_N = t_H globally and t_N >= t_H on every phi-stable subspace
    /// (i.e. every eigenvector subset).
    pub fn is_weakly_admissible(&self) -> bool {
        let total_tn: i64 = (0..self.d).map(|i| self.valuation(i)).sum();
        let total_th: i64 = self.weights.iter().sum();
        if total_tn != total_th {
            return false;
        }
        for mask in 1u64..(1 << self.d) {
            let subset: Vec<usize> = (0..self.d).filter(|i| mask >> i & 1 == 1).collect();
            if subset.len() == self.d {
                continue;
            }
            let tn: i64 = subset.iter().map(|&i| self.valuation(i)).sum();
            let th: i64 = self
                .induced_jumps(&self.eigen_subset_space(&subset))
                .iter()
                .sum();
            if tn < th {
                return false;
            }
        }
        true
    }

    pub fn enumerate_refinements(&self) -> Vec<Refinement> {
        let mut out = Vec::new();
        crate::pseudochar::identities::for_each_permutation(self.d, |perm| {
            out.push(Refinement(perm.to_vec()));
        });
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// The induced weights s_1..s_d: s_i is the new induced jump of F_i
    /// over F_{i-1}.
    pub fn induced_weights(&self, r: &Refinement) -> Result<Vec<i64>> {
        self.check_refinement(r)?;
        let mut prev: Vec<i64> = Vec::new();
        let mut out = Vec::with_capacity(self.d);
        for i in 1..=self.d {
            let w = self.eigen_subset_space(&r.0[..i]);
            let jumps = self.induced_jumps(&w);
            // multiset difference: exactly one new element
            let mut new = None;
            let mut prev_iter = prev.clone();
            for j in &jumps {
                if let Some(pos) = prev_iter.iter().position(|x| x == j) {
                    prev_iter.remove(pos);
                } else if new.is_none() {
                    new = Some(*j);
                } else {
                    return Err(Error::Internal("more than one new jump".into()));
                }
            }
            out.push(new.ok_or_else(|| Error::Internal("no new jump".into()))?);
            prev = jumps;
        }
        Ok(out)
    }

    fn check_refinement(&self, r: &Refinement) -> Result<()> {
        let mut seen = vec![false; self.d];
        if r.0.len() != self.d {
            return Err(Error::Shape("refinement length".into()));
        }
        for &i in &r.0 {
            if i >= self.d || seen[i] {
                return Err(Error::Shape("refinement must be a permutation".into()));
            }
            seen[i] = true;
        }
        Ok(())
    }

    /// Non-critical: F_i direct sum Fil^{k_i + 1} = D for all i. Computed
    /// by ranks and checked against the equivalent criterion s_i = k_i.
    pub fn is_non_critical(&self, r: &Refinement) -> Result<bool> {
        self.check_refinement(r)?;
        let f = Rationals;
        let mut by_rank = true;
        for i in 1..=self.d {
            // Fil^{k_i + 1} = Fil at step i (next jump), dimension d - i
            let fil = self.fil_step(i.min(self.d));
            let fil_dim = self.d - i;
            debug_assert_eq!(fil.dim(), fil_dim);
            let mut vecs: Vec<Vec<BigRational>> = r.0[..i]
                .iter()
                .map(|&j| {
                    let mut v = vec![f.zero(); self.d];
                    v[j] = f.one();
                    v
                })
                .collect();
            vecs.extend(fil.basis.iter().cloned());
            if row_space(&f, &vecs, self.d).dim() != self.d {
                by_rank = false;
                break;
            }
        }
        let s = self.induced_weights(r)?;
        let by_weights = s == self.weights;
        if by_rank != by_weights {
            return Err(Error::Internal(
                "rank and induced-weight criteria disagree".into(),
            ));
        }
        Ok(by_rank)
    }

    /// v(phi_1) + ... + v(phi_i) < k_1 + ... + k_{i-1} + k_{i+1} for all
    /// i < d.
    pub fn is_numerically_non_critical(&self, r: &Refinement) -> Result<bool> {
        self.check_refinement(r)?;
        let mut vsum = 0i64;
        for i in 1..self.d {
            vsum += self.valuation(r.0[i - 1]);
            let bound: i64 =
                self.weights[..i - 1].iter().sum::<i64>() + self.weights[i];
            if vsum >= bound {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Each partial product of eigenvalues is a simple eigenvalue of the
    /// corresponding exterior power: it occurs exactly once among the
    /// products over i-element subsets.
    pub fn is_regular(&self, r: &Refinement) -> Result<bool> {
        self.check_refinement(r)?;
        let f = Rationals;
        for i in 1..=self.d {
            let mut target = f.one();
            for &j in &r.0[..i] {
                target = f.mul(&target, &self.eigenvalues[j]);
            }
            let mut count = 0;
            for mask in 0u64..(1 << self.d) {
                if mask.count_ones() as usize != i {
                    continue;
                }
                let mut prod = f.one();
                for j in 0..self.d {
                    if mask >> j & 1 == 1 {
                        prod = f.mul(&prod, &self.eigenvalues[j]);
                    }
                }
                if prod == target {
                    count += 1;
                }
            }
            if count != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        Rationals.from_i64(n)
    }

    fn qr(s: &str) -> BigRational {
        Rationals.parse(s).unwrap()
    }

    /// d = 3, weights (0,1,2), all valuations 1, Vandermonde flag.
    fn generic_example() -> FilteredPhiModule {
        FilteredPhiModule::new(
            5,
            vec![q(5), q(10), qr("5/2")],
            vec![0, 1, 2],
            vec![
                vec![q(1), q(1), q(1)],
                vec![q(1), q(2), q(4)],
                vec![q(1), q(3), q(9)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn one_dimensional_admissibility() {
        let ok = FilteredPhiModule::new(5, vec![q(5)], vec![1], vec![vec![q(1)]]).unwrap();
        assert!(ok.is_weakly_admissible());
        let bad = FilteredPhiModule::new(5, vec![q(25)], vec![1], vec![vec![q(1)]]).unwrap();
        assert!(!bad.is_weakly_admissible());
    }

    #[test]
    fn generic_three_dimensional_example_is_admissible() {
        let d = generic_example();
        assert!(d.is_weakly_admissible());
        assert_eq!(d.enumerate_refinements().len(), 6);
        // every refinement is numerically critical here
        for r in d.enumerate_refinements() {
            assert!(!d.is_numerically_non_critical(&r).unwrap());
        }
        // but the generic flag makes every refinement non-critical
        for r in d.enumerate_refinements() {
            assert!(d.is_non_critical(&r).unwrap());
            assert_eq!(d.induced_weights(&r).unwrap(), vec![0, 1, 2]);
        }
    }

    #[test]
    fn split_two_dimensional_example() {
        // phi = (1, p), weights (0, 1), Fil^1 = the p-eigenline
        let d = FilteredPhiModule::new(
            5,
            vec![q(1), q(5)],
            vec![0, 1],
            vec![vec![q(1), q(0)], vec![q(0), q(1)]],
        )
        .unwrap();
        assert!(d.is_weakly_admissible());
        let bad = Refinement(vec![1, 0]); // p first
        assert_eq!(d.induced_weights(&bad).unwrap(), vec![1, 0]);
        assert!(!d.is_non_critical(&bad).unwrap());
        let good = Refinement(vec![0, 1]);
        assert!(d.is_non_critical(&good).unwrap());
    }

    #[test]
    fn subobject_violation_is_detected() {
        // v(phi_1) = -1 with k = (0,1) and the phi_1-eigenline meeting the
        // filtration trivially: the line is a subobject with t_N < t_H
        let d = FilteredPhiModule::new(
            5,
            vec![qr("1/5"), qr("25")],
            vec![0, 1],
            vec![vec![q(1), q(0)], vec![q(0), q(1)]],
        )
        .unwrap();
        assert!(!d.is_weakly_admissible());
    }

    #[test]
    fn regularity_brute_force() {
        let vander = vec![
            vec![q(1), q(1), q(1)],
            vec![q(1), q(2), q(4)],
            vec![q(1), q(3), q(9)],
        ];
        let d = FilteredPhiModule::new(
            5,
            vec![q(1), q(-1), q(2)],
            vec![0, 1, 2],
            vander.clone(),
        )
        .unwrap();
        assert!(d.is_regular(&Refinement(vec![0, 1, 2])).unwrap());
        let e = FilteredPhiModule::new(
            5,
            vec![q(1), q(2), qr("1/2")],
            vec![0, 1, 2],
            vander,
        )
        .unwrap();
        assert!(e.is_regular(&Refinement(vec![0, 1, 2])).unwrap());
        // 2 * 3 = 6 appears again as the eigenvalue 6 paired with 1:
        // irregular at level 2 for any ordering starting (2, 3)
        let g = FilteredPhiModule::new(
            5,
            vec![q(2), q(3), q(6), q(1)],
            vec![0, 1, 2, 3],
            vec![
                vec![q(1), q(1), q(1), q(1)],
                vec![q(1), q(2), q(4), q(8)],
                vec![q(1), q(3), q(9), q(27)],
                vec![q(1), q(4), q(16), q(64)],
            ],
        )
        .unwrap();
        assert!(!g.is_regular(&Refinement(vec![0, 1, 2, 3])).unwrap());
        // a malformed refinement is rejected
        assert!(g.is_regular(&Refinement(vec![0, 1])).is_err());
    }
}
