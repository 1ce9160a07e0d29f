//! Standard GMAs over the localized polynomial ring k[t]_(t): every
//! finitely generated fractional ideal of k(t) over this discrete
//! valuation ring is t^v k[t]_(t), so a standard GMA is a matrix of
//! valuation constraints. Includes the conjugation that pulls all
//! structural modules into the ring.

use crate::coeff::localpoly::LocalPoly;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;
use crate::poly::{rf_is_zero, RatFunc};
use crate::pseudochar::identities::TraceEnv;

/// v[i][j] = Some(v_ij): the module t^(v_ij) A; None: the zero module.
/// Diagonal entries must be Some(0).
#[derive(Clone, Debug)]
pub struct DvrGma<F: Field> {
    pub ring: LocalPoly<F>,
    pub block_sizes: Vec<usize>,
    pub valuations: Vec<Vec<Option<i64>>>,
}

impl<F: Field> DvrGma<F> {
    pub fn new(
        ring: LocalPoly<F>,
        block_sizes: Vec<usize>,
        valuations: Vec<Vec<Option<i64>>>,
    ) -> Result<Self> {
        let r = block_sizes.len();
        if valuations.len() != r || valuations.iter().any(|row| row.len() != r) {
            return Err(Error::Shape("valuation grid must be r x r".into()));
        }
        for (i, row) in valuations.iter().enumerate() {
            if row[i] != Some(0) {
                return Err(Error::Shape("diagonal modules must be the ring itself".into()));
            }
        }
        let gma = DvrGma {
            ring,
            block_sizes,
            valuations,
        };
        gma.check_closure()?;
        Ok(gma)
    }

    pub fn r(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn total_dim(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// A_{i,j} A_{j,k} inside A_{i,k}: v_ij + v_jk >= v_ik.
    fn check_closure(&self) -> Result<()> {
        let r = self.r();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let (a, b, c) = (
                        self.valuations[i][j],
                        self.valuations[j][k],
                        self.valuations[i][k],
                    );
                    match (a, b, c) {
                        (Some(va), Some(vb), Some(vc)) => {
                            if va + vb < vc {
                                return Err(Error::Precondition(format!(
                                    "module product ({},{}) x ({},{}) escapes ({},{}): {} + {} < {}",
                                    i + 1, j + 1, j + 1, k + 1, i + 1, k + 1, va, vb, vc
                                )));
                            }
                        }
                        (Some(_), Some(_), None) => {
                            return Err(Error::Precondition(format!(
                                "product of nonzero modules lands in the zero module ({},{})",
                                i + 1,
                                k + 1
                            )))
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }

    fn block_of(&self, idx: usize) -> usize {
        let mut acc = 0;
        for (i, &d) in self.block_sizes.iter().enumerate() {
            acc += d;
            if idx < acc {
                return i;
            }
        }
        unreachable!("index out of range")
    }

    /// Does the matrix lie in the GMA (entrywise valuation constraints)?
    pub fn contains(&self, m: &Mat<RatFunc<F::Elem>>) -> bool {
        let d = self.total_dim();
        if m.rows != d || m.cols != d {
            return false;
        }
        for r in 0..d {
            for c in 0..d {
                let e = m.at(r, c);
                if rf_is_zero(e) {
                    continue;
                }
                match self.valuations[self.block_of(r)][self.block_of(c)] {
                    None => return false,
                    Some(v) => {
                        if self.ring.valuation(e).unwrap() < v {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn trace(&self, m: &Mat<RatFunc<F::Elem>>) -> RatFunc<F::Elem> {
        let mut acc = self.ring.zero();
        for i in 0..m.rows {
            acc = self.ring.add(&acc, m.at(i, i));
        }
        acc
    }

    pub fn mat_mul(&self, a: &Mat<RatFunc<F::Elem>>, b: &Mat<RatFunc<F::Elem>>) -> Mat<RatFunc<F::Elem>> {
        let ff = self.ring.fraction_field();
        crate::linalg::mat_mul(&ff, a, b)
    }

    /// Conjugation by diag(x_1 Id, ..., x_r Id) with v(x_i) = v_{i,1}
    /// (the minimal valuation of A_{i,1}); the resulting modules
    /// t^(v_{j,1} - v_{i,1}) A_{i,j} all land inside the ring. Zero
    /// modules stay zero (their valuation is +infinity).
    pub fn normalize(&self) -> Result<(DvrGma<F>, Vec<i64>)> {
        let r = self.r();
        // v_{i,1}: first block as base point. A zero A_{i,1} has valuation
        // +infinity; such blocks get their shift from the remaining
        // constraints instead.
        let mut shift: Vec<Option<i64>> = vec![None; r];
        shift[0] = Some(0);
        for i in 1..r {
            if let Some(v) = self.valuations[i][0] {
                shift[i] = Some(v);
            }
        }
        for i in 0..r {
            if shift[i].is_some() {
                continue;
            }
            // need shift[j] - v_{j,i} <= shift[i] <= v_{i,j} + shift[j]
            let mut lo = i64::MIN;
            let mut hi = i64::MAX;
            for j in 0..r {
                if j == i {
                    continue;
                }
                if let (Some(s), Some(v)) = (shift[j], self.valuations[j][i]) {
                    lo = lo.max(s - v);
                }
                if let (Some(s), Some(v)) = (shift[j], self.valuations[i][j]) {
                    hi = hi.min(v + s);
                }
            }
            let v = if lo != i64::MIN {
                lo
            } else if hi != i64::MAX {
                hi
            } else {
                0
            };
            shift[i] = Some(v);
        }
        let shift: Vec<i64> = shift.into_iter().map(|s| s.unwrap()).collect();
        let mut new_vals = vec![vec![None; r]; r];
        for i in 0..r {
            for j in 0..r {
                new_vals[i][j] = self.valuations[i][j].map(|v| v + shift[j] - shift[i]);
            }
        }
        // all modules must now be integral
        for (i, row) in new_vals.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    if *v < 0 {
                        return Err(Error::Internal(format!(
                            "normalization left module ({},{}) fractional",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        let out = DvrGma::new(self.ring.clone(), self.block_sizes.clone(), new_vals)?;
        Ok((out, shift))
    }

    /// The conjugating matrix diag(t^shift_i Id_{d_i}).
    pub fn conjugator(&self, shift: &[i64]) -> Mat<RatFunc<F::Elem>> {
        let d = self.total_dim();
        let ff = self.ring.fraction_field();
        let mut m = crate::linalg::zeros(&ff, d, d);
        for idx in 0..d {
            let b = self.block_of(idx);
            *m.at_mut(idx, idx) = self.ring.uniformizer_pow(shift[b]);
        }
        m
    }

    /// A deterministic element of the GMA with every allowed entry filled
    /// by a distinct monomial; handy for conjugation-invariance tests.
    pub fn sample_element(&self, salt: i64) -> Mat<RatFunc<F::Elem>> {
        let d = self.total_dim();
        let ff = self.ring.fraction_field();
        let mut m = crate::linalg::zeros(&ff, d, d);
        for r in 0..d {
            for c in 0..d {
                if let Some(v) = self.valuations[self.block_of(r)][self.block_of(c)] {
                    let scale = self
                        .ring
                        .lift(&self.ring.field().from_i64(1 + ((r as i64 + 2 * c as i64 + salt) % 5)));
                    *m.at_mut(r, c) = self.ring.mul(&self.ring.uniformizer_pow(v), &scale);
                }
            }
        }
        m
    }
}

/// TraceEnv over the DVR: lets the generic identity checks run on these
/// block-matrix algebras.
pub struct DvrGmaEnv<'a, F: Field> {
    pub gma: &'a DvrGma<F>,
}

impl<'a, F: Field> TraceEnv<LocalPoly<F>> for DvrGmaEnv<'a, F> {
    type X = Mat<RatFunc<F::Elem>>;

    fn coeff(&self) -> &LocalPoly<F> {
        &self.gma.ring
    }
    fn x_one(&self) -> Self::X {
        let ff = self.gma.ring.fraction_field();
        crate::linalg::identity(&ff, self.gma.total_dim())
    }
    fn x_mul(&self, a: &Self::X, b: &Self::X) -> Self::X {
        self.gma.mat_mul(a, b)
    }
    fn x_add(&self, a: &Self::X, b: &Self::X) -> Self::X {
        let ff = self.gma.ring.fraction_field();
        let mut out = a.clone();
        for i in 0..a.rows {
            for j in 0..a.cols {
                *out.at_mut(i, j) = ff.add(a.at(i, j), b.at(i, j));
            }
        }
        out
    }
    fn x_scale(&self, c: &RatFunc<F::Elem>, a: &Self::X) -> Self::X {
        let ff = self.gma.ring.fraction_field();
        let mut out = a.clone();
        for i in 0..a.rows {
            for j in 0..a.cols {
                *out.at_mut(i, j) = ff.mul(c, a.at(i, j));
            }
        }
        out
    }
    fn trace(&self, x: &Self::X) -> RatFunc<F::Elem> {
        self.gma.trace(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn normalization_of_the_two_block_example() {
        // A_{1,2} = t^2 A, A_{2,1} = t^(-1) A -> (t A, A)
        let ring = LocalPoly::new(Rationals);
        let gma = DvrGma::new(
            ring,
            vec![1, 1],
            vec![vec![Some(0), Some(2)], vec![Some(-1), Some(0)]],
        )
        .unwrap();
        let (norm, shift) = gma.normalize().unwrap();
        assert_eq!(shift, vec![0, -1]);
        assert_eq!(norm.valuations[0][1], Some(1));
        assert_eq!(norm.valuations[1][0], Some(0));
    }

    #[test]
    fn already_integral_stays_put() {
        let ring = LocalPoly::new(Rationals);
        let gma = DvrGma::new(
            ring,
            vec![1, 1],
            vec![vec![Some(0), Some(1)], vec![Some(0), Some(0)]],
        )
        .unwrap();
        let (norm, _) = gma.normalize().unwrap();
        assert_eq!(norm.valuations[0][1], Some(1));
        assert_eq!(norm.valuations[1][0], Some(0));
    }

    #[test]
    fn trace_is_conjugation_invariant() {
        let ring = LocalPoly::new(Rationals);
        let gma = DvrGma::new(
            ring.clone(),
            vec![1, 2],
            vec![vec![Some(0), Some(2)], vec![Some(-1), Some(0)]],
        )
        .unwrap();
        let (_, shift) = gma.normalize().unwrap();
        let p = gma.conjugator(&shift);
        let ff = ring.fraction_field();
        let pinv = crate::linalg::inverse(&ff, &p).unwrap();
        for salt in 0..4 {
            let x = gma.sample_element(salt);
            let conj = gma.mat_mul(&gma.mat_mul(&pinv, &x), &p);
            assert_eq!(gma.trace(&x), gma.trace(&conj));
        }
    }
}
