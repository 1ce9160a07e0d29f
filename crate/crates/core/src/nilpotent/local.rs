//! Jordan normal forms over artinian local coefficient rings: a nilpotent
//! matrix admits one exactly when every image n^i(A^d) is free and a
//! direct summand, decided here by comparing base-field dimensions with
//! residual ranks, and realized by lifting residual chain vectors.

use std::sync::Arc;

use crate::coeff::artinian::{AElem, Artinian};
use crate::coeff::{ArtinianCoeff, Coeff};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gma::involution::{amat_inverse, amat_mul};
use crate::linalg::{
    rank, row_space, subspace_intersect, zeros, Mat, Subspace,
};

use super::{jordan_matrix, jordan_type, Partition};

#[derive(Clone, Debug)]
pub enum JordanOverLocal<F: Field> {
    Present {
        partition: Partition,
        /// g with g^{-1} n g the Jordan matrix of the partition.
        base_change: Mat<AElem<F>>,
    },
    Absent {
        /// Smallest power whose image fails to be free and a direct
        /// summand.
        failing_power: usize,
    },
}

pub struct LocalNilpotent<F: Field> {
    pub coeff: Arc<Artinian<F>>,
    pub mat: Mat<AElem<F>>,
}

impl<F: Field> LocalNilpotent<F> {
    pub fn new(coeff: Arc<Artinian<F>>, mat: Mat<AElem<F>>) -> Result<Self> {
        if mat.rows != mat.cols {
            return Err(Error::Shape("matrix must be square".into()));
        }
        let n = LocalNilpotent { coeff, mat };
        if !n.is_nilpotent() {
            return Err(Error::Precondition("matrix is not nilpotent".into()));
        }
        Ok(n)
    }

    fn is_nilpotent(&self) -> bool {
        let d = self.mat.rows;
        let mut p = identity_amat(&self.coeff, d);
        for _ in 0..d {
            p = amat_mul(&self.coeff, &p, &self.mat);
        }
        p.data.iter().all(|e| self.coeff.is_zero(e))
    }

    pub fn residual(&self) -> Mat<F::Elem> {
        let d = self.mat.rows;
        let f = &self.coeff.field;
        let mut m = zeros(f, d, d);
        for i in 0..d {
            for j in 0..d {
                *m.at_mut(i, j) = self.coeff.residue(self.mat.at(i, j));
            }
        }
        m
    }

    /// Flatten an A-vector to base-field coordinates.
    fn flatten(&self, v: &[AElem<F>]) -> Vec<F::Elem> {
        let mut out = Vec::with_capacity(v.len() * self.coeff.fdim());
        for e in v {
            out.extend(e.0.iter().cloned());
        }
        out
    }

    fn unflatten(&self, v: &[F::Elem]) -> Vec<AElem<F>> {
        let adim = self.coeff.fdim();
        v.chunks(adim).map(|c| AElem(c.to_vec())).collect()
    }

    fn apply(&self, v: &[AElem<F>]) -> Vec<AElem<F>> {
        let d = self.mat.rows;
        (0..d)
            .map(|i| {
                let mut acc = self.coeff.zero();
                for j in 0..d {
                    acc = self
                        .coeff
                        .add(&acc, &self.coeff.mul(self.mat.at(i, j), &v[j]));
                }
                acc
            })
            .collect()
    }

    fn apply_power(&self, v: &[AElem<F>], k: usize) -> Vec<AElem<F>> {
        let mut out = v.to_vec();
        for _ in 0..k {
            out = self.apply(&out);
        }
        out
    }

    /// The image n^k(A^d) as a base-field subspace of A^d.
    fn image_subspace(&self, k: usize) -> Subspace<F::Elem> {
        let d = self.mat.rows;
        let adim = self.coeff.fdim();
        let f = &self.coeff.field;
        let mut vecs = Vec::new();
        for j in 0..d {
            for a in 0..adim {
                let mut v = vec![self.coeff.zero(); d];
                v[j] = self.coeff.basis_elem(a);
                vecs.push(self.flatten(&self.apply_power(&v, k)));
            }
        }
        row_space(f, &vecs, d * adim)
    }

    /// ker n as a base-field subspace.
    fn kernel_subspace(&self) -> Subspace<F::Elem> {
        let d = self.mat.rows;
        let adim = self.coeff.fdim();
        let f = &self.coeff.field;
        // flat matrix of x -> n x
        let mut big = zeros(f, d * adim, d * adim);
        for i in 0..d {
            for j in 0..d {
                for c in 0..adim {
                    let prod = self.coeff.mul(self.mat.at(i, j), &self.coeff.basis_elem(c));
                    for r in 0..adim {
                        *big.at_mut(i * adim + r, j * adim + c) = prod.0[r].clone();
                    }
                }
            }
        }
        let ker = crate::linalg::kernel_basis(f, &big);
        row_space(f, &ker, d * adim)
    }

    fn solve_power(&self, w: &[AElem<F>], k: usize) -> Option<Vec<AElem<F>>> {
        // flat solve of n^k x = w
        let d = self.mat.rows;
        let adim = self.coeff.fdim();
        let f = &self.coeff.field;
        let mut pk = identity_amat(&self.coeff, d);
        for _ in 0..k {
            pk = amat_mul(&self.coeff, &pk, &self.mat);
        }
        let mut big = zeros(f, d * adim, d * adim);
        for i in 0..d {
            for j in 0..d {
                for c in 0..adim {
                    let prod = self.coeff.mul(pk.at(i, j), &self.coeff.basis_elem(c));
                    for r in 0..adim {
                        *big.at_mut(i * adim + r, j * adim + c) = prod.0[r].clone();
                    }
                }
            }
        }
        crate::linalg::solve(f, &big, &self.flatten(w)).map(|x| self.unflatten(&x))
    }

    /// Decide and, when possible, realize the Jordan normal form.
    pub fn jordan_over_local(&self) -> Result<JordanOverLocal<F>> {
        let d = self.mat.rows;
        let adim = self.coeff.fdim();
        let f = &self.coeff.field;
        let resid = self.residual();
        // residual ranks
        let mut rbar = vec![d];
        let mut p = crate::linalg::identity(f, d);
        for _ in 1..=d {
            p = crate::linalg::mat_mul(f, &p, &resid);
            rbar.push(rank(f, &p));
        }
        // freeness and direct-summand test: dim_F n^i(A^d) = rank(nbar^i) * dim_F A
        for i in 1..=d {
            let img = self.image_subspace(i);
            if img.dim() != rbar[i] * adim {
                return Ok(JordanOverLocal::Absent { failing_power: i });
            }
        }
        // the partition of the residual matrix
        let partition = jordan_type(f, &resid)?;
        // descending construction of chains
        let mut chains: Vec<(Vec<AElem<F>>, usize)> = Vec::new();
        let ker = self.kernel_subspace();
        for i in (0..d).rev() {
            // K_i: chain tops inside n^i(F_{i+1})
            let tops: Vec<Vec<F::Elem>> = chains
                .iter()
                .map(|(v, size)| self.flatten(&self.apply_power(v, size - 1)))
                .collect();
            let kbar: Vec<Vec<F::Elem>> = tops.iter().map(|v| self.residue_vec(v)).collect();
            let kbar_space = row_space(f, &kbar, d);
            // W = ker n cap N_i
            let img = self.image_subspace(i);
            let w = subspace_intersect(f, &ker, &img);
            // residual image of W
            let mut wbar_basis = kbar_space.clone();
            let mut new_tops: Vec<Vec<F::Elem>> = Vec::new();
            for v in &w.basis {
                let rv = self.residue_vec(v);
                if !crate::linalg::subspace_contains(f, &wbar_basis, &rv) {
                    new_tops.push(v.clone());
                    let mut vecs = wbar_basis.basis.clone();
                    vecs.push(rv);
                    wbar_basis = row_space(f, &vecs, d);
                }
            }
            for w_flat in new_tops {
                let w_vec = self.unflatten(&w_flat);
                let x = self
                    .solve_power(&w_vec, i)
                    .ok_or_else(|| Error::Internal("chain top has no preimage".into()))?;
                chains.push((x, i + 1));
            }
        }
        // assemble the base change: per chain, columns n^{t-1}v ... nv, v
        chains.sort_by(|a, b| b.1.cmp(&a.1));
        let total: usize = chains.iter().map(|(_, s)| s).sum();
        if total != d {
            return Err(Error::Internal(format!(
                "chains cover {total} of {d} dimensions"
            )));
        }
        let mut g = Mat::filled(d, d, self.coeff.zero());
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
        let ginv = amat_inverse(&self.coeff, &g)
            .ok_or_else(|| Error::Internal("base change not invertible".into()))?;
        let conj = amat_mul(&self.coeff, &amat_mul(&self.coeff, &ginv, &self.mat), &g);
        let chain_partition =
            Partition::new(chains.iter().map(|(_, s)| *s).collect())?;
        let jt = jordan_matrix(f, &chain_partition);
        for i in 0..d {
            for j in 0..d {
                let expect = self.coeff.lift(jt.at(i, j));
                if *conj.at(i, j) != expect {
                    return Err(Error::Internal(
                        "conjugated matrix is not the Jordan matrix".into(),
                    ));
                }
            }
        }
        if chain_partition != partition {
            return Err(Error::Internal(
                "chain partition disagrees with the residual type".into(),
            ));
        }
        Ok(JordanOverLocal::Present {
            partition,
            base_change: g,
        })
    }

    fn residue_vec(&self, flat: &[F::Elem]) -> Vec<F::Elem> {
        let adim = self.coeff.fdim();
        flat.chunks(adim).map(|c| c[0].clone()).collect()
    }
}

pub fn identity_amat<F: Field>(coeff: &Artinian<F>, n: usize) -> Mat<AElem<F>> {
    let mut m = Mat::filled(n, n, coeff.zero());
    for i in 0..n {
        *m.at_mut(i, i) = coeff.one();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn dual_numbers() -> Arc<Artinian<Rationals>> {
        let f = Rationals;
        let vars: Vec<String> = vec!["e".into()];
        Arc::new(Artinian::quotient(f, &vars, &[], 1).unwrap())
    }

    #[test]
    fn j2_over_dual_numbers_is_present() {
        let a = dual_numbers();
        let mut m = Mat::filled(2, 2, a.zero());
        *m.at_mut(0, 1) = a.one();
        let n = LocalNilpotent::new(a.clone(), m).unwrap();
        match n.jordan_over_local().unwrap() {
            JordanOverLocal::Present { partition, .. } => {
                assert_eq!(partition, Partition(vec![2]));
            }
            JordanOverLocal::Absent { .. } => panic!("J_2 must have a normal form"),
        }
    }

    #[test]
    fn epsilon_matrix_has_no_normal_form() {
        // n = [[0, e], [0, 0]]: the image e*A*e_1 is not a direct summand
        let a = dual_numbers();
        let eps = a.parse_elem("e").unwrap();
        let mut m = Mat::filled(2, 2, a.zero());
        *m.at_mut(0, 1) = eps;
        let n = LocalNilpotent::new(a.clone(), m).unwrap();
        match n.jordan_over_local().unwrap() {
            JordanOverLocal::Absent { failing_power } => assert_eq!(failing_power, 1),
            JordanOverLocal::Present { .. } => panic!("must be absent"),
        }
    }

    #[test]
    fn verdict_is_conjugation_invariant() {
        let a = dual_numbers();
        let eps = a.parse_elem("e").unwrap();
        // an invertible g over A
        let mut g = Mat::filled(2, 2, a.zero());
        *g.at_mut(0, 0) = a.one();
        *g.at_mut(0, 1) = a.add(&a.one(), &eps);
        *g.at_mut(1, 0) = eps.clone();
        *g.at_mut(1, 1) = a.add(&a.one(), &a.one());
        let ginv = amat_inverse(&a, &g).unwrap();
        for (mat, expect_present) in [
            (
                {
                    let mut m = Mat::filled(2, 2, a.zero());
                    *m.at_mut(0, 1) = a.one();
                    m
                },
                true,
            ),
            (
                {
                    let mut m = Mat::filled(2, 2, a.zero());
                    *m.at_mut(0, 1) = eps.clone();
                    m
                },
                false,
            ),
        ] {
            let conj = amat_mul(&a, &amat_mul(&a, &ginv, &mat), &g);
            let n = LocalNilpotent::new(a.clone(), conj).unwrap();
            let present = matches!(n.jordan_over_local().unwrap(), JordanOverLocal::Present { .. });
            assert_eq!(present, expect_present);
        }
    }
}
