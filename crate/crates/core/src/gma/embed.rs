//! Adapted embeddings of a GMA over a field with rank-one structural
//! modules: scalars f_{i,j} are built from the structure constants
//! lambda_{i,j,k} through mu_{i,j} = lambda_{i,i0,j}, one base point i0
//! per equivalence class of the relation "A_{i,j} nonzero with
//! nondegenerate pairing".

use crate::coeff::ArtinianCoeff;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;

use super::{unit_vec, GmaAlgebra};

#[derive(Clone, Debug)]
pub struct AdaptedEmbedding<F: Field> {
    /// Scalar f_{i,j} applied to the chosen basis vector of A_{i,j}
    /// (zero across classes).
    pub scalars: Vec<Vec<F::Elem>>,
    /// Equivalence classes of blocks.
    pub classes: Vec<Vec<usize>>,
    /// Image of each flat basis vector in M_d(F).
    pub matrices: Vec<Mat<F::Elem>>,
}

impl<F: Field> GmaAlgebra<F> {
    /// Requires base-field coefficients and one-dimensional (or zero)
    /// off-diagonal slots.
    pub fn adapted_embedding(&self) -> Result<AdaptedEmbedding<F>> {
        let data = &self.data;
        let coeff = &data.coeff;
        if coeff.fdim() != 1 {
            return Err(Error::Precondition(
                "adapted embedding needs field coefficients".into(),
            ));
        }
        let f = &coeff.field;
        let r = data.r();
        for i in 0..r {
            for j in 0..r {
                if i != j && data.slots[i][j].fdim > 1 {
                    return Err(Error::Precondition(format!(
                        "slot ({},{}) has dimension > 1",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        // lambda_{i,j,k} for nonzero slots: phi(e_ij, e_jk) = lambda e_ik
        let lam = |i: usize, j: usize, k: usize| -> Option<F::Elem> {
            if data.slot_dim(i, j) == 0 || data.slot_dim(j, k) == 0 {
                return None;
            }
            let x = unit_vec(f, data.slot_dim(i, j), 0);
            let y = unit_vec(f, data.slot_dim(j, k), 0);
            let v = data.eval_phi(i, j, k, &x, &y);
            v.first().cloned()
        };
        // i ~ j iff A_{i,j} nonzero; the pairing must then be nondegenerate
        let mut related = vec![vec![false; r]; r];
        for i in 0..r {
            related[i][i] = true;
            for j in 0..r {
                if i == j {
                    continue;
                }
                if data.slots[i][j].fdim == 1 {
                    let pair = lam(i, j, i);
                    match pair {
                        Some(c) if !f.is_zero(&c) => related[i][j] = true,
                        _ => return Err(Error::DegeneratePairing(i + 1, j + 1)),
                    }
                }
            }
        }
        // symmetric & transitive by the GMA laws; group into classes
        let mut class_of = vec![usize::MAX; r];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..r {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = vec![i];
            class_of[i] = c;
            for j in 0..r {
                if j != i && related[i][j] {
                    if !related[j][i] {
                        return Err(Error::DegeneratePairing(j + 1, i + 1));
                    }
                    class_of[j] = c;
                    members.push(j);
                }
            }
            classes.push(members);
        }
        // mu_{i,j} = lambda_{i0,i,j} with i0 the class base point: this
        // pins f_{i0,j} = 1 and forces the rest through the cocycle
        // identity, which is (ASSO) on (i0, i, j, k)
        let mut scalars = vec![vec![f.zero(); r]; r];
        for class in &classes {
            let i0 = class[0];
            for &i in class {
                for &j in class {
                    if i == j {
                        continue;
                    }
                    let mu = if i == i0 {
                        // lambda_{i0,i0,j} is the unit action
                        f.one()
                    } else {
                        lam(i0, i, j).ok_or(Error::DegeneratePairing(i + 1, j + 1))?
                    };
                    if f.is_zero(&mu) {
                        return Err(Error::DegeneratePairing(i + 1, j + 1));
                    }
                    scalars[i][j] = mu;
                }
            }
        }
        // verify the cocycle property f_{i,j} f_{j,k} = lambda_{i,j,k} f_{i,k}
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if class_of[i] != class_of[j] || class_of[j] != class_of[k] {
                        continue;
                    }
                    if i == j || j == k {
                        continue;
                    }
                    let lhs = f.mul(&scalars[i][j], &scalars[j][k]);
                    let lam_ijk = lam(i, j, k).ok_or(Error::DegeneratePairing(i + 1, k + 1))?;
                    let fik = if i == k { f.one() } else { scalars[i][k].clone() };
                    let rhs = f.mul(&lam_ijk, &fik);
                    if lhs != rhs {
                        return Err(Error::Internal(format!(
                            "cocycle identity fails at ({},{},{})",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        // the representation: block (i,j) entry (a,b) with slot coordinate 0
        // maps to f_{i,j} E[row_i + a, col_j + b]
        let d = data.total_dim();
        let starts: Vec<usize> = {
            let mut s = vec![0usize];
            for &b in &data.block_sizes {
                let last = *s.last().unwrap();
                s.push(last + b);
            }
            s
        };
        let alg = &self.psc.alg;
        let mut matrices = Vec::with_capacity(alg.dim);
        for p in 0..alg.dim {
            let (i, j, a, b, _m) = self.layout_of(p);
            let mut mat = crate::linalg::zeros(f, d, d);
            let scalar = if i == j {
                f.one()
            } else {
                scalars[i][j].clone()
            };
            *mat.at_mut(starts[i] + a, starts[j] + b) = scalar;
            matrices.push(mat);
        }
        // verify: algebra homomorphism and trace preservation
        for p in 0..alg.dim {
            for q in 0..alg.dim {
                let prod = alg.mul(&alg.basis_vec(p), &alg.basis_vec(q));
                let mut expect = crate::linalg::zeros(f, d, d);
                for (idx, c) in prod.iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    for rr in 0..d {
                        for cc in 0..d {
                            let t = f.mul(c, matrices[idx].at(rr, cc));
                            *expect.at_mut(rr, cc) = f.add(expect.at(rr, cc), &t);
                        }
                    }
                }
                let got = crate::linalg::mat_mul(f, &matrices[p], &matrices[q]);
                if got != expect {
                    return Err(Error::Internal(format!(
                        "embedding not multiplicative at ({p},{q})"
                    )));
                }
            }
            let tr: F::Elem = (0..d).fold(f.zero(), |acc, i| f.add(&acc, matrices[p].at(i, i)));
            let tv = self.psc.coeff.coords(&self.psc.t[p])[0].clone();
            if tr != tv {
                return Err(Error::Internal(format!(
                    "embedding does not preserve the trace at basis {p}"
                )));
            }
        }
        Ok(AdaptedEmbedding {
            scalars,
            classes,
            matrices,
        })
    }
}
