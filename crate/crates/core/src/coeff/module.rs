//! Finite modules over an artinian local algebra, presented as a base-field
//! space with one action matrix per algebra basis element.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{
    kernel_basis, mat_vec, row_space, zeros, Mat, Subspace,
};

use super::artinian::{AElem, Artinian};
use super::{ArtinianCoeff, Coeff};

#[derive(Clone, Debug)]
pub struct FiniteModule<F: Field> {
    pub ambient: Arc<Artinian<F>>,
    /// Dimension over the base field.
    pub fdim: usize,
    /// action[a] is the matrix of multiplication by the algebra basis
    /// element b_a.
    pub action: Vec<Mat<F::Elem>>,
    pub generators: Vec<Vec<F::Elem>>,
}

impl<F: Field> FiniteModule<F> {
    pub fn new(
        ambient: Arc<Artinian<F>>,
        fdim: usize,
        action: Vec<Mat<F::Elem>>,
        generators: Vec<Vec<F::Elem>>,
    ) -> Result<Self> {
        let m = FiniteModule {
            ambient,
            fdim,
            action,
            generators,
        };
        m.validate()?;
        Ok(m)
    }

    /// An ideal of A as an abstract module: the F-span of b*g, with the
    /// multiplication action. Generators are the given ideal generators.
    pub fn from_ideal_gens(ambient: Arc<Artinian<F>>, gens: &[AElem<F>]) -> Result<Self> {
        let f = ambient.field.clone();
        let n = ambient.fdim();
        let mut vecs = Vec::new();
        for g in gens {
            for i in 0..n {
                vecs.push(ambient.mul(&ambient.basis_elem(i), g).0);
            }
        }
        let space = row_space(&f, &vecs, n);
        let fdim = space.dim();
        // action of b_a in the coordinates of the echelon basis
        let mut action = Vec::with_capacity(n);
        for a in 0..n {
            let mut m = zeros(&f, fdim, fdim);
            for (j, bv) in space.basis.iter().enumerate() {
                let prod = ambient
                    .mul(&ambient.basis_elem(a), &AElem(bv.clone()))
                    .0;
                let coords = in_basis_coords(&f, &space, &prod)
                    .ok_or_else(|| Error::Internal("ideal not closed under action".into()))?;
                for i in 0..fdim {
                    *m.at_mut(i, j) = coords[i].clone();
                }
            }
            action.push(m);
        }
        let generators = gens
            .iter()
            .map(|g| {
                in_basis_coords(&f, &space, &g.0)
                    .ok_or_else(|| Error::Internal("generator outside its own span".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteModule::new(ambient, fdim, action, generators)
    }

    /// The free module A^1.
    pub fn free_rank_one(ambient: Arc<Artinian<F>>) -> Self {
        let f = ambient.field.clone();
        let n = ambient.fdim();
        let mut action = Vec::with_capacity(n);
        for a in 0..n {
            let mut m = zeros(&f, n, n);
            for j in 0..n {
                let prod = ambient.mul(&ambient.basis_elem(a), &ambient.basis_elem(j));
                for i in 0..n {
                    *m.at_mut(i, j) = prod.0[i].clone();
                }
            }
            action.push(m);
        }
        let one = ambient.one().0;
        FiniteModule {
            ambient,
            fdim: n,
            action,
            generators: vec![one],
        }
    }

    /// The residue field as a module (trivial m-action).
    pub fn residue_module(ambient: Arc<Artinian<F>>) -> Self {
        let f = ambient.field.clone();
        let n = ambient.fdim();
        let mut action = Vec::with_capacity(n);
        for a in 0..n {
            let res = ambient.residue(&ambient.basis_elem(a));
            let mut m = zeros(&f, 1, 1);
            *m.at_mut(0, 0) = res;
            action.push(m);
        }
        FiniteModule {
            ambient,
            fdim: 1,
            action,
            generators: vec![vec![f.one()]],
        }
    }

    /// Action is a unital algebra representation on basis triples, and the
    /// generators do generate over A.
    pub fn validate(&self) -> Result<()> {
        let f = &self.ambient.field;
        let n = self.ambient.fdim();
        if self.action.len() != n {
            return Err(Error::Shape("one action matrix per algebra basis element".into()));
        }
        for m in &self.action {
            if m.rows != self.fdim || m.cols != self.fdim {
                return Err(Error::Shape("action matrix dimensions".into()));
            }
        }
        let id = crate::linalg::identity(f, self.fdim);
        if self.action[0] != id {
            return Err(Error::Internal("unit does not act as identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let prod = &self.ambient.mul_table[a][b];
                // action(b_a b_b) = action(b_a) action(b_b)
                let mut lhs = zeros(f, self.fdim, self.fdim);
                for (c, coef) in prod.iter().enumerate() {
                    if f.is_zero(coef) {
                        continue;
                    }
                    for i in 0..self.fdim {
                        for j in 0..self.fdim {
                            let t = f.mul(coef, self.action[c].at(i, j));
                            *lhs.at_mut(i, j) = f.add(lhs.at(i, j), &t);
                        }
                    }
                }
                let rhs = crate::linalg::mat_mul(f, &self.action[a], &self.action[b]);
                if lhs != rhs {
                    return Err(Error::Internal(format!(
                        "action not multiplicative on basis pair ({a},{b})"
                    )));
                }
            }
        }
        if self.span_of_generators().dim() != self.fdim {
            return Err(Error::Internal("generators do not generate".into()));
        }
        Ok(())
    }

    fn span_of_generators(&self) -> Subspace<F::Elem> {
        let f = &self.ambient.field;
        let mut vecs = Vec::new();
        for g in &self.generators {
            for a in 0..self.ambient.fdim() {
                vecs.push(mat_vec(f, &self.action[a], g));
            }
        }
        row_space(f, &vecs, self.fdim)
    }

    pub fn act(&self, a: &AElem<F>, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.ambient.field;
        let mut out = vec![f.zero(); self.fdim];
        for (idx, c) in a.0.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let av = mat_vec(f, &self.action[idx], v);
            for (o, x) in out.iter_mut().zip(&av) {
                *o = f.add(o, &f.mul(c, x));
            }
        }
        out
    }

    /// The subspace m*M.
    pub fn max_ideal_times(&self) -> Subspace<F::Elem> {
        let f = &self.ambient.field;
        let mut vecs = Vec::new();
        for &a in &self.ambient.max_ideal {
            for j in 0..self.fdim {
                let mut e = vec![f.zero(); self.fdim];
                e[j] = f.one();
                vecs.push(mat_vec(f, &self.action[a], &e));
            }
        }
        row_space(f, &vecs, self.fdim)
    }

    /// dim_F M/mM: by Nakayama, the size of every minimal generating set.
    pub fn min_generators(&self) -> usize {
        self.fdim - self.max_ideal_times().dim()
    }

    /// Dimension over F of the space of A-linear maps M -> N.
    pub fn hom_dimension(&self, other: &FiniteModule<F>) -> Result<usize> {
        if self.ambient != other.ambient {
            return Err(Error::MismatchedAmbient);
        }
        let f = &self.ambient.field;
        let (dm, dn) = (self.fdim, other.fdim);
        // unknowns: dn x dm matrix Phi with Phi A_a = B_a Phi for all a
        let unknowns = dn * dm;
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for a in 0..self.ambient.fdim() {
            let am = &self.action[a];
            let bm = &other.action[a];
            for i in 0..dn {
                for j in 0..dm {
                    // entry (i,j) of Phi*A_a - B_a*Phi
                    let mut row = vec![f.zero(); unknowns];
                    for k in 0..dm {
                        // Phi[i][k] * A_a[k][j]
                        let idx = i * dm + k;
                        row[idx] = f.add(&row[idx], am.at(k, j));
                    }
                    for k in 0..dn {
                        // - B_a[i][k] * Phi[k][j]
                        let idx = k * dm + j;
                        row[idx] = f.sub(&row[idx], bm.at(i, k));
                    }
                    rows.push(row);
                }
            }
        }
        let m = Mat::from_rows(rows);
        Ok(kernel_basis(f, &m).len())
    }
}

/// Coordinates of v in an echelon basis, if it lies in the span.
pub fn in_basis_coords<F: Field>(
    f: &F,
    space: &Subspace<F::Elem>,
    v: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let mut w = v.to_vec();
    let mut coords = vec![f.zero(); space.basis.len()];
    for (i, (b, &p)) in space.basis.iter().zip(&space.pivots).enumerate() {
        let c = w[p].clone();
        if !f.is_zero(&c) {
            for (wk, bk) in w.iter_mut().zip(b) {
                *wk = f.sub(wk, &f.mul(&c, bk));
            }
            coords[i] = c;
        }
    }
    if crate::linalg::vec_is_zero(f, &w) {
        Some(coords)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_mpoly;
    use crate::field::Rationals;

    fn quadric() -> Arc<Artinian<Rationals>> {
        let f = Rationals;
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let rel = parse_mpoly(&f, &vars, "x*y - z^2").unwrap();
        Arc::new(Artinian::quotient(f, &vars, &[rel], 2).unwrap())
    }

    #[test]
    fn free_module_needs_one_generator() {
        let a = quadric();
        let m = FiniteModule::free_rank_one(a);
        assert_eq!(m.min_generators(), 1);
    }

    #[test]
    fn max_ideal_of_quadric_needs_three_generators() {
        let a = quadric();
        let gens: Vec<_> = ["x", "y", "z"]
            .iter()
            .map(|s| a.parse_elem(s).unwrap())
            .collect();
        let m = FiniteModule::from_ideal_gens(a, &gens).unwrap();
        assert_eq!(m.fdim, 8);
        assert_eq!(m.min_generators(), 3);
    }

    #[test]
    fn submodule_generated_by_two_elements() {
        let a = quadric();
        let gens: Vec<_> = ["y", "z"]
            .iter()
            .map(|s| a.parse_elem(s).unwrap())
            .collect();
        let m = FiniteModule::from_ideal_gens(a, &gens).unwrap();
        assert_eq!(m.min_generators(), 2);
    }

    #[test]
    fn greedy_minimal_generating_sets_agree_with_nakayama() {
        // oracle: strip generators one at a time while the rest still
        // generate; every greedy run must end at min_generators()
        let a = quadric();
        let gens: Vec<_> = ["x", "y", "z", "x^2", "y*z"]
            .iter()
            .map(|s| a.parse_elem(s).unwrap())
            .collect();
        let m = FiniteModule::from_ideal_gens(a.clone(), &gens).unwrap();
        let expected = m.min_generators();
        let f = &a.field;
        let full_dim = m.fdim;
        let gen_coords = m.generators.clone();
        for start in 0..gen_coords.len() {
            // rotate the generator list to vary greedy order
            let mut pool: Vec<Vec<_>> = gen_coords
                .iter()
                .cycle()
                .skip(start)
                .take(gen_coords.len())
                .cloned()
                .collect();
            let span_dim = |gens: &[Vec<num_rational::BigRational>]| {
                let mut vecs = Vec::new();
                for g in gens {
                    for idx in 0..m.action.len() {
                        vecs.push(mat_vec(f, &m.action[idx], g));
                    }
                }
                row_space(f, &vecs, full_dim).dim()
            };
            let mut i = 0;
            while i < pool.len() {
                let mut reduced = pool.clone();
                reduced.remove(i);
                if span_dim(&reduced) == full_dim {
                    pool = reduced;
                } else {
                    i += 1;
                }
            }
            assert_eq!(pool.len(), expected);
        }
    }

    #[test]
    fn hom_dimensions() {
        let f = Rationals;
        let vars: Vec<String> = vec!["e".into()];
        let a = Arc::new(Artinian::quotient(f, &vars, &[], 1).unwrap());
        let free = FiniteModule::free_rank_one(a.clone());
        let k = FiniteModule::residue_module(a.clone());
        // Hom(A, A) has dimension dim A
        assert_eq!(free.hom_dimension(&free).unwrap(), 2);
        // Hom(k, k) = k
        assert_eq!(k.hom_dimension(&k).unwrap(), 1);
        // Hom(A/(e), A): maps land in the socle (e)
        assert_eq!(k.hom_dimension(&free).unwrap(), 1);
    }
}
