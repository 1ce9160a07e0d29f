//! Finite-dimensional associative algebras over the base field, flattened:
//! the common substrate for pseudocharacters and generalized matrix
//! algebras. Products of basis elements are stored sparsely, which keeps
//! group algebras and matrix-unit bases cheap to multiply.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{row_space, Subspace};

/// A sparse vector: (index, coefficient) pairs sorted by index.
pub type SparseVec<E> = Vec<(usize, E)>;

#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    /// Full matrix algebra M_n over the coefficient ring.
    MatrixAlgebra { n: usize },
    /// Group algebra with the listed permutations as basis.
    GroupAlgebra { elements: Vec<Vec<usize>> },
    /// Block-matrix algebra of a GMA.
    Gma,
    Other,
}

#[derive(Clone, Debug)]
pub struct FlatAlgebra<F: Field> {
    pub field: F,
    pub dim: usize,
    pub labels: Vec<String>,
    /// mul[i*dim + j] = sparse coordinates of b_i b_j.
    pub mul_table: Vec<SparseVec<F::Elem>>,
    pub one: Vec<F::Elem>,
    pub provenance: Provenance,
}

impl<F: Field> FlatAlgebra<F> {
    pub fn table(&self, i: usize, j: usize) -> &SparseVec<F::Elem> {
        &self.mul_table[i * self.dim + j]
    }

    pub fn zero_vec(&self) -> Vec<F::Elem> {
        vec![self.field.zero(); self.dim]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<F::Elem> {
        let mut v = self.zero_vec();
        v[i] = self.field.one();
        v
    }

    pub fn add(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        crate::linalg::vec_add(&self.field, a, b)
    }

    pub fn sub(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        crate::linalg::vec_sub(&self.field, a, b)
    }

    pub fn scale(&self, c: &F::Elem, a: &[F::Elem]) -> Vec<F::Elem> {
        crate::linalg::vec_scale(&self.field, c, a)
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = self.zero_vec();
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let c = f.mul(x, y);
                for (k, t) in self.table(i, j) {
                    out[*k] = f.add(&out[*k], &f.mul(&c, t));
                }
            }
        }
        out
    }

    pub fn is_zero_vec(&self, a: &[F::Elem]) -> bool {
        crate::linalg::vec_is_zero(&self.field, a)
    }

    pub fn pow(&self, a: &[F::Elem], n: usize) -> Vec<F::Elem> {
        let mut acc = self.one.clone();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Associativity and two-sided unit, checked on all basis triples.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.dim {
            let b = self.basis_vec(i);
            if self.mul(&self.one, &b) != b || self.mul(&b, &self.one) != b {
                return Err(Error::Internal(format!("unit fails at basis {i}")));
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.mul(&self.basis_vec(i), &self.basis_vec(j));
                for k in 0..self.dim {
                    let left = self.mul(&ij, &self.basis_vec(k));
                    let jk = self.mul(&self.basis_vec(j), &self.basis_vec(k));
                    let right = self.mul(&self.basis_vec(i), &jk);
                    if left != right {
                        return Err(Error::Internal(format!(
                            "associativity fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of left multiplication by a.
    pub fn left_mul_matrix(&self, a: &[F::Elem]) -> crate::linalg::Mat<F::Elem> {
        let f = &self.field;
        let mut m = crate::linalg::zeros(f, self.dim, self.dim);
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for j in 0..self.dim {
                for (k, t) in self.table(i, j) {
                    *m.at_mut(*k, j) = f.add(m.at(*k, j), &f.mul(x, t));
                }
            }
        }
        m
    }

    /// Trace of left multiplication by a (the regular trace form's linear
    /// part).
    pub fn regular_trace(&self, a: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for j in 0..self.dim {
                for (k, t) in self.table(i, j) {
                    if *k == j {
                        acc = f.add(&acc, &f.mul(x, t));
                    }
                }
            }
        }
        acc
    }

    /// The full matrix algebra M_n(F).
    pub fn matrix_algebra(field: F, n: usize) -> Self {
        let dim = n * n;
        let mut mul_table = vec![Vec::new(); dim * dim];
        // basis: E_{rc} at index r*n + c; E_{rc} E_{r'c'} = delta_{c r'} E_{r c'}
        for r in 0..n {
            for c in 0..n {
                for r2 in 0..n {
                    for c2 in 0..n {
                        let i = r * n + c;
                        let j = r2 * n + c2;
                        if c == r2 {
                            mul_table[i * dim + j] = vec![(r * n + c2, field.one())];
                        }
                    }
                }
            }
        }
        let mut one = vec![field.zero(); dim];
        for r in 0..n {
            one[r * n + r] = field.one();
        }
        let labels = (0..n)
            .flat_map(|r| (0..n).map(move |c| format!("E[{},{}]", r + 1, c + 1)))
            .collect();
        FlatAlgebra {
            field,
            dim,
            labels,
            mul_table,
            one,
            provenance: Provenance::MatrixAlgebra { n },
        }
    }

    /// Group algebra of the permutation group generated by `gens`
    /// (0-based images). Basis = group elements sorted lexicographically,
    /// so the layout is canonical.
    pub fn group_algebra(field: F, gens: &[Vec<usize>], degree: usize) -> Result<Self> {
        for g in gens {
            if g.len() != degree || !is_permutation(g) {
                return Err(Error::Shape(format!("not a permutation of 0..{degree}: {g:?}")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
        elems.insert(id);
        loop {
            let mut added = false;
            let snapshot: Vec<_> = elems.iter().cloned().collect();
            for e in &snapshot {
                for g in gens {
                    let prod = compose(e, g);
                    if elems.insert(prod) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        let elements: Vec<Vec<usize>> = elems.into_iter().collect();
        let index: BTreeMap<&Vec<usize>, usize> =
            elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let dim = elements.len();
        let mut mul_table = vec![Vec::new(); dim * dim];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let p = compose(a, b);
                mul_table[i * dim + j] = vec![(index[&p], field.one())];
            }
        }
        let mut one = vec![field.zero(); dim];
        let idp: Vec<usize> = (0..degree).collect();
        one[index[&idp]] = field.one();
        let labels = elements.iter().map(|e| perm_label(e)).collect();
        Ok(FlatAlgebra {
            field,
            dim,
            labels,
            mul_table,
            one,
            provenance: Provenance::GroupAlgebra { elements },
        })
    }

    /// Quotient by a two-sided ideal given as a subspace. Returns the
    /// quotient algebra together with the projection expressed as "old
    /// basis vector -> coordinates in new basis".
    pub fn quotient_by(&self, ideal: &Subspace<F::Elem>) -> Result<(FlatAlgebra<F>, Vec<Vec<F::Elem>>)> {
        let f = &self.field;
        // complement basis: the non-pivot coordinates survive
        let pivset: std::collections::BTreeSet<usize> = ideal.pivots.iter().copied().collect();
        let survivors: Vec<usize> = (0..self.dim).filter(|i| !pivset.contains(i)).collect();
        let qdim = survivors.len();
        // projection of an ambient vector: reduce mod the ideal, read the
        // surviving coordinates
        let project = |v: &[F::Elem]| -> Vec<F::Elem> {
            let mut w = v.to_vec();
            crate::linalg::reduce_against(f, &mut w, &ideal.basis, &ideal.pivots);
            survivors.iter().map(|&i| w[i].clone()).collect()
        };
        // lift of a quotient basis vector: the surviving ambient basis vector
        let lift = |q: usize| -> Vec<F::Elem> { self.basis_vec(survivors[q]) };
        let mut mul_table = vec![Vec::new(); qdim * qdim];
        for qi in 0..qdim {
            for qj in 0..qdim {
                let prod = self.mul(&lift(qi), &lift(qj));
                let pv = project(&prod);
                let sparse: SparseVec<F::Elem> = pv
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !f.is_zero(c))
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
                mul_table[qi * qdim + qj] = sparse;
            }
        }
        let one = project(&self.one);
        let labels = survivors
            .iter()
            .map(|&i| self.labels[i].clone())
            .collect();
        let quo = FlatAlgebra {
            field: f.clone(),
            dim: qdim,
            labels,
            mul_table,
            one,
            provenance: Provenance::Other,
        };
        let proj_images: Vec<Vec<F::Elem>> =
            (0..self.dim).map(|i| project(&self.basis_vec(i))).collect();
        Ok((quo, proj_images))
    }
}

fn is_permutation(g: &[usize]) -> bool {
    let mut seen = vec![false; g.len()];
    for &x in g {
        if x >= g.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// (a then b): composite permutation mapping i to b[a[i]].
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&i| b[i]).collect()
}

fn perm_label(e: &[usize]) -> String {
    // cycle notation, 1-based
    let n = e.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || e[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(i + 1).to_string());
            first = false;
            i = e[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "id".into()
    } else {
        out
    }
}

/// Jacobson radical of a finite-dimensional associative algebra, computed
/// as the radical of the trace form (x, y) -> regular_trace(xy). Valid in
/// characteristic 0 or p > dim.
pub fn radical<F: Field>(alg: &FlatAlgebra<F>) -> Result<Subspace<F::Elem>> {
    let f = &alg.field;
    let p = f.characteristic();
    if p != 0 && (p as usize) <= alg.dim {
        return Err(Error::RadicalInapplicable {
            p,
            dim: alg.dim,
        });
    }
    // rows of the Gram matrix G[i][j] = tr(L_{b_i b_j})
    let mut rows = Vec::with_capacity(alg.dim);
    for i in 0..alg.dim {
        let mut row = Vec::with_capacity(alg.dim);
        for j in 0..alg.dim {
            let prod = alg.mul(&alg.basis_vec(i), &alg.basis_vec(j));
            row.push(alg.regular_trace(&prod));
        }
        rows.push(row);
    }
    let m = crate::linalg::Mat::from_rows(rows);
    let ker = crate::linalg::kernel_basis(f, &m);
    Ok(row_space(f, &ker, alg.dim))
}

/// Lift a family of orthogonal idempotents along a nil ideal, by iterated
/// refinement e -> 3e^2 - 2e^3 inside shrinking corner algebras.
pub fn lift_idempotents<F: Field>(
    alg: &FlatAlgebra<F>,
    ideal: &Subspace<F::Elem>,
    eps: &[Vec<F::Elem>],
) -> Result<Vec<Vec<F::Elem>>> {
    let f = &alg.field;
    // nilpotency check: I^dim = 0
    let mut power: Vec<Vec<F::Elem>> = ideal.basis.clone();
    for _ in 0..alg.dim {
        if power.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for v in &power {
            for b in &ideal.basis {
                next.push(alg.mul(v, b));
            }
        }
        power = row_space(f, &next, alg.dim).basis;
    }
    if !power.is_empty() {
        return Err(Error::Precondition("ideal is not nilpotent".into()));
    }

    let in_ideal = |v: &[F::Elem]| crate::linalg::subspace_contains(f, ideal, v);
    let mut out: Vec<Vec<F::Elem>> = Vec::new();
    // corner cutter: the identity of the current corner algebra
    let mut corner = alg.one.clone();
    for e0 in eps {
        // project the approximate idempotent into the current corner
        let mut e = alg.mul(&alg.mul(&corner, e0), &corner);
        // Newton refinement: e <- 3e^2 - 2e^3 squares the defect
        for _ in 0..alg.dim + 2 {
            let e2 = alg.mul(&e, &e);
            if e2 == e {
                break;
            }
            let e3 = alg.mul(&e2, &e);
            let three_e2 = alg.scale(&f.from_i64(3), &e2);
            let two_e3 = alg.scale(&f.from_i64(2), &e3);
            e = alg.sub(&three_e2, &two_e3);
        }
        let e2 = alg.mul(&e, &e);
        if e2 != e {
            return Err(Error::Internal("idempotent refinement did not converge".into()));
        }
        // e must still reduce to e0 modulo the ideal
        let diff = alg.sub(&e, e0);
        if !in_ideal(&diff) {
            return Err(Error::Internal("lift drifted off its residue class".into()));
        }
        // shrink the corner to (corner - e) R (corner - e)
        corner = alg.sub(&corner, &e);
        out.push(e);
    }
    // exact pairwise orthogonality comes from the corner construction;
    // verify anyway
    for (i, a) in out.iter().enumerate() {
        for (j, b) in out.iter().enumerate() {
            if i != j && !alg.is_zero_vec(&alg.mul(a, b)) {
                return Err(Error::Internal(format!(
                    "lifted idempotents {i},{j} not orthogonal"
                )));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, Rationals};

    #[test]
    fn matrix_algebra_is_associative_with_unit() {
        let alg = FlatAlgebra::matrix_algebra(Rationals, 3);
        alg.validate().unwrap();
        assert_eq!(alg.dim, 9);
    }

    #[test]
    fn s3_group_algebra() {
        let alg =
            FlatAlgebra::group_algebra(Rationals, &[vec![1, 2, 0], vec![1, 0, 2]], 3).unwrap();
        assert_eq!(alg.dim, 6);
        alg.validate().unwrap();
    }

    #[test]
    fn radical_of_simple_algebra_is_zero() {
        let alg = FlatAlgebra::matrix_algebra(Rationals, 2);
        assert_eq!(radical(&alg).unwrap().dim(), 0);
    }

    #[test]
    fn radical_of_upper_triangular_is_the_strict_part() {
        // basis: E11, E12, E22 inside M_2
        let f = Rationals;
        let m2 = FlatAlgebra::matrix_algebra(f.clone(), 2);
        // build the 3-dim subalgebra directly
        let idx = [0usize, 1, 3]; // E11, E12, E22 in the 2x2 layout
        let mut mul_table = vec![Vec::new(); 9];
        for (i, &bi) in idx.iter().enumerate() {
            for (j, &bj) in idx.iter().enumerate() {
                let prod = m2.mul(&m2.basis_vec(bi), &m2.basis_vec(bj));
                let sparse: SparseVec<_> = idx
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| !f.is_zero(&prod[k]))
                    .map(|(t, &k)| (t, prod[k].clone()))
                    .collect();
                mul_table[i * 3 + j] = sparse;
            }
        }
        let alg = FlatAlgebra {
            field: f.clone(),
            dim: 3,
            labels: vec!["E11".into(), "E12".into(), "E22".into()],
            mul_table,
            one: vec![f.one(), f.zero(), f.one()],
            provenance: Provenance::Other,
        };
        alg.validate().unwrap();
        let rad = radical(&alg).unwrap();
        assert_eq!(rad.dim(), 1);
        assert!(crate::linalg::subspace_contains(
            &f,
            &rad,
            &[f.zero(), f.one(), f.zero()]
        ));
        // radical is idempotent: quotient has zero radical, ideal is nilpotent
        let (quo, _) = alg.quotient_by(&rad).unwrap();
        assert_eq!(radical(&quo).unwrap().dim(), 0);
        for v in &rad.basis {
            assert!(alg.is_zero_vec(&alg.pow(v, 3)));
        }
    }

    #[test]
    fn radical_needs_large_characteristic() {
        let f = crate::field::PrimeField::new(3).unwrap();
        let alg = FlatAlgebra::matrix_algebra(f, 2);
        assert!(matches!(
            radical(&alg),
            Err(Error::RadicalInapplicable { .. })
        ));
    }

    #[test]
    fn lift_idempotents_zero_ideal_is_identity() {
        let f = Rationals;
        let alg = FlatAlgebra::matrix_algebra(f.clone(), 2);
        let zero = row_space(&f, &[], alg.dim);
        let e = vec![f.one(), f.zero(), f.zero(), f.zero()]; // E11
        let out = lift_idempotents(&alg, &zero, &[e.clone()]).unwrap();
        assert_eq!(out[0], e);
    }
}
