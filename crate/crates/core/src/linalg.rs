//! Dense exact linear algebra over a [`Field`] object.
//!
//! Row-major matrices of field elements. Everything is fraction-exact:
//! pivots are arbitrary nonzero entries, no magnitude heuristics.

use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }
    pub fn filled(rows: usize, cols: usize, e: E) -> Self {
        Mat {
            rows,
            cols,
            data: vec![e; rows * cols],
        }
    }
    pub fn at(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }
    pub fn transpose(&self) -> Mat<E> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j).clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Mat<F::Elem> {
    Mat::filled(rows, cols, f.zero())
}

pub fn identity<F: Field>(f: &F, n: usize) -> Mat<F::Elem> {
    let mut m = zeros(f, n, n);
    for i in 0..n {
        *m.at_mut(i, i) = f.one();
    }
    m
}

pub fn mat_mul<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch");
    let mut out = zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.at(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let t = f.mul(aik, b.at(k, j));
                *out.at_mut(i, j) = f.add(out.at(i, j), &t);
            }
        }
    }
    out
}

pub fn mat_vec<F: Field>(f: &F, a: &Mat<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|i| {
            let mut acc = f.zero();
            for j in 0..a.cols {
                acc = f.add(&acc, &f.mul(a.at(i, j), &v[j]));
            }
            acc
        })
        .collect()
}

pub fn vec_add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn vec_sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn vec_scale<F: Field>(f: &F, c: &F::Elem, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|x| f.mul(c, x)).collect()
}

pub fn vec_is_zero<F: Field>(f: &F, a: &[F::Elem]) -> bool {
    a.iter().all(|x| f.is_zero(x))
}

/// A reduced row echelon basis of a subspace, kept sorted by pivot column.
/// Equality of subspaces is literal equality of `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<E> {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Reduced row echelon form of a list of vectors; canonical for the subspace
/// they span.
pub fn row_space<F: Field>(f: &F, vecs: &[Vec<F::Elem>], ambient_dim: usize) -> Subspace<F::Elem> {
    let mut basis: Vec<Vec<F::Elem>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for v in vecs {
        assert_eq!(v.len(), ambient_dim);
        let mut v = v.clone();
        reduce_against(f, &mut v, &basis, &pivots);
        if let Some(p) = v.iter().position(|x| !f.is_zero(x)) {
            let inv = f.inv(&v[p]).expect("nonzero pivot");
            let v: Vec<_> = v.iter().map(|x| f.mul(&inv, x)).collect();
            // back-substitute into existing rows
            for (b, _) in basis.iter_mut().zip(&pivots) {
                let c = b[p].clone();
                if !f.is_zero(&c) {
                    for (bk, vk) in b.iter_mut().zip(&v) {
                        *bk = f.sub(bk, &f.mul(&c, vk));
                    }
                }
            }
            let pos = pivots.iter().position(|&q| q > p).unwrap_or(pivots.len());
            basis.insert(pos, v);
            pivots.insert(pos, p);
        }
    }
    Subspace {
        ambient_dim,
        basis,
        pivots,
    }
}

/// Echelon basis plus, for each basis vector, its expression as a linear
/// combination of the input vectors.
pub fn row_space_tracked<F: Field>(
    f: &F,
    vecs: &[Vec<F::Elem>],
    ambient_dim: usize,
) -> (Subspace<F::Elem>, Vec<Vec<F::Elem>>) {
    // augment with identity bookkeeping columns; pivot only in the real part
    let n = vecs.len();
    let mut basis: Vec<Vec<F::Elem>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for (j, v) in vecs.iter().enumerate() {
        assert_eq!(v.len(), ambient_dim);
        let mut w = v.clone();
        let mut track = vec![f.zero(); n];
        track[j] = f.one();
        for (b, &p) in basis.iter().zip(&pivots) {
            let c = w[p].clone();
            if !f.is_zero(&c) {
                for (wk, bk) in w.iter_mut().zip(&b[..ambient_dim]) {
                    *wk = f.sub(wk, &f.mul(&c, bk));
                }
                for (tk, bk) in track.iter_mut().zip(&b[ambient_dim..]) {
                    *tk = f.sub(tk, &f.mul(&c, bk));
                }
            }
        }
        if let Some(p) = w.iter().position(|x| !f.is_zero(x)) {
            let inv = f.inv(&w[p]).expect("nonzero pivot");
            let mut row: Vec<F::Elem> = w.iter().map(|x| f.mul(&inv, x)).collect();
            row.extend(track.iter().map(|x| f.mul(&inv, x)));
            for (b, _) in basis.iter_mut().zip(&pivots) {
                let c = b[p].clone();
                if !f.is_zero(&c) {
                    for (bk, vk) in b.iter_mut().zip(&row) {
                        *bk = f.sub(bk, &f.mul(&c, vk));
                    }
                }
            }
            let pos = pivots.iter().position(|&q| q > p).unwrap_or(pivots.len());
            basis.insert(pos, row);
            pivots.insert(pos, p);
        }
    }
    let space = Subspace {
        ambient_dim,
        basis: basis.iter().map(|b| b[..ambient_dim].to_vec()).collect(),
        pivots,
    };
    let combos = basis.iter().map(|b| b[ambient_dim..].to_vec()).collect();
    (space, combos)
}

/// Reduce `v` against an echelon basis in place.
pub fn reduce_against<F: Field>(
    f: &F,
    v: &mut [F::Elem],
    basis: &[Vec<F::Elem>],
    pivots: &[usize],
) {
    for (b, &p) in basis.iter().zip(pivots) {
        let c = v[p].clone();
        if !f.is_zero(&c) {
            for (vk, bk) in v.iter_mut().zip(b) {
                *vk = f.sub(vk, &f.mul(&c, bk));
            }
        }
    }
}

pub fn subspace_contains<F: Field>(f: &F, s: &Subspace<F::Elem>, v: &[F::Elem]) -> bool {
    let mut v = v.to_vec();
    reduce_against(f, &mut v, &s.basis, &s.pivots);
    vec_is_zero(f, &v)
}

pub fn subspace_sum<F: Field>(
    f: &F,
    a: &Subspace<F::Elem>,
    b: &Subspace<F::Elem>,
) -> Subspace<F::Elem> {
    let mut vecs = a.basis.clone();
    vecs.extend(b.basis.iter().cloned());
    row_space(f, &vecs, a.ambient_dim)
}

/// Intersection via kernel of the stacked coefficient matrix.
pub fn subspace_intersect<F: Field>(
    f: &F,
    a: &Subspace<F::Elem>,
    b: &Subspace<F::Elem>,
) -> Subspace<F::Elem> {
    assert_eq!(a.ambient_dim, b.ambient_dim);
    // x = sum c_i a_i = sum d_j b_j  <=>  (c, d) in kernel of [A^T | -B^T]
    let ra = a.basis.len();
    let rb = b.basis.len();
    if ra == 0 || rb == 0 {
        return row_space(f, &[], a.ambient_dim);
    }
    let mut m = zeros(f, a.ambient_dim, ra + rb);
    for (i, v) in a.basis.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            *m.at_mut(r, i) = x.clone();
        }
    }
    for (j, v) in b.basis.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            *m.at_mut(r, ra + j) = f.neg(x);
        }
    }
    let ker = kernel_basis(f, &m);
    let vecs: Vec<Vec<F::Elem>> = ker
        .iter()
        .map(|k| {
            let mut v = vec![f.zero(); a.ambient_dim];
            for (i, bi) in a.basis.iter().enumerate() {
                if !f.is_zero(&k[i]) {
                    for (vx, bx) in v.iter_mut().zip(bi) {
                        *vx = f.add(vx, &f.mul(&k[i], bx));
                    }
                }
            }
            v
        })
        .collect();
    row_space(f, &vecs, a.ambient_dim)
}

pub fn rank<F: Field>(f: &F, m: &Mat<F::Elem>) -> usize {
    let rows: Vec<Vec<F::Elem>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    row_space(f, &rows, m.cols).dim()
}

/// Basis of the right kernel {x : Mx = 0}.
pub fn kernel_basis<F: Field>(f: &F, m: &Mat<F::Elem>) -> Vec<Vec<F::Elem>> {
    let rows: Vec<Vec<F::Elem>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let rref = row_space(f, &rows, m.cols);
    let pivset: std::collections::BTreeSet<usize> = rref.pivots.iter().copied().collect();
    let mut out = Vec::new();
    for free in 0..m.cols {
        if pivset.contains(&free) {
            continue;
        }
        let mut v = vec![f.zero(); m.cols];
        v[free] = f.one();
        for (b, &p) in rref.basis.iter().zip(&rref.pivots) {
            v[p] = f.neg(&b[free]);
        }
        out.push(v);
    }
    out
}

/// One solution of Mx = b, if any.
pub fn solve<F: Field>(f: &F, m: &Mat<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(m.rows, b.len());
    // Row-reduce the augmented matrix [M | b].
    let rows: Vec<Vec<F::Elem>> = (0..m.rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let rref = row_space(f, &rows, m.cols + 1);
    let mut x = vec![f.zero(); m.cols];
    for (brow, &p) in rref.basis.iter().zip(&rref.pivots) {
        if p == m.cols {
            return None; // row (0,...,0 | 1): inconsistent
        }
        x[p] = brow[m.cols].clone();
    }
    // Verify: free variables were set to zero, pivot rows are reduced.
    let mut check = mat_vec(f, m, &x);
    for (c, bb) in check.iter_mut().zip(b) {
        *c = f.sub(c, bb);
    }
    if vec_is_zero(f, &check) {
        Some(x)
    } else {
        None
    }
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<F: Field>(f: &F, m: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let rows: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            for j in 0..n {
                r.push(if i == j { f.one() } else { f.zero() });
            }
            r
        })
        .collect();
    let rref = row_space(f, &rows, 2 * n);
    if rref.pivots.len() < n || rref.pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = zeros(f, n, n);
    for (i, brow) in rref.basis.iter().enumerate() {
        for j in 0..n {
            *inv.at_mut(i, j) = brow[n + j].clone();
        }
    }
    Some(inv)
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn determinant<F: Field>(f: &F, m: &Mat<F::Elem>) -> F::Elem {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut det = f.one();
    for col in 0..n {
        let piv = (col..n).find(|&i| !f.is_zero(a.at(i, col)));
        let piv = match piv {
            Some(p) => p,
            None => return f.zero(),
        };
        if piv != col {
            for j in 0..n {
                let tmp = a.at(piv, j).clone();
                *a.at_mut(piv, j) = a.at(col, j).clone();
                *a.at_mut(col, j) = tmp;
            }
            det = f.neg(&det);
        }
        let p = a.at(col, col).clone();
        det = f.mul(&det, &p);
        let pinv = f.inv(&p).expect("nonzero pivot");
        for i in col + 1..n {
            let c = f.mul(&f.mul(a.at(i, col), &pinv), &f.one());
            if f.is_zero(&c) {
                continue;
            }
            for j in col..n {
                let t = f.mul(&c, a.at(col, j));
                *a.at_mut(i, j) = f.sub(a.at(i, j), &t);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn qm(rows: Vec<Vec<i64>>) -> Mat<num_rational::BigRational> {
        let f = Rationals;
        Mat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| f.from_i64(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let f = Rationals;
        let m = qm(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 1, 1]]);
        assert_eq!(rank(&f, &m), 2);
        let ker = kernel_basis(&f, &m);
        assert_eq!(ker.len(), 1);
        for k in &ker {
            assert!(vec_is_zero(&f, &mat_vec(&f, &m, k)));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let f = Rationals;
        let m = qm(vec![vec![1, 2], vec![3, 4]]);
        let b = vec![f.from_i64(5), f.from_i64(6)];
        let x = solve(&f, &m, &b).unwrap();
        assert_eq!(mat_vec(&f, &m, &x), b);
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mat_mul(&f, &m, &inv), identity(&f, 2));
        assert_eq!(determinant(&f, &m), f.from_i64(-2));
    }

    #[test]
    fn intersect_subspaces() {
        let f = Rationals;
        let a = row_space(
            &f,
            &[
                vec![f.from_i64(1), f.from_i64(0), f.from_i64(0)],
                vec![f.from_i64(0), f.from_i64(1), f.from_i64(0)],
            ],
            3,
        );
        let b = row_space(
            &f,
            &[
                vec![f.from_i64(0), f.from_i64(1), f.from_i64(1)],
                vec![f.from_i64(0), f.from_i64(0), f.from_i64(1)],
            ],
            3,
        );
        let c = subspace_intersect(&f, &a, &b);
        assert_eq!(c.dim(), 1);
        assert!(subspace_contains(
            &f,
            &c,
            &[f.from_i64(0), f.from_i64(1), f.from_i64(0)]
        ));
    }
}
