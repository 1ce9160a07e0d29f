//! Jordan types of nilpotent matrices, the dominance order, and the rank
//! criterion identifying it with conjugacy-class closure.

pub mod dvr;
pub mod local;
pub mod wd;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{mat_mul, rank, Mat};

/// A weakly decreasing partition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Partition(pub Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        parts.retain(|&p| p != 0);
        let sorted = parts.windows(2).all(|w| w[0] >= w[1]);
        if !sorted {
            return Err(Error::Shape("partition must be weakly decreasing".into()));
        }
        Ok(Partition(parts))
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let max = self.0.first().copied().unwrap_or(0);
        let parts = (1..=max)
            .map(|i| self.0.iter().filter(|&&p| p >= i).count())
            .collect();
        Partition(parts)
    }

    /// Prefix-sum comparison; defined only between equal totals.
    pub fn dominance_leq(&self, other: &Partition) -> Result<bool> {
        if self.total() != other.total() {
            return Err(Error::Precondition(
                "dominance compares partitions of the same total".into(),
            ));
        }
        let k = self.0.len().max(other.0.len());
        let mut sa = 0usize;
        let mut sb = 0usize;
        for i in 0..k {
            sa += self.0.get(i).copied().unwrap_or(0);
            sb += other.0.get(i).copied().unwrap_or(0);
            if sa > sb {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All partitions of n, in lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=max.min(n)).rev() {
                cur.push(p);
                go(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }
}

/// The Jordan matrix of a partition: blocks J_t with n(e_1) = 0,
/// n(e_i) = e_{i-1}.
pub fn jordan_matrix<F: Field>(f: &F, t: &Partition) -> Mat<F::Elem> {
    let d = t.total();
    let mut m = crate::linalg::zeros(f, d, d);
    let mut off = 0;
    for &size in &t.0 {
        for k in 1..size {
            *m.at_mut(off + k - 1, off + k) = f.one();
        }
        off += size;
    }
    m
}

/// Jordan type from the rank sequence: the conjugate of
/// (rank n^{i-1} - rank n^i)_i.
pub fn jordan_type<F: Field>(f: &F, n: &Mat<F::Elem>) -> Result<Partition> {
    if n.rows != n.cols {
        return Err(Error::Shape("matrix must be square".into()));
    }
    let d = n.rows;
    let mut power = crate::linalg::identity(f, d);
    let mut ranks = vec![d];
    for _ in 0..d {
        power = mat_mul(f, &power, n);
        ranks.push(rank(f, &power));
    }
    if ranks[d] != 0 {
        return Err(Error::Precondition("matrix is not nilpotent".into()));
    }
    let mut cols = Vec::new();
    for i in 1..=d {
        let c = ranks[i - 1] - ranks[i];
        if c == 0 {
            break;
        }
        cols.push(c);
    }
    Ok(Partition(cols).conjugate())
}

/// rank n^i <= rank n'^i for all i; equivalent to dominance of Jordan
/// types, which callers cross-check.
pub fn gerstenhaber_leq<F: Field>(
    f: &F,
    n: &Mat<F::Elem>,
    nprime: &Mat<F::Elem>,
) -> Result<bool> {
    if n.rows != nprime.rows || n.cols != nprime.cols {
        return Err(Error::Shape("matrices must have the same size".into()));
    }
    // nilpotency enforced via jordan_type
    jordan_type(f, n)?;
    jordan_type(f, nprime)?;
    let d = n.rows;
    let mut pa = crate::linalg::identity(f, d);
    let mut pb = crate::linalg::identity(f, d);
    for _ in 1..=d {
        pa = mat_mul(f, &pa, n);
        pb = mat_mul(f, &pb, nprime);
        if rank(f, &pa) > rank(f, &pb) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn partition_machinery() {
        let p = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(p.conjugate(), Partition(vec![2, 1, 1]));
        assert_eq!(p.conjugate().conjugate(), p);
        assert!(Partition::new(vec![1, 3]).is_err());
        assert_eq!(Partition::all_of(6).len(), 11);
    }

    #[test]
    fn dominance_examples() {
        let a = Partition(vec![2, 2]);
        let b = Partition(vec![3, 1]);
        assert!(a.dominance_leq(&b).unwrap());
        assert!(!b.dominance_leq(&a).unwrap());
        assert!(a.dominance_leq(&a).unwrap());
        assert!(a.dominance_leq(&Partition(vec![1, 1, 1])).is_err());
    }

    #[test]
    fn jordan_type_examples() {
        let f = Rationals;
        let zero = crate::linalg::zeros(&f, 4, 4);
        assert_eq!(jordan_type(&f, &zero).unwrap(), Partition(vec![1, 1, 1, 1]));
        let j4 = jordan_matrix(&f, &Partition(vec![4]));
        assert_eq!(jordan_type(&f, &j4).unwrap(), Partition(vec![4]));
        // a random conjugate of J_3 + J_1 keeps its type
        let t = Partition(vec![3, 1]);
        let j = jordan_matrix(&f, &t);
        let g = Mat::from_rows(
            vec![
                vec![1, 2, 0, 1],
                vec![0, 1, 3, 0],
                vec![2, 0, 1, 1],
                vec![1, 1, 1, 1],
            ]
            .into_iter()
            .map(|r| r.into_iter().map(|x| f.from_i64(x)).collect())
            .collect(),
        );
        let ginv = crate::linalg::inverse(&f, &g).unwrap();
        let conj = mat_mul(&f, &mat_mul(&f, &ginv, &j), &g);
        assert_eq!(jordan_type(&f, &conj).unwrap(), t);
        // non-nilpotent input errors out
        let id = crate::linalg::identity(&f, 2);
        assert!(jordan_type(&f, &id).is_err());
    }

    #[test]
    fn gerstenhaber_matches_dominance_exhaustively_small() {
        let f = Rationals;
        for d in 1..=4 {
            for a in Partition::all_of(d) {
                for b in Partition::all_of(d) {
                    let na = jordan_matrix(&f, &a);
                    let nb = jordan_matrix(&f, &b);
                    assert_eq!(
                        gerstenhaber_leq(&f, &na, &nb).unwrap(),
                        a.dominance_leq(&b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn direct_sum_monotonicity() {
        // the type of n restricted to an invariant summand pair is
        // dominated by the type of n
        let f = Rationals;
        // n on Q^3 with invariant subspace span(e1): block structure
        let n = Mat::from_rows(
            vec![vec![0, 1, 1], vec![0, 0, 1], vec![0, 0, 0]]
                .into_iter()
                .map(|r| r.into_iter().map(|x| f.from_i64(x)).collect())
                .collect(),
        );
        // U = span(e1, e2): n|U + n on V/U
        let n_u = Mat::from_rows(
            vec![vec![0, 1], vec![0, 0]]
                .into_iter()
                .map(|r| r.into_iter().map(|x| f.from_i64(x)).collect())
                .collect(),
        );
        let n_q = crate::linalg::zeros(&f, 1, 1);
        let tu = jordan_type(&f, &n_u).unwrap();
        let tq = jordan_type(&f, &n_q).unwrap();
        let mut parts = tu.0.clone();
        parts.extend(tq.0.clone());
        parts.sort_unstable_by(|x, y| y.cmp(x));
        let t_sum = Partition(parts);
        let t_full = jordan_type(&f, &n).unwrap();
        assert!(t_sum.dominance_leq(&t_full).unwrap());
    }
}
