//! The trace-identity layer: S_n(T), characteristic polynomials, and the
//! polarized Cayley-Hamilton map, written against a small environment
//! trait so the same formulas run over flattened algebras and over
//! block-matrix algebras with DVR entries.

use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// An algebra-with-central-functional: just enough to evaluate the trace
/// identities.
pub trait TraceEnv<C: Coeff> {
    type X: Clone;
    fn coeff(&self) -> &C;
    fn x_one(&self) -> Self::X;
    fn x_mul(&self, a: &Self::X, b: &Self::X) -> Self::X;
    fn x_add(&self, a: &Self::X, b: &Self::X) -> Self::X;
    fn x_scale(&self, c: &C::Elem, a: &Self::X) -> Self::X;
    fn trace(&self, x: &Self::X) -> C::Elem;
}

/// Iterate over all permutations of 0..n, handing each to `visit` together
/// with its cycle decomposition (each cycle a vector of positions).
pub fn for_each_permutation<FN: FnMut(&[usize])>(n: usize, mut visit: FN) {
    // Heap's algorithm
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i);
            i = perm[i];
        }
        cycles.push(cyc);
    }
    cycles
}

pub fn permutation_sign(perm: &[usize]) -> i64 {
    let cycles = cycles_of(perm);
    let transpositions: usize = cycles.iter().map(|c| c.len() - 1).sum();
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// S_n(T)(x_1,...,x_n) = sum over permutations of sign times the product of
/// T over the cycles of the permutation.
pub fn s_n<C: Coeff, E: TraceEnv<C>>(env: &E, xs: &[E::X]) -> C::Elem {
    let c = env.coeff();
    let n = xs.len();
    if n == 0 {
        return c.one();
    }
    let mut acc = c.zero();
    for_each_permutation(n, |perm| {
        let mut term = c.one();
        let mut dead = false;
        for cyc in cycles_of(perm) {
            let mut prod = xs[cyc[0]].clone();
            for &k in &cyc[1..] {
                prod = env.x_mul(&prod, &xs[k]);
            }
            let t = env.trace(&prod);
            if c.is_zero(&t) {
                dead = true;
                break;
            }
            term = c.mul(&term, &t);
        }
        if !dead {
            if permutation_sign(perm) < 0 {
                term = c.neg(&term);
            }
            acc = c.add(&acc, &term);
        }
    });
    acc
}

/// Power traces T(x), T(x^2), ..., T(x^n).
pub fn power_traces<C: Coeff, E: TraceEnv<C>>(env: &E, x: &E::X, n: usize) -> Vec<C::Elem> {
    let mut out = Vec::with_capacity(n);
    let mut p = x.clone();
    for i in 0..n {
        out.push(env.trace(&p));
        if i + 1 < n {
            p = env.x_mul(&p, x);
        }
    }
    out
}

/// Coefficients e_1..e_d from power traces by Newton's identities:
/// k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} p_i. Requires 1..d invertible.
pub fn newton_elementary<C: Coeff>(c: &C, p: &[C::Elem]) -> Result<Vec<C::Elem>> {
    let d = p.len();
    let mut e: Vec<C::Elem> = Vec::with_capacity(d + 1);
    e.push(c.one());
    for k in 1..=d {
        let mut acc = c.zero();
        for i in 1..=k {
            let term = c.mul(&e[k - i], &p[i - 1]);
            if i % 2 == 1 {
                acc = c.add(&acc, &term);
            } else {
                acc = c.sub(&acc, &term);
            }
        }
        let kinv = c
            .inv(&c.from_int(k as i64))
            .ok_or(Error::FactorialNotInvertible(k as u64))?;
        e.push(c.mul(&kinv, &acc));
    }
    Ok(e[1..].to_vec())
}

/// Monic characteristic polynomial of x: coefficient list c_0..c_d with
/// c_0 = 1, P(X) = sum c_k X^(d-k), c_k = (-1)^k e_k(x). Since the diagonal
/// S_k(T)(x,..,x) equals k! e_k as a universal polynomial in the power
/// traces, this is the (-1)^k/k! S_k coefficient without the k! blowup.
pub fn char_poly<C: Coeff, E: TraceEnv<C>>(env: &E, x: &E::X, d: usize) -> Result<Vec<C::Elem>> {
    let c = env.coeff();
    let p = power_traces(env, x, d);
    let e = newton_elementary(c, &p)?;
    let mut out = Vec::with_capacity(d + 1);
    out.push(c.one());
    for (k, ek) in e.iter().enumerate() {
        out.push(if (k + 1) % 2 == 1 { c.neg(ek) } else { ek.clone() });
    }
    Ok(out)
}

/// Evaluate P_{x,T} at x itself.
pub fn char_poly_at_self<C: Coeff, E: TraceEnv<C>>(env: &E, x: &E::X, d: usize) -> Result<E::X> {
    let coeffs = char_poly(env, x, d)?;
    // Horner in the algebra
    let mut acc = env.x_scale(&coeffs[0], &env.x_one());
    for ck in &coeffs[1..] {
        acc = env.x_mul(&acc, x);
        acc = env.x_add(&acc, &env.x_scale(ck, &env.x_one()));
    }
    Ok(acc)
}

/// The d-linear symmetric Cayley-Hamilton map
///
/// CH(T)(x_1..x_d) = (-1)^d/d! sum_{I, sigma} (-1)^|I|
///     S_{d-|I|}(T)({x_i : i not in I}) x_{sigma(1)} ... x_{sigma(|I|)},
///
/// over subsets I of {1..d} and bijections sigma from {1..|I|} to I.
pub fn ch_map<C: Coeff, E: TraceEnv<C>>(env: &E, xs: &[E::X]) -> Result<E::X> {
    let c = env.coeff();
    let d = xs.len();
    let mut acc = env.x_scale(&c.zero(), &env.x_one());
    for mask in 0u64..(1u64 << d) {
        let inside: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
        let outside: Vec<E::X> = (0..d)
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| xs[i].clone())
            .collect();
        let s_val = s_n(env, &outside);
        let sign_inside = inside.len() % 2 == 1;
        // all orderings of the inside set
        let k = inside.len();
        if k == 0 {
            let mut term = env.x_scale(&s_val, &env.x_one());
            if sign_inside {
                term = env.x_scale(&c.from_int(-1), &term);
            }
            acc = env.x_add(&acc, &term);
            continue;
        }
        for_each_permutation(k, |perm| {
            let mut prod = xs[inside[perm[0]]].clone();
            for &p in &perm[1..] {
                prod = env.x_mul(&prod, &xs[inside[p]]);
            }
            let mut term = env.x_scale(&s_val, &prod);
            if sign_inside {
                term = env.x_scale(&c.from_int(-1), &term);
            }
            acc = env.x_add(&acc, &term);
        });
    }
    let dfac_inv = c
        .inv_factorial(d as u64)
        .ok_or(Error::FactorialNotInvertible(d as u64))?;
    let mut scale = dfac_inv;
    if d % 2 == 1 {
        scale = c.neg(&scale);
    }
    Ok(env.x_scale(&scale, &acc))
}

/// Both sides of S_{d+1}(T)(x_1..x_{d+1}) = d! T(CH(T)(x_1..x_d) x_{d+1}).
pub fn pseudocayley_sides<C: Coeff, E: TraceEnv<C>>(
    env: &E,
    xs: &[E::X],
) -> Result<(C::Elem, C::Elem)> {
    let c = env.coeff();
    let d = xs.len() - 1;
    let lhs = s_n(env, xs);
    let ch = ch_map(env, &xs[..d])?;
    let prod = env.x_mul(&ch, &xs[d]);
    let mut dfac = c.one();
    for k in 2..=d as i64 {
        dfac = c.mul(&dfac, &c.from_int(k));
    }
    let rhs = c.mul(&dfac, &env.trace(&prod));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_machinery() {
        let mut count = 0;
        for_each_permutation(4, |_| count += 1);
        assert_eq!(count, 24);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(cycles_of(&[1, 2, 0, 3]).len(), 2);
    }
}
