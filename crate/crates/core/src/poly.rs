//! Dense univariate polynomials and reduced rational functions over a field.
//!
//! `RatFunc` is the fraction field k(t); the local ring k[t]_(t) lives in
//! `coeff::localpoly` as the subring of fractions regular at t = 0.

use crate::field::Field;

/// Coefficients in ascending degree; no trailing zeros; zero = empty vec.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<E> {
    pub coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

pub fn p_zero<F: Field>(_f: &F) -> Poly<F::Elem> {
    Poly { coeffs: vec![] }
}

pub fn p_const<F: Field>(f: &F, c: F::Elem) -> Poly<F::Elem> {
    if f.is_zero(&c) {
        p_zero(f)
    } else {
        Poly { coeffs: vec![c] }
    }
}

pub fn p_one<F: Field>(f: &F) -> Poly<F::Elem> {
    p_const(f, f.one())
}

/// t^n
pub fn p_monomial<F: Field>(f: &F, n: usize) -> Poly<F::Elem> {
    let mut coeffs = vec![f.zero(); n + 1];
    coeffs[n] = f.one();
    Poly { coeffs }
}

fn trim<F: Field>(f: &F, mut v: Vec<F::Elem>) -> Poly<F::Elem> {
    while v.last().map_or(false, |c| f.is_zero(c)) {
        v.pop();
    }
    Poly { coeffs: v }
}

pub fn p_add<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.coeffs.get(i).cloned().unwrap_or_else(|| f.zero());
        let y = b.coeffs.get(i).cloned().unwrap_or_else(|| f.zero());
        v.push(f.add(&x, &y));
    }
    trim(f, v)
}

pub fn p_neg<F: Field>(f: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    Poly {
        coeffs: a.coeffs.iter().map(|c| f.neg(c)).collect(),
    }
}

pub fn p_sub<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    p_add(f, a, &p_neg(f, b))
}

pub fn p_mul<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    if a.is_zero() || b.is_zero() {
        return p_zero(f);
    }
    let mut v = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            v[i + j] = f.add(&v[i + j], &f.mul(x, y));
        }
    }
    trim(f, v)
}

pub fn p_scale<F: Field>(f: &F, c: &F::Elem, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    trim(f, a.coeffs.iter().map(|x| f.mul(c, x)).collect())
}

/// (quotient, remainder) with deg r < deg b.
pub fn p_divmod<F: Field>(
    f: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> (Poly<F::Elem>, Poly<F::Elem>) {
    assert!(!b.is_zero(), "division by zero polynomial");
    let db = b.degree().unwrap();
    let lead_inv = f.inv(b.coeffs.last().unwrap()).unwrap();
    let mut r = a.coeffs.clone();
    let mut q = vec![f.zero(); a.coeffs.len().saturating_sub(db)];
    while r.len() > db {
        let d = r.len() - 1;
        let c = f.mul(r.last().unwrap(), &lead_inv);
        if !f.is_zero(&c) {
            q[d - db] = c.clone();
            for (i, bc) in b.coeffs.iter().enumerate() {
                let idx = d - db + i;
                r[idx] = f.sub(&r[idx], &f.mul(&c, bc));
            }
        }
        r.pop();
    }
    (trim(f, q), trim(f, r))
}

/// Monic gcd.
pub fn p_gcd<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let (_, r) = p_divmod(f, &a, &b);
        a = b;
        b = r;
    }
    if a.is_zero() {
        return a;
    }
    let inv = f.inv(a.coeffs.last().unwrap()).unwrap();
    p_scale(f, &inv, &a)
}

pub fn p_eval<F: Field>(f: &F, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
    let mut acc = f.zero();
    for c in a.coeffs.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

/// Order of vanishing at t = 0; `None` for the zero polynomial.
pub fn p_order<F: Field>(f: &F, a: &Poly<F::Elem>) -> Option<usize> {
    a.coeffs.iter().position(|c| !f.is_zero(c))
}

pub fn p_fmt<F: Field>(f: &F, a: &Poly<F::Elem>, var: &str) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (i, c) in a.coeffs.iter().enumerate() {
        if f.is_zero(c) {
            continue;
        }
        let cs = f.fmt_elem(c);
        let part = match i {
            0 => cs,
            1 if f.is_one(c) => var.to_string(),
            1 => format!("{cs}*{var}"),
            _ if f.is_one(c) => format!("{var}^{i}"),
            _ => format!("{cs}*{var}^{i}"),
        };
        parts.push(part);
    }
    parts.join(" + ")
}

/// A reduced fraction of polynomials: gcd(num, den) = 1 and the lowest
/// nonzero coefficient of den is 1, so equality is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<E> {
    pub num: Poly<E>,
    pub den: Poly<E>,
}

pub fn rf_normalize<F: Field>(f: &F, num: Poly<F::Elem>, den: Poly<F::Elem>) -> RatFunc<F::Elem> {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return RatFunc {
            num,
            den: p_one(f),
        };
    }
    let g = p_gcd(f, &num, &den);
    let (num, _) = p_divmod(f, &num, &g);
    let (den, _) = p_divmod(f, &den, &g);
    // scale so the lowest nonzero coefficient of den is 1
    let k = p_order(f, &den).unwrap();
    let c = f.inv(&den.coeffs[k]).unwrap();
    RatFunc {
        num: p_scale(f, &c, &num),
        den: p_scale(f, &c, &den),
    }
}

pub fn rf_zero<F: Field>(f: &F) -> RatFunc<F::Elem> {
    RatFunc {
        num: p_zero(f),
        den: p_one(f),
    }
}

pub fn rf_one<F: Field>(f: &F) -> RatFunc<F::Elem> {
    RatFunc {
        num: p_one(f),
        den: p_one(f),
    }
}

pub fn rf_from_poly<F: Field>(f: &F, p: Poly<F::Elem>) -> RatFunc<F::Elem> {
    RatFunc {
        num: p,
        den: p_one(f),
    }
}

pub fn rf_add<F: Field>(f: &F, a: &RatFunc<F::Elem>, b: &RatFunc<F::Elem>) -> RatFunc<F::Elem> {
    let num = p_add(
        f,
        &p_mul(f, &a.num, &b.den),
        &p_mul(f, &b.num, &a.den),
    );
    rf_normalize(f, num, p_mul(f, &a.den, &b.den))
}

pub fn rf_neg<F: Field>(f: &F, a: &RatFunc<F::Elem>) -> RatFunc<F::Elem> {
    RatFunc {
        num: p_neg(f, &a.num),
        den: a.den.clone(),
    }
}

pub fn rf_mul<F: Field>(f: &F, a: &RatFunc<F::Elem>, b: &RatFunc<F::Elem>) -> RatFunc<F::Elem> {
    rf_normalize(f, p_mul(f, &a.num, &b.num), p_mul(f, &a.den, &b.den))
}

pub fn rf_inv<F: Field>(f: &F, a: &RatFunc<F::Elem>) -> Option<RatFunc<F::Elem>> {
    if a.num.is_zero() {
        None
    } else {
        Some(rf_normalize(f, a.den.clone(), a.num.clone()))
    }
}

pub fn rf_is_zero<E>(a: &RatFunc<E>) -> bool {
    a.num.is_zero()
}

/// t-adic valuation; `None` for zero.
pub fn rf_valuation<F: Field>(f: &F, a: &RatFunc<F::Elem>) -> Option<i64> {
    let vn = p_order(f, &a.num)? as i64;
    let vd = p_order(f, &a.den).expect("nonzero denominator") as i64;
    Some(vn - vd)
}

/// Value at t = 0 when the (reduced) denominator does not vanish there.
pub fn rf_eval0<F: Field>(f: &F, a: &RatFunc<F::Elem>) -> Option<F::Elem> {
    let d0 = p_eval(f, &a.den, &f.zero());
    if f.is_zero(&d0) {
        return None;
    }
    let n0 = p_eval(f, &a.num, &f.zero());
    Some(f.mul(&n0, &f.inv(&d0).unwrap()))
}

pub fn rf_fmt<F: Field>(f: &F, a: &RatFunc<F::Elem>, var: &str) -> String {
    if a.den == p_one(f) {
        p_fmt(f, &a.num, var)
    } else {
        format!("({})/({})", p_fmt(f, &a.num, var), p_fmt(f, &a.den, var))
    }
}

/// The fraction field k(t) as a `Field` object, so the generic linear
/// algebra applies to matrices of rational functions.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFuncField<F: Field> {
    pub base: F,
}

impl<F: Field> Field for RatFuncField<F> {
    type Elem = RatFunc<F::Elem>;

    fn zero(&self) -> Self::Elem {
        rf_zero(&self.base)
    }
    fn one(&self) -> Self::Elem {
        rf_one(&self.base)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        rf_add(&self.base, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        rf_neg(&self.base, a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        rf_mul(&self.base, a, b)
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        rf_inv(&self.base, a)
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        rf_from_poly(&self.base, p_const(&self.base, self.base.from_i64(n)))
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        rf_fmt(&self.base, a, "t")
    }
    fn parse(&self, s: &str) -> std::result::Result<Self::Elem, crate::error::Error> {
        crate::expr::parse_ratfunc(&self.base, s, "t")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, Rationals};

    #[test]
    fn divmod_and_gcd() {
        let f = Rationals;
        // (t^2 - 1) / (t - 1) = t + 1
        let a = Poly {
            coeffs: vec![f.from_i64(-1), f.zero(), f.one()],
        };
        let b = Poly {
            coeffs: vec![f.from_i64(-1), f.one()],
        };
        let (q, r) = p_divmod(&f, &a, &b);
        assert!(r.is_zero());
        assert_eq!(q.coeffs, vec![f.one(), f.one()]);
        let g = p_gcd(&f, &a, &b);
        assert_eq!(g.degree(), Some(1));
    }

    #[test]
    fn ratfunc_reduction_and_valuation() {
        let f = Rationals;
        // t^2 / t = t, valuation 1
        let x = rf_normalize(&f, p_monomial(&f, 2), p_monomial(&f, 1));
        assert_eq!(rf_valuation(&f, &x), Some(1));
        assert_eq!(x.den, p_one(&f));
        // 1/t has valuation -1 and no value at 0
        let y = rf_normalize(&f, p_one(&f), p_monomial(&f, 1));
        assert_eq!(rf_valuation(&f, &y), Some(-1));
        assert!(rf_eval0(&f, &y).is_none());
    }
}
