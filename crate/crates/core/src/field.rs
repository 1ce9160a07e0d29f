//! Exact base fields: the rationals and odd prime fields.
//!
//! Everything downstream is parametrized by a *field object* carrying the
//! arithmetic context (the modulus for prime fields), so elements stay plain
//! data. No floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::Error;

/// Arithmetic context for an exact field.
///
/// Implementors are lightweight handles; cloning is cheap.
pub trait Field: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// 0 for the rationals, p for a prime field.
    fn characteristic(&self) -> u64;
    fn fmt_elem(&self, a: &Self::Elem) -> String;
    /// Parse "a" or "a/b" with integer a, b.
    fn parse(&self, s: &str) -> Result<Self::Elem, Error>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    /// n!^{-1} when it exists (char 0, or n < p).
    fn inv_factorial(&self, n: u64) -> Option<Self::Elem> {
        let mut f = self.one();
        for k in 2..=n {
            let kk = self.from_i64(k as i64);
            if self.is_zero(&kk) {
                return None;
            }
            f = self.mul(&f, &kk);
        }
        self.inv(&f)
    }
}

/// The field of rational numbers with arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<BigRational, Error> {
        parse_rational(s)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// Exact p-adic valuation of a nonzero rational. `None` for zero.
pub fn padic_valuation(p: u64, x: &BigRational) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut n = x.numer().abs();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = x.denom().abs();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    Some(v)
}

/// A prime field of odd characteristic p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// p must be an odd prime: 2 is never invertible enough for the
    /// idempotent and symmetry constructions.
    pub fn new(p: u64) -> Result<Self, Error> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not an odd prime")));
        }
        Ok(PrimeField { p })
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    fn reduce_i128(&self, n: i128) -> u64 {
        let p = self.p as i128;
        (((n % p) + p) % p) as u64
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2) mod p
        let mut base = *a as u128;
        let mut e = self.p - 2;
        let m = self.p as u128;
        let mut acc: u128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Some(acc as u64)
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i128(n as i128)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64, Error> {
        let r = parse_rational(s)?;
        let num = r.numer();
        let den = r.denom();
        let p = BigInt::from(self.p);
        let to_u64 = |x: &BigInt| -> u64 {
            let m = ((x % &p) + &p) % &p;
            let (_, digits) = m.to_u64_digits();
            digits.first().copied().unwrap_or(0)
        };
        let d = to_u64(den);
        let dinv = self
            .inv(&d)
            .ok_or_else(|| Error::Parse(format!("`{s}` has denominator divisible by {}", self.p)))?;
        Ok(self.mul(&to_u64(num), &dinv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_roundtrip() {
        let q = Rationals;
        let x = q.parse("-3/4").unwrap();
        assert_eq!(q.fmt_elem(&x), "-3/4");
        assert_eq!(q.fmt_elem(&q.parse("5").unwrap()), "5");
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn padic_valuations() {
        let q = Rationals;
        assert_eq!(padic_valuation(5, &q.parse("25").unwrap()), Some(2));
        assert_eq!(padic_valuation(5, &q.parse("3/5").unwrap()), Some(-1));
        assert_eq!(padic_valuation(5, &q.parse("6").unwrap()), Some(0));
        assert_eq!(padic_valuation(5, &q.zero()), None);
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.from_i64(-1), 6);
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn inv_factorial_respects_characteristic() {
        let f = PrimeField::new(5).unwrap();
        assert!(f.inv_factorial(4).is_some());
        assert!(f.inv_factorial(5).is_none());
        assert!(Rationals.inv_factorial(20).is_some());
    }
}
