//! The localized polynomial ring k[t]_(t): fractions of univariate
//! polynomials whose denominator does not vanish at t = 0. A discrete
//! valuation ring with uniformizer t, residue map = evaluation at 0.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{
    p_monomial, p_one, rf_add, rf_eval0, rf_from_poly, rf_inv, rf_mul, rf_neg, rf_normalize,
    rf_one, rf_valuation, rf_zero, RatFunc, RatFuncField,
};

use super::Coeff;

#[derive(Clone, Debug, PartialEq)]
pub struct LocalPoly<F: Field> {
    pub base: F,
    pub var: String,
}

impl<F: Field> LocalPoly<F> {
    pub fn new(base: F) -> Self {
        LocalPoly {
            base,
            var: "t".into(),
        }
    }

    pub fn fraction_field(&self) -> RatFuncField<F> {
        RatFuncField {
            base: self.base.clone(),
        }
    }

    /// t^n for n >= 0, or the fraction 1/t^-n (not an element of the local
    /// ring, but useful for fractional-ideal bookkeeping).
    pub fn uniformizer_pow(&self, n: i64) -> RatFunc<F::Elem> {
        if n >= 0 {
            rf_from_poly(&self.base, p_monomial(&self.base, n as usize))
        } else {
            rf_normalize(
                &self.base,
                p_one(&self.base),
                p_monomial(&self.base, (-n) as usize),
            )
        }
    }

    /// Is this fraction regular at t = 0 (i.e. in the local ring)?
    pub fn is_integral(&self, a: &RatFunc<F::Elem>) -> bool {
        crate::poly::rf_is_zero(a) || rf_valuation(&self.base, a).unwrap() >= 0
    }

    /// t-adic valuation; `None` for 0.
    pub fn valuation(&self, a: &RatFunc<F::Elem>) -> Option<i64> {
        rf_valuation(&self.base, a)
    }

    pub fn parse(&self, s: &str) -> Result<RatFunc<F::Elem>> {
        let e = crate::expr::parse_ratfunc(&self.base, s, &self.var)?;
        Ok(e)
    }

    pub fn require_integral(&self, a: &RatFunc<F::Elem>) -> Result<()> {
        if self.is_integral(a) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{} has a pole at {} = 0",
                crate::poly::rf_fmt(&self.base, a, &self.var),
                self.var
            )))
        }
    }
}

impl<F: Field> Coeff for LocalPoly<F> {
    type F = F;
    type Elem = RatFunc<F::Elem>;

    fn field(&self) -> &F {
        &self.base
    }
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
    fn scale(&self, c: &F::Elem, a: &Self::Elem) -> Self::Elem {
        let cc = rf_from_poly(&self.base, crate::poly::p_const(&self.base, c.clone()));
        rf_mul(&self.base, &cc, a)
    }
    fn residue(&self, a: &Self::Elem) -> F::Elem {
        rf_eval0(&self.base, a).expect("element not regular at t = 0")
    }
    fn lift(&self, c: &F::Elem) -> Self::Elem {
        rf_from_poly(&self.base, crate::poly::p_const(&self.base, c.clone()))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if !self.is_integral(a) || self.in_max_ideal(a) {
            return None;
        }
        rf_inv(&self.base, a)
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        crate::poly::rf_fmt(&self.base, a, &self.var)
    }
    fn in_max_ideal(&self, a: &Self::Elem) -> bool {
        match rf_valuation(&self.base, a) {
            None => true,
            Some(v) => v >= 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn local_ring_basics() {
        let r = LocalPoly::new(Rationals);
        let t = r.parse("t").unwrap();
        assert_eq!(r.valuation(&t), Some(1));
        assert!(r.in_max_ideal(&t));
        assert!(r.inv(&t).is_none());
        let u = r.parse("1 + t").unwrap();
        let uinv = r.inv(&u).unwrap();
        assert_eq!(r.mul(&u, &uinv), r.one());
        // 1/t is not in the ring
        let bad = r.parse("1/t").unwrap();
        assert!(!r.is_integral(&bad));
        assert!(r.require_integral(&bad).is_err());
    }

    #[test]
    fn residue_is_evaluation_at_zero() {
        let r = LocalPoly::new(Rationals);
        let e = r.parse("(2 + t)/(1 - t)").unwrap();
        assert_eq!(r.residue(&e), Rationals.from_i64(2));
    }
}
