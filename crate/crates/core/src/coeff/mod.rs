//! Coefficient rings: the base field itself, artinian local algebras over
//! it, and the localized polynomial ring k[t]_(t).
//!
//! All are local with residue field the base field; `Coeff` is the common
//! interface, `ArtinianCoeff` adds the finite-dimensional structure that
//! the flattening machinery needs.

pub mod artinian;
pub mod ideal;
pub mod localpoly;
pub mod module;

pub use artinian::Artinian;
pub use ideal::Ideal;
pub use localpoly::LocalPoly;
pub use module::FiniteModule;

use crate::field::Field;
use std::fmt;

/// A commutative local coefficient ring over an exact base field, with
/// residue field equal to that base field.
pub trait Coeff: Clone + fmt::Debug {
    type F: Field;
    type Elem: Clone + PartialEq + fmt::Debug;

    fn field(&self) -> &Self::F;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Scalar action of the base field.
    fn scale(&self, c: &<Self::F as Field>::Elem, a: &Self::Elem) -> Self::Elem;
    /// The residue map A -> A/m = F.
    fn residue(&self, a: &Self::Elem) -> <Self::F as Field>::Elem;
    /// The unital section F -> A.
    fn lift(&self, c: &<Self::F as Field>::Elem) -> Self::Elem;
    /// Inverse of a unit; `None` when the element lies in the maximal ideal.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        self.lift(&self.field().from_i64(n))
    }
    fn is_unit(&self, a: &Self::Elem) -> bool {
        !self.field().is_zero(&self.residue(a))
    }
    fn in_max_ideal(&self, a: &Self::Elem) -> bool {
        self.field().is_zero(&self.residue(a))
    }
    /// 1/n! in A, when n! is a unit.
    fn inv_factorial(&self, n: u64) -> Option<Self::Elem> {
        self.field().inv_factorial(n).map(|c| self.lift(&c))
    }
}

/// Coefficient rings of finite dimension over the base field, with a fixed
/// basis whose first element is 1 and whose tail spans the maximal ideal.
pub trait ArtinianCoeff: Coeff {
    fn fdim(&self) -> usize;
    fn coords(&self, a: &Self::Elem) -> Vec<<Self::F as Field>::Elem>;
    fn from_coords(&self, v: &[<Self::F as Field>::Elem]) -> Self::Elem;
    fn basis_elem(&self, i: usize) -> Self::Elem;
    fn basis_label(&self, i: usize) -> String;
}

// shared coefficient rings pass by Arc without copying their tables
impl<C: Coeff> Coeff for std::sync::Arc<C> {
    type F = C::F;
    type Elem = C::Elem;

    fn field(&self) -> &Self::F {
        (**self).field()
    }
    fn zero(&self) -> Self::Elem {
        (**self).zero()
    }
    fn one(&self) -> Self::Elem {
        (**self).one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (**self).add(a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        (**self).neg(a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (**self).mul(a, b)
    }
    fn scale(&self, c: &<Self::F as Field>::Elem, a: &Self::Elem) -> Self::Elem {
        (**self).scale(c, a)
    }
    fn residue(&self, a: &Self::Elem) -> <Self::F as Field>::Elem {
        (**self).residue(a)
    }
    fn lift(&self, c: &<Self::F as Field>::Elem) -> Self::Elem {
        (**self).lift(c)
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        (**self).inv(a)
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        (**self).fmt_elem(a)
    }
    fn in_max_ideal(&self, a: &Self::Elem) -> bool {
        (**self).in_max_ideal(a)
    }
}

impl<C: ArtinianCoeff> ArtinianCoeff for std::sync::Arc<C> {
    fn fdim(&self) -> usize {
        (**self).fdim()
    }
    fn coords(&self, a: &Self::Elem) -> Vec<<Self::F as Field>::Elem> {
        (**self).coords(a)
    }
    fn from_coords(&self, v: &[<Self::F as Field>::Elem]) -> Self::Elem {
        (**self).from_coords(v)
    }
    fn basis_elem(&self, i: usize) -> Self::Elem {
        (**self).basis_elem(i)
    }
    fn basis_label(&self, i: usize) -> String {
        (**self).basis_label(i)
    }
}

/// The base field viewed as a coefficient ring (m = 0).
#[derive(Clone, Debug, PartialEq)]
pub struct FieldCoeff<F: Field> {
    pub f: F,
}

impl<F: Field> FieldCoeff<F> {
    pub fn new(f: F) -> Self {
        FieldCoeff { f }
    }
}

impl<F: Field> Coeff for FieldCoeff<F> {
    type F = F;
    type Elem = F::Elem;

    fn field(&self) -> &F {
        &self.f
    }
    fn zero(&self) -> F::Elem {
        self.f.zero()
    }
    fn one(&self) -> F::Elem {
        self.f.one()
    }
    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.f.add(a, b)
    }
    fn neg(&self, a: &F::Elem) -> F::Elem {
        self.f.neg(a)
    }
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.f.mul(a, b)
    }
    fn scale(&self, c: &F::Elem, a: &F::Elem) -> F::Elem {
        self.f.mul(c, a)
    }
    fn residue(&self, a: &F::Elem) -> F::Elem {
        a.clone()
    }
    fn lift(&self, c: &F::Elem) -> F::Elem {
        c.clone()
    }
    fn inv(&self, a: &F::Elem) -> Option<F::Elem> {
        self.f.inv(a)
    }
    fn fmt_elem(&self, a: &F::Elem) -> String {
        self.f.fmt_elem(a)
    }
}

impl<F: Field> ArtinianCoeff for FieldCoeff<F> {
    fn fdim(&self) -> usize {
        1
    }
    fn coords(&self, a: &F::Elem) -> Vec<F::Elem> {
        vec![a.clone()]
    }
    fn from_coords(&self, v: &[F::Elem]) -> F::Elem {
        v[0].clone()
    }
    fn basis_elem(&self, _i: usize) -> F::Elem {
        self.f.one()
    }
    fn basis_label(&self, _i: usize) -> String {
        "1".into()
    }
}
