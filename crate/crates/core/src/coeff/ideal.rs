//! Ideals of an artinian local algebra with canonical echelon bases, so
//! equality and membership are syntactic.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{row_space, subspace_contains, Subspace};

use super::artinian::{AElem, Artinian};
use super::{ArtinianCoeff, Coeff};

#[derive(Clone, Debug)]
pub struct Ideal<F: Field> {
    pub ambient: Arc<Artinian<F>>,
    pub generators: Vec<AElem<F>>,
    pub space: Subspace<F::Elem>,
}

impl<F: Field> PartialEq for Ideal<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.space == other.space
    }
}

impl<F: Field> Ideal<F> {
    /// The ideal generated by `gens`: the F-span of b * g over all basis
    /// elements b, which is already closed under multiplication.
    pub fn new(ambient: Arc<Artinian<F>>, gens: Vec<AElem<F>>) -> Self {
        let mut vecs = Vec::new();
        for g in &gens {
            for i in 0..ambient.fdim() {
                vecs.push(ambient.mul(&ambient.basis_elem(i), g).0);
            }
        }
        let space = row_space(&ambient.field, &vecs, ambient.fdim());
        Ideal {
            ambient,
            generators: gens,
            space,
        }
    }

    pub fn zero(ambient: Arc<Artinian<F>>) -> Self {
        Ideal::new(ambient, vec![])
    }

    pub fn max_ideal(ambient: Arc<Artinian<F>>) -> Self {
        let gens: Vec<AElem<F>> = ambient
            .max_ideal
            .iter()
            .map(|&i| ambient.basis_elem(i))
            .collect();
        Ideal::new(ambient, gens)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn contains(&self, x: &AElem<F>) -> bool {
        subspace_contains(&self.ambient.field, &self.space, &x.0)
    }

    pub fn contains_ideal(&self, other: &Ideal<F>) -> bool {
        other
            .space
            .basis
            .iter()
            .all(|v| subspace_contains(&self.ambient.field, &self.space, v))
    }

    pub fn sum(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        self.check_ambient(other)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(Ideal::new(self.ambient.clone(), gens))
    }

    /// Ideal generated by pairwise products of generators.
    pub fn product(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        self.check_ambient(other)?;
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                gens.push(self.ambient.mul(a, b));
            }
        }
        Ok(Ideal::new(self.ambient.clone(), gens))
    }

    fn check_ambient(&self, other: &Ideal<F>) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::MismatchedAmbient);
        }
        Ok(())
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
    fn square_of_max_ideal_in_dual_numbers_is_zero() {
        let f = Rationals;
        let vars: Vec<String> = vec!["e".into()];
        let a = Arc::new(Artinian::quotient(f, &vars, &[], 1).unwrap());
        let m = Ideal::max_ideal(a.clone());
        let m2 = m.product(&m).unwrap();
        assert_eq!(m2.dim(), 0);
        assert!(m.contains(&a.parse_elem("e").unwrap()));
    }

    #[test]
    fn product_of_ideals_in_the_quadric_cone() {
        let a = quadric();
        let yz = Ideal::new(
            a.clone(),
            vec![a.parse_elem("y").unwrap(), a.parse_elem("z").unwrap()],
        );
        let xz = Ideal::new(
            a.clone(),
            vec![a.parse_elem("x").unwrap(), a.parse_elem("z").unwrap()],
        );
        let prod = yz.product(&xz).unwrap();
        // z^2 = x*y lies in the product of (y,z) and (x,z)
        assert!(prod.contains(&a.parse_elem("z^2").unwrap()));
        assert!(prod.contains(&a.parse_elem("x*y").unwrap()));
    }

    #[test]
    fn mismatched_ambient_is_an_error() {
        let a = quadric();
        let f = Rationals;
        let vars: Vec<String> = vec!["e".into()];
        let b = Arc::new(Artinian::quotient(f, &vars, &[], 1).unwrap());
        let i = Ideal::max_ideal(a);
        let j = Ideal::max_ideal(b);
        assert!(matches!(i.sum(&j), Err(Error::MismatchedAmbient)));
    }
}
