//! Artinian local algebras presented by monomial normal forms.
//!
//! `Artinian::quotient` builds F[x_1..x_v] / ((relations) + m^(D+1)) with
//! the canonical monomial basis. Rewriting orients each relation by its
//! degree-lexicographically largest monomial; no Groebner completion is
//! attempted, which covers every truncated quotient used here. A second
//! constructor takes an explicit multiplication table, used for quotients
//! by ideals of an existing algebra.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{parse_mpoly, MPoly, Mono};
use crate::field::Field;
use crate::linalg::{row_space, Subspace};

use super::{ArtinianCoeff, Coeff};

/// Element = coordinate vector over the base field in the fixed basis.
/// Basis index 0 is the unit.
#[derive(Clone, Debug)]
pub struct Artinian<F: Field> {
    pub field: F,
    pub dim: usize,
    pub labels: Vec<String>,
    /// mul[i][j] = coordinates of b_i * b_j.
    pub mul_table: Vec<Vec<Vec<F::Elem>>>,
    /// Indices of basis elements spanning the maximal ideal (all but 0).
    pub max_ideal: Vec<usize>,
    /// For the monomial construction, the defining data (kept for display
    /// and for parsing ring-element strings).
    pub vars: Vec<String>,
    pub monomials: Vec<Mono>,
    rewrite: Vec<(Mono, MPoly<F::Elem>)>,
    truncation: u32,
}

impl<F: Field> PartialEq for Artinian<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.labels == other.labels && self.mul_table == other.mul_table
    }
}

fn mono_deg(m: &Mono) -> u32 {
    m.iter().sum()
}

/// Degree first, then lexicographic on exponents.
fn deglex(a: &Mono, b: &Mono) -> std::cmp::Ordering {
    mono_deg(a).cmp(&mono_deg(b)).then_with(|| a.cmp(b))
}

fn mono_divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn mono_label(vars: &[String], m: &Mono) -> String {
    if mono_deg(m) == 0 {
        return "1".into();
    }
    let mut s = String::new();
    for (v, &e) in vars.iter().zip(m) {
        if e == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('*');
        }
        if e == 1 {
            s.push_str(v);
        } else {
            s.push_str(&format!("{v}^{e}"));
        }
    }
    s
}

impl<F: Field> Artinian<F> {
    /// F[vars]/((relations) + (vars)^(truncation+1)).
    pub fn quotient(
        field: F,
        vars: &[String],
        relations: &[MPoly<F::Elem>],
        truncation: u32,
    ) -> Result<Self> {
        // Orient each relation: deglex-largest monomial -> rest.
        let mut rewrite: Vec<(Mono, MPoly<F::Elem>)> = Vec::new();
        for rel in relations {
            if rel.terms.is_empty() {
                continue;
            }
            let lead = rel
                .terms
                .keys()
                .max_by(|a, b| deglex(a, b))
                .unwrap()
                .clone();
            if mono_deg(&lead) == 0 {
                return Err(Error::CollapsedAlgebra(
                    "a relation has an invertible leading term".into(),
                ));
            }
            let c = rel.terms[&lead].clone();
            let cinv = field.inv(&c).expect("nonzero leading coefficient");
            let mut rest = MPoly::zero();
            for (m, co) in &rel.terms {
                if *m == lead {
                    continue;
                }
                rest.terms
                    .insert(m.clone(), field.neg(&field.mul(&cinv, co)));
            }
            // Constants on the right side would force 1 into the ideal
            // modulo m^2 handling; reject them outright.
            if rest.terms.keys().any(|m| mono_deg(m) == 0) {
                return Err(Error::CollapsedAlgebra(format!(
                    "relation rewrites {} to a constant",
                    mono_label(vars, &lead)
                )));
            }
            rewrite.push((lead, rest));
        }

        // Basis: monomials of degree <= truncation not divisible by any lead.
        let mut monomials: Vec<Mono> = Vec::new();
        let mut stack: Vec<Mono> = vec![vec![0; vars.len()]];
        let mut seen: std::collections::BTreeSet<Mono> = std::collections::BTreeSet::new();
        while let Some(m) = stack.pop() {
            if seen.contains(&m) || mono_deg(&m) > truncation {
                continue;
            }
            seen.insert(m.clone());
            for i in 0..vars.len() {
                let mut m2 = m.clone();
                m2[i] += 1;
                stack.push(m2);
            }
        }
        for m in seen {
            if !rewrite.iter().any(|(lead, _)| mono_divides(lead, &m)) {
                monomials.push(m);
            }
        }
        monomials.sort_by(deglex);
        if monomials.is_empty() || mono_deg(&monomials[0]) != 0 {
            return Err(Error::CollapsedAlgebra("1 lies in the ideal".into()));
        }

        let index: BTreeMap<Mono, usize> = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let labels: Vec<String> = monomials.iter().map(|m| mono_label(vars, m)).collect();
        let dim = monomials.len();

        let mut alg = Artinian {
            field,
            dim,
            labels,
            mul_table: vec![vec![vec![]; dim]; dim],
            max_ideal: (1..dim).collect(),
            vars: vars.to_vec(),
            monomials: monomials.clone(),
            rewrite,
            truncation,
        };
        for i in 0..dim {
            for j in 0..dim {
                let mut prod: Mono = monomials[i]
                    .iter()
                    .zip(&monomials[j])
                    .map(|(a, b)| a + b)
                    .collect();
                let mut p = MPoly::zero();
                p.terms.insert(std::mem::take(&mut prod), alg.field.one());
                let nf = alg.normal_form(&p);
                let mut v = vec![alg.field.zero(); dim];
                for (m, c) in nf.terms {
                    v[index[&m]] = c;
                }
                alg.mul_table[i][j] = v;
            }
        }
        alg.validate()?;
        Ok(alg)
    }

    /// Rewrite to normal form: kill degrees above the truncation, replace
    /// leading monomials until none is divisible by a lead.
    fn normal_form(&self, p: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        let f = &self.field;
        let mut work = p.clone();
        loop {
            work.terms.retain(|m, c| {
                mono_deg(m) <= self.truncation && !f.is_zero(c)
            });
            let target = work.terms.keys().find_map(|m| {
                self.rewrite
                    .iter()
                    .find(|(lead, _)| mono_divides(lead, m))
                    .map(|(lead, rest)| (m.clone(), lead.clone(), rest.clone()))
            });
            let (m, lead, rest) = match target {
                Some(t) => t,
                None => return work,
            };
            let c = work.terms.remove(&m).unwrap();
            let cofactor: Mono = m.iter().zip(&lead).map(|(a, b)| a - b).collect();
            for (rm, rc) in &rest.terms {
                let nm: Mono = rm.iter().zip(&cofactor).map(|(a, b)| a + b).collect();
                if mono_deg(&nm) > self.truncation {
                    continue;
                }
                let e = work.terms.entry(nm).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(&c, rc));
            }
        }
    }

    /// Build from an explicit multiplication table. `max_ideal` must list
    /// the basis indices spanning m; index 0 must be the unit.
    pub fn from_table(
        field: F,
        labels: Vec<String>,
        mul_table: Vec<Vec<Vec<F::Elem>>>,
        max_ideal: Vec<usize>,
    ) -> Result<Self> {
        let dim = labels.len();
        let alg = Artinian {
            field,
            dim,
            labels,
            mul_table,
            max_ideal,
            vars: vec![],
            monomials: vec![],
            rewrite: vec![],
            truncation: 0,
        };
        alg.validate()?;
        Ok(alg)
    }

    /// Structure-constant validation: b_0 is a two-sided unit, the product
    /// is commutative and associative on basis triples, m is an ideal and
    /// m^dim = 0.
    pub fn validate(&self) -> Result<()> {
        let f = &self.field;
        let n = self.dim;
        for i in 0..n {
            let ei = self.basis_elem(i);
            if self.mul_table[0][i] != ei.0 || self.mul_table[i][0] != ei.0 {
                return Err(Error::Internal(format!("b_0 is not a unit at index {i}")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.mul_table[i][j] != self.mul_table[j][i] {
                    return Err(Error::Internal(format!(
                        "multiplication not commutative at ({i},{j})"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ab_c = self.mul(
                        &AElem(self.mul_table[i][j].clone()),
                        &self.basis_elem(k),
                    );
                    let a_bc = self.mul(
                        &self.basis_elem(i),
                        &AElem(self.mul_table[j][k].clone()),
                    );
                    if ab_c != a_bc {
                        return Err(Error::Internal(format!(
                            "multiplication not associative at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        // m is spanned by the listed basis vectors and closed under
        // multiplication by everything; check products land back in m.
        for &i in &self.max_ideal {
            for j in 0..n {
                if !f.is_zero(&self.mul_table[i][j][0]) {
                    return Err(Error::Internal(format!(
                        "maximal ideal not an ideal: b_{i} * b_{j} has a unit component"
                    )));
                }
            }
        }
        // nilpotency of m: powers of the span must die out
        let mut power: Vec<Vec<F::Elem>> = self
            .max_ideal
            .iter()
            .map(|&i| self.basis_elem(i).0)
            .collect();
        for _ in 0..self.dim {
            if power.is_empty() {
                return Ok(());
            }
            let mut next = Vec::new();
            for v in &power {
                for &i in &self.max_ideal {
                    next.push(self.mul(&AElem(v.clone()), &self.basis_elem(i)).0);
                }
            }
            let sp = row_space(f, &next, self.dim);
            power = sp.basis;
        }
        if !power.is_empty() {
            return Err(Error::Internal("maximal ideal is not nilpotent".into()));
        }
        Ok(())
    }

    /// Smallest N with m^N = 0.
    pub fn nilpotency_index(&self) -> usize {
        let f = &self.field;
        let mut gens: Vec<Vec<F::Elem>> = self
            .max_ideal
            .iter()
            .map(|&i| self.basis_elem(i).0)
            .collect();
        let mut n = 1;
        while !gens.is_empty() {
            let mut next = Vec::new();
            for v in &gens {
                for &i in &self.max_ideal {
                    next.push(self.mul(&AElem(v.clone()), &self.basis_elem(i)).0);
                }
            }
            gens = row_space(f, &next, self.dim).basis;
            n += 1;
        }
        n
    }

    /// The maximal ideal as a subspace.
    pub fn max_ideal_subspace(&self) -> Subspace<F::Elem> {
        let vecs: Vec<Vec<F::Elem>> = self
            .max_ideal
            .iter()
            .map(|&i| self.basis_elem(i).0)
            .collect();
        row_space(&self.field, &vecs, self.dim)
    }

    /// Parse an element from the restricted expression grammar over the
    /// algebra's variables (monomial construction only).
    pub fn parse_elem(&self, src: &str) -> Result<AElem<F>> {
        if self.vars.is_empty() {
            // plain scalar
            let c = self.field.parse(src)?;
            return Ok(self.lift(&c));
        }
        let p = parse_mpoly(&self.field, &self.vars, src)?;
        let nf = self.normal_form(&p);
        let mut v = vec![self.field.zero(); self.dim];
        for (m, c) in nf.terms {
            let idx = self
                .monomials
                .iter()
                .position(|b| *b == m)
                .ok_or_else(|| Error::Internal("normal form outside basis".into()))?;
            v[idx] = c;
        }
        Ok(AElem(v))
    }
}

/// Element of an artinian algebra: coordinates in the fixed basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AElem<F: Field>(pub Vec<F::Elem>);

impl<F: Field> Coeff for Artinian<F> {
    type F = F;
    type Elem = AElem<F>;

    fn field(&self) -> &F {
        &self.field
    }
    fn zero(&self) -> AElem<F> {
        AElem(vec![self.field.zero(); self.dim])
    }
    fn one(&self) -> AElem<F> {
        self.basis_elem(0)
    }
    fn add(&self, a: &AElem<F>, b: &AElem<F>) -> AElem<F> {
        AElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| self.field.add(x, y))
                .collect(),
        )
    }
    fn neg(&self, a: &AElem<F>) -> AElem<F> {
        AElem(a.0.iter().map(|x| self.field.neg(x)).collect())
    }
    fn mul(&self, a: &AElem<F>, b: &AElem<F>) -> AElem<F> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (i, x) in a.0.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let c = f.mul(x, y);
                for (o, t) in out.iter_mut().zip(&self.mul_table[i][j]) {
                    *o = f.add(o, &f.mul(&c, t));
                }
            }
        }
        AElem(out)
    }
    fn scale(&self, c: &F::Elem, a: &AElem<F>) -> AElem<F> {
        AElem(a.0.iter().map(|x| self.field.mul(c, x)).collect())
    }
    fn residue(&self, a: &AElem<F>) -> F::Elem {
        a.0[0].clone()
    }
    fn lift(&self, c: &F::Elem) -> AElem<F> {
        let mut v = vec![self.field.zero(); self.dim];
        v[0] = c.clone();
        AElem(v)
    }
    fn inv(&self, a: &AElem<F>) -> Option<AElem<F>> {
        if !self.is_unit(a) {
            return None;
        }
        // solve (left-multiplication by a) x = 1
        let f = &self.field;
        let mut m = crate::linalg::zeros(f, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(a, &self.basis_elem(j));
            for i in 0..self.dim {
                *m.at_mut(i, j) = col.0[i].clone();
            }
        }
        let one = self.one();
        crate::linalg::solve(f, &m, &one.0).map(AElem)
    }
    fn fmt_elem(&self, a: &AElem<F>) -> String {
        let f = &self.field;
        let mut parts = Vec::new();
        for (i, c) in a.0.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let lbl = &self.labels[i];
            if i == 0 {
                parts.push(f.fmt_elem(c));
            } else if f.is_one(c) {
                parts.push(lbl.clone());
            } else {
                parts.push(format!("{}*{}", f.fmt_elem(c), lbl));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<F: Field> ArtinianCoeff for Artinian<F> {
    fn fdim(&self) -> usize {
        self.dim
    }
    fn coords(&self, a: &AElem<F>) -> Vec<F::Elem> {
        a.0.clone()
    }
    fn from_coords(&self, v: &[F::Elem]) -> AElem<F> {
        assert_eq!(v.len(), self.dim);
        AElem(v.to_vec())
    }
    fn basis_elem(&self, i: usize) -> AElem<F> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        AElem(v)
    }
    fn basis_label(&self, i: usize) -> String {
        self.labels[i].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn vars(vs: &[&str]) -> Vec<String> {
        vs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn dual_numbers() {
        let f = Rationals;
        let a = Artinian::quotient(f.clone(), &vars(&["e"]), &[], 1).unwrap();
        assert_eq!(a.dim, 2);
        let eps = a.parse_elem("e").unwrap();
        assert!(a.is_zero(&a.mul(&eps, &eps)));
        assert_eq!(a.nilpotency_index(), 2);
    }

    #[test]
    fn quadric_cone_truncated() {
        let f = Rationals;
        let rel = parse_mpoly(&f, &vars(&["x", "y", "z"]), "x*y - z^2").unwrap();
        let a = Artinian::quotient(f.clone(), &vars(&["x", "y", "z"]), &[rel], 2).unwrap();
        assert_eq!(a.dim, 9);
        // xy = z^2 in the quotient
        let x = a.parse_elem("x").unwrap();
        let y = a.parse_elem("y").unwrap();
        let z = a.parse_elem("z").unwrap();
        assert_eq!(a.mul(&x, &y), a.mul(&z, &z));
        // m^3 = 0
        let m3 = a.mul(&a.mul(&x, &x), &x);
        assert!(a.is_zero(&m3));
    }

    #[test]
    fn degenerate_truncation_gives_base_field() {
        let f = PrimeField::new(3).unwrap();
        let a = Artinian::quotient(f, &vars(&["e"]), &[], 0).unwrap();
        assert_eq!(a.dim, 1);
    }

    #[test]
    fn collapsed_algebra_detected() {
        let f = Rationals;
        let rel = parse_mpoly(&f, &vars(&["x"]), "x - 1").unwrap();
        assert!(matches!(
            Artinian::quotient(f, &vars(&["x"]), &[rel], 2),
            Err(Error::CollapsedAlgebra(_))
        ));
    }

    #[test]
    fn units_invert_exactly() {
        let f = Rationals;
        let a = Artinian::quotient(f.clone(), &vars(&["e"]), &[], 3).unwrap();
        let u = a.parse_elem("1 + e + e^2").unwrap();
        let inv = a.inv(&u).unwrap();
        assert_eq!(a.mul(&u, &inv), a.one());
        let eps = a.parse_elem("e").unwrap();
        assert!(a.inv(&eps).is_none());
    }
}
