//! Parser for the restricted arithmetic grammar used in task files:
//! `+  -  *  ^  integer literals  variables  ( )`.
//!
//! Expressions denote multivariate polynomials with coefficients in the
//! base field; single-variable callers reuse the same grammar.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::field::Field;
use crate::poly::{p_add, p_mul, p_one, p_zero, Poly, RatFunc};

/// Exponent vector, one slot per declared variable.
pub type Mono = Vec<u32>;

/// Sparse multivariate polynomial: monomial -> coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<E> {
    pub terms: BTreeMap<Mono, E>,
}

impl<E> MPoly<E> {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }
}

pub fn mp_add<F: Field>(f: &F, a: &MPoly<F::Elem>, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
    let mut out = a.clone();
    for (m, c) in &b.terms {
        let entry = out.terms.entry(m.clone()).or_insert_with(|| f.zero());
        *entry = f.add(entry, c);
    }
    out.terms.retain(|_, c| !f.is_zero(c));
    out
}

pub fn mp_neg<F: Field>(f: &F, a: &MPoly<F::Elem>) -> MPoly<F::Elem> {
    MPoly {
        terms: a
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f.neg(c)))
            .collect(),
    }
}

pub fn mp_mul<F: Field>(f: &F, a: &MPoly<F::Elem>, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
    let mut out = MPoly::zero();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let m: Mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let c = f.mul(ca, cb);
            let entry = out.terms.entry(m).or_insert_with(|| f.zero());
            *entry = f.add(entry, &c);
        }
    }
    out.terms.retain(|_, c| !f.is_zero(c));
    out
}

pub fn mp_const<F: Field>(f: &F, c: F::Elem, nvars: usize) -> MPoly<F::Elem> {
    let mut out = MPoly::zero();
    if !f.is_zero(&c) {
        out.terms.insert(vec![0; nvars], c);
    }
    out
}

pub fn mp_var<F: Field>(f: &F, idx: usize, nvars: usize) -> MPoly<F::Elem> {
    let mut m = vec![0u32; nvars];
    m[idx] = 1;
    let mut out = MPoly::zero();
    out.terms.insert(m, f.one());
    out
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer {
            src: s.as_bytes(),
            pos: 0,
        }
    }
    fn next_tok(&mut self) -> Result<Tok, Error> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(Tok::End);
        }
        let c = self.src[self.pos];
        self.pos += 1;
        match c {
            b'+' => Ok(Tok::Plus),
            b'-' => Ok(Tok::Minus),
            // a unicode minus sign sneaks into hand-written task files easily
            0xE2 if self.src.get(self.pos) == Some(&0x88) && self.src.get(self.pos + 1) == Some(&0x92) =>
            {
                self.pos += 2;
                Ok(Tok::Minus)
            }
            b'*' => Ok(Tok::Star),
            b'^' => Ok(Tok::Caret),
            b'(' => Ok(Tok::LParen),
            b')' => Ok(Tok::RParen),
            b'0'..=b'9' => {
                let start = self.pos - 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                s.parse::<i64>()
                    .map(Tok::Num)
                    .map_err(|_| Error::Parse(format!("integer literal `{s}` out of range")))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos - 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(Tok::Ident(
                    std::str::from_utf8(&self.src[start..self.pos])
                        .unwrap()
                        .to_string(),
                ))
            }
            c => Err(Error::Parse(format!("unexpected character `{}`", c as char))),
        }
    }
}

pub struct Parser<'a, F: Field> {
    field: &'a F,
    vars: &'a [String],
    lexer: Lexer<'a>,
    cur: Tok,
}

impl<'a, F: Field> Parser<'a, F> {
    pub fn new(field: &'a F, vars: &'a [String], src: &'a str) -> Result<Self, Error> {
        let mut lexer = Lexer::new(src);
        let cur = lexer.next_tok()?;
        Ok(Parser {
            field,
            vars,
            lexer,
            cur,
        })
    }

    fn bump(&mut self) -> Result<(), Error> {
        self.cur = self.lexer.next_tok()?;
        Ok(())
    }

    pub fn parse_expr(&mut self) -> Result<MPoly<F::Elem>, Error> {
        let mut acc = self.parse_term()?;
        loop {
            match self.cur {
                Tok::Plus => {
                    self.bump()?;
                    let t = self.parse_term()?;
                    acc = mp_add(self.field, &acc, &t);
                }
                Tok::Minus => {
                    self.bump()?;
                    let t = self.parse_term()?;
                    acc = mp_add(self.field, &acc, &mp_neg(self.field, &t));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<MPoly<F::Elem>, Error> {
        let mut acc = self.parse_factor()?;
        while self.cur == Tok::Star {
            self.bump()?;
            let t = self.parse_factor()?;
            acc = mp_mul(self.field, &acc, &t);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<MPoly<F::Elem>, Error> {
        let base = self.parse_atom()?;
        if self.cur == Tok::Caret {
            self.bump()?;
            let e = match self.cur {
                Tok::Num(n) if n >= 0 => n as u32,
                _ => return Err(Error::Parse("exponent must be a nonnegative integer".into())),
            };
            self.bump()?;
            let mut acc = mp_const(self.field, self.field.one(), self.vars.len());
            for _ in 0..e {
                acc = mp_mul(self.field, &acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<MPoly<F::Elem>, Error> {
        match self.cur.clone() {
            Tok::Num(n) => {
                self.bump()?;
                Ok(mp_const(
                    self.field,
                    self.field.from_i64(n),
                    self.vars.len(),
                ))
            }
            Tok::Minus => {
                self.bump()?;
                Ok(mp_neg(self.field, &self.parse_atom()?))
            }
            Tok::Ident(name) => {
                self.bump()?;
                let idx = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                Ok(mp_var(self.field, idx, self.vars.len()))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.parse_expr()?;
                if self.cur != Tok::RParen {
                    return Err(Error::Parse("expected `)`".into()));
                }
                self.bump()?;
                Ok(e)
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }

    pub fn finish(self) -> Result<(), Error> {
        if self.cur != Tok::End {
            return Err(Error::Parse(format!("trailing input at {:?}", self.cur)));
        }
        Ok(())
    }
}

pub fn parse_mpoly<F: Field>(f: &F, vars: &[String], src: &str) -> Result<MPoly<F::Elem>, Error> {
    let mut p = Parser::new(f, vars, src)?;
    let e = p.parse_expr()?;
    p.finish()?;
    Ok(e)
}

/// Parse a univariate polynomial in `var` into dense form.
pub fn parse_poly1<F: Field>(f: &F, src: &str, var: &str) -> Result<Poly<F::Elem>, Error> {
    let vars = vec![var.to_string()];
    let mp = parse_mpoly(f, &vars, src)?;
    let mut out = p_zero(f);
    for (m, c) in mp.terms {
        let mut t = p_one(f);
        for _ in 0..m[0] {
            t = p_mul(f, &t, &crate::poly::p_monomial(f, 1));
        }
        t = crate::poly::p_scale(f, &c, &t);
        out = p_add(f, &out, &t);
    }
    Ok(out)
}

/// Parse `num` or `num/den` of univariate polynomial expressions.
pub fn parse_ratfunc<F: Field>(f: &F, src: &str, var: &str) -> Result<RatFunc<F::Elem>, Error> {
    // split on a top-level '/': the polynomial grammar has no division, so
    // any '/' at depth 0 is the fraction bar (rational scalars like 1/2 are
    // written as fractions of constant polynomials anyway)
    let bytes = src.as_bytes();
    let mut depth = 0i32;
    let mut split = None;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'/' if depth == 0 => {
                split = Some(i);
                break;
            }
            _ => {}
        }
    }
    let (ns, ds) = match split {
        Some(i) => (&src[..i], &src[i + 1..]),
        None => (src, ""),
    };
    let num = parse_poly1(f, ns, var)?;
    let den = if ds.trim().is_empty() {
        p_one(f)
    } else {
        parse_poly1(f, ds, var)?
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{src}`")));
    }
    Ok(crate::poly::rf_normalize(f, num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn parses_the_quadric_relation() {
        let f = Rationals;
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let p = parse_mpoly(&f, &vars, "x*y - z^2").unwrap();
        assert_eq!(p.terms.len(), 2);
        assert!(p.terms.contains_key(&vec![1, 1, 0]));
        assert_eq!(p.terms[&vec![0, 0, 2]], f.from_i64(-1));
    }

    #[test]
    fn rejects_unknown_variables() {
        let f = Rationals;
        let vars: Vec<String> = vec!["x".into()];
        assert!(parse_mpoly(&f, &vars, "x + w").is_err());
    }

    #[test]
    fn parses_ratfuncs() {
        let f = Rationals;
        let r = parse_ratfunc(&f, "t^2/(1 + t)", "t").unwrap();
        assert_eq!(crate::poly::rf_valuation(&f, &r), Some(2));
        let s = parse_ratfunc(&f, "2*t - 1", "t").unwrap();
        assert!(crate::poly::rf_eval0(&f, &s).is_some());
    }
}
