//! Sparse multivariate polynomials over the rationals, with a small
//! expression parser used for operators, octic arrangements and
//! tetrahedron forms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{rational_string, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(nvars, [(e, Rational::one())])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            *p.terms.entry(e).or_insert_with(Rational::zero) += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(self.nvars, Rational::one());
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Substitute the value `x` for variable `i`, keeping the variable
    /// slot (it then only appears to the power zero).
    pub fn specialize(&self, i: usize, x: &Rational) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = e.clone();
                let k = std::mem::replace(&mut e2[i], 0);
                (e2, c * num_traits::pow(x.clone(), k as usize))
            }),
        )
    }

    /// Substitute polynomials (over `images[0].nvars()` variables) for
    /// every variable.
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let m = images.first().map_or(0, |p| p.nvars);
        let mut r = MultiPoly::zero(m);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(m, c.clone());
            for (img, &k) in images.iter().zip(e) {
                t = &t * &img.pow(k);
            }
            r = &r + &t;
        }
        r
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (e, c) in self.terms.iter().rev() {
            let neg = c < &Rational::zero();
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") })
                .collect();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                s.push_str(&rational_string(&a));
            } else {
                if !a.is_one() {
                    s.push_str(&rational_string(&a));
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars);
        MultiPoly::from_terms(self.nvars, self.terms.clone().into_iter().chain(o.terms.clone()))
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self + &(-o)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), -c)))
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *out.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        out.retain(|_, c: &mut Rational| !c.is_zero());
        MultiPoly { nvars: self.nvars, terms: out }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str, vars: &[&str]) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            c if c.is_whitespace() => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < cs.len() && cs[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = cs[start..=i].iter().collect();
                out.push(Tok::Num(txt.parse().unwrap()));
            }
            '+' => out.push(Tok::Plus),
            '-' | '−' => out.push(Tok::Minus),
            '*' | '·' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            c => match vars.iter().position(|v| v.contains(c)) {
                Some(k) => out.push(Tok::Var(k)),
                None => return Err(Error::Parse(format!("unexpected character `{c}`"))),
            },
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {}", self.pos))
    }

    fn constant(&self, c: Rational) -> MultiPoly {
        MultiPoly::constant(self.nvars, c)
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(self.nvars);
        let mut neg = false;
        if let Some(Tok::Minus) = self.peek() {
            self.next();
            neg = true;
        } else if let Some(Tok::Plus) = self.peek() {
            self.next();
        }
        loop {
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => neg = false,
                Some(Tok::Minus) => neg = true,
                _ => return Ok(acc),
            }
            self.next();
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Slash) => {
                    self.next();
                    let d = self.power()?;
                    let zero = vec![0; self.nvars];
                    let c = match d.terms.get(&zero) {
                        Some(c) if d.terms.len() == 1 => c.clone(),
                        _ => return Err(self.err("division by a non-constant")),
                    };
                    acc = acc.scale(&c.recip());
                }
                Some(Tok::Num(_) | Tok::Var(_) | Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.next();
            let Some(Tok::Num(e)) = self.next() else {
                return Err(self.err("expected integer exponent"));
            };
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(self.constant(Rational::from_integer(n))),
            Some(Tok::Var(k)) => Ok(MultiPoly::var(self.nvars, k)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(Tok::Minus) => Ok(-&self.power()?),
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Parse an expression in the given variables. Each entry of `vars`
/// lists the characters accepted for that variable; products may be
/// implicit and division is only allowed by constants.
pub fn parse_multipoly(s: &str, vars: &[&str]) -> Result<MultiPoly> {
    let mut p = Parser { toks: lex(s, vars)?, pos: 0, nvars: vars.len() };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn parse_and_eval() {
        let p = parse_multipoly("xyz(x+y)(1-z)/2 - 3", &["x", "y", "z"]).unwrap();
        let v = p.eval(&[int(1), int(2), int(3)]);
        assert_eq!(v, rat(1 * 2 * 3 * 3 * -2, 2) - int(3));
        assert_eq!(p.total_degree(), Some(5));
    }

    #[test]
    fn compose_and_specialize() {
        let p = parse_multipoly("x^2 + t*y", &["x", "y", "t"]).unwrap();
        let q = p.specialize(2, &int(3));
        assert_eq!(q, parse_multipoly("x^2 + 3y", &["x", "y", "t"]).unwrap());
        let imgs = [
            parse_multipoly("a+b", &["a", "b"]).unwrap(),
            parse_multipoly("a-b", &["a", "b"]).unwrap(),
            parse_multipoly("2", &["a", "b"]).unwrap(),
        ];
        let c = p.compose(&imgs);
        assert_eq!(c, parse_multipoly("a^2 + 2ab + b^2 + 2a - 2b", &["a", "b"]).unwrap());
    }

    #[test]
    fn display_roundtrip() {
        let names = ["x", "y"];
        let p = parse_multipoly("-x^2y/3 + 5 - y", &names).unwrap();
        assert_eq!(parse_multipoly(&p.display_with(&names), &names).unwrap(), p);
    }
}
