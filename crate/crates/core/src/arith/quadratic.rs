//! Elements `a + b*sqrt(d)` of a quadratic field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{rational_normalizer, Field};
use super::{parse_rational, PointValue, Rational};
use crate::error::{Error, Result};

/// `a + b*sqrt(d)` with `d` squarefree, `d != 0, 1`.
///
/// Elements with `b == 0` are stored with `d == 0` and combine with any
/// field. Mixing two different nonzero `d` is a contract violation and
/// panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
    d: i64,
}

/// Split `n` as `f^2 * core` with `core` squarefree. Returns `(f, core)`.
pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut f = BigInt::one();
    let mut core = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            f *= &p;
        }
        if e % 2 == 1 {
            core *= &p;
        }
        p += 1u32;
    }
    core *= m;
    (f, core * sign)
}

impl QuadraticNumber {
    /// Build `a + b*sqrt(d)`; `d` is reduced to its squarefree part.
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDiscriminant(d));
        }
        let (f, core) = squarefree_split(&BigInt::from(d));
        let b = b * Rational::from_integer(f);
        if core.is_one() {
            return Ok(Self::rational(a + b));
        }
        let core = core.to_i64().ok_or(Error::InvalidDiscriminant(d))?;
        Ok(Self::raw(a, b, core))
    }

    fn raw(a: Rational, b: Rational, d: i64) -> Self {
        if b.is_zero() {
            Self { a, b, d: 0 }
        } else {
            Self { a, b, d }
        }
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: 0 }
    }

    /// `sqrt(q)` for a rational `q`, placed in `Q(sqrt(core))`.
    pub fn sqrt_of(q: &Rational) -> Result<Self> {
        if q.is_zero() {
            return Ok(Self::rational(Rational::zero()));
        }
        // sqrt(n/m) = sqrt(n*m)/m
        let nm = q.numer() * q.denom();
        let (f, core) = squarefree_split(&nm);
        let coef = Rational::new(f, q.denom().clone());
        if core.is_one() {
            return Ok(Self::rational(coef));
        }
        let core = core.to_i64().ok_or(Error::InvalidDiscriminant(0))?;
        Ok(Self::raw(Rational::zero(), coef, core))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// The discriminant tag, `0` for elements of `Q`.
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self::raw(self.a.clone(), -self.b.clone(), self.d)
    }

    /// `(a + b√d)(a − b√d) = a² − d·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(self.d.into()) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    fn join(x: i64, y: i64) -> i64 {
        match (x, y) {
            (0, y) => y,
            (x, 0) => x,
            (x, y) if x == y => x,
            (x, y) => panic!("mixed quadratic fields Q(sqrt({x})) and Q(sqrt({y}))"),
        }
    }

    /// Lexicographic order on `(a, b)`.
    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }

    /// Parse `"-1/4"`, `"sqrt(2)"`, `"(-1+sqrt(-3))/4"`, `"3-2*sqrt(5)"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad quadratic number `{s}`"));
        if !s.contains("sqrt(") {
            return Ok(Self::rational(parse_rational(&s)?));
        }
        // "(inner)/den" when the opening paren is not the sqrt's own
        let (inner, den) = match s.strip_prefix('(') {
            Some(rest) => {
                let mut depth = 1;
                let close = rest
                    .char_indices()
                    .find(|&(_, c)| {
                        depth += match c {
                            '(' => 1,
                            ')' => -1,
                            _ => 0,
                        };
                        depth == 0
                    })
                    .map(|(i, _)| i)
                    .ok_or_else(bad)?;
                let tail = &rest[close + 1..];
                let den = match tail {
                    "" => Rational::one(),
                    t => parse_rational(t.strip_prefix('/').ok_or_else(bad)?)?,
                };
                (&rest[..close], den)
            }
            None => (s.as_str(), Rational::one()),
        };
        let spos = inner.find("sqrt(").ok_or_else(bad)?;
        let send = spos + inner[spos..].find(')').ok_or_else(bad)?;
        let d: i64 = inner[spos + 5..send].parse().map_err(|_| bad())?;
        let head = &inner[..spos];
        let (a_txt, b_txt) = match head.rfind(['+', '-']) {
            Some(i) if i > 0 => (&head[..i], &head[i..]),
            _ => ("", head),
        };
        let a = if a_txt.is_empty() { Rational::zero() } else { parse_rational(a_txt)? };
        let mut b = match b_txt.trim_end_matches('*') {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            t => parse_rational(t)?,
        };
        match &inner[send + 1..] {
            "" => {}
            t => b /= parse_rational(t.strip_prefix('/').ok_or_else(bad)?)?,
        }
        Self::new(a / den.clone(), b / den, d)
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_lex(other).then_with(|| self.d.cmp(&other.d))
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let den = self.a.denom().lcm(self.b.denom());
        let na = self.a.numer() * (&den / self.a.denom());
        let nb = self.b.numer() * (&den / self.b.denom());
        let mut s = String::new();
        if !na.is_zero() {
            s.push_str(&na.to_string());
            s.push(if nb.is_negative() { '-' } else { '+' });
        } else if nb.is_negative() {
            s.push('-');
        }
        let nb = nb.abs();
        if !nb.is_one() {
            s.push_str(&format!("{nb}*"));
        }
        s.push_str(&format!("sqrt({})", self.d));
        if den.is_one() {
            write!(f, "{s}")
        } else if na.is_zero() {
            write!(f, "{s}/{den}")
        } else {
            write!(f, "({s})/{den}")
        }
    }
}

impl Add for QuadraticNumber {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = Self::join(self.d, o.d);
        Self::raw(self.a + o.a, self.b + o.b, d)
    }
}

impl Sub for QuadraticNumber {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let d = Self::join(self.d, o.d);
        Self::raw(self.a - o.a, self.b - o.b, d)
    }
}

impl Mul for QuadraticNumber {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = Self::join(self.d, o.d);
        let dd = Rational::from_integer(d.into());
        let a = &self.a * &o.a + dd * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::raw(a, b, d)
    }
}

impl Div for QuadraticNumber {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in quadratic field");
        let c = o.conjugate();
        let p = self * c;
        Self::raw(p.a / n.clone(), p.b / n, p.d)
    }
}

impl Neg for QuadraticNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::raw(-self.a, -self.b, self.d)
    }
}

impl Zero for QuadraticNumber {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadraticNumber {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Field for QuadraticNumber {
    fn from_rational(q: &Rational) -> Self {
        Self::rational(q.clone())
    }

    fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    fn from_point(p: &PointValue) -> Option<Self> {
        Some(p.to_quadratic())
    }

    fn to_quadratic(&self) -> QuadraticNumber {
        self.clone()
    }

    fn normalizer(coeffs: &[Self], lead: &Self) -> Self {
        let f = lead.inv();
        let scaled: Option<Vec<Rational>> =
            coeffs.iter().map(|c| (c.clone() * f.clone()).to_rational()).collect();
        match scaled {
            Some(rs) => {
                let g = rational_normalizer(rs.iter(), &Rational::one());
                f * Self::rational(g)
            }
            None => f,
        }
    }
}

impl From<Rational> for QuadraticNumber {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadraticNumber {
        QuadraticNumber::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["(-1+sqrt(-3))/4", "(-1-sqrt(-3))/4", "sqrt(2)", "3-2*sqrt(5)", "-1/4", "sqrt(-3)/4", "-sqrt(2)"] {
            assert_eq!(q(s).to_string(), s, "{s}");
        }
    }

    #[test]
    fn squarefree_reduction() {
        let x = QuadraticNumber::new(Rational::zero(), Rational::one(), 12).unwrap();
        assert_eq!(x, q("2*sqrt(3)"));
        let y = QuadraticNumber::new(Rational::one(), Rational::one(), 4).unwrap();
        assert_eq!(y, q("3"));
    }

    #[test]
    fn norm_is_product_with_conjugate() {
        let x = q("(-1+sqrt(-3))/4");
        let p = x.clone() * x.conjugate();
        assert!(p.is_rational());
        assert_eq!(p.a(), &x.norm());
        assert_eq!(x.norm(), Rational::new(1.into(), 4.into()));
    }

    #[test]
    fn inverse() {
        let x = q("3-2*sqrt(5)");
        assert_eq!(x.clone() * x.inv(), QuadraticNumber::one());
    }

    #[test]
    fn sqrt_of_rational() {
        assert_eq!(QuadraticNumber::sqrt_of(&Rational::new((-3).into(), 16.into())).unwrap(), q("sqrt(-3)/4"));
        assert_eq!(QuadraticNumber::sqrt_of(&Rational::new(9.into(), 4.into())).unwrap(), q("3/2"));
        assert_eq!(QuadraticNumber::sqrt_of(&Rational::new(1.into(), 2.into())).unwrap(), q("sqrt(2)/2"));
    }

    #[test]
    #[should_panic(expected = "mixed quadratic fields")]
    fn mixing_fields_panics() {
        let _ = q("sqrt(2)") + q("sqrt(3)");
    }
}
