//! Exact arithmetic: rationals, quadratic numbers, polynomials, series.

pub mod factor;
pub mod field;
pub mod linalg;
pub mod mpoly;
pub mod poly;
pub mod quadratic;
pub mod ratfunc;
pub mod series;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use factor::{quadratic_field_roots, rational_roots, roots_in_quadratic_closure, roots_with_multiplicity, squarefree_factor};
pub use field::Field;
pub use mpoly::{parse_multipoly, MultiPoly};
pub use poly::Polynomial;
pub use quadratic::QuadraticNumber;
pub use ratfunc::RationalFunction;
pub use series::{series_binomial_power, PowerSeries};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"3"`, `"-5/4"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.strip_prefix('+').unwrap_or(n).parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `"num/den"`, or just `"num"` for integers.
pub fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A rational or quadratic-irrational number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointValue {
    Rational(Rational),
    Quadratic(QuadraticNumber),
}

impl PointValue {
    pub fn from_quadratic(q: QuadraticNumber) -> Self {
        match q.to_rational() {
            Some(r) => PointValue::Rational(r),
            None => PointValue::Quadratic(q),
        }
    }

    pub fn to_quadratic(&self) -> QuadraticNumber {
        match self {
            PointValue::Rational(r) => QuadraticNumber::rational(r.clone()),
            PointValue::Quadratic(q) => q.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            PointValue::Rational(r) => Some(r),
            PointValue::Quadratic(_) => None,
        }
    }

    pub fn conjugate(&self) -> Self {
        match self {
            PointValue::Rational(_) => self.clone(),
            PointValue::Quadratic(q) => PointValue::Quadratic(q.conjugate()),
        }
    }

    /// Discriminant tag, `0` for rationals.
    pub fn discriminant(&self) -> i64 {
        match self {
            PointValue::Rational(_) => 0,
            PointValue::Quadratic(q) => q.d(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(Self::from_quadratic(QuadraticNumber::parse(s)?))
    }
}

impl PartialOrd for PointValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PointValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_quadratic().cmp(&other.to_quadratic())
    }
}

impl fmt::Display for PointValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointValue::Rational(r) => write!(f, "{r}"),
            PointValue::Quadratic(q) => write!(f, "{q}"),
        }
    }
}

impl From<Rational> for PointValue {
    fn from(r: Rational) -> Self {
        PointValue::Rational(r)
    }
}
