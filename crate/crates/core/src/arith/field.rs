//! Coefficient fields.
//!
//! Everything above this module is generic over [`Field`]. Two fields are
//! provided: the rationals and quadratic extensions `Q(sqrt(d))`. Floating
//! point types are deliberately not fields here.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{PointValue, QuadraticNumber, Rational};

/// An exact commutative field of characteristic zero containing `Q`.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(q: &Rational) -> Self;

    /// `Some(q)` when the element lies in the prime field.
    fn to_rational(&self) -> Option<Rational>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn from_usize(n: usize) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// The point as an element of this field, if it lies there.
    fn from_point(p: &PointValue) -> Option<Self>;

    fn to_quadratic(&self) -> QuadraticNumber;

    /// Scalar that brings `coeffs` to canonical form when multiplied in.
    ///
    /// `lead` is the entry that must become positive (rationals) or one
    /// (extensions with irrational data). `coeffs` must contain a nonzero
    /// entry and `lead` must be nonzero.
    fn normalizer(coeffs: &[Self], lead: &Self) -> Self;
}

impl Field for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn inv(&self) -> Self {
        self.recip()
    }

    fn from_point(p: &PointValue) -> Option<Self> {
        p.as_rational().cloned()
    }

    fn to_quadratic(&self) -> QuadraticNumber {
        QuadraticNumber::rational(self.clone())
    }

    fn normalizer(coeffs: &[Self], lead: &Self) -> Self {
        rational_normalizer(coeffs.iter(), lead)
    }
}

/// `lcm(denominators) / gcd(scaled numerators)`, signed so that `lead`
/// becomes positive.
pub fn rational_normalizer<'a>(coeffs: impl Iterator<Item = &'a Rational> + Clone, lead: &Rational) -> Rational {
    let mut den = BigInt::one();
    for c in coeffs.clone() {
        den = den.lcm(c.denom());
    }
    let mut g = BigInt::zero();
    for c in coeffs {
        let n = c.numer() * (&den / c.denom());
        g = g.gcd(&n);
    }
    if g.is_zero() {
        return Rational::one();
    }
    let mut f = Rational::new(den, g);
    if lead.is_negative() {
        f = -f;
    }
    f
}
