//! Reduced quotients of polynomials.

use std::fmt;

use super::field::Field;
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction<F> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

impl<F: Field> RationalFunction<F> {
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(Self { num, den: Polynomial::one() });
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let lc = den.leading().inv();
        Ok(Self { num: num.scale(&lc), den: den.scale(&lc) })
    }

    pub fn num(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<F> {
        &self.den
    }

    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl<F: Field> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Rational};

    #[test]
    fn reduces_common_factor() {
        let p = |c: &[i64]| Polynomial::<Rational>::from_i64s(c);
        let f = RationalFunction::new(p(&[-2, 0, 2]), p(&[-3, 3])).unwrap();
        assert_eq!(f.num(), &p(&[2, 2]).scale(&Rational::new(1.into(), 3.into())));
        assert_eq!(f.den(), &p(&[1]));
        assert_eq!(f.eval(&int(2)), Some(int(2)));
    }
}
