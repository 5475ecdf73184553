//! Truncated power series `sum c_k t^k mod t^(N+1)`.

use std::ops::{Add, Mul, Neg, Sub};


use super::field::Field;
use super::Rational;
use crate::error::{Error, Result};

/// Coefficients `c_0 .. c_N`; the series is known modulo `t^(N+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries<F> {
    coeffs: Vec<F>,
}

impl<F: Field> PowerSeries<F> {
    /// Series known through `t^(coeffs.len() - 1)`.
    pub fn new(coeffs: Vec<F>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least one coefficient");
        Self { coeffs }
    }

    /// Pad with zeros or cut to truncation order `n`.
    pub fn with_order(mut coeffs: Vec<F>, n: usize) -> Self {
        coeffs.resize(n + 1, F::zero());
        Self { coeffs }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> F) -> Self {
        Self { coeffs: (0..=n).map(f).collect() }
    }

    pub fn one(n: usize) -> Self {
        Self::with_order(vec![F::one()], n)
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Coefficient of `t^k`; reading past the truncation order is a bug.
    pub fn coeff(&self, k: usize) -> F {
        debug_assert!(k <= self.order(), "coefficient {k} beyond truncation order {}", self.order());
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn truncate(&self, n: usize) -> Self {
        assert!(n <= self.order());
        Self { coeffs: self.coeffs[..=n].to_vec() }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// `1/s`, requiring a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NonUnitConstantTerm);
        }
        let inv0 = c0.inv();
        let n = self.order();
        let mut r: Vec<F> = Vec::with_capacity(n + 1);
        r.push(inv0.clone());
        for m in 1..=n {
            let mut acc = F::zero();
            for k in 1..=m {
                acc = acc + self.coeffs[k].clone() * r[m - k].clone();
            }
            r.push(-acc * inv0.clone());
        }
        Ok(Self { coeffs: r })
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = Self::one(self.order());
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// `s^e` for `s` with constant term one, via
/// `n r_n = sum_{k=1..n} ((e+1)k - n) s_k r_{n-k}`.
pub fn series_binomial_power<F: Field>(s: &PowerSeries<F>, e: &Rational) -> Result<PowerSeries<F>> {
    if !s.coeffs[0].is_one() {
        return Err(Error::NonUnitConstantTerm);
    }
    let n = s.order();
    let e1 = F::from_rational(e) + F::one();
    let mut r: Vec<F> = Vec::with_capacity(n + 1);
    r.push(F::one());
    for m in 1..=n {
        let mut acc = F::zero();
        for k in 1..=m {
            let sk = &s.coeffs[k];
            if sk.is_zero() {
                continue;
            }
            let w = e1.clone() * F::from_usize(k) - F::from_usize(m);
            acc = acc + w * sk.clone() * r[m - k].clone();
        }
        r.push(acc / F::from_usize(m));
    }
    Ok(PowerSeries { coeffs: r })
}

impl<F: Field> Add for &PowerSeries<F> {
    type Output = PowerSeries<F>;
    fn add(self, o: Self) -> PowerSeries<F> {
        let n = self.order().min(o.order());
        PowerSeries::from_fn(n, |k| self.coeffs[k].clone() + o.coeffs[k].clone())
    }
}

impl<F: Field> Sub for &PowerSeries<F> {
    type Output = PowerSeries<F>;
    fn sub(self, o: Self) -> PowerSeries<F> {
        let n = self.order().min(o.order());
        PowerSeries::from_fn(n, |k| self.coeffs[k].clone() - o.coeffs[k].clone())
    }
}

impl<F: Field> Mul for &PowerSeries<F> {
    type Output = PowerSeries<F>;
    fn mul(self, o: Self) -> PowerSeries<F> {
        let n = self.order().min(o.order());
        PowerSeries::from_fn(n, |m| {
            let mut acc = F::zero();
            for k in 0..=m {
                if !self.coeffs[k].is_zero() && !o.coeffs[m - k].is_zero() {
                    acc = acc + self.coeffs[k].clone() * o.coeffs[m - k].clone();
                }
            }
            acc
        })
    }
}

impl<F: Field> Neg for &PowerSeries<F> {
    type Output = PowerSeries<F>;
    fn neg(self) -> PowerSeries<F> {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use num_bigint::BigInt;
    use num_traits::One;

    type S = PowerSeries<Rational>;

    /// Generalized binomial coefficient `C(e, k)` as an independent oracle.
    fn binom(e: &Rational, k: usize) -> Rational {
        let mut c = Rational::one();
        for i in 0..k {
            c = c * (e - int(i as i64)) / int(i as i64 + 1);
        }
        c
    }

    #[test]
    fn inverse_square_root_of_one_plus_t() {
        let s = S::with_order(vec![int(1), int(1)], 8);
        let r = series_binomial_power(&s, &rat(-1, 2)).unwrap();
        assert_eq!(&r.coeffs()[..4], &[int(1), rat(-1, 2), rat(3, 8), rat(-5, 16)]);
        for k in 0..=8 {
            assert_eq!(r.coeff(k), binom(&rat(-1, 2), k));
        }
        // r^2 * (1+t) = 1
        let back = &(&r * &r) * &s;
        assert_eq!(back, S::one(8));
    }

    #[test]
    fn trivial_powers() {
        let s = S::with_order(vec![int(1), int(1)], 5);
        assert_eq!(series_binomial_power(&s, &int(0)).unwrap(), S::one(5));
        assert_eq!(series_binomial_power(&s, &int(1)).unwrap(), s);
        let bad = S::with_order(vec![int(2), int(1)], 5);
        assert_eq!(series_binomial_power(&bad, &int(1)), Err(Error::NonUnitConstantTerm));
    }

    #[test]
    fn truncation_is_min() {
        let a = S::one(3);
        let b = S::one(7);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn inverse_of_geometric() {
        let g = S::from_fn(10, |_| Rational::from_integer(BigInt::one()));
        let inv = g.inverse().unwrap();
        assert_eq!(inv, S::with_order(vec![int(1), int(-1)], 10));
    }
}
