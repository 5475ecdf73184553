//! Dense univariate polynomials over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::Field;
use super::Rational;

/// Coefficients in ascending degree, never with a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Polynomial<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `x - a`.
    pub fn linear_root(a: F) -> Self {
        Self::new(vec![-a, F::one()])
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    /// Lowest `k` with nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_usize(k))
                .collect(),
        )
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = Self::one();
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    /// Exact division by `x^k`; lower coefficients are discarded.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// `p(q(x))` by Horner.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Self::constant(c.clone());
        }
        acc
    }

    /// `p(x + a)`.
    pub fn translate(&self, a: &F) -> Self {
        self.compose(&Self::new(vec![a.clone(), F::one()]))
    }

    /// `p(c x)`.
    pub fn scale_arg(&self, c: &F) -> Self {
        let mut pw = F::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a.clone() * pw.clone());
            pw = pw * c.clone();
        }
        Self::new(v)
    }

    /// `x^deg p(1/x)` for a given `deg >= degree`.
    pub fn reverse(&self, deg: usize) -> Self {
        let mut v = vec![F::zero(); deg + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[deg - k] = c.clone();
        }
        Self::new(v)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lc = d.leading().inv();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() * lc.clone();
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - c.clone() * dj.clone();
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Quotient when `d` divides exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero when both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Polynomial<G> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    /// Coefficients as rationals, when they all are.
    pub fn to_rational(&self) -> Option<Polynomial<Rational>> {
        self.coeffs
            .iter()
            .map(|c| c.to_rational())
            .collect::<Option<Vec<_>>>()
            .map(Polynomial::new)
    }

    /// Render in the variable `var`, highest degree first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut cs = c.to_string();
            let neg = cs.starts_with('-') && !cs[1..].contains(['+', '-']);
            if neg {
                cs.remove(0);
            }
            let compound = cs.contains(['+', '-']) || (k > 0 && cs.contains('/'));
            let body = match k {
                0 => cs,
                _ => {
                    let mono = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                    if cs == "1" {
                        mono
                    } else if compound {
                        format!("({cs})*{mono}")
                    } else {
                        format!("{cs}*{mono}")
                    }
                }
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, o: Self) -> Polynomial<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, o: Self) -> Polynomial<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, o: Self) -> Polynomial<F> {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(v)
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Polynomial<F> {
            type Output = Polynomial<F>;
            fn $m(self, o: Self) -> Polynomial<F> {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Field> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        -&self
    }
}

impl<F: Field> Zero for Polynomial<F> {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<F: Field> One for Polynomial<F> {
    fn one() -> Self {
        Polynomial::one()
    }
}

/// Falling factorial `x (x-1) ... (x-j+1)`.
pub fn falling_factorial<F: Field>(j: usize) -> Polynomial<F> {
    let mut p = Polynomial::one();
    for i in 0..j {
        p = &p * &Polynomial::linear_root(F::from_usize(i));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    type P = Polynomial<Rational>;

    #[test]
    fn display() {
        let p = P::from_i64s(&[-1, 0, 3]);
        assert_eq!(p.display_with("T"), "3*T^2 - 1");
        assert_eq!(P::from_i64s(&[0, -1]).to_string(), "-t");
    }

    #[test]
    fn div_rem_reassembles() {
        let a = P::from_i64s(&[5, -3, 0, 2, 7]);
        let b = P::from_i64s(&[1, 2, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = P::from_i64s(&[-1, 1]);
        let a = &f * &P::from_i64s(&[2, 0, 1]);
        let b = &f * &P::from_i64s(&[3, 1]);
        assert_eq!(a.gcd(&b), f);
    }

    #[test]
    fn translate_and_compose() {
        let p = P::from_i64s(&[0, 0, 1]);
        assert_eq!(p.translate(&int(1)), P::from_i64s(&[1, 2, 1]));
        assert_eq!(p.scale_arg(&int(3)), P::from_i64s(&[0, 0, 9]));
    }

    #[test]
    fn falling() {
        assert_eq!(falling_factorial::<Rational>(3), P::from_i64s(&[0, 2, -3, 1]));
    }
}
