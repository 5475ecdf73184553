//! Squarefree decomposition and roots in `Q` and quadratic fields.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::poly::Polynomial;
use super::quadratic::QuadraticNumber;
use super::{PointValue, Rational};
use crate::error::{Error, Result};

type P = Polynomial<Rational>;

/// Integer-coefficient primitive part with positive leading coefficient.
pub fn primitive(p: &P) -> P {
    if p.is_zero() {
        return p.clone();
    }
    let f = Rational::normalizer(p.coeffs(), &p.leading());
    p.scale(&f)
}

/// Yun's algorithm. Factors are primitive with positive leading coefficient.
pub fn squarefree_factor(p: &P) -> Result<Vec<(P, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    if p.degree() == Some(0) {
        return Ok(out);
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.exact_div(&a0).expect("gcd divides");
    let mut c = dp.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((primitive(&a), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.derivative();
        i += 1;
    }
    Ok(out)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut m = n.abs();
    let mut divs = vec![BigInt::one()];
    let mut p = BigInt::from(2u32);
    let extend = |divs: &mut Vec<BigInt>, p: &BigInt, e: u32| {
        let base = divs.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk *= p;
            divs.extend(base.iter().map(|d| d * &pk));
        }
    };
    while &p * &p <= m {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            extend(&mut divs, &p, e);
        }
        p += 1u32;
    }
    if m > BigInt::one() {
        extend(&mut divs, &m.clone(), 1);
    }
    divs.sort();
    divs
}

/// Distinct rational roots by the rational root theorem.
pub fn rational_roots(p: &P) -> Vec<Rational> {
    let mut roots = Vec::new();
    if p.is_zero() {
        return roots;
    }
    let v = p.valuation().unwrap();
    if v > 0 {
        roots.push(Rational::zero());
    }
    let q = primitive(&p.shift_down(v));
    if q.degree() == Some(0) {
        return roots;
    }
    let lead = q.leading().to_integer();
    let tail = q.coeff(0).to_integer();
    for num in divisors(&tail) {
        for den in divisors(&lead) {
            if num.gcd(&den) != BigInt::one() {
                continue;
            }
            for s in [num.clone(), -num.clone()] {
                let r = Rational::new(s, den.clone());
                if q.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Roots of a polynomial over `Q` with multiplicity, in ascending order.
///
/// Fails with `UnresolvedFactor` if an irreducible factor of degree at
/// least three remains after removing rational roots.
pub fn roots_with_multiplicity(p: &P) -> Result<Vec<(PointValue, usize)>> {
    let mut out = Vec::new();
    for (f, m) in squarefree_factor(p)? {
        let mut rest = f.clone();
        for r in rational_roots(&f) {
            rest = rest.exact_div(&P::linear_root(r.clone())).expect("root divides");
            out.push((PointValue::Rational(r), m));
        }
        match rest.degree() {
            Some(0) | None => {}
            Some(2) => {
                let (c, b, a) = (rest.coeff(0), rest.coeff(1), rest.coeff(2));
                let disc = &b * &b - Rational::from_integer(4.into()) * &a * &c;
                let sq = QuadraticNumber::sqrt_of(&disc)?;
                let two_a = QuadraticNumber::rational(&a + &a);
                let mb = QuadraticNumber::rational(-b);
                for s in [sq.clone(), -sq] {
                    let root = (mb.clone() + s) / two_a.clone();
                    out.push((PointValue::from_quadratic(root), m));
                }
            }
            Some(_) => return Err(Error::UnresolvedFactor(primitive(&rest).to_string())),
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Distinct roots of every factor of degree at most two.
pub fn roots_in_quadratic_closure(p: &P) -> Result<Vec<PointValue>> {
    Ok(roots_with_multiplicity(p)?.into_iter().map(|(r, _)| r).collect())
}

/// Roots with multiplicity of a polynomial over `Q(sqrt(d))`, found among
/// the roots of its norm `p * conj(p)`.
pub fn quadratic_field_roots(p: &Polynomial<QuadraticNumber>) -> Result<Vec<(QuadraticNumber, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(q) = p.to_rational() {
        return Ok(roots_with_multiplicity(&q)?.into_iter().map(|(r, m)| (r.to_quadratic(), m)).collect());
    }
    let d = p.coeffs().iter().map(|c| c.d()).find(|&d| d != 0).unwrap_or(0);
    let conj = p.map(|c| c.conjugate());
    let norm = (p * &conj).to_rational().expect("norm is rational");
    let mut rest = p.clone();
    let mut out = Vec::new();
    for (beta, _) in roots_with_multiplicity(&norm)? {
        let beta = beta.to_quadratic();
        if beta.d() != 0 && beta.d() != d {
            continue;
        }
        let lin = Polynomial::linear_root(beta.clone());
        let mut m = 0;
        while let Some(q) = rest.exact_div(&lin) {
            rest = q;
            m += 1;
        }
        if m > 0 {
            out.push((beta, m));
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        return Err(Error::UnresolvedFactor(rest.to_string()));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
