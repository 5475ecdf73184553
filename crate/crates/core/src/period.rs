//! Conifold expansion of double octic periods over a vanishing tetrahedron.
//!
//! In tetrahedron coordinates the double cover reads
//! `u^2 = xyz(t-x-y-z) P(x,y,z,t)`. Rescaling `(x,y,z) -> t(x,y,z)` turns
//! the period into `t * ∫_T P(tx,ty,tz,t)^{-1/2} dμ` over the standard
//! simplex with the Dirichlet measure `(xyz(1-x-y-z))^{-1/2}`, and every
//! monomial integrates to `π^2` times a rational number.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{parse_multipoly, parse_rational, quadratic::squarefree_split, rational_string, MultiPoly, PowerSeries, Rational};
use crate::error::{Error, Result};
use crate::optheta::ThetaOperator;

pub const DEFAULT_TERMS: usize = 40;

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// `(2a)!/a!`, the integer part of `Γ(a+1/2)/Γ(1/2)` up to `4^a`.
fn half_factorial(a: u64) -> BigInt {
    (a + 1..=2 * a).fold(BigInt::one(), |acc, k| acc * k)
}

/// `(1/π^2) ∫_T x^(a-1/2) y^(b-1/2) z^(c-1/2) (1-x-y-z)^(-1/2)`.
pub fn simplex_monomial_integral(a: u64, b: u64, c: u64) -> Rational {
    let s = a + b + c;
    let num = half_factorial(a) * half_factorial(b) * half_factorial(c);
    let den = BigInt::from(4).pow(s as u32) * factorial(s + 1);
    Rational::new(num, den)
}

/// Tetrahedron form: the polynomial `P(x,y,z,t)` and a truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct TetraForm {
    p: MultiPoly,
    terms: usize,
}

impl TetraForm {
    pub const VARS: [&'static str; 4] = ["x", "y", "z", "t"];

    pub fn new(p: MultiPoly, terms: usize) -> Result<Self> {
        if p.nvars() != 4 {
            return Err(Error::InvalidArgument(format!("tetrahedron form needs 4 variables, got {}", p.nvars())));
        }
        if p.coeff(&[0, 0, 0, 0]).is_zero() {
            return Err(Error::VanishingConstantTerm);
        }
        Ok(TetraForm { p, terms })
    }

    pub fn parse(expr: &str, terms: usize) -> Result<Self> {
        Self::new(parse_multipoly(expr, &Self::VARS)?, terms)
    }

    /// Keys are `"ex,ey,ez,et"`, values rational strings.
    pub fn from_json_map(map: &BTreeMap<String, String>, terms: usize) -> Result<Self> {
        let mut out = Vec::new();
        for (k, v) in map {
            let e: Vec<u32> = k
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("bad exponent tuple `{k}`")))?;
            if e.len() != 4 {
                return Err(Error::Parse(format!("exponent tuple `{k}` must have 4 entries")));
            }
            out.push((e, parse_rational(v)?));
        }
        Self::new(MultiPoly::from_terms(4, out), terms)
    }

    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.p
            .terms()
            .iter()
            .map(|(e, c)| (e.iter().map(u32::to_string).collect::<Vec<_>>().join(","), rational_string(c)))
            .collect()
    }

    pub fn polynomial(&self) -> &MultiPoly {
        &self.p
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn with_terms(&self, terms: usize) -> Self {
        TetraForm { p: self.p.clone(), terms }
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        Self::new(self.p.scale(c), self.terms)
    }
}

/// Coefficients of `Φ(t) = π^2 t Σ A_i t^i`, stored as
/// `A_i = coeffs[i] / sqrt(radicand)` with `radicand` a squarefree integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodSeries {
    #[serde(with = "rational_vec")]
    pub coeffs: Vec<Rational>,
    #[serde(with = "rational_str")]
    pub radicand: Rational,
}

impl PeriodSeries {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one()
    }

    /// The rational parts as a power series in `t`, multiplied by `t`.
    pub fn period_series(&self) -> PowerSeries<Rational> {
        let mut c = vec![Rational::zero()];
        c.extend(self.coeffs.iter().cloned());
        PowerSeries::new(c)
    }

    pub fn prefix(&self, n: usize) -> PeriodSeries {
        PeriodSeries { coeffs: self.coeffs[..n.min(self.coeffs.len())].to_vec(), radicand: self.radicand.clone() }
    }
}

mod rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rational_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = String::deserialize(d)?;
        parse_rational(&v).map_err(serde::de::Error::custom)
    }
}

/// Position of `x^a y^b z^c` in the graded layout used for the dense
/// coefficient vectors: first by total degree, then by `a`, then `b`.
fn mono_index(a: usize, b: usize, c: usize) -> usize {
    let s = a + b + c;
    s * (s + 1) * (s + 2) / 6 + a * (s + 1) - a * a.saturating_sub(1) / 2 + b
}

fn graded_len(n: usize) -> usize {
    (n + 1) * (n + 2) * (n + 3) / 6
}

fn for_each_mono(n: usize, mut f: impl FnMut(usize, usize, usize, usize)) {
    let mut idx = 0;
    for s in 0..=n {
        for a in 0..=s {
            for b in 0..=s - a {
                f(idx, a, b, s - a - b);
                idx += 1;
            }
        }
    }
}

/// Expand the period to `f.terms()` coefficients `A_0 .. A_{N-1}`.
///
/// With `P~ = λP` integral and `s = Σ S_k t^k / P~_0`, the coefficients of
/// `s^{-1/2}` are kept as `R_n / (2^n n! P~_0^n)` with integral `R_n`,
/// which satisfy
/// `R_n = Σ_k (k-2n) 2^{k-1} (n-1)!/(n-k)! P~_0^{k-1} S_k R_{n-k}`.
pub fn conifold_expand(f: &TetraForm) -> Result<PeriodSeries> {
    let n_terms = f.terms;
    let lambda = f.p.terms().values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let lam = Rational::from_integer(lambda);
    let mut graded: Vec<Vec<((usize, usize, usize), BigInt)>> = Vec::new();
    let mut p0 = BigInt::zero();
    for (e, c) in f.p.terms() {
        let v = (c * &lam).to_integer();
        let k = e.iter().sum::<u32>() as usize;
        if k == 0 {
            p0 = v;
            continue;
        }
        if graded.len() <= k {
            graded.resize(k + 1, Vec::new());
        }
        graded[k].push(((e[0] as usize, e[1] as usize, e[2] as usize), v));
    }
    if p0.is_zero() {
        return Err(Error::VanishingConstantTerm);
    }
    let top = graded.len().saturating_sub(1);

    let mut rs: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for n in 1..n_terms {
        let mut r = vec![BigInt::zero(); graded_len(n)];
        for k in 1..=n.min(top) {
            if graded[k].is_empty() {
                continue;
            }
            let falling = (n - k + 1..n).fold(BigInt::one(), |a, j| a * j);
            let factor = BigInt::from(k as i64 - 2 * n as i64)
                * (BigInt::one() << (k - 1))
                * falling
                * num_traits::pow(p0.clone(), k - 1);
            let prev = &rs[n - k];
            for ((a1, b1, c1), coef) in &graded[k] {
                let cf = coef * &factor;
                for_each_mono(n - k, |idx, a, b, c| {
                    let v = &prev[idx];
                    if !v.is_zero() {
                        r[mono_index(a + a1, b + b1, c + c1)] += &cf * v;
                    }
                });
            }
        }
        rs.push(r);
    }

    let hf: Vec<BigInt> = (0..n_terms as u64).map(half_factorial).collect();
    let mut out = Vec::with_capacity(n_terms);
    for (n, r) in rs.iter().enumerate() {
        let mut by_degree = vec![BigInt::zero(); n + 1];
        for_each_mono(n, |idx, a, b, c| {
            let v = &r[idx];
            if !v.is_zero() {
                by_degree[a + b + c] += v * &hf[a] * &hf[b] * &hf[c];
            }
        });
        let mut acc = Rational::zero();
        for (s, v) in by_degree.into_iter().enumerate() {
            if !v.is_zero() {
                acc += Rational::new(v, BigInt::from(4).pow(s as u32) * factorial(s as u64 + 1));
            }
        }
        let scale = (BigInt::one() << n) * factorial(n as u64) * num_traits::pow(p0.clone(), n);
        out.push(acc / Rational::from_integer(scale));
    }

    // 1/sqrt(P_0) with P_0 = p/q: sqrt(p q) = m sqrt(core), so 1/sqrt(P_0) = q/(m sqrt(core)).
    let p0r = f.p.coeff(&[0, 0, 0, 0]);
    let (m, core) = squarefree_split(&(p0r.numer() * p0r.denom()));
    let unit = Rational::new(p0r.denom().clone(), m);
    let coeffs = out.into_iter().map(|a| a * &unit).collect();
    Ok(PeriodSeries { coeffs, radicand: Rational::from_integer(core) })
}

/// Number of leading coefficients of `op(t Σ A_i t^i)` that vanish.
/// Compare with [`annihilation_target`].
pub fn verify_annihilation(op: &ThetaOperator<Rational>, ps: &PeriodSeries) -> usize {
    let res = op.apply_to_series(&ps.period_series());
    res.coeffs().iter().take_while(|c| c.is_zero()).count()
}

/// The value [`verify_annihilation`] returns when every computable
/// coefficient vanishes.
pub fn annihilation_target(op: &ThetaOperator<Rational>, ps: &PeriodSeries) -> usize {
    ps.len().saturating_sub(op.degree()) + 1
}

/// Approximate value of `Σ A_i t^i` (the rational parts only).
pub fn evaluate_f64(ps: &PeriodSeries, t: f64) -> f64 {
    let mut acc = 0.0;
    for c in ps.coeffs.iter().rev() {
        acc = acc * t + c.to_f64().unwrap_or(f64::NAN);
    }
    acc / ps.radicand.abs().to_f64().unwrap_or(f64::NAN).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, series_binomial_power};
    use proptest::prelude::*;

    #[test]
    fn simplex_values() {
        assert_eq!(simplex_monomial_integral(0, 0, 0), int(1));
        assert_eq!(simplex_monomial_integral(1, 0, 0), rat(1, 4));
        assert_eq!(simplex_monomial_integral(1, 1, 1), rat(1, 192));
    }

    #[test]
    fn trivial_form() {
        let ps = conifold_expand(&TetraForm::parse("1", 10).unwrap()).unwrap();
        assert_eq!(ps.coeffs[0], int(1));
        assert!(ps.coeffs[1..].iter().all(Zero::is_zero));
        assert!(ps.is_rational());
    }

    #[test]
    fn vanishing_constant_rejected() {
        assert_eq!(TetraForm::parse("x + t", 5).unwrap_err(), Error::VanishingConstantTerm);
    }

    #[test]
    fn index_layout_is_sequential() {
        let mut expect = 0;
        for_each_mono(6, |idx, a, b, c| {
            assert_eq!(idx, expect);
            assert_eq!(mono_index(a, b, c), idx);
            expect += 1;
        });
        assert_eq!(expect, graded_len(6));
    }

    /// Oracle: expand the square root directly with the univariate
    /// binomial series when `P` depends on `t` only.
    #[test]
    fn t_only_form_matches_binomial_series() {
        let ps = conifold_expand(&TetraForm::parse("1 - 3t + 2t^2", 12).unwrap()).unwrap();
        let s = PowerSeries::with_order(vec![int(1), int(-3), int(2)], 11);
        let r = series_binomial_power(&s, &rat(-1, 2)).unwrap();
        assert_eq!(ps.coeffs, r.coeffs());
    }

    /// Oracle: a single linear term `1 - x` integrates to a hypergeometric
    /// sum computed monomial by monomial.
    #[test]
    fn linear_form_matches_direct_sum() {
        let ps = conifold_expand(&TetraForm::parse("1 - x", 8).unwrap()).unwrap();
        for (n, a) in ps.coeffs.iter().enumerate() {
            let binom = Rational::new(half_factorial(n as u64), BigInt::from(4).pow(n as u32) * factorial(n as u64));
            assert_eq!(a, &(binom * simplex_monomial_integral(n as u64, 0, 0)));
        }
    }

    #[test]
    fn non_square_constant_term_is_carried() {
        let ps = conifold_expand(&TetraForm::parse("8 + x", 3).unwrap()).unwrap();
        assert_eq!(ps.radicand, int(2));
        assert_eq!(ps.coeffs[0], rat(1, 2));
        let neg = conifold_expand(&TetraForm::parse("-1 + x", 3).unwrap()).unwrap();
        assert_eq!(neg.radicand, int(-1));
    }

    #[test]
    fn self_consistency_of_annihilation() {
        // (1 - t)^{-1/2} is killed by Θ - t(Θ + 1/2) after multiplying by t:
        // t(1-t)^{-1/2} is killed by (Θ - 1) - t(Θ - 1/2).
        let ps = conifold_expand(&TetraForm::parse("1 - t", 20).unwrap()).unwrap();
        let op = ThetaOperator::parse("(Θ-1) - t(Θ-1/2)").unwrap();
        assert_eq!(verify_annihilation(&op, &ps), annihilation_target(&op, &ps));
        let wrong = ThetaOperator::parse("(Θ-1) - t(Θ-1/3)").unwrap();
        assert!(verify_annihilation(&wrong, &ps) < 3);
    }

    /// Numerical oracle: Monte-Carlo-free midpoint quadrature of the
    /// one-dimensional reduction for `P = 1 - x` at a small `t`.
    #[test]
    fn numerical_check_linear() {
        let t = 0.05f64;
        let ps = conifold_expand(&TetraForm::parse("1 - x", 30).unwrap()).unwrap();
        let series = evaluate_f64(&ps, t);
        // The marginal of x under the Dirichlet measure is Beta(1/2, 3/2) with
        // total mass π^2; substitute x = sin^2 φ to remove the singularity.
        let steps = 200_000;
        let mut acc = 0.0;
        for i in 0..steps {
            let phi = (i as f64 + 0.5) / steps as f64 * std::f64::consts::FRAC_PI_2;
            let x = phi.sin().powi(2);
            let w = 2.0 * phi.cos().powi(2) * 2.0 / std::f64::consts::PI;
            acc += w * (1.0 - t * x).powf(-0.5);
        }
        acc *= std::f64::consts::FRAC_PI_2 / steps as f64;
        assert!((series - acc).abs() < 1e-10, "{series} vs {acc}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn simplex_recurrences_and_symmetry(a in 0u64..8, b in 0u64..8, c in 0u64..8) {
            let i = simplex_monomial_integral(a, b, c);
            let s = a + b + c;
            let step = |k: u64| rat(2 * k as i64 + 1, 2 * (s as i64 + 2));
            prop_assert_eq!(simplex_monomial_integral(a + 1, b, c), &i * step(a));
            prop_assert_eq!(simplex_monomial_integral(a, b + 1, c), &i * step(b));
            prop_assert_eq!(simplex_monomial_integral(a, b, c + 1), &i * step(c));
            for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                prop_assert_eq!(simplex_monomial_integral(x, y, z), i.clone());
            }
        }

        #[test]
        fn scaling_by_square_twists(cs in prop::collection::vec(-3i64..4, 4), k in 1i64..5) {
            let expr = format!("1 + ({})x + ({})y*t + ({})z^2 + ({})t^2", cs[0], cs[1], cs[2], cs[3]);
            let f = TetraForm::parse(&expr, 6).unwrap();
            let base = conifold_expand(&f).unwrap();
            let scaled = conifold_expand(&f.scale(&int(k * k)).unwrap()).unwrap();
            prop_assert_eq!(&scaled.radicand, &base.radicand);
            for (a, b) in base.coeffs.iter().zip(&scaled.coeffs) {
                prop_assert_eq!(b.clone(), a / int(k));
            }
        }

        #[test]
        fn truncation_is_monotone(cs in prop::collection::vec(-3i64..4, 3), n in 2usize..6) {
            let expr = format!("(1 + ({})x + y)(1 + ({})z - t)(2 + ({})t)", cs[0], cs[1], cs[2]);
            let f = TetraForm::parse(&expr, n).unwrap();
            let short = conifold_expand(&f).unwrap();
            let long = conifold_expand(&f.with_terms(n + 3)).unwrap();
            prop_assert_eq!(long.prefix(n), short);
        }
    }
}
