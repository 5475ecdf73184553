//! Recovering Θ-operators from power series coefficients, and the
//! coefficient recurrence encoded by an operator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::arith::linalg::integer_nullspace;
use crate::arith::{rational_roots, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::optheta::ThetaOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GuessConfig {
    pub max_order: usize,
    pub max_degree: usize,
    pub margin: usize,
}

impl Default for GuessConfig {
    fn default() -> Self {
        GuessConfig { max_order: 4, max_degree: 9, margin: 10 }
    }
}

impl GuessConfig {
    pub fn new(max_order: usize, max_degree: usize, margin: usize) -> Result<Self> {
        if margin == 0 {
            return Err(Error::InvalidArgument("margin must be at least 1".into()));
        }
        Ok(GuessConfig { max_order, max_degree, margin })
    }

    pub fn unknowns(&self) -> usize {
        (self.max_order + 1) * (self.max_degree + 1)
    }
}

fn pow_usize(m: i64, k: usize) -> BigInt {
    num_traits::pow(BigInt::from(m), k)
}

/// Rows `m = 0 .. rows` of the linear system for an operator of the given
/// order and degree. Unknown `(i, k)` is the coefficient of `t^i Θ^k`.
fn system(series: &[Rational], order: usize, degree: usize, rows: usize) -> Vec<Vec<BigInt>> {
    let cols = (order + 1) * (degree + 1);
    (0..rows)
        .map(|m| {
            let mut row = vec![Rational::zero(); cols];
            for i in 0..=degree.min(m) {
                let a = &series[m - i];
                if a.is_zero() {
                    continue;
                }
                for k in 0..=order {
                    row[i * (order + 1) + k] = a * Rational::from_integer(pow_usize((m - i) as i64, k));
                }
            }
            let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.into_iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

fn to_operator(v: &[BigInt], order: usize, degree: usize) -> ThetaOperator<Rational> {
    let rows = (0..=degree)
        .map(|i| {
            Polynomial::new((0..=order).map(|k| Rational::from_integer(v[i * (order + 1) + k].clone())).collect())
        })
        .collect();
    ThetaOperator::new(rows)
}

/// Every coefficient of `op` applied to the series vanishes.
fn annihilates(op: &ThetaOperator<Rational>, series: &[Rational]) -> bool {
    (0..series.len()).all(|m| {
        let mut acc = Rational::zero();
        for (i, p) in op.coeffs().iter().enumerate().take(m + 1) {
            acc += p.eval(&Rational::from_integer(BigInt::from(m - i))) * &series[m - i];
        }
        acc.is_zero()
    })
}

/// Smallest operator (by order, then degree) annihilating the series,
/// solved on all but the last `margin` coefficients and checked on all.
pub fn guess_operator(series: &[Rational], cfg: &GuessConfig) -> Result<Option<ThetaOperator<Rational>>> {
    let needed = cfg.unknowns() + cfg.margin;
    if series.len() < needed {
        return Err(Error::InsufficientTerms { needed, got: series.len() });
    }
    let rows = series.len() - cfg.margin;
    for order in 1..=cfg.max_order {
        for degree in 0..=cfg.max_degree {
            let cols = (order + 1) * (degree + 1);
            let ns = integer_nullspace(&system(series, order, degree, rows), cols);
            let Some(v) = ns.first() else { continue };
            let op = to_operator(v, order, degree);
            if op.order() < order || op.degree() < degree {
                continue;
            }
            if annihilates(&op, series) {
                return Ok(Some(op.canonical()));
            }
        }
    }
    Ok(None)
}

/// `Σ_i P_i(m-i) A_{m-i} = 0`, with the entries of `shifted` being the
/// polynomials `m -> P_i(m-i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recurrence {
    pub shifted: Vec<Polynomial<Rational>>,
    /// Nonnegative integers `m` with `P_0(m) = 0`, where `A_m` is free.
    pub obstructions: Vec<u64>,
}

impl Recurrence {
    pub fn order(&self) -> usize {
        self.shifted.len().saturating_sub(1)
    }

    /// `A_m` from the earlier terms, or `None` at an obstruction.
    pub fn next_term(&self, earlier: &[Rational]) -> Option<Rational> {
        let m = earlier.len();
        let mr = Rational::from_integer(BigInt::from(m));
        let lead = self.shifted[0].eval(&mr);
        if lead.is_zero() {
            return None;
        }
        let mut acc = Rational::zero();
        for (i, p) in self.shifted.iter().enumerate().skip(1).take(m) {
            acc += p.eval(&mr) * &earlier[m - i];
        }
        Some(-acc / lead)
    }

    /// Extend `seed` to `n` terms, taking zero at any later obstruction.
    pub fn extend(&self, seed: &[Rational], n: usize) -> Vec<Rational> {
        let mut out = seed.to_vec();
        while out.len() < n {
            out.push(self.next_term(&out).unwrap_or_else(Rational::zero));
        }
        out
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .shifted
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| {
                let idx = if i == 0 { "m".to_string() } else { format!("m-{i}") };
                format!("({}) A[{idx}]", p.display_with("m"))
            })
            .collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

pub fn recurrence_from_operator(op: &ThetaOperator<Rational>) -> Recurrence {
    let shifted: Vec<Polynomial<Rational>> =
        op.coeffs().iter().enumerate().map(|(i, p)| p.translate(&-Rational::from_integer(BigInt::from(i)))).collect();
    let mut obstructions: Vec<u64> = match shifted.first() {
        Some(p0) if !p0.is_zero() => rational_roots(p0)
            .into_iter()
            .filter(|r| r.is_integer() && !r.is_negative())
            .filter_map(|r| r.to_integer().try_into().ok())
            .collect(),
        _ => Vec::new(),
    };
    obstructions.sort_unstable();
    obstructions.dedup();
    Recurrence { shifted, obstructions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::frobenius::local_basis_in;
    use crate::optheta::SingularPoint;
    use proptest::prelude::*;

    fn binom(n: u64, k: u64) -> BigInt {
        (0..k).fold(BigInt::one(), |a, i| a * (n - i) / (i + 1))
    }

    #[test]
    fn geometric_series() {
        let s = vec![int(1); 30];
        let op = guess_operator(&s, &GuessConfig::new(1, 1, 10).unwrap()).unwrap().unwrap();
        assert!(op.same_as(&ThetaOperator::parse("Θ - t(Θ+1)").unwrap()));
    }

    #[test]
    fn central_binomial_squares() {
        let s: Vec<Rational> = (0..30).map(|n| Rational::from_integer(binom(2 * n, n).pow(2))).collect();
        let op = guess_operator(&s, &GuessConfig::new(2, 1, 10).unwrap()).unwrap().unwrap();
        assert_eq!(op, ThetaOperator::parse("Θ^2 - 16t(Θ+1/2)^2").unwrap().canonical());
        assert_eq!(op, ThetaOperator::parse("Θ^2 - 4t(2Θ+1)^2").unwrap());
    }

    #[test]
    fn insufficient_terms() {
        let err = guess_operator(&vec![int(1); 5], &GuessConfig::default()).unwrap_err();
        assert_eq!(err, Error::InsufficientTerms { needed: 60, got: 5 });
    }

    #[test]
    fn random_series_has_no_small_operator() {
        let s: Vec<Rational> = (0..20i64).map(|n| rat((n * n * 7 + 3) % 11 - 5, 1 + n % 3)).collect();
        assert_eq!(guess_operator(&s, &GuessConfig::new(1, 1, 10).unwrap()).unwrap(), None);
    }

    #[test]
    fn recovers_operator_from_holomorphic_solution() {
        let op = ThetaOperator::parse(
            "Θ^2(Θ-1)^2 - 1/8 tΘ^2(20Θ^2+3) + 1/16 t^2(8Θ^2+8Θ+3)(2Θ+1)^2 - 1/32 t^3(2Θ+3)^2(2Θ+1)^2",
        )
        .unwrap();
        let basis = local_basis_in(&op, &SingularPoint::zero(), 40).unwrap();
        let hol = basis.solutions.iter().find(|g| g.exponent.is_zero() && !g.has_log()).unwrap();
        let series = hol.log_free_part();
        let got = guess_operator(&series, &GuessConfig::new(4, 3, 10).unwrap()).unwrap().unwrap();
        assert!(got.same_as(&op));
    }

    #[test]
    fn legendre_recurrence() {
        let rec = recurrence_from_operator(&ThetaOperator::parse("Θ^2 - 16t(Θ+1/2)^2").unwrap());
        assert_eq!(rec.obstructions, vec![0]);
        let s = rec.extend(&[int(1)], 10);
        for n in 0..9 {
            let ratio = &s[n + 1] / &s[n];
            let nn = int(n as i64);
            let half = rat(1, 2);
            assert_eq!(ratio, int(16) * (&nn + &half) * (&nn + &half) / ((&nn + int(1)) * (&nn + int(1))));
        }
    }

    #[test]
    fn geometric_recurrence() {
        let rec = recurrence_from_operator(&ThetaOperator::parse("Θ - t(Θ+1)").unwrap());
        assert_eq!(rec.shifted, vec![Polynomial::from_i64s(&[0, 1]), Polynomial::from_i64s(&[0, -1])]);
        assert_eq!(rec.extend(&[int(1)], 6), vec![int(1); 6]);
    }

    #[test]
    fn obstructions_of_double_zero() {
        let op = ThetaOperator::parse("Θ^2(Θ-1)^2 + tΘ^2(32Θ^2+3) + 4t^2(4Θ+1)(2Θ+1)^2(4Θ+3)").unwrap();
        let rec = recurrence_from_operator(&op);
        assert_eq!(rec.order(), 2);
        assert_eq!(rec.obstructions, vec![0, 1]);
        assert_eq!(rec.shifted[0], Polynomial::from_i64s(&[0, 0, 1, -2, 1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn scaling_commutes_with_guessing(c in prop::sample::select(vec![-3i64, -2, 2, 3, 5]), a in 1i64..4) {
            // Θ^2 - a t (Θ+1/2)^2 has series coefficients a^n binom(2n,n)^2/16^n.
            let op = ThetaOperator::parse(&format!("Θ^2 - {a}t(Θ+1/2)^2")).unwrap();
            let s = recurrence_from_operator(&op).extend(&[int(1)], 20);
            let scaled: Vec<Rational> = s.iter().enumerate().map(|(n, x)| x * num_traits::pow(int(c), n)).collect();
            let cfg = GuessConfig::new(2, 1, 8).unwrap();
            let g = guess_operator(&s, &cfg).unwrap().unwrap();
            let gs = guess_operator(&scaled, &cfg).unwrap().unwrap();
            prop_assert!(gs.same_as(&g.scale_variable(&int(c))));
            prop_assert!(annihilates(&gs, &scaled));
        }
    }
}
