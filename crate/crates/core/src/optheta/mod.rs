//! Differential operators in `Θ = t d/dt` form and in derivative form.

mod json;
mod parse;
mod symbol;

use std::fmt;


use crate::arith::poly::falling_factorial;
use crate::arith::{Field, Polynomial, PowerSeries, QuadraticNumber, Rational};

pub use json::{OperatorForm, OperatorJson};
pub use parse::parse_operator;
pub use symbol::{
    exponents_at, fuchs_sum, indicial_polynomial, is_candidate, local_operator, riemann_symbol, singular_points, symbol_entry, RiemannSymbol, SingularPoint,
    SymbolEntry,
};

/// `sum_i t^i P_i(Θ)`, stored as `[P_0, .., P_r]`.
///
/// Values are kept exactly as built; [`ThetaOperator::canonical`] gives the
/// normal form used for equality between operators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaOperator<F = Rational> {
    coeffs: Vec<Polynomial<F>>,
}

/// `sum_j c_j(t) (d/dt)^j`, stored as `[c_0, .., c_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DOperator<F = Rational> {
    coeffs: Vec<Polynomial<F>>,
}

/// Stirling numbers of the second kind `S(k, j)` for `k, j <= n`.
fn stirling2<F: Field>(n: usize) -> Vec<Vec<F>> {
    let mut s = vec![vec![F::zero(); n + 1]; n + 1];
    s[0][0] = F::one();
    for k in 1..=n {
        for j in 1..=k {
            s[k][j] = F::from_usize(j) * s[k - 1][j].clone() + s[k - 1][j - 1].clone();
        }
    }
    s
}

impl<F: Field> ThetaOperator<F> {
    /// Trailing zero `P_i` are dropped.
    pub fn new(mut coeffs: Vec<Polynomial<F>>) -> Self {
        while coeffs.last().is_some_and(|p| p.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| Polynomial::from_i64s(r)).collect())
    }

    /// The operator `Θ`.
    pub fn theta() -> Self {
        Self::new(vec![Polynomial::x()])
    }

    /// Multiplication by `c t^k`.
    pub fn t_power(c: F, k: usize) -> Self {
        let mut v = vec![Polynomial::zero(); k + 1];
        v[k] = Polynomial::constant(c);
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Polynomial<F>] {
        &self.coeffs
    }

    /// `P_i`, zero beyond the stored range.
    pub fn p(&self, i: usize) -> Polynomial<F> {
        self.coeffs.get(i).cloned().unwrap_or_else(Polynomial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Differential order `n = max deg P_i`.
    pub fn order(&self) -> usize {
        self.coeffs.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// The `t`-degree `r`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> ThetaOperator<G> {
        ThetaOperator::new(self.coeffs.iter().map(|p| p.map(&f)).collect())
    }

    pub fn to_rational(&self) -> Option<ThetaOperator<Rational>> {
        self.coeffs.iter().map(|p| p.to_rational()).collect::<Option<Vec<_>>>().map(ThetaOperator::new)
    }

    /// Leading coefficient of the derivative form divided by its `t`-power:
    /// `L(t) = sum_i [Θ^n]P_i · t^i`.
    pub fn leading_polynomial(&self) -> Polynomial<F> {
        let n = self.order();
        Polynomial::new(self.coeffs.iter().map(|p| p.coeff(n)).collect())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| &self.p(i) + &o.p(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    /// Normal form: leading zero `P_i` removed (left division by a power
    /// of `t`) and the coefficients scaled by [`Field::normalizer`] so that
    /// the leading coefficient of `P_0` is positive.
    pub fn canonical(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|p| p.is_zero()).count();
        let coeffs: Vec<Polynomial<F>> = self.coeffs[skip..].to_vec();
        if coeffs.is_empty() {
            return Self::new(coeffs);
        }
        let flat: Vec<F> = coeffs.iter().flat_map(|p| p.coeffs().iter().cloned()).collect();
        let lead = coeffs[0].leading();
        let f = F::normalizer(&flat, &lead);
        Self::new(coeffs.iter().map(|p| p.scale(&f)).collect())
    }

    /// Equal up to a nonzero scalar and a left power of `t`.
    pub fn same_as(&self, o: &Self) -> bool {
        self.canonical() == o.canonical()
    }

    /// Composition `self ∘ o`, using `P(Θ) t^j = t^j P(Θ + j)`.
    pub fn op_mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![Polynomial::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in o.coeffs.iter().enumerate() {
                let shifted = p.translate(&F::from_usize(j));
                out[i + j] = &out[i + j] + &(&shifted * q);
            }
        }
        Self::new(out)
    }

    /// Coefficient of `t^m` in the result is `sum_i P_i(m-i) y_{m-i}`.
    /// The result is reported to order `N - r`.
    pub fn apply_to_series(&self, y: &PowerSeries<F>) -> PowerSeries<F> {
        let n = y.order();
        let keep = n.saturating_sub(self.degree());
        PowerSeries::from_fn(keep, |m| {
            let mut acc = F::zero();
            for (i, p) in self.coeffs.iter().enumerate() {
                if i > m || p.is_zero() {
                    continue;
                }
                let c = y.coeff(m - i);
                if !c.is_zero() {
                    acc = acc + p.eval(&F::from_usize(m - i)) * c;
                }
            }
            acc
        })
    }

    /// Derivative form, divided by the largest common power of `t`.
    pub fn to_d(&self) -> DOperator<F> {
        let n = self.order();
        let s = stirling2::<F>(n);
        let mut c: Vec<Polynomial<F>> = vec![Polynomial::zero(); n + 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            for (k, pk) in p.coeffs().iter().enumerate() {
                if pk.is_zero() {
                    continue;
                }
                for j in 0..=k {
                    if !s[k][j].is_zero() {
                        let term = Polynomial::monomial(pk.clone() * s[k][j].clone(), i + j);
                        c[j] = &c[j] + &term;
                    }
                }
            }
        }
        let v = c.iter().filter_map(|p| p.valuation()).min().unwrap_or(0);
        DOperator::new(c.iter().map(|p| p.shift_down(v)).collect())
    }

    /// Substitute `t -> c t`: `P_i -> c^i P_i`.
    pub fn scale_variable(&self, c: &F) -> Self {
        let mut pw = F::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for p in &self.coeffs {
            out.push(p.scale(&pw));
            pw = pw * c.clone();
        }
        Self::new(out)
    }

    /// Render with `var` for `t` and `theta` for `Θ`.
    pub fn display_with(&self, var: &str, theta: &str) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let body = p.display_with(theta);
            let s = match i {
                0 => body,
                _ => {
                    let tp = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                    if p.degree() == Some(0) && p.coeffs()[0].is_one() {
                        tp
                    } else {
                        format!("{tp}*({body})")
                    }
                }
            };
            parts.push(s);
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" + ")
    }
}

impl ThetaOperator<Rational> {
    pub fn to_quadratic(&self) -> ThetaOperator<QuadraticNumber> {
        self.map(|c| QuadraticNumber::rational(c.clone()))
    }

    /// Parse a printed operator such as `Θ^2 - 16t(Θ+1/2)^2`.
    pub fn parse(s: &str) -> crate::Result<Self> {
        parse_operator(s)
    }
}

impl<F: Field> fmt::Display for ThetaOperator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t", "Θ"))
    }
}

impl<F: Field> DOperator<F> {
    pub fn new(mut coeffs: Vec<Polynomial<F>>) -> Self {
        while coeffs.last().is_some_and(|p| p.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| Polynomial::from_i64s(r)).collect())
    }

    pub fn coeffs(&self) -> &[Polynomial<F>] {
        &self.coeffs
    }

    pub fn c(&self, j: usize) -> Polynomial<F> {
        self.coeffs.get(j).cloned().unwrap_or_else(Polynomial::zero)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Polynomial<F> {
        self.c(self.order())
    }

    /// `Θ`-form: multiply by `t^n`, rewrite `t^j D^j` as a falling
    /// factorial in `Θ`, then divide by the common power of `t`.
    pub fn to_theta(&self) -> ThetaOperator<F> {
        let n = self.order();
        let mut rows: Vec<Polynomial<F>> = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            let ff = falling_factorial::<F>(j);
            for (l, cl) in c.coeffs().iter().enumerate() {
                if cl.is_zero() {
                    continue;
                }
                let i = l + n - j;
                if rows.len() <= i {
                    rows.resize(i + 1, Polynomial::zero());
                }
                rows[i] = &rows[i] + &ff.scale(cl);
            }
        }
        let skip = rows.iter().take_while(|p| p.is_zero()).count();
        ThetaOperator::new(rows.split_off(skip.min(rows.len())))
    }

    /// Divide all coefficients by their common polynomial factor.
    pub fn remove_content(&self) -> Self {
        let g = self.coeffs.iter().fold(Polynomial::zero(), |g, c| g.gcd(c));
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|c| c.exact_div(&g).expect("gcd divides")).collect())
    }

    /// Substitute `t -> t + a`.
    pub fn translate(&self, a: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.translate(a)).collect())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> DOperator<G> {
        DOperator::new(self.coeffs.iter().map(|p| p.map(&f)).collect())
    }

    /// Divide out the coefficient content (rationals) or make monic.
    pub fn canonical(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let flat: Vec<F> = self.coeffs.iter().flat_map(|p| p.coeffs().iter().cloned()).collect();
        let f = F::normalizer(&flat, &self.leading().leading());
        Self::new(self.coeffs.iter().map(|p| p.scale(&f)).collect())
    }
}

impl<F: Field> fmt::Display for DOperator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let d = match j {
                0 => String::new(),
                1 => "*D".into(),
                _ => format!("*D^{j}"),
            };
            parts.push(format!("({c}){d}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

pub fn theta_from_d<F: Field>(op: &DOperator<F>) -> ThetaOperator<F> {
    op.to_theta()
}

pub fn d_from_theta<F: Field>(op: &ThetaOperator<F>) -> DOperator<F> {
    op.to_d()
}

pub fn op_mul<F: Field>(a: &ThetaOperator<F>, b: &ThetaOperator<F>) -> ThetaOperator<F> {
    a.op_mul(b)
}

pub fn apply_to_series<F: Field>(op: &ThetaOperator<F>, y: &PowerSeries<F>) -> PowerSeries<F> {
    op.apply_to_series(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use num_bigint::BigInt;

    type Op = ThetaOperator<Rational>;

    fn legendre() -> Op {
        Op::parse("Θ^2 - 16t(Θ+1/2)^2").unwrap()
    }

    #[test]
    fn theta_from_d_examples() {
        let d = DOperator::<Rational>::from_i64s(&[&[0], &[1]]);
        assert_eq!(d.to_theta(), Op::theta());
        let d = DOperator::<Rational>::from_i64s(&[&[-1], &[0, 1]]);
        assert_eq!(d.to_theta(), Op::from_i64s(&[&[-1, 1]]));
        let d = DOperator::<Rational>::from_i64s(&[&[-1], &[1, -1]]);
        assert_eq!(d.to_theta(), Op::from_i64s(&[&[0, 1], &[-1, -1]]));
    }

    #[test]
    fn roundtrip_d_theta() {
        let op = legendre();
        assert!(op.to_d().to_theta().same_as(&op));
    }

    #[test]
    fn commutator_with_t() {
        let th = Op::theta();
        let t = Op::t_power(int(1), 1);
        assert_eq!(th.op_mul(&t).sub(&t.op_mul(&th)), t);
        assert_eq!(th.op_mul(&th), Op::from_i64s(&[&[0, 0, 1]]));
    }

    #[test]
    fn products_annihilate_the_expected_series() {
        let a = Op::from_i64s(&[&[0, 1], &[-1, -1]]);
        // a kills 1/(1-t); a∘Θ kills constants, Θ∘a kills 1/(1-t)
        assert!(a.op_mul(&Op::theta()).apply_to_series(&PowerSeries::one(20)).is_zero());
        let geo = PowerSeries::from_fn(20, |_| int(1));
        assert!(Op::theta().op_mul(&a).apply_to_series(&geo).is_zero());
        // and the composition agrees with applying twice
        let y = PowerSeries::from_fn(20, |n| int(n as i64 * n as i64 - 3));
        let lhs = a.op_mul(&Op::theta()).apply_to_series(&y);
        let rhs = a.apply_to_series(&Op::theta().apply_to_series(&y));
        assert_eq!(lhs, rhs.truncate(lhs.order()));
    }

    #[test]
    fn legendre_kills_central_binomial_squares() {
        let mut c = BigInt::from(1);
        let y = PowerSeries::from_fn(30, |n| {
            if n > 0 {
                c = &c * (4 * n - 2) / n;
            }
            Rational::from_integer(&c * &c)
        });
        let out = legendre().apply_to_series(&y);
        assert_eq!(out.order(), 29);
        assert!(out.is_zero());
    }

    #[test]
    fn theta_on_t() {
        let y = PowerSeries::with_order(vec![int(0), int(1)], 3);
        assert_eq!(Op::theta().apply_to_series(&y), y);
    }

    #[test]
    fn canonical_clears_content_and_sign() {
        let op = Op::new(vec![Polynomial::new(vec![rat(-1, 2)]), Polynomial::new(vec![rat(0, 1), rat(-3, 4)])]);
        let c = op.canonical();
        assert_eq!(c, Op::from_i64s(&[&[2], &[0, 3]]));
    }
}
