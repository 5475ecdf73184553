//! Singular points, indicial polynomials and Riemann symbols.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use super::ThetaOperator;
use crate::arith::{quadratic_field_roots, Field, PointValue, Polynomial, QuadraticNumber, Rational};
use crate::error::{Error, Result};

/// A point of the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SingularPoint {
    Finite(PointValue),
    Infinity,
}

impl SingularPoint {
    pub fn zero() -> Self {
        SingularPoint::Finite(PointValue::Rational(Rational::zero()))
    }

    pub fn rational(r: Rational) -> Self {
        SingularPoint::Finite(PointValue::Rational(r))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SingularPoint::Finite(PointValue::Rational(r)) if r.is_zero())
    }

    pub fn value(&self) -> Option<&PointValue> {
        match self {
            SingularPoint::Finite(v) => Some(v),
            SingularPoint::Infinity => None,
        }
    }

    pub fn conjugate(&self) -> Self {
        match self {
            SingularPoint::Finite(v) => SingularPoint::Finite(v.conjugate()),
            SingularPoint::Infinity => SingularPoint::Infinity,
        }
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self, SingularPoint::Finite(PointValue::Quadratic(_)))
    }

    /// `"inf"`, `"∞"`, or a rational / quadratic number.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(SingularPoint::Infinity),
            v => Ok(SingularPoint::Finite(PointValue::parse(v)?)),
        }
    }
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularPoint::Finite(v) => write!(f, "{v}"),
            SingularPoint::Infinity => f.write_str("∞"),
        }
    }
}

fn embed<F: Field>(op: &ThetaOperator<F>) -> ThetaOperator<QuadraticNumber> {
    op.map(|c| c.to_quadratic())
}

/// The operator rewritten in a local coordinate vanishing at `s`
/// (`t - a`, or `1/t` at infinity), in canonical form.
///
/// Fails when `s` does not lie in the coefficient field `F`.
pub fn local_operator<F: Field>(op: &ThetaOperator<F>, s: &SingularPoint) -> Result<ThetaOperator<F>> {
    let op = op.canonical();
    match s {
        SingularPoint::Infinity => {
            let r = op.degree();
            let neg = Polynomial::new(vec![F::zero(), -F::one()]);
            Ok(ThetaOperator::new((0..=r).map(|j| op.p(r - j).compose(&neg)).collect()).canonical())
        }
        s if s.is_zero() => Ok(op),
        SingularPoint::Finite(v) => {
            let a = F::from_point(v)
                .ok_or_else(|| Error::InvalidArgument(format!("point {v} lies outside the coefficient field")))?;
            Ok(op.to_d().translate(&a).to_theta().canonical())
        }
    }
}

/// `true` for 0, ∞ and the roots of the leading derivative coefficient.
pub fn is_candidate<F: Field>(op: &ThetaOperator<F>, s: &SingularPoint) -> bool {
    match s {
        SingularPoint::Infinity => true,
        s if s.is_zero() => true,
        SingularPoint::Finite(v) => embed(op).leading_polynomial().eval(&v.to_quadratic()).is_zero(),
    }
}

/// `P_0` of the local operator at `s`, whose roots are the exponents.
pub fn indicial_polynomial<F: Field>(op: &ThetaOperator<F>, s: &SingularPoint) -> Result<Polynomial<QuadraticNumber>> {
    if !is_candidate(op, s) {
        return Err(Error::NotASingularCandidate(s.to_string()));
    }
    let local_p0 = match s.value().map(|v| F::from_point(v).is_some()) {
        Some(false) => local_operator(&embed(op), s)?.p(0),
        _ => local_operator(op, s)?.p(0).map(|c| c.to_quadratic()),
    };
    Ok(local_p0)
}

/// Exponents at `s` with multiplicity, ascending.
pub fn exponents_at<F: Field>(op: &ThetaOperator<F>, s: &SingularPoint) -> Result<Vec<QuadraticNumber>> {
    let p0 = indicial_polynomial(op, s)?;
    let n = op.order();
    if p0.degree() != Some(n) {
        return Err(Error::Irregular(s.to_string()));
    }
    let roots = quadratic_field_roots(&p0).map_err(|e| match e {
        Error::UnresolvedFactor(f) => Error::IrrationalExponent(f),
        e => e,
    })?;
    let mut out: Vec<QuadraticNumber> = roots.into_iter().flat_map(|(r, m)| std::iter::repeat(r).take(m)).collect();
    out.sort();
    Ok(out)
}

/// Candidate points: 0, ∞ and every root of the leading coefficient.
pub fn singular_points<F: Field>(op: &ThetaOperator<F>) -> Result<Vec<SingularPoint>> {
    let lead = embed(&op.canonical()).leading_polynomial();
    let mut pts = vec![SingularPoint::zero(), SingularPoint::Infinity];
    if lead.degree().unwrap_or(0) > 0 {
        for (r, _) in quadratic_field_roots(&lead)? {
            pts.push(SingularPoint::Finite(PointValue::from_quadratic(r)));
        }
    }
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// One column of a Riemann symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolEntry {
    pub point: SingularPoint,
    pub exponents: Vec<PointValue>,
    /// `false` for points that look regular: exponents `0..n-1`, no logs.
    pub genuine: bool,
}

impl SymbolEntry {
    pub fn exponent_strings(&self) -> Vec<String> {
        self.exponents.iter().map(|e| e.to_string()).collect()
    }
}

fn regular_pattern(exps: &[QuadraticNumber]) -> bool {
    exps.iter().enumerate().all(|(k, e)| *e == QuadraticNumber::from_usize(k))
}

/// Exponents and genuineness at one point.
pub fn symbol_entry<F: Field>(op: &ThetaOperator<F>, s: &SingularPoint) -> Result<SymbolEntry> {
    let exps = exponents_at(op, s)?;
    let genuine = !regular_pattern(&exps) || crate::frobenius::has_logs(op, s)?;
    Ok(SymbolEntry { point: s.clone(), exponents: exps.into_iter().map(PointValue::from_quadratic).collect(), genuine })
}

/// Exponent table over all candidate points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannSymbol {
    pub order: usize,
    pub entries: Vec<SymbolEntry>,
}

impl RiemannSymbol {
    pub fn get(&self, s: &SingularPoint) -> Option<&SymbolEntry> {
        self.entries.iter().find(|e| &e.point == s)
    }

    pub fn genuine(&self) -> impl Iterator<Item = &SymbolEntry> {
        self.entries.iter().filter(|e| e.genuine)
    }

    pub fn genuine_points(&self) -> Vec<SingularPoint> {
        self.genuine().map(|e| e.point.clone()).collect()
    }

    /// `true` when no point carries anything but `0..n-1` without logs.
    pub fn is_trivial(&self) -> bool {
        self.genuine().next().is_none()
    }

    /// Aligned table of the genuine points, one row per exponent.
    pub fn table(&self) -> String {
        let cols: Vec<(String, Vec<String>)> =
            self.genuine().map(|e| (e.point.to_string(), e.exponent_strings())).collect();
        let widths: Vec<usize> = cols
            .iter()
            .map(|(h, es)| es.iter().map(|e| e.chars().count()).chain([h.chars().count()]).max().unwrap_or(1))
            .collect();
        let mut out = String::new();
        let row = |cells: Vec<&str>| -> String {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{:>w$}", c, w = *w))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        out.push_str(&row(cols.iter().map(|(h, _)| h.as_str()).collect()));
        out.push('\n');
        out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
        out.push('\n');
        for k in 0..self.order {
            out.push_str(&row(cols.iter().map(|(_, es)| es[k].as_str()).collect()));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for RiemannSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table())
    }
}

/// `Σ_p (Σ exponents at p - n(n-1)/2)` over every candidate point. The
/// Fuchs relation says this is `-n(n-1)`.
pub fn fuchs_sum<F: Field>(op: &ThetaOperator<F>) -> Result<QuadraticNumber> {
    let sym = riemann_symbol(op)?;
    let n = op.order();
    let regular = QuadraticNumber::from_usize(n * n.saturating_sub(1) / 2);
    let mut acc = QuadraticNumber::zero();
    for e in &sym.entries {
        for x in &e.exponents {
            acc = acc + x.to_quadratic();
        }
        acc = acc - regular.clone();
    }
    Ok(acc)
}

/// Riemann symbol over every candidate point, ordered finite-ascending
/// then ∞. For rational operators a quadratic point's column is the
/// conjugate of its partner's.
pub fn riemann_symbol<F: Field>(op: &ThetaOperator<F>) -> Result<RiemannSymbol> {
    let rational_op = op.to_rational().is_some();
    let mut done: HashMap<SingularPoint, SymbolEntry> = HashMap::new();
    let mut entries = Vec::new();
    for p in singular_points(op)? {
        let entry = match done.get(&p.conjugate()) {
            Some(e) if rational_op && p.is_quadratic() => SymbolEntry {
                point: p.clone(),
                exponents: {
                    let mut v: Vec<PointValue> = e.exponents.iter().map(|x| x.conjugate()).collect();
                    v.sort();
                    v
                },
                genuine: e.genuine,
            },
            _ => symbol_entry(op, &p)?,
        };
        done.insert(p, entry.clone());
        entries.push(entry);
    }
    Ok(RiemannSymbol { order: op.order(), entries })
}
