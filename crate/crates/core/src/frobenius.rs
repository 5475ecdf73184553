//! Local solutions with logarithms, local monodromy and point types.
//!
//! Solutions are computed in the basis `L_k = log(t)^k / k!` on which
//! `Θ` acts on `t^s L_k` as `s + N` with `N L_k = L_{k-1}`. At step `m`
//! of an exponent class with base `α`, the equation for the coefficient
//! vector is `P_0(α+m+N) a_m = -sum_i P_i(α+m-i+N) a_{m-i}`. Writing
//! `P_0(α+m+N) = N^μ U` with `U` invertible, the top components are
//! forced and `μ` new parameters enter at the bottom. This is exact: a
//! logarithm appears precisely when the obstruction is nonzero.

use std::fmt;

use num_traits::One;

use crate::arith::linalg::rank;
use crate::arith::{Field, PointValue, Polynomial, QuadraticNumber, Rational};
use crate::error::{Error, Result};
use crate::optheta::{exponents_at, local_operator, SingularPoint, ThetaOperator};

/// `t^α sum_n sum_k A[n][k] t^n log(t)^k` around `point` (in its local
/// coordinate), known for `n <= truncation`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedSeries<F> {
    pub point: SingularPoint,
    pub exponent: F,
    pub coeffs: Vec<Vec<F>>,
}

impl<F: Field> GeneralizedSeries<F> {
    pub fn truncation(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, n: usize, k: usize) -> F {
        self.coeffs.get(n).and_then(|r| r.get(k)).cloned().unwrap_or_else(F::zero)
    }

    pub fn max_log_degree(&self) -> usize {
        self.coeffs.iter().filter_map(|r| r.iter().rposition(|c| !c.is_zero())).max().unwrap_or(0)
    }

    /// Highest log power in the leading `t^α` term.
    pub fn leading_log_degree(&self) -> usize {
        self.coeffs.first().and_then(|r| r.iter().rposition(|c| !c.is_zero())).unwrap_or(0)
    }

    pub fn has_log(&self) -> bool {
        self.max_log_degree() > 0
    }

    /// The holomorphic part `A[n][0]` as plain coefficients.
    pub fn log_free_part(&self) -> Vec<F> {
        self.coeffs.iter().map(|r| r.first().cloned().unwrap_or_else(F::zero)).collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> GeneralizedSeries<G> {
        GeneralizedSeries {
            point: self.point.clone(),
            exponent: f(&self.exponent),
            coeffs: self.coeffs.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

/// Echelonized local solutions at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalBasis<F> {
    pub point: SingularPoint,
    /// The operator in the local coordinate at `point`.
    pub local_operator: ThetaOperator<F>,
    pub solutions: Vec<GeneralizedSeries<F>>,
}

/// Exponents that differ by integers, with their Jordan blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentClass {
    pub exponents: Vec<PointValue>,
    pub jordan_blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMonodromyData {
    pub classes: Vec<ExponentClass>,
    /// All block sizes, descending.
    pub jordan_blocks: Vec<usize>,
}

impl LocalMonodromyData {
    pub fn has_logs(&self) -> bool {
        self.jordan_blocks.iter().any(|&b| b > 1)
    }
}

/// Degeneration type of a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum PointType {
    #[serde(rename = "MUM")]
    Mum,
    K,
    C,
    F,
    A,
    Apparent,
    Regular,
}

impl PointType {
    /// Finite local monodromy: no logarithms and not regular.
    pub fn is_f_type(self) -> bool {
        matches!(self, PointType::F | PointType::A | PointType::Apparent)
    }

    /// Letter used in names such as `KCCC`; apparent points count as `A`.
    pub fn letter(self) -> Option<char> {
        match self {
            PointType::Mum => Some('M'),
            PointType::K => Some('K'),
            PointType::C => Some('C'),
            PointType::F => Some('F'),
            PointType::A | PointType::Apparent => Some('A'),
            PointType::Regular => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PointType::Mum => "MUM",
            PointType::K => "K",
            PointType::C => "C",
            PointType::F => "F",
            PointType::A => "A",
            PointType::Apparent => "apparent",
            PointType::Regular => "regular",
        }
    }
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Default truncation `2 (r + n) + 20`.
pub fn default_truncation<F: Field>(op: &ThetaOperator<F>) -> usize {
    2 * (op.degree() + op.order()) + 20
}

fn is_integer<F: Field>(x: &F) -> Option<i64> {
    let q: Rational = x.to_rational()?;
    if q.is_integer() {
        i64::try_from(q.to_integer()).ok()
    } else {
        None
    }
}

/// Group exponents into classes modulo integers: `(base, [(offset, mult)])`.
fn exponent_classes<F: Field>(exps: &[F]) -> Vec<(F, Vec<(usize, usize)>)> {
    let mut groups: Vec<(F, Vec<i64>)> = Vec::new();
    for e in exps {
        match groups.iter_mut().find(|(b, _)| is_integer(&(e.clone() - b.clone())).is_some()) {
            Some((b, offs)) => offs.push(is_integer(&(e.clone() - b.clone())).unwrap()),
            None => groups.push((e.clone(), vec![0])),
        }
    }
    groups
        .into_iter()
        .map(|(b, offs)| {
            let lo = *offs.iter().min().unwrap();
            let base = b + F::from_i64(lo);
            let mut mult: Vec<(usize, usize)> = Vec::new();
            for o in offs {
                let o = (o - lo) as usize;
                match mult.iter_mut().find(|(x, _)| *x == o) {
                    Some((_, m)) => *m += 1,
                    None => mult.push((o, 1)),
                }
            }
            mult.sort();
            (base, mult)
        })
        .collect()
}

/// Taylor coefficients `p^(j)(s)/j!` for `j < k`.
fn taylor<F: Field>(p: &Polynomial<F>, s: &F, k: usize) -> Vec<F> {
    let q = p.translate(s);
    (0..k).map(|j| q.coeff(j)).collect()
}

fn factorial<F: Field>(k: usize) -> F {
    (1..=k).fold(F::one(), |acc, i| acc * F::from_usize(i))
}

/// Solutions of one exponent class, with the step and log slot at which
/// each parameter enters.
fn solve_class<F: Field>(
    op: &ThetaOperator<F>,
    base: &F,
    mults: &[(usize, usize)],
    point: &SingularPoint,
    trunc: usize,
) -> Vec<(usize, usize, GeneralizedSeries<F>)> {
    let d: usize = mults.iter().map(|(_, m)| m).sum();
    let k = d;
    let r = op.degree();
    // a[m][row k][param p]
    let mut a: Vec<Vec<Vec<F>>> = Vec::with_capacity(trunc + 1);
    let mut params: Vec<(usize, usize)> = Vec::new();
    for m in 0..=trunc {
        let s = base.clone() + F::from_usize(m);
        let mut rhs = vec![vec![F::zero(); d]; k];
        for i in 1..=r.min(m) {
            let pi = op.p(i);
            if pi.is_zero() {
                continue;
            }
            let c = taylor(&pi, &(s.clone() - F::from_usize(i)), k);
            let prev = &a[m - i];
            for row in 0..k {
                for j in 0..k - row {
                    if c[j].is_zero() {
                        continue;
                    }
                    for p in 0..d {
                        let v = &prev[row + j][p];
                        if !v.is_zero() {
                            rhs[row][p] = rhs[row][p].clone() - c[j].clone() * v.clone();
                        }
                    }
                }
            }
        }
        let c0 = taylor(&op.p(0), &s, k + 1);
        let mu = c0.iter().take_while(|x| x.is_zero()).count().min(k);
        let expected = mults.iter().find(|(o, _)| *o == m).map_or(0, |(_, x)| *x);
        debug_assert_eq!(mu, expected, "indicial multiplicity mismatch at step {m}");
        let mut y = vec![vec![F::zero(); d]; k];
        for row in 0..k - mu {
            y[row + mu] = rhs[row].clone();
        }
        debug_assert!(rhs[k - mu..].iter().all(|r| r.iter().all(|x| x.is_zero())));
        // U x = y with U = sum_j c0[j+mu] N^j, upper triangular
        let u: Vec<F> = (0..k).map(|j| c0.get(j + mu).cloned().unwrap_or_else(F::zero)).collect();
        // new parameters, scaled so the solution's leading coefficient is 1
        for l in 0..mu {
            let p = params.len();
            y[l][p] = u[0].clone();
            params.push((m, l));
        }
        let u0inv = u[0].inv();
        let mut x = vec![vec![F::zero(); d]; k];
        for row in (0..k).rev() {
            for p in 0..d {
                let mut acc = y[row][p].clone();
                for j in 1..k - row {
                    if !u[j].is_zero() && !x[row + j][p].is_zero() {
                        acc = acc - u[j].clone() * x[row + j][p].clone();
                    }
                }
                x[row][p] = acc * u0inv.clone();
            }
        }
        a.push(x);
    }
    let facts: Vec<F> = (0..k).map(factorial).collect();
    params
        .iter()
        .enumerate()
        .map(|(p, &(mp, lp))| {
            let coeffs = (mp..=trunc)
                .map(|m| (0..k).map(|row| a[m][row][p].clone() / facts[row].clone()).collect())
                .collect();
            let series = GeneralizedSeries { point: point.clone(), exponent: base.clone() + F::from_usize(mp), coeffs };
            (mp, lp, series)
        })
        .collect()
}

/// Basis at `s`, computed in `F`; fails if `s` or an exponent is not in `F`.
pub fn local_basis_in<F: Field>(op: &ThetaOperator<F>, s: &SingularPoint, trunc: usize) -> Result<LocalBasis<F>> {
    let lop = local_operator(op, s)?;
    let exps_q = exponents_at(op, s)?;
    let exps: Vec<F> = exps_q
        .iter()
        .map(|e| F::from_point(&PointValue::from_quadratic(e.clone())))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidArgument("exponents lie outside the coefficient field".into()))?;
    let mut sols: Vec<(QuadraticNumber, usize, GeneralizedSeries<F>)> = Vec::new();
    for (base, mults) in exponent_classes(&exps) {
        for (_, lp, g) in solve_class(&lop, &base, &mults, s, trunc) {
            sols.push((g.exponent.to_quadratic(), lp, g));
        }
    }
    sols.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
    Ok(LocalBasis { point: s.clone(), local_operator: lop, solutions: sols.into_iter().map(|x| x.2).collect() })
}

/// Local basis at `s` with truncation `trunc`, over the smallest supported
/// field containing the point and its exponents.
pub fn local_basis<F: Field>(
    op: &ThetaOperator<F>,
    s: &SingularPoint,
    trunc: usize,
) -> Result<LocalBasis<QuadraticNumber>> {
    let fits = s.value().is_none_or(|v| F::from_point(v).is_some())
        && exponents_at(op, s)?.iter().all(|e| F::from_point(&PointValue::from_quadratic(e.clone())).is_some());
    if fits {
        let b = local_basis_in(op, s, trunc)?;
        Ok(LocalBasis {
            point: b.point,
            local_operator: b.local_operator.map(|c| c.to_quadratic()),
            solutions: b.solutions.iter().map(|g| g.map(|c| c.to_quadratic())).collect(),
        })
    } else {
        local_basis_in(&op.map(|c| c.to_quadratic()), s, trunc)
    }
}

/// Jordan blocks of `d/dlog t` on the span of the basis, per class.
pub fn jordan_structure<F: Field>(basis: &LocalBasis<F>) -> LocalMonodromyData {
    let mut classes: Vec<(F, Vec<&GeneralizedSeries<F>>)> = Vec::new();
    for g in &basis.solutions {
        match classes.iter_mut().find(|(b, _)| is_integer(&(g.exponent.clone() - b.clone())).is_some()) {
            Some((_, v)) => v.push(g),
            None => classes.push((g.exponent.clone(), vec![g])),
        }
    }
    let mut out = Vec::new();
    let mut all = Vec::new();
    for (_, sols) in classes {
        let base = sols
            .iter()
            .map(|g| g.exponent.clone())
            .min_by(|x, y| x.to_quadratic().cmp(&y.to_quadratic()))
            .unwrap();
        let d = sols.len();
        let top = sols.iter().map(|g| is_integer(&(g.exponent.clone() - base.clone())).unwrap() as usize + g.truncation()).min().unwrap();
        // frame vectors over (offset, log power)
        let frame = |g: &GeneralizedSeries<F>, nil: usize| -> Vec<F> {
            let off = is_integer(&(g.exponent.clone() - base.clone())).unwrap() as usize;
            let mut v = vec![F::zero(); (top + 1) * d];
            for m in off..=top {
                for k in 0..d {
                    if k + nil >= d {
                        continue;
                    }
                    // d^nil/dlog^nil of log^(k+nil) gives (k+nil)!/k! log^k
                    let c = g.coeff(m - off, k + nil);
                    if c.is_zero() {
                        continue;
                    }
                    let f = (k + 1..=k + nil).fold(F::one(), |acc, i| acc * F::from_usize(i));
                    v[m * d + k] = c * f;
                }
            }
            v
        };
        let ranks: Vec<usize> = (0..=d + 1)
            .map(|j| {
                let rows: Vec<Vec<F>> = sols.iter().map(|g| frame(g, j)).collect();
                rank(&rows)
            })
            .collect();
        let mut blocks = Vec::new();
        for j in 1..=d {
            let ge_j = ranks[j - 1] - ranks[j];
            let ge_j1 = ranks[j] - ranks[j + 1];
            for _ in 0..ge_j - ge_j1 {
                blocks.push(j);
            }
        }
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        all.extend(blocks.iter().copied());
        let mut exps: Vec<PointValue> =
            sols.iter().map(|g| PointValue::from_quadratic(g.exponent.to_quadratic())).collect();
        exps.sort();
        out.push(ExponentClass { exponents: exps, jordan_blocks: blocks });
    }
    all.sort_unstable_by(|a, b| b.cmp(a));
    LocalMonodromyData { classes: out, jordan_blocks: all }
}

/// Whether any local solution at `s` involves a logarithm.
pub fn has_logs<F: Field>(op: &ThetaOperator<F>, s: &SingularPoint) -> Result<bool> {
    let exps = exponents_at(op, s)?;
    let spread = exps
        .iter()
        .flat_map(|a| exps.iter().filter_map(move |b| is_integer(&(b.clone() - a.clone()))))
        .max()
        .unwrap_or(0) as usize;
    let basis = local_basis(op, s, spread + 1)?;
    Ok(basis.solutions.iter().any(|g| g.has_log()))
}

/// Exponents, monodromy and type at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointReport {
    pub point: SingularPoint,
    pub exponents: Vec<PointValue>,
    pub monodromy: LocalMonodromyData,
    pub label: PointType,
}

impl PointReport {
    /// Order of the local monodromy when it is finite.
    pub fn monodromy_order(&self) -> Option<u64> {
        if self.monodromy.has_logs() {
            return None;
        }
        let mut l = num_bigint::BigInt::one();
        for e in &self.exponents {
            let q = e.as_rational()?;
            l = num_integer::Integer::lcm(&l, q.denom());
        }
        u64::try_from(l).ok()
    }
}

fn is_arithmetic(exps: &[PointValue]) -> bool {
    let qs: Vec<QuadraticNumber> = exps.iter().map(|e| e.to_quadratic()).collect();
    qs.windows(3).all(|w| w[1].clone() - w[0].clone() == w[2].clone() - w[1].clone())
}

/// Apply the decision table to exponents and Jordan blocks.
pub fn classify(order: usize, exps: &[PointValue], blocks: &[usize]) -> Result<PointType> {
    let logs = blocks.iter().any(|&b| b > 1);
    let unclassified = || Error::UnclassifiedPattern {
        exponents: exps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","),
        blocks: blocks.to_vec(),
    };
    if !logs {
        let ints: Option<Vec<i64>> = exps.iter().map(|e| is_integer(&e.to_quadratic())).collect();
        return Ok(match ints {
            Some(v) if v.iter().enumerate().all(|(k, &x)| x == k as i64) => PointType::Regular,
            Some(v) if v.windows(2).all(|w| w[0] < w[1]) => PointType::Apparent,
            _ if is_arithmetic(exps) => PointType::F,
            _ => PointType::A,
        });
    }
    let count = |s: usize| blocks.iter().filter(|&&b| b == s).count();
    match order {
        4 if blocks == [4] => Ok(PointType::Mum),
        4 if count(2) == 2 => Ok(PointType::K),
        4 if count(2) == 1 && count(1) == 2 => Ok(PointType::C),
        2 if blocks == [2] => Ok(PointType::K),
        n if blocks == [n] && n != 2 => Ok(PointType::Mum),
        _ => Err(unclassified()),
    }
}

/// Full local analysis at `s`.
pub fn analyze_point<F: Field>(op: &ThetaOperator<F>, s: &SingularPoint) -> Result<PointReport> {
    let basis = local_basis(op, s, default_truncation(op))?;
    let mono = jordan_structure(&basis);
    let mut exps: Vec<PointValue> =
        exponents_at(op, s)?.into_iter().map(PointValue::from_quadratic).collect();
    exps.sort();
    let label = classify(op.order(), &exps, &mono.jordan_blocks)?;
    Ok(PointReport { point: s.clone(), exponents: exps, monodromy: mono, label })
}

pub fn classify_point<F: Field>(op: &ThetaOperator<F>, s: &SingularPoint) -> Result<PointType> {
    Ok(analyze_point(op, s)?.label)
}

/// Residual of the local operator on a generalized series, computed by
/// applying `Θ` term by term to `t^(α+n) log^k`. Entry `[n][k]` is the
/// coefficient of `t^(α+n) log^k`.
pub fn residual<F: Field>(op: &ThetaOperator<F>, y: &GeneralizedSeries<F>) -> Vec<Vec<F>> {
    let trunc = y.truncation();
    let kmax = y.coeffs.iter().map(|r| r.len()).max().unwrap_or(1);
    let theta = |v: &Vec<Vec<F>>| -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); kmax]; trunc + 1];
        for n in 0..=trunc {
            let s = y.exponent.clone() + F::from_usize(n);
            for k in 0..kmax {
                let c = v[n][k].clone();
                if c.is_zero() {
                    continue;
                }
                out[n][k] = out[n][k].clone() + s.clone() * c.clone();
                if k > 0 {
                    out[n][k - 1] = out[n][k - 1].clone() + F::from_usize(k) * c;
                }
            }
        }
        out
    };
    let start: Vec<Vec<F>> = (0..=trunc).map(|n| (0..kmax).map(|k| y.coeff(n, k)).collect()).collect();
    let mut total = vec![vec![F::zero(); kmax]; trunc + 1];
    for (i, p) in op.coeffs().iter().enumerate() {
        // Horner: P(Θ) y = c_0 y + Θ(c_1 y + Θ(...))
        let mut acc = vec![vec![F::zero(); kmax]; trunc + 1];
        for c in p.coeffs().iter().rev() {
            acc = theta(&acc);
            for n in 0..=trunc {
                for k in 0..kmax {
                    if !start[n][k].is_zero() {
                        acc[n][k] = acc[n][k].clone() + c.clone() * start[n][k].clone();
                    }
                }
            }
        }
        for n in i..=trunc {
            for k in 0..kmax {
                total[n][k] = total[n][k].clone() + acc[n - i][k].clone();
            }
        }
    }
    total
}

/// `true` when the local operator kills every basis element through its
/// truncation order.
pub fn basis_is_annihilated<F: Field>(basis: &LocalBasis<F>) -> bool {
    basis
        .solutions
        .iter()
        .all(|g| residual(&basis.local_operator, g).iter().all(|r| r.iter().all(|c| c.is_zero())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use num_traits::Zero;

    type Op = ThetaOperator<Rational>;

    fn q(r: Rational) -> QuadraticNumber {
        QuadraticNumber::rational(r)
    }

    #[test]
    fn legendre_at_zero_has_one_log() {
        let op = Op::parse("Θ^2 - 16t(Θ+1/2)^2").unwrap();
        let b = local_basis(&op, &SingularPoint::zero(), 20).unwrap();
        assert_eq!(b.solutions.len(), 2);
        let f0 = &b.solutions[0];
        assert!(!f0.has_log());
        assert_eq!(f0.coeff(1, 0), q(int(4)));
        let f1 = &b.solutions[1];
        assert_eq!(f1.max_log_degree(), 1);
        // log-coefficient of the second solution is the first
        for n in 0..=20 {
            assert_eq!(f1.coeff(n, 1), f0.coeff(n, 0));
        }
        assert!(basis_is_annihilated(&b));
        assert_eq!(jordan_structure(&b).jordan_blocks, vec![2]);
    }

    #[test]
    fn resonance_without_log() {
        let op = Op::parse("Θ(Θ-2)").unwrap();
        let b = local_basis(&op, &SingularPoint::zero(), 10).unwrap();
        assert!(b.solutions.iter().all(|g| !g.has_log()));
        assert_eq!(b.solutions[0].exponent, q(int(0)));
        assert_eq!(b.solutions[1].exponent, q(int(2)));
        assert_eq!(jordan_structure(&b).jordan_blocks, vec![1, 1]);
    }

    #[test]
    fn mum_and_regular() {
        let op = Op::parse("Θ^4 - t(Θ+1)^4").unwrap();
        assert_eq!(classify_point(&op, &SingularPoint::zero()).unwrap(), PointType::Mum);
        let reg = Op::parse("Θ(Θ-1)(Θ-2)(Θ-3)").unwrap();
        assert_eq!(classify_point(&reg, &SingularPoint::zero()).unwrap(), PointType::Regular);
    }

    #[test]
    fn classify_table() {
        let e = |v: &[(i64, i64)]| -> Vec<PointValue> { v.iter().map(|&(a, b)| PointValue::Rational(rat(a, b))).collect() };
        assert_eq!(classify(4, &e(&[(0, 1), (1, 1), (3, 1), (4, 1)]), &[1, 1, 1, 1]).unwrap(), PointType::Apparent);
        assert_eq!(classify(4, &e(&[(0, 1), (1, 2), (3, 2), (2, 1)]), &[1, 1, 1, 1]).unwrap(), PointType::A);
        assert_eq!(classify(4, &e(&[(1, 4), (1, 2), (3, 4), (1, 1)]), &[1, 1, 1, 1]).unwrap(), PointType::F);
        assert_eq!(classify(4, &e(&[(0, 1), (0, 1), (1, 1), (1, 1)]), &[2, 2]).unwrap(), PointType::K);
        assert_eq!(classify(4, &e(&[(0, 1), (1, 1), (1, 1), (2, 1)]), &[2, 1, 1]).unwrap(), PointType::C);
        assert!(matches!(classify(4, &e(&[(0, 1), (0, 1), (0, 1), (1, 1)]), &[3, 1]), Err(Error::UnclassifiedPattern { .. })));
    }

    #[test]
    fn residual_detects_wrong_series() {
        let op = Op::parse("Θ - t(Θ+1)").unwrap();
        let good = GeneralizedSeries { point: SingularPoint::zero(), exponent: int(0), coeffs: vec![vec![int(1)]; 6] };
        assert!(residual(&op, &good).iter().all(|r| r[0].is_zero()));
        let mut bad = good.clone();
        bad.coeffs[3][0] = int(2);
        assert!(!residual(&op, &bad).iter().all(|r| r[0].is_zero()));
    }
}
