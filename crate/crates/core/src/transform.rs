//! Möbius changes of variable, exponent shifts, power pull-backs and
//! descents, and the Yukawa coupling.
//!
//! All operations return operators in canonical form.

use std::fmt;

use num_traits::Zero;

use crate::arith::{int, roots_with_multiplicity, Field, PointValue, Polynomial, QuadraticNumber, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::optheta::{riemann_symbol, DOperator, RiemannSymbol, SingularPoint, ThetaOperator};

/// `t = (a u + b) / (c u + d)` with `ad - bc != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusMap<F = Rational> {
    pub a: F,
    pub b: F,
    pub c: F,
    pub d: F,
}

impl<F: Field> MobiusMap<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> Result<Self> {
        if (a.clone() * d.clone() - b.clone() * c.clone()).is_zero() {
            return Err(Error::InvalidArgument("degenerate Möbius map".into()));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: F::one(), b: F::zero(), c: F::zero(), d: F::one() }
    }

    pub fn determinant(&self) -> F {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Self) -> Self {
        Self {
            a: self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            b: self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            c: self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            d: self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        }
    }

    /// Image of a projective point under the map.
    pub fn apply(&self, p: &SingularPoint) -> SingularPoint {
        let q = |x: &F| x.to_quadratic();
        let (num, den) = match p {
            SingularPoint::Infinity => (q(&self.a), q(&self.c)),
            SingularPoint::Finite(v) => {
                let x = v.to_quadratic();
                (q(&self.a) * x.clone() + q(&self.b), q(&self.c) * x + q(&self.d))
            }
        };
        if den.is_zero() {
            SingularPoint::Infinity
        } else {
            SingularPoint::Finite(PointValue::from_quadratic(num / den))
        }
    }

    /// The map sending `p1, p2, p3` to `0, 1, ∞` respectively, as `u(t)`.
    pub fn to_zero_one_infinity(p1: &SingularPoint, p2: &SingularPoint, p3: &SingularPoint) -> Option<Self> {
        // u = (t - p1)(p2 - p3) / ((t - p3)(p2 - p1)), with ∞ handled by limits
        let v = |p: &SingularPoint| p.value().map(|x| F::from_point(x));
        let m = match (v(p1), v(p2), v(p3)) {
            (Some(Some(x1)), Some(Some(x2)), Some(Some(x3))) => {
                let k = x2.clone() - x3.clone();
                let l = x2 - x1.clone();
                Self { a: k.clone(), b: -(k * x1), c: l.clone(), d: -(l * x3) }
            }
            (None, Some(Some(x2)), Some(Some(x3))) => Self { a: F::zero(), b: x2 - x3.clone(), c: F::one(), d: -x3 },
            (Some(Some(x1)), None, Some(Some(x3))) => Self { a: F::one(), b: -x1, c: F::one(), d: -x3 },
            (Some(Some(x1)), Some(Some(x2)), None) => Self { a: F::one(), b: -x1.clone(), c: F::zero(), d: x2 - x1 },
            _ => return None,
        };
        (!m.determinant().is_zero()).then_some(m)
    }
}

impl MobiusMap<Rational> {
    pub fn from_i64s(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(int(a), int(b), int(c), int(d))
    }
}

impl<F: Field> fmt::Display for MobiusMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t = ({}·u + {})/({}·u + {})", self.a, self.b, self.c, self.d)
    }
}

/// Change of variable `t = m(u)`; singular points move to `m⁻¹(points)`.
pub fn mobius<F: Field>(op: &ThetaOperator<F>, m: &MobiusMap<F>) -> ThetaOperator<F> {
    let d_op = op.to_d();
    let n = d_op.order();
    let num = Polynomial::new(vec![m.b.clone(), m.a.clone()]);
    let den = Polynomial::new(vec![m.d.clone(), m.c.clone()]);
    let deg = d_op.coeffs().iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    // (cu+d)^deg · c_j(m(u))
    let num_pows: Vec<Polynomial<F>> = (0..=deg).map(|k| num.pow(k)).collect();
    let den_pows: Vec<Polynomial<F>> = (0..=deg).map(|k| den.pow(k)).collect();
    let hom: Vec<Polynomial<F>> = d_op
        .coeffs()
        .iter()
        .map(|c| {
            let mut acc = Polynomial::zero();
            for (k, ck) in c.coeffs().iter().enumerate() {
                if !ck.is_zero() {
                    acc = &acc + &(&num_pows[k] * &den_pows[deg - k]).scale(ck);
                }
            }
            acc
        })
        .collect();
    // D_t = E = (w/Δ) D_u with w = (cu+d)^2; E^j = sum_l e[j][l] D_u^l
    let w = den.pow(2).scale(&m.determinant().inv());
    let mut e: Vec<Polynomial<F>> = vec![Polynomial::one()];
    let mut out: Vec<Polynomial<F>> = vec![Polynomial::zero(); n + 1];
    for (j, hj) in hom.iter().enumerate() {
        if j > 0 {
            let mut next = vec![Polynomial::zero(); e.len() + 1];
            for (l, el) in e.iter().enumerate() {
                next[l] = &next[l] + &(&w * &el.derivative());
                next[l + 1] = &next[l + 1] + &(&w * el);
            }
            e = next;
        }
        for (l, el) in e.iter().enumerate() {
            out[l] = &out[l] + &(hj * el);
        }
    }
    DOperator::new(out).remove_content().to_theta().canonical()
}

/// Conjugate by `prod f_i^{ε_i}`: solutions are multiplied by it, so the
/// exponents at the roots of `f_i` rise by `ε_i`.
pub fn conjugate_by_factors<F: Field>(op: &ThetaOperator<F>, factors: &[(Polynomial<F>, Rational)]) -> ThetaOperator<F> {
    if factors.iter().all(|(_, e)| e.is_zero()) {
        return op.canonical();
    }
    let d_op = op.to_d();
    let n = d_op.order();
    let w = factors.iter().fold(Polynomial::one(), |acc, (f, _)| &acc * f);
    // g / w = sum ε_i f_i' / f_i
    let mut g = Polynomial::zero();
    for (i, (f, eps)) in factors.iter().enumerate() {
        let others = factors.iter().enumerate().filter(|(j, _)| *j != i).fold(Polynomial::one(), |acc, (_, (h, _))| &acc * h);
        g = &g + &(&f.derivative() * &others).scale(&F::from_rational(eps));
    }
    let dw = w.derivative();
    // (D - g/w)^k = w^-k sum_l h[k][l] D^l
    let mut h: Vec<Polynomial<F>> = vec![Polynomial::one()];
    let mut out: Vec<Polynomial<F>> = vec![Polynomial::zero(); n + 1];
    for j in 0..=n {
        if j > 0 {
            let k = F::from_usize(j - 1);
            let mut next = vec![Polynomial::zero(); h.len() + 1];
            for (l, hl) in h.iter().enumerate() {
                let a = &(&hl.derivative() * &w) - &(&(&dw * hl).scale(&k) + &(&g * hl));
                next[l] = &next[l] + &a;
                next[l + 1] = &next[l + 1] + &(&w * hl);
            }
            h = next;
        }
        let cj = &d_op.c(j) * &w.pow(n - j);
        for (l, hl) in h.iter().enumerate() {
            out[l] = &out[l] + &(&cj * hl);
        }
    }
    DOperator::new(out).remove_content().to_theta().canonical()
}

/// Finite points with their shifts; ∞ receives minus the total.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ShiftAssignment {
    pub shifts: Vec<(SingularPoint, Rational)>,
}

impl ShiftAssignment {
    pub fn new(shifts: Vec<(SingularPoint, Rational)>) -> Result<Self> {
        for (i, (p, _)) in shifts.iter().enumerate() {
            if matches!(p, SingularPoint::Infinity) {
                return Err(Error::InvalidArgument("shift points must be finite".into()));
            }
            if shifts[..i].iter().any(|(q, _)| q == p) {
                return Err(Error::InvalidArgument(format!("point {p} listed twice")));
            }
        }
        Ok(Self { shifts })
    }

    pub fn at_infinity(&self) -> Rational {
        -self.shifts.iter().map(|(_, e)| e.clone()).sum::<Rational>()
    }

    /// Shift applied at `p`.
    pub fn amount(&self, p: &SingularPoint) -> Rational {
        match p {
            SingularPoint::Infinity => self.at_infinity(),
            p => self.shifts.iter().find(|(q, _)| q == p).map(|(_, e)| e.clone()).unwrap_or_else(Rational::zero),
        }
    }
}

/// Exponent shift at finite points, compensated at ∞.
///
/// Points must lie in `F`, except that a conjugate pair of quadratic
/// points with equal shifts is handled by its rational quadratic factor.
pub fn shift_exponents<F: Field>(op: &ThetaOperator<F>, s: &ShiftAssignment) -> Result<ThetaOperator<F>> {
    let mut factors: Vec<(Polynomial<F>, Rational)> = Vec::new();
    let mut used = vec![false; s.shifts.len()];
    for (i, (p, eps)) in s.shifts.iter().enumerate() {
        if used[i] {
            continue;
        }
        let v = p.value().expect("finite");
        if let Some(a) = F::from_point(v) {
            factors.push((Polynomial::linear_root(a), eps.clone()));
            continue;
        }
        let conj = p.conjugate();
        let j = s.shifts.iter().position(|(q, e)| *q == conj && e == eps).ok_or_else(|| {
            Error::InvalidArgument(format!("point {p} needs its conjugate with the same shift"))
        })?;
        used[j] = true;
        let x = v.to_quadratic();
        let (tr, nm) = (x.trace(), x.norm());
        let quad = Polynomial::new(vec![F::from_rational(&nm), F::from_rational(&-tr), F::one()]);
        factors.push((quad, eps.clone()));
    }
    Ok(conjugate_by_factors(op, &factors))
}

/// Substitute `t = s^n`: `P_i(Θ_t)` becomes `s^{n i} P_i(Θ_s / n)`.
pub fn pullback_power<F: Field>(op: &ThetaOperator<F>, n: usize) -> Result<ThetaOperator<F>> {
    if n < 2 {
        return Err(Error::InvalidArgument("pull-back degree must be at least 2".into()));
    }
    let scale = Polynomial::monomial(F::from_usize(n).inv(), 1);
    let mut out = vec![Polynomial::zero(); op.degree() * n + 1];
    for (i, p) in op.coeffs().iter().enumerate() {
        out[n * i] = p.compose(&scale);
    }
    Ok(ThetaOperator::new(out).canonical())
}

/// Whether only powers `t^{n i}` occur (after removing a left power of `t`).
pub fn is_invariant_under_roots<F: Field>(op: &ThetaOperator<F>, n: usize) -> bool {
    op.canonical().coeffs().iter().enumerate().all(|(i, p)| i % n == 0 || p.is_zero())
}

pub fn is_even<F: Field>(op: &ThetaOperator<F>) -> bool {
    is_invariant_under_roots(op, 2)
}

/// Inverse of [`pullback_power`]: new coordinate `u = t^n`.
pub fn descend_power<F: Field>(op: &ThetaOperator<F>, n: usize) -> Result<ThetaOperator<F>> {
    if !is_invariant_under_roots(op, n) {
        return Err(Error::NotEven);
    }
    let op = op.canonical();
    let scale = Polynomial::monomial(F::from_usize(n), 1);
    let rows = op.coeffs().iter().step_by(n).map(|p| p.compose(&scale)).collect();
    Ok(ThetaOperator::new(rows).canonical())
}

pub fn descend_quadratic<F: Field>(op: &ThetaOperator<F>) -> Result<ThetaOperator<F>> {
    descend_power(op, 2)
}

/// `Y = prod (t - a)^e` up to a constant.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct YukawaData {
    pub factors: Vec<(PointValue, Rational)>,
}

impl YukawaData {
    /// Points where `Y` vanishes, candidates for apparent singularities.
    pub fn zeros(&self) -> Vec<&PointValue> {
        self.factors.iter().filter(|(_, e)| *e > Rational::zero()).map(|(p, _)| p).collect()
    }

    pub fn exponent_at(&self, p: &PointValue) -> Option<&Rational> {
        self.factors.iter().find(|(q, _)| q == p).map(|(_, e)| e)
    }
}

impl fmt::Display for YukawaData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(|(p, e)| format!("(t - {p})^({e})")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `exp(-1/2 ∫ b_1 dt/t)` where `b_1 = B_{n-1}/B_n` in the expansion
/// `sum_k B_k(t) Θ^k`, from the residues of `b_1/t`.
///
/// This is the coupling for the `Θ`-form; the derivative-form version
/// differs only by a power of `t`.
pub fn yukawa(op: &ThetaOperator<Rational>) -> Result<YukawaData> {
    let op = op.canonical();
    let n = op.order();
    if n == 0 {
        return Ok(YukawaData::default());
    }
    let b = |k: usize| Polynomial::new(op.coeffs().iter().map(|p| p.coeff(k)).collect());
    let den = b(n).shift_up(1);
    let a1 = RationalFunction::new(b(n - 1), den)?;
    if !a1.num().is_zero() && a1.num().degree() >= a1.den().degree() {
        return Err(Error::NonrationalYukawa(format!("b1/t = {a1} has a polynomial part")));
    }
    let mut factors = Vec::new();
    if a1.num().is_zero() {
        return Ok(YukawaData { factors });
    }
    let dden = a1.den().derivative();
    let q = |p: &Polynomial<Rational>| p.map(|c| QuadraticNumber::rational(c.clone()));
    let (num, dden) = (q(a1.num()), q(&dden));
    for (root, mult) in roots_with_multiplicity(a1.den())? {
        if mult > 1 {
            return Err(Error::NonrationalYukawa(format!("pole of order {mult} at {root}")));
        }
        let x = root.to_quadratic();
        let res = num.eval(&x) / dden.eval(&x);
        let res = res.to_rational().ok_or_else(|| Error::NonrationalYukawa(format!("residue {res} at {root}")))?;
        let e = -res / int(2);
        if !e.is_zero() {
            factors.push((root, e));
        }
    }
    Ok(YukawaData { factors })
}

/// Symbol with points moved by `m⁻¹` and exponents kept.
pub fn transport_symbol<F: Field>(sym: &RiemannSymbol, m: &MobiusMap<F>) -> RiemannSymbol {
    let inv = m.inverse();
    let mut entries: Vec<_> = sym
        .entries
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.point = inv.apply(&e.point);
            e
        })
        .collect();
    entries.sort_by(|a, b| a.point.cmp(&b.point));
    RiemannSymbol { order: sym.order, entries }
}

/// A Möbius map and shifts carrying `p` to `q`: `shift(mobius(p, m), s) == q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub map: MobiusMap<Rational>,
    pub shifts: ShiftAssignment,
}

impl Equivalence {
    /// Integral shifts only.
    pub fn is_strict(&self) -> bool {
        self.shifts.shifts.iter().all(|(_, e)| e.is_integer()) && self.shifts.at_infinity().is_integer()
    }
}

fn shift_between(from: &[PointValue], to: &[PointValue]) -> Option<Rational> {
    if from.len() != to.len() {
        return None;
    }
    let eps = to[0].to_quadratic() - from[0].to_quadratic();
    let eps = eps.to_rational()?;
    let ok = from
        .iter()
        .zip(to)
        .all(|(a, b)| b.to_quadratic() - a.to_quadratic() == QuadraticNumber::rational(eps.clone()));
    ok.then_some(eps)
}

/// Bounded search for a Möbius map (fixed by three genuine rational
/// points) followed by exponent shifts relating `p` to `q`.
pub fn find_equivalence(p: &ThetaOperator<Rational>, q: &ThetaOperator<Rational>) -> Result<Option<Equivalence>> {
    if p.order() != q.order() {
        return Ok(None);
    }
    let sp = riemann_symbol(p)?;
    let sq = riemann_symbol(q)?;
    let gp: Vec<_> = sp.genuine().cloned().collect();
    let gq: Vec<_> = sq.genuine().cloned().collect();
    if gp.len() != gq.len() || gp.len() < 3 {
        return Ok(None);
    }
    let rational = |e: &&crate::optheta::SymbolEntry| !e.point.is_quadratic();
    let src: Vec<_> = gp.iter().filter(rational).take(3).collect();
    if src.len() < 3 {
        return Ok(None);
    }
    let targets: Vec<_> = gq.iter().filter(rational).collect();
    let to_std = MobiusMap::<Rational>::to_zero_one_infinity(&src[0].point, &src[1].point, &src[2].point);
    let Some(to_std) = to_std else { return Ok(None) };
    for a in &targets {
        for b in &targets {
            for c in &targets {
                if a.point == b.point || a.point == c.point || b.point == c.point {
                    continue;
                }
                let Some(from_std) = MobiusMap::<Rational>::to_zero_one_infinity(&a.point, &b.point, &c.point) else {
                    continue;
                };
                // u-coordinate of q: want m with m⁻¹ sending src -> targets, i.e. m = to_std⁻¹ ∘ from_std
                let m = to_std.inverse().compose(&from_std);
                let moved = transport_symbol(&sp, &m);
                let mut shifts = Vec::new();
                let mut ok = true;
                for e in moved.genuine() {
                    match sq.get(&e.point).and_then(|f| shift_between(&e.exponents, &f.exponents)) {
                        Some(eps) => {
                            if !matches!(e.point, SingularPoint::Infinity) && !eps.is_zero() {
                                shifts.push((e.point.clone(), eps));
                            }
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let Ok(sa) = ShiftAssignment::new(shifts) else { continue };
                let candidate = shift_exponents(&mobius(p, &m), &sa)?;
                if candidate.same_as(q) {
                    return Ok(Some(Equivalence { map: m, shifts: sa }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::optheta::riemann_symbol;

    type Op = ThetaOperator<Rational>;

    fn legendre() -> Op {
        Op::parse("Θ^2 - 16t(Θ+1/2)^2").unwrap()
    }

    fn exps(op: &Op, p: &str) -> Vec<String> {
        riemann_symbol(op).unwrap().get(&SingularPoint::parse(p).unwrap()).unwrap().exponent_strings()
    }

    #[test]
    fn identity_mobius() {
        let op = legendre();
        assert_eq!(mobius(&op, &MobiusMap::identity()), op.canonical());
    }

    #[test]
    fn inversion_moves_points() {
        let m = MobiusMap::from_i64s(0, 1, 1, 0).unwrap();
        let op = mobius(&legendre(), &m);
        let sym = riemann_symbol(&op).unwrap();
        let pts: Vec<String> = sym.genuine().map(|e| e.point.to_string()).collect();
        assert_eq!(pts, vec!["0", "16", "∞"]);
        assert_eq!(exps(&op, "0"), vec!["1/2", "1/2"]);
        assert_eq!(exps(&op, "inf"), vec!["0", "0"]);
    }

    #[test]
    fn mobius_roundtrip() {
        let m = MobiusMap::from_i64s(2, 1, 3, -1).unwrap();
        let op = legendre();
        assert_eq!(mobius(&mobius(&op, &m), &m.inverse()), op.canonical());
    }

    #[test]
    fn shift_legendre_at_zero() {
        let s = ShiftAssignment::new(vec![(SingularPoint::zero(), rat(1, 2))]).unwrap();
        let op = shift_exponents(&legendre(), &s).unwrap();
        assert_eq!(exps(&op, "0"), vec!["1/2", "1/2"]);
        assert_eq!(exps(&op, "inf"), vec!["0", "0"]);
        let zero = ShiftAssignment::new(vec![(SingularPoint::zero(), int(0))]).unwrap();
        assert_eq!(shift_exponents(&legendre(), &zero).unwrap(), legendre().canonical());
    }

    #[test]
    fn pullback_examples() {
        let op = Op::parse("Θ - t(Θ+1)").unwrap();
        assert_eq!(pullback_power(&op, 2).unwrap(), Op::parse("Θ - t^2(Θ+2)").unwrap().canonical());
        let leg2 = pullback_power(&legendre(), 2).unwrap();
        assert_eq!(exps(&leg2, "inf"), vec!["1", "1"]);
        assert_eq!(descend_quadratic(&leg2).unwrap(), legendre().canonical());
    }

    #[test]
    fn evenness() {
        assert!(is_even(&Op::parse("Θ^2 - t^2(Θ+1)^2").unwrap()));
        assert!(!is_even(&Op::parse("Θ^2 + t(Θ+1/2)^2").unwrap()));
        assert_eq!(descend_quadratic(&legendre()), Err(Error::NotEven));
    }

    #[test]
    fn yukawa_of_theta4_is_trivial() {
        assert!(yukawa(&Op::parse("Θ^4").unwrap()).unwrap().factors.is_empty());
    }

    #[test]
    fn finds_mobius_plus_shift() {
        let op = Op::parse("Θ^2 - t(Θ+1/3)(Θ+1/2)").unwrap();
        let m = MobiusMap::from_i64s(-1, 1, 0, 1).unwrap();
        let s = ShiftAssignment::new(vec![(SingularPoint::zero(), rat(1, 2))]).unwrap();
        let target = shift_exponents(&mobius(&op, &m), &s).unwrap();
        let eq = find_equivalence(&op, &target).unwrap().expect("found");
        let again = shift_exponents(&mobius(&op, &eq.map), &eq.shifts).unwrap();
        assert!(again.same_as(&target));
        assert!(!eq.is_strict());
    }
}
