//! Scripted reduction chains replayed with the transform module.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{catalog, compare_symbol, Catalog};
use crate::arith::{parse_rational, QuadraticNumber, Rational};
use crate::error::{Error, Result};
use crate::optheta::{riemann_symbol, SingularPoint, ThetaOperator};
use crate::transform::{descend_power, find_equivalence, mobius, pullback_power, shift_exponents, MobiusMap, ShiftAssignment};

type QOp = ThetaOperator<QuadraticNumber>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Arrangement(u32),
    Derived(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Canonical equality.
    Equal,
    /// A Möbius map and exponent shifts relate the two.
    Equivalent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Arrangement { id: u32, relation: Relation },
    Derived { name: String },
    /// Compare with the symbol of a derived record.
    Symbol { name: String },
}

/// One transformation. Numbers are strings in `Q` or a quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// `t = (a u + b) / (c u + d)`.
    Mobius { map: [String; 4] },
    /// Exponent shifts at finite points, compensated at infinity.
    Shift { at: Vec<(String, String)> },
    /// New coordinate `t^n`; the pull-back is checked to return the input.
    Descend { n: usize },
    /// Substitute `t = u^n`.
    Pullback { n: usize },
    /// Substitute `t = c u` for the `c = ±p/q` with `p, q <= bound` that
    /// matches the chain's target operator.
    ScaleSearch { bound: u32 },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Mobius { map: [a, b, c, d] } => write!(f, "mobius t = ({a}·u + {b})/({c}·u + {d})"),
            Step::Shift { at } => {
                let parts: Vec<String> = at.iter().map(|(p, e)| format!("{e} at {p}")).collect();
                write!(f, "shift {}", parts.join(", "))
            }
            Step::Descend { n } => write!(f, "descend u = t^{n}"),
            Step::Pullback { n } => write!(f, "pullback t = u^{n}"),
            Step::ScaleSearch { bound } => write!(f, "scale search up to {bound}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub name: String,
    pub description: String,
    pub source: Source,
    pub steps: Vec<Step>,
    pub target: Target,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepTrace {
    pub step: String,
    pub operator: String,
    pub symbol: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub name: String,
    pub source: String,
    pub start: StepTrace,
    pub trace: Vec<StepTrace>,
    pub target: String,
    pub outcome: String,
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "chain {}: {} -> {}", self.name, self.source, self.target)?;
        for s in std::iter::once(&self.start).chain(&self.trace) {
            writeln!(f, "[{}]", s.step)?;
            writeln!(f, "  {}", s.operator)?;
            for line in s.symbol.lines() {
                writeln!(f, "  {line}")?;
            }
        }
        write!(f, "{}", self.outcome)
    }
}

fn broken(step: impl Into<String>, detail: impl fmt::Display) -> Error {
    Error::ChainBroken { step: step.into(), detail: detail.to_string() }
}

fn trace(step: String, op: &QOp) -> StepTrace {
    let symbol = match riemann_symbol(op) {
        Ok(s) => s.table(),
        Err(e) => format!("(symbol unavailable: {e})"),
    };
    StepTrace { step, operator: op.to_string(), symbol }
}

fn rational_target(cat: &Catalog, t: &Target) -> Result<Option<ThetaOperator<Rational>>> {
    match t {
        Target::Arrangement { id, .. } => Ok(Some(cat.arrangement(*id)?.operator()?)),
        Target::Derived { name } => cat.derived(name)?.operator(),
        Target::Symbol { .. } => Ok(None),
    }
}

fn scale_candidates(bound: u32) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 1..=bound {
        for p in 1..=bound {
            let c = Rational::new(p.into(), q.into());
            if !out.contains(&c) {
                out.push(c.clone());
                out.push(-c);
            }
        }
    }
    out
}

fn apply_step(op: &QOp, step: &Step, label: &str, target: Option<&ThetaOperator<Rational>>) -> Result<(QOp, String)> {
    let q = |s: &str| QuadraticNumber::parse(s).map_err(|e| broken(label, e));
    match step {
        Step::Mobius { map } => {
            let m = MobiusMap::new(q(&map[0])?, q(&map[1])?, q(&map[2])?, q(&map[3])?).map_err(|e| broken(label, e))?;
            Ok((mobius(op, &m), step.to_string()))
        }
        Step::Shift { at } => {
            let shifts = at
                .iter()
                .map(|(p, e)| Ok((SingularPoint::parse(p)?, parse_rational(e)?)))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| broken(label, e))?;
            let sa = ShiftAssignment::new(shifts).map_err(|e| broken(label, e))?;
            let desc = format!("{step} and {} at ∞", sa.at_infinity());
            Ok((shift_exponents(op, &sa).map_err(|e| broken(label, e))?, desc))
        }
        Step::Descend { n } => {
            let d = descend_power(op, *n).map_err(|e| broken(label, e))?;
            if !pullback_power(&d, *n).map_err(|e| broken(label, e))?.same_as(op) {
                return Err(broken(label, "pull-back of the descended operator differs from its input"));
            }
            Ok((d, step.to_string()))
        }
        Step::Pullback { n } => Ok((pullback_power(op, *n).map_err(|e| broken(label, e))?, step.to_string())),
        Step::ScaleSearch { bound } => {
            let target = target.ok_or_else(|| broken(label, "scale search needs a target operator"))?;
            let target = target.to_quadratic();
            for c in scale_candidates(*bound) {
                let cand = op.scale_variable(&QuadraticNumber::rational(c.clone())).canonical();
                if cand.same_as(&target) {
                    return Ok((cand, format!("scale t = {c}·u (found by search up to {bound})")));
                }
            }
            Err(broken(label, format!("no scale c = ±p/q with p, q <= {bound} matches the target")))
        }
    }
}

pub fn run_chain(cat: &Catalog, rec: &ChainRecord) -> Result<ChainReport> {
    let (source, start) = match &rec.source {
        Source::Arrangement(id) => (format!("arrangement {id}"), cat.arrangement(*id)?.operator()?),
        Source::Derived(name) => {
            let d = cat.derived(name)?;
            let op = d.operator()?.ok_or_else(|| broken("source", format!("{name} has no operator")))?;
            (d.display.clone(), op)
        }
    };
    let target_op = rational_target(cat, &rec.target)?;
    let mut op: QOp = start.to_quadratic().canonical();
    let start = trace(format!("start: {source}"), &op);
    let mut steps = Vec::new();
    for (i, step) in rec.steps.iter().enumerate() {
        let label = format!("{}: {step}", i + 1);
        let (next, desc) = apply_step(&op, step, &label, target_op.as_ref())?;
        op = next;
        steps.push(trace(format!("{}: {desc}", i + 1), &op));
    }
    let last = "final comparison";
    let (target, outcome) = match &rec.target {
        Target::Symbol { name } => {
            let d = cat.derived(name)?;
            let sym = riemann_symbol(&op).map_err(|e| broken(last, e))?;
            let diff = compare_symbol(&sym, &d.symbol)?;
            if !diff.is_empty() {
                return Err(broken(last, diff.join("; ")));
            }
            (format!("symbol of {}", d.display), "symbol matches".to_string())
        }
        t => {
            let want = target_op.expect("operator target");
            let name = match t {
                Target::Arrangement { id, .. } => format!("arrangement {id}"),
                Target::Derived { name } => cat.derived(name)?.display.clone(),
                Target::Symbol { .. } => unreachable!(),
            };
            let got = op.to_rational().ok_or_else(|| broken(last, format!("result is not rational: {op}")))?;
            let relation = match t {
                Target::Arrangement { relation, .. } => *relation,
                _ => Relation::Equal,
            };
            let outcome = match relation {
                Relation::Equal => {
                    if !got.same_as(&want) {
                        return Err(broken(last, format!("got {} but expected {}", got.canonical(), want.canonical())));
                    }
                    "operators equal".to_string()
                }
                Relation::Equivalent => match find_equivalence(&got, &want).map_err(|e| broken(last, e))? {
                    Some(eq) => {
                        let shifts: Vec<String> = eq.shifts.shifts.iter().map(|(p, e)| format!("{e} at {p}")).collect();
                        format!(
                            "equivalent via {} and shifts [{}] ({} at ∞)",
                            eq.map,
                            shifts.join(", "),
                            eq.shifts.at_infinity()
                        )
                    }
                    None => return Err(broken(last, "no Möbius map and shift relates the operators")),
                },
            };
            (name, outcome)
        }
    };
    Ok(ChainReport { name: rec.name.clone(), source, start, trace: steps, target, outcome })
}

/// Replay the named chain of the embedded catalog.
pub fn reproduce_reduction(name: &str) -> Result<ChainReport> {
    let cat = catalog();
    run_chain(cat, cat.chain(name)?)
}
