//! Embedded golden data for the one-parameter octic arrangements, the
//! operators derived from them, and scripted reduction chains.

mod chain;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::{MultiPoly, PointValue, Rational};
use crate::error::{Error, Result};
use crate::frobenius::{analyze_point, PointType};
use crate::optheta::{is_candidate, riemann_symbol, RiemannSymbol, SingularPoint, ThetaOperator};
use crate::period::TetraForm;
use crate::qexp::find_form;

pub use chain::{reproduce_reduction, run_chain, ChainRecord, ChainReport, Relation, Source, Step, StepTrace, Target};

const CATALOG_JSON: &str = include_str!("../../data/catalog.json");

/// One column of a printed Riemann symbol, with its modular form if known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolColumn {
    pub point: String,
    pub exponents: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
}

impl SymbolColumn {
    pub fn singular_point(&self) -> Result<SingularPoint> {
        SingularPoint::parse(&self.point)
    }

    pub fn exponent_values(&self) -> Result<Vec<PointValue>> {
        let mut v = self.exponents.iter().map(|e| PointValue::parse(e)).collect::<Result<Vec<_>>>()?;
        v.sort();
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrangementRecord {
    pub id: u32,
    /// `"B"` for order-2 operators, `"C"` for order 4.
    pub order: usize,
    pub octic: String,
    /// The printed octic is not a product of eight planes.
    #[serde(default)]
    pub octic_sic: bool,
    pub h11: Option<u32>,
    pub h12: Option<u32>,
    /// Type string such as `KCCC`, if one is given.
    pub label: Option<String>,
    pub operator: String,
    pub symbol: Vec<SymbolColumn>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ArrangementRecord {
    pub fn operator(&self) -> Result<ThetaOperator<Rational>> {
        ThetaOperator::parse(&self.operator)
    }

    pub fn decorations(&self) -> Vec<Option<&str>> {
        self.symbol.iter().map(|c| c.form.as_deref()).collect()
    }

    /// The octic as a polynomial in `x, y, z, v, t`.
    pub fn octic_polynomial(&self) -> Result<MultiPoly> {
        crate::arith::parse_multipoly(&self.octic, &["x", "y", "z", "v", "t"])
    }

    /// The octic of the fibre at `t`, in `x, y, z, v`.
    pub fn octic_at(&self, t: &Rational) -> Result<MultiPoly> {
        let p = self.octic_polynomial()?.specialize(4, t);
        Ok(MultiPoly::from_terms(4, p.terms().iter().map(|(e, c)| (e[..4].to_vec(), c.clone()))))
    }
}

/// A rigid arrangement realised as a fibre of a family in the catalog.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidRecord {
    pub id: u32,
    pub family: u32,
    pub t: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
}

/// An operator (or only a symbol) obtained from the arrangements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedRecord {
    pub name: String,
    pub display: String,
    /// `None` for records that only carry a symbol.
    pub operator: Option<String>,
    /// Printed form when it differs from `operator`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_operator: Option<String>,
    pub symbol: Vec<SymbolColumn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Chain that produces this record.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<String>,
    #[serde(default)]
    pub errata: Vec<String>,
}

impl DerivedRecord {
    pub fn operator(&self) -> Result<Option<ThetaOperator<Rational>>> {
        self.operator.as_deref().map(ThetaOperator::parse).transpose()
    }
}

/// A polynomial `P(x, y, z, t)` in tetrahedron coordinates at a point of
/// an arrangement's family, with the Möbius map `t = (a u + b) / (c u + d)`
/// giving the local coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TetraRecord {
    pub arrangement: u32,
    pub point: String,
    pub map: [String; 4],
    pub polynomial: String,
    pub terms: usize,
    pub coordinates: String,
}

impl TetraRecord {
    pub fn form(&self) -> Result<TetraForm> {
        TetraForm::parse(&self.polynomial, self.terms)
    }

    pub fn local_operator(&self, cat: &Catalog) -> Result<ThetaOperator<Rational>> {
        let op = cat.arrangement(self.arrangement)?.operator()?;
        let m = self.map.iter().map(|s| crate::arith::parse_rational(s)).collect::<Result<Vec<_>>>()?;
        let [a, b, c, d]: [Rational; 4] = m.try_into().expect("four entries");
        Ok(crate::transform::mobius(&op, &crate::transform::MobiusMap::new(a, b, c, d)?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: String,
    pub arrangements: Vec<ArrangementRecord>,
    pub derived: Vec<DerivedRecord>,
    pub tetra_forms: Vec<TetraRecord>,
    pub chains: Vec<ChainRecord>,
    pub rigid: Vec<RigidRecord>,
}

impl Catalog {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("catalog: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }

    pub fn arrangement(&self, id: u32) -> Result<&ArrangementRecord> {
        self.arrangements.iter().find(|a| a.id == id).ok_or_else(|| Error::UnknownName(id.to_string()))
    }

    pub fn derived(&self, name: &str) -> Result<&DerivedRecord> {
        self.derived.iter().find(|d| d.name == name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn chain(&self, name: &str) -> Result<&ChainRecord> {
        self.chains.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// Octic of a family member or of a rigid fibre, in `x, y, z, v`.
    pub fn rigid_octic(&self, id: u32) -> Result<MultiPoly> {
        let r = self.rigid.iter().find(|r| r.id == id).ok_or_else(|| Error::UnknownName(id.to_string()))?;
        self.arrangement(r.family)?.octic_at(&crate::arith::parse_rational(&r.t)?)
    }

    pub fn order_two(&self) -> impl Iterator<Item = &ArrangementRecord> {
        self.arrangements.iter().filter(|a| a.order == 2)
    }

    pub fn order_four(&self) -> impl Iterator<Item = &ArrangementRecord> {
        self.arrangements.iter().filter(|a| a.order == 4)
    }
}

/// The embedded catalog.
pub fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::from_json(CATALOG_JSON).expect("embedded catalog is valid"))
}

/// Differences between a computed symbol and printed columns, restricted
/// to genuine points. Empty when they agree exactly.
pub fn compare_symbol(sym: &RiemannSymbol, printed: &[SymbolColumn]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut seen = Vec::new();
    for col in printed {
        let p = col.singular_point()?;
        let want = col.exponent_values()?;
        match sym.get(&p) {
            Some(e) if e.genuine && e.exponents == want => {}
            Some(e) if e.genuine => out.push(format!(
                "at {p}: computed ({}) but printed ({})",
                e.exponent_strings().join(", "),
                col.exponents.join(", ")
            )),
            _ => out.push(format!("printed point {p} is not a genuine singular point")),
        }
        seen.push(p);
    }
    for e in sym.genuine() {
        if !seen.contains(&e.point) {
            out.push(format!("computed point {} ({}) is not printed", e.point, e.exponent_strings().join(", ")));
        }
    }
    Ok(out)
}

fn sorted_letters(s: &str) -> String {
    let mut v: Vec<char> = s.chars().collect();
    v.sort_unstable();
    v.into_iter().collect()
}

/// Type string from point labels, counting a conjugate pair once.
pub fn type_string(labels: &[(SingularPoint, PointType)]) -> String {
    let mut out = String::new();
    for (i, (p, l)) in labels.iter().enumerate() {
        if p.is_quadratic() && labels[..i].iter().any(|(q, _)| *q == p.conjugate()) {
            continue;
        }
        out.extend(l.letter());
    }
    out
}

/// Outcome of checking one arrangement against its printed data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub id: u32,
    pub symbol_mismatches: Vec<String>,
    /// Printed finite points where the leading coefficient does not vanish.
    pub transcription_errors: Vec<String>,
    pub labels: Vec<(String, String)>,
    pub computed_type: String,
    pub printed_type: Option<String>,
    pub mum_points: Vec<String>,
    /// Form names that are neither known nor `?`.
    pub unknown_forms: Vec<String>,
    /// Points where logarithms appear without coinciding exponents, or the
    /// other way round.
    pub log_rule_exceptions: Vec<String>,
    pub error: Option<String>,
}

impl EntryReport {
    pub fn type_ok(&self) -> bool {
        match &self.printed_type {
            Some(t) => sorted_letters(t) == sorted_letters(&self.computed_type),
            None => true,
        }
    }

    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.symbol_mismatches.is_empty()
            && self.transcription_errors.is_empty()
            && self.type_ok()
            && self.mum_points.is_empty()
            && self.unknown_forms.is_empty()
    }
}

fn check_entry(rec: &ArrangementRecord) -> Result<EntryReport> {
    let op = rec.operator()?;
    let sym = riemann_symbol(&op)?;
    let symbol_mismatches = compare_symbol(&sym, &rec.symbol)?;
    let mut transcription_errors = Vec::new();
    for col in &rec.symbol {
        let p = col.singular_point()?;
        if !matches!(p, SingularPoint::Infinity) && !p.is_zero() && !is_candidate(&op, &p) {
            transcription_errors.push(p.to_string());
        }
    }
    let mut labels = Vec::new();
    let mut log_rule_exceptions = Vec::new();
    for e in sym.genuine() {
        let r = analyze_point(&op, &e.point)?;
        let repeated = r.exponents.windows(2).any(|w| w[0] == w[1]);
        if repeated != r.monodromy.has_logs() {
            log_rule_exceptions.push(e.point.to_string());
        }
        labels.push((e.point.clone(), r.label));
    }
    let computed_type = type_string(&labels);
    let mum_points = labels.iter().filter(|(_, l)| *l == PointType::Mum).map(|(p, _)| p.to_string()).collect();
    let unknown_forms = rec
        .symbol
        .iter()
        .filter_map(|c| c.form.as_deref())
        .filter(|f| *f != "?" && find_form(f).is_err())
        .map(str::to_string)
        .collect();
    Ok(EntryReport {
        id: rec.id,
        symbol_mismatches,
        transcription_errors,
        labels: labels.iter().map(|(p, l)| (p.to_string(), l.to_string())).collect(),
        computed_type,
        printed_type: rec.label.clone(),
        mum_points,
        unknown_forms,
        log_rule_exceptions,
        error: None,
    })
}

/// Recompute every arrangement's symbol and point types and compare with
/// the printed data. Entries are checked in parallel.
pub fn verify_catalog() -> Vec<EntryReport> {
    verify_records(&catalog().arrangements)
}

pub fn verify_records(recs: &[ArrangementRecord]) -> Vec<EntryReport> {
    let mut out: BTreeMap<usize, EntryReport> = BTreeMap::new();
    std::thread::scope(|s| {
        let handles: Vec<_> = recs.iter().map(|r| s.spawn(move || check_entry(r))).collect();
        for (i, (h, r)) in handles.into_iter().zip(recs).enumerate() {
            let rep = h.join().unwrap_or_else(|_| Err(Error::InvalidArgument("worker panicked".into())));
            out.insert(
                i,
                rep.unwrap_or_else(|e| EntryReport {
                    id: r.id,
                    symbol_mismatches: Vec::new(),
                    transcription_errors: Vec::new(),
                    labels: Vec::new(),
                    computed_type: String::new(),
                    printed_type: r.label.clone(),
                    mum_points: Vec::new(),
                    unknown_forms: Vec::new(),
                    log_rule_exceptions: Vec::new(),
                    error: Some(e.to_string()),
                }),
            );
        }
    });
    out.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_all_entries() {
        let c = catalog();
        assert_eq!(c.order_two().count(), 7);
        assert_eq!(c.order_four().count(), 18);
        for a in &c.arrangements {
            let op = a.operator().unwrap();
            assert_eq!(op.order(), if a.order == 2 { 2 } else { 4 }, "{}", a.id);
        }
    }

    #[test]
    fn json_roundtrip() {
        let c = catalog();
        assert_eq!(&Catalog::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn order_two_entries_verify() {
        let recs: Vec<_> = catalog().order_two().cloned().collect();
        for r in verify_records(&recs) {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn octics_parse_except_flagged() {
        for a in &catalog().arrangements {
            let p = a.octic_polynomial().unwrap();
            let homogeneous_octic = p.terms().keys().all(|e| e[..4].iter().sum::<u32>() == 8);
            assert_eq!(homogeneous_octic, !a.octic_sic, "{}", a.id);
        }
    }

    #[test]
    fn derived_operators_parse() {
        for d in &catalog().derived {
            if let Some(op) = d.operator().unwrap() {
                assert_eq!(op.order(), 4, "{}", d.name);
            }
        }
    }

    #[test]
    fn derived_symbols_match_operators() {
        for d in &catalog().derived {
            if let Some(op) = d.operator().unwrap() {
                let sym = riemann_symbol(&op).unwrap();
                assert_eq!(compare_symbol(&sym, &d.symbol).unwrap(), Vec::<String>::new(), "{}", d.name);
            }
        }
    }

    #[test]
    fn printed_c_has_wrong_order() {
        let d = catalog().derived("C").unwrap();
        let printed = ThetaOperator::<Rational>::parse(d.printed_operator.as_ref().unwrap()).unwrap();
        assert_eq!(printed.order(), 4);
        assert_eq!(printed.p(0).degree(), Some(3));
    }

    #[test]
    fn every_chain_reproduces() {
        for c in &catalog().chains {
            let r = run_chain(catalog(), c).unwrap_or_else(|e| panic!("{}: {e}", c.name));
            assert_eq!(r.trace.len(), c.steps.len());
        }
    }

    #[test]
    fn broken_chain_reports_step() {
        let mut c = catalog().chain("98toA").unwrap().clone();
        c.steps.pop();
        match run_chain(catalog(), &c) {
            Err(Error::ChainBroken { step, .. }) => assert_eq!(step, "final comparison"),
            other => panic!("{other:?}"),
        }
        c.steps.remove(0);
        match run_chain(catalog(), &c) {
            Err(Error::ChainBroken { step, detail }) => {
                assert!(step.starts_with("1: descend"), "{step}");
                assert!(detail.contains("not even"), "{detail}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(reproduce_reduction("nope"), Err(Error::UnknownName(_))));
        assert!(catalog().arrangement(5).is_err());
    }

    #[test]
    fn conjugate_pair_counted_once() {
        let q = SingularPoint::parse("(-1+sqrt(-3))/4").unwrap();
        let labels =
            vec![(SingularPoint::zero(), PointType::C), (q.clone(), PointType::A), (q.conjugate(), PointType::A)];
        assert_eq!(type_string(&labels), "CA");
    }
}
