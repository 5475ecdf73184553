use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use octic_pf::arith::{parse_rational, rational_string};
use octic_pf::catalog::{catalog, reproduce_reduction, verify_catalog};
use octic_pf::frobenius::analyze_point;
use octic_pf::guess::{guess_operator, GuessConfig};
use octic_pf::optheta::{riemann_symbol, OperatorJson};
use octic_pf::period::{conifold_expand, TetraForm, DEFAULT_TERMS};
use octic_pf::qexp::{count_double_octic, eta_product, find_form, forms, verify_form_table};
use octic_pf::transform::{descend_power, mobius, pullback_power, shift_exponents, yukawa, MobiusMap, ShiftAssignment};
use octic_pf::{Error, Rational, SingularPoint, ThetaOperator};

/// Exact Picard-Fuchs operator toolkit for one-parameter double octics.
#[derive(Parser)]
#[command(name = "pf", version)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Riemann symbol of an operator.
    Symbol {
        /// Operator JSON file, `-` for stdin, or `catalog:<id>` / `derived:<name>`.
        op: String,
    },
    /// Exponents, Jordan blocks and type at every singular point.
    Classify { op: String },
    /// Apply Möbius map, exponent shift, pull-back and descent in that order.
    Transform {
        op: String,
        /// `a,b,c,d` for `t = (a u + b)/(c u + d)`.
        #[arg(long, allow_hyphen_values = true)]
        mobius: Option<String>,
        /// `point=eps,...` at finite points.
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
        #[arg(long)]
        pullback: Option<usize>,
        /// Descend by `t^2`.
        #[arg(long)]
        descend: bool,
        /// Print the Yukawa coupling of the result.
        #[arg(long)]
        yukawa: bool,
    },
    /// Conifold period expansion of a tetrahedron form.
    Period {
        /// JSON map from `"ex,ey,ez,et"` to coefficient strings.
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
    },
    /// Recover an operator from series coefficients.
    Guess {
        /// JSON array of coefficient strings, or an object with key `series` or `A`.
        #[arg(long)]
        series: String,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long, default_value_t = 9)]
        max_degree: usize,
        #[arg(long, default_value_t = 10)]
        margin: usize,
    },
    /// q-expansion of an eta-product form.
    Qexp {
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 30)]
        terms: usize,
    },
    /// Points of a double octic over F_p.
    Count {
        /// Catalog family id (with `--t`) or rigid fibre id.
        #[arg(long)]
        arrangement: u32,
        #[arg(long)]
        prime: u64,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Check every catalog entry against its printed data.
    VerifyCatalog,
    /// Check eta-product expansions against the printed tables.
    VerifyForms,
    /// Replay a reduction chain.
    Reproduce {
        /// Chain name; omit to list the chains.
        name: Option<String>,
    },
    /// Catalog access.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Print the embedded catalog JSON.
    Dump,
    /// List arrangements, derived operators and chains.
    List,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ChainBroken { .. } => Failure::Verification(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

type Out = Result<(), Failure>;

fn usage(s: impl Into<String>) -> Failure {
    Failure::Usage(s.into())
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| usage(e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
}

fn load_operator(arg: &str) -> Result<ThetaOperator<Rational>, Failure> {
    if let Some(id) = arg.strip_prefix("catalog:") {
        let id: u32 = id.parse().map_err(|_| usage(format!("bad catalog id `{id}`")))?;
        return Ok(catalog().arrangement(id)?.operator()?);
    }
    if let Some(name) = arg.strip_prefix("derived:") {
        return catalog().derived(name)?.operator()?.ok_or_else(|| usage(format!("{name} has no operator")));
    }
    Ok(OperatorJson::parse(&read_input(arg)?)?.to_theta()?)
}

fn print_json(v: &Value) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn symbol(op: &str, as_json: bool) -> Out {
    let op = load_operator(op)?;
    let sym = riemann_symbol(&op)?;
    if as_json {
        let pts: Vec<Value> = sym
            .entries
            .iter()
            .map(|e| json!({"point": e.point.to_string(), "exponents": e.exponent_strings(), "genuine": e.genuine}))
            .collect();
        print_json(&json!({"order": sym.order, "points": pts}));
    } else {
        print!("{}", sym.table());
    }
    Ok(())
}

fn classify(op: &str, as_json: bool) -> Out {
    let op = load_operator(op)?;
    let sym = riemann_symbol(&op)?;
    let mut rows = Vec::new();
    for e in sym.genuine() {
        let r = analyze_point(&op, &e.point)?;
        rows.push(r);
    }
    if as_json {
        let v: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "point": r.point.to_string(),
                    "exponents": r.exponents.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "jordan_blocks": r.monodromy.jordan_blocks,
                    "label": r.label,
                    "monodromy_order": r.monodromy_order(),
                })
            })
            .collect();
        print_json(&Value::Array(v));
    } else {
        for r in &rows {
            let ex: Vec<String> = r.exponents.iter().map(|x| x.to_string()).collect();
            println!("{:>18}  ({})  blocks {:?}  {}", r.point.to_string(), ex.join(", "), r.monodromy.jordan_blocks, r.label);
        }
    }
    Ok(())
}

fn parse_mobius(s: &str) -> Result<MobiusMap<Rational>, Failure> {
    let v = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    let [a, b, c, d]: [Rational; 4] = v.try_into().map_err(|_| usage("--mobius needs four numbers a,b,c,d"))?;
    Ok(MobiusMap::new(a, b, c, d)?)
}

fn parse_shift(s: &str) -> Result<ShiftAssignment, Failure> {
    let mut v = Vec::new();
    for part in s.split(',') {
        let (p, e) = part.split_once('=').ok_or_else(|| usage(format!("bad shift `{part}`, expected point=eps")))?;
        v.push((SingularPoint::parse(p)?, parse_rational(e)?));
    }
    Ok(ShiftAssignment::new(v)?)
}

struct TransformArgs<'a> {
    mobius: Option<&'a str>,
    shift: Option<&'a str>,
    pullback: Option<usize>,
    descend: bool,
    yukawa: bool,
}

fn transform(op: &str, a: TransformArgs, as_json: bool) -> Out {
    let mut op = load_operator(op)?.canonical();
    if let Some(m) = a.mobius {
        op = mobius(&op, &parse_mobius(m)?);
    }
    if let Some(s) = a.shift {
        op = shift_exponents(&op, &parse_shift(s)?)?;
    }
    if let Some(n) = a.pullback {
        op = pullback_power(&op, n)?;
    }
    if a.descend {
        op = descend_power(&op, 2)?;
    }
    let y = if a.yukawa { Some(yukawa(&op)?) } else { None };
    if as_json {
        let mut v = serde_json::to_value(OperatorJson::from_theta(&op)).expect("json");
        if let Some(y) = &y {
            v["yukawa"] = json!(y.to_string());
        }
        print_json(&v);
    } else {
        println!("{op}");
        if let Some(y) = y {
            println!("yukawa: {y}");
        }
    }
    Ok(())
}

fn period(poly: &str, terms: usize) -> Out {
    let map: BTreeMap<String, String> =
        serde_json::from_str(&read_input(poly)?).map_err(|e| usage(format!("polynomial JSON: {e}")))?;
    let ps = conifold_expand(&TetraForm::from_json_map(&map, terms)?)?;
    let a: Vec<String> = ps.coeffs.iter().map(rational_string).collect();
    let mut v = json!({ "A": a });
    if !ps.is_rational() {
        v["radicand"] = json!(rational_string(&ps.radicand));
    }
    print_json(&v);
    Ok(())
}

fn parse_series(text: &str) -> Result<Vec<Rational>, Failure> {
    let v: Value = serde_json::from_str(text).map_err(|e| usage(format!("series JSON: {e}")))?;
    let arr = match &v {
        Value::Array(_) => &v,
        Value::Object(o) => o.get("series").or_else(|| o.get("A")).ok_or_else(|| usage("series JSON needs `series` or `A`"))?,
        _ => return Err(usage("series JSON must be an array or an object")),
    };
    let arr = arr.as_array().ok_or_else(|| usage("series must be an array"))?;
    arr.iter()
        .map(|x| match x {
            Value::String(s) => Ok(parse_rational(s)?),
            Value::Number(n) => Ok(parse_rational(&n.to_string())?),
            _ => Err(usage("series entries must be strings or integers")),
        })
        .collect()
}

fn guess(series: &str, max_order: usize, max_degree: usize, margin: usize, as_json: bool) -> Out {
    let s = parse_series(&read_input(series)?)?;
    let cfg = GuessConfig::new(max_order, max_degree, margin)?;
    match guess_operator(&s, &cfg)? {
        Some(op) if as_json => print_json(&serde_json::to_value(OperatorJson::from_theta(&op)).expect("json")),
        Some(op) => println!("{op}"),
        None => return Err(Failure::Verification("no operator within the search box".into())),
    }
    Ok(())
}

fn qexp(form: &str, terms: usize, as_json: bool) -> Out {
    let rec = find_form(form)?;
    let spec = rec.eta.clone().ok_or_else(|| Error::NoEtaProduct(form.to_string()))?;
    let q = eta_product(&spec, terms);
    if as_json {
        let c: Vec<String> = q.coeffs().iter().map(|x| x.to_string()).collect();
        print_json(&json!({"form": rec.name, "eta": spec.to_string(), "coeffs": c}));
    } else {
        println!("{} = {}", rec.name, spec);
        let mut line = String::new();
        for (n, c) in q.coeffs().iter().enumerate().filter(|(_, c)| !num_traits::Zero::is_zero(*c)) {
            let sign = if num_traits::Signed::is_negative(c) { "-" } else { "+" };
            if line.is_empty() {
                line = format!("{c} q^{n}");
            } else {
                line.push_str(&format!(" {sign} {} q^{n}", num_traits::Signed::abs(c)));
            }
        }
        println!("{line} + O(q^{terms})");
    }
    Ok(())
}

fn count(id: u32, p: u64, t: Option<&str>, as_json: bool) -> Out {
    let cat = catalog();
    let f8 = match t {
        Some(t) => cat.arrangement(id)?.octic_at(&parse_rational(t)?)?,
        None => cat.rigid_octic(id).map_err(|_| usage(format!("{id} is not a rigid fibre; pass --t for a family")))?,
    };
    let n = count_double_octic(&f8, p)?;
    if as_json {
        print_json(&json!({"arrangement": id, "prime": p, "t": t, "count": n}));
    } else {
        println!("{n}");
    }
    Ok(())
}

fn verify_catalog_cmd(as_json: bool) -> Out {
    let reports = verify_catalog();
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if as_json {
        print_json(&serde_json::to_value(&reports).expect("json"));
    } else {
        for r in &reports {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let labels: Vec<String> = r.labels.iter().map(|(p, l)| format!("{p}:{l}")).collect();
            println!("{status} {:>3}  {}", r.id, labels.join(" "));
            for m in r.symbol_mismatches.iter().chain(&r.transcription_errors) {
                println!("     {m}");
            }
            if let Some(e) = &r.error {
                println!("     error: {e}");
            }
            if !r.type_ok() {
                println!("     type {} but printed {}", r.computed_type, r.printed_type.as_deref().unwrap_or(""));
            }
            if !r.log_rule_exceptions.is_empty() {
                println!("     logarithms without equal exponents (or the reverse) at {}", r.log_rule_exceptions.join(", "));
            }
        }
    }
    if failed > 0 {
        return Err(Failure::Verification(format!("{failed} entries failed")));
    }
    Ok(())
}

fn verify_forms_cmd(as_json: bool) -> Out {
    let mut bad = 0;
    let mut out = Vec::new();
    for f in forms() {
        if f.eta.is_none() {
            continue;
        }
        let r = verify_form_table(f.name, 40)?;
        if !r.ok() {
            bad += 1;
        }
        if as_json {
            out.push(json!({"form": r.name, "matches": r.matches.len(), "mismatches": r.mismatches.len()}));
        } else {
            println!("{} {:<5} {} primes", if r.ok() { "PASS" } else { "FAIL" }, r.name, r.matches.len());
        }
    }
    if as_json {
        print_json(&Value::Array(out));
    }
    if bad > 0 {
        return Err(Failure::Verification(format!("{bad} forms failed")));
    }
    Ok(())
}

fn reproduce(name: Option<&str>, as_json: bool) -> Out {
    let Some(name) = name else {
        for c in &catalog().chains {
            println!("{:<16} {}", c.name, c.description);
        }
        return Ok(());
    };
    let r = reproduce_reduction(name)?;
    if as_json {
        print_json(&serde_json::to_value(&r).expect("json"));
    } else {
        println!("{r}");
    }
    Ok(())
}

fn catalog_cmd(cmd: &CatalogCmd) -> Out {
    let cat = catalog();
    match cmd {
        CatalogCmd::Dump => println!("{}", cat.to_json()),
        CatalogCmd::List => {
            for a in &cat.arrangements {
                println!("{:>3}  order {}  {}", a.id, a.order, a.label.as_deref().unwrap_or(""));
            }
            for d in &cat.derived {
                println!("{:>3}  {}", d.name, d.display);
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Out {
    let j = cli.json;
    match &cli.cmd {
        Cmd::Symbol { op } => symbol(op, j),
        Cmd::Classify { op } => classify(op, j),
        Cmd::Transform { op, mobius, shift, pullback, descend, yukawa } => transform(
            op,
            TransformArgs {
                mobius: mobius.as_deref(),
                shift: shift.as_deref(),
                pullback: *pullback,
                descend: *descend,
                yukawa: *yukawa,
            },
            j,
        ),
        Cmd::Period { poly, terms } => period(poly, *terms),
        Cmd::Guess { series, max_order, max_degree, margin } => guess(series, *max_order, *max_degree, *margin, j),
        Cmd::Qexp { form, terms } => qexp(form, *terms, j),
        Cmd::Count { arrangement, prime, t } => count(*arrangement, *prime, t.as_deref(), j),
        Cmd::VerifyCatalog => verify_catalog_cmd(j),
        Cmd::VerifyForms => verify_forms_cmd(j),
        Cmd::Reproduce { name } => reproduce(name.as_deref(), j),
        Cmd::Catalog { cmd } => catalog_cmd(cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
