//! Eta products, the reference table of modular form coefficients, and
//! naive point counts of double octics over prime fields.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{MultiPoly, QuadraticNumber};
use crate::error::{Error, Result};

/// `q^leading * Π_n Π_(m,e) (1 - q^(mn))^e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaProductSpec {
    pub leading_power: u32,
    pub factors: Vec<(u32, i32)>,
}

impl EtaProductSpec {
    pub fn new(leading_power: u32, factors: Vec<(u32, i32)>) -> Result<Self> {
        if factors.iter().any(|&(m, e)| m == 0 || e == 0) {
            return Err(Error::InvalidArgument("eta factors need m >= 1 and e != 0".into()));
        }
        Ok(EtaProductSpec { leading_power, factors })
    }
}

impl Mul for &EtaProductSpec {
    type Output = EtaProductSpec;
    fn mul(self, o: &EtaProductSpec) -> EtaProductSpec {
        let mut factors = self.factors.clone();
        for &(m, e) in &o.factors {
            match factors.iter_mut().find(|f| f.0 == m) {
                Some(f) => f.1 += e,
                None => factors.push((m, e)),
            }
        }
        factors.retain(|f| f.1 != 0);
        factors.sort_unstable();
        EtaProductSpec { leading_power: self.leading_power + o.leading_power, factors }
    }
}

impl fmt::Display for EtaProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.leading_power {
            0 => {}
            1 => write!(f, "q")?,
            k => write!(f, "q^{k}")?,
        }
        for (m, e) in &self.factors {
            let base = if *m == 1 { "q^n".to_string() } else { format!("q^{m}n") };
            if *e == 1 {
                write!(f, "(1-{base})")?;
            } else {
                write!(f, "(1-{base})^{e}")?;
            }
        }
        Ok(())
    }
}

/// Integer coefficients `a_0 .. a_N` of a q-series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        QSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> BigInt {
        self.coeffs.get(n).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading_power(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, o: &QSeries) -> QSeries {
        let n = self.order().min(o.order());
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        QSeries { coeffs: out }
    }
}

/// Expansion through `q^n`.
pub fn eta_product(spec: &EtaProductSpec, n: usize) -> QSeries {
    let mut c = vec![BigInt::zero(); n + 1];
    let lead = spec.leading_power as usize;
    if lead > n {
        return QSeries { coeffs: c };
    }
    let room = n - lead;
    let mut body = vec![BigInt::zero(); room + 1];
    body[0] = BigInt::one();
    for &(m, e) in &spec.factors {
        let m = m as usize;
        for step in (1..).map(|k| k * m).take_while(|&s| s <= room) {
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    // multiply by (1 - q^step)
                    for k in (step..=room).rev() {
                        let prev = body[k - step].clone();
                        body[k] -= prev;
                    }
                } else {
                    // divide by (1 - q^step)
                    for k in step..=room {
                        let prev = body[k - step].clone();
                        body[k] += prev;
                    }
                }
            }
        }
    }
    for (k, v) in body.into_iter().enumerate() {
        c[k + lead] = v;
    }
    QSeries { coeffs: c }
}

pub const TABLE_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

/// One row of the reference table of Fourier coefficients at primes.
#[derive(Clone, Debug, PartialEq)]
pub struct FormRecord {
    pub name: &'static str,
    pub weight: &'static str,
    pub primes: Vec<u64>,
    pub values: Vec<QuadraticNumber>,
    pub eta: Option<EtaProductSpec>,
    pub note: &'static str,
}

impl FormRecord {
    pub fn value_at(&self, p: u64) -> Option<&QuadraticNumber> {
        self.primes.iter().position(|&q| q == p).map(|i| &self.values[i])
    }
}

fn record(
    name: &'static str,
    weight: &'static str,
    values: &[&str],
    eta: Option<(u32, &[(u32, i32)])>,
    note: &'static str,
) -> FormRecord {
    FormRecord {
        name,
        weight,
        primes: TABLE_PRIMES[..values.len()].to_vec(),
        values: values.iter().map(|v| QuadraticNumber::parse(v).expect("table value")).collect(),
        eta: eta.map(|(l, f)| EtaProductSpec { leading_power: l, factors: f.to_vec() }),
        note,
    }
}

/// The reference forms: weight 2 level 32, weight 3 levels 8 and 16,
/// the weight 4 newforms by level/index, and the Hilbert form `h`.
pub fn forms() -> Vec<FormRecord> {
    vec![
        record(
            "f32",
            "2",
            &["0", "0", "-2", "0", "0", "6", "2", "0", "0", "-10"],
            Some((1, &[(4, 2), (8, 2)])),
            "elliptic curve y^2 = x^3 - x, conductor 32",
        ),
        record(
            "16",
            "3",
            &["0", "0", "-6", "0", "0", "10", "-30", "0", "0"],
            Some((1, &[(4, 6)])),
            "CM by Q(sqrt(-1))",
        ),
        record(
            "8",
            "3",
            &["-2", "-2", "0", "0", "14", "0", "2", "-34", "0"],
            Some((1, &[(1, 2), (2, 1), (4, 1), (8, 2)])),
            "CM by Q(sqrt(-2)); Galois representation is the tensor square of that of f32",
        ),
        record(
            "6/1",
            "4",
            &["-2", "-3", "6", "-16", "12", "38", "-126", "20", "168"],
            Some((1, &[(1, 2), (2, 2), (3, 2), (6, 2)])),
            "",
        ),
        record("8/1", "4", &["0", "-4", "-2", "24", "-44", "22", "50", "44", "-56"], Some((1, &[(2, 4), (4, 4)])), ""),
        record("12/1", "4", &["0", "3", "-18", "8", "36", "-10", "18", "-100", "72"], None, ""),
        record(
            "32/1",
            "4",
            &["0", "0", "22", "0", "0", "-18", "-94", "0", "0"],
            None,
            "Galois representation is the tensor cube of that of f32",
        ),
        record("32/2", "4", &["0", "8", "-10", "16", "-40", "-50", "-30", "40", "48"], None, ""),
        record(
            "h",
            "(4,2)",
            &["0", "9", "10", "16+4*sqrt(2)", "-726", "2938", "-62+16*sqrt(2)", "6650", "40-8*sqrt(2)"],
            None,
            "Hilbert modular form over Q(sqrt(2)) of level 6 sqrt(2)",
        ),
    ]
}

pub fn find_form(name: &str) -> Result<FormRecord> {
    let key = name.trim().replace('₃', "3").replace('₂', "2").replace('_', "");
    forms().into_iter().find(|f| f.name == key).ok_or_else(|| Error::UnknownName(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormCheck {
    pub prime: u64,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormReport {
    pub name: String,
    pub matches: Vec<FormCheck>,
    pub mismatches: Vec<FormCheck>,
}

impl FormReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Expand the named eta product to `q^n` and compare at the tabulated
/// primes up to `n`.
pub fn verify_form_table(name: &str, n: usize) -> Result<FormReport> {
    let rec = find_form(name)?;
    let spec = rec.eta.as_ref().ok_or_else(|| Error::NoEtaProduct(rec.name.to_string()))?;
    let series = eta_product(spec, n);
    let mut report = FormReport { name: rec.name.to_string(), matches: Vec::new(), mismatches: Vec::new() };
    for (&p, v) in rec.primes.iter().zip(&rec.values) {
        if p as usize > n {
            continue;
        }
        let got = series.coeff(p as usize);
        let check = FormCheck { prime: p, expected: v.to_string(), computed: got.to_string() };
        let same = v.is_rational() && v.a().is_integer() && v.a().to_integer() == got;
        if same {
            report.matches.push(check);
        } else {
            report.mismatches.push(check);
        }
    }
    Ok(report)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn mod_p(c: &crate::arith::Rational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let den = c.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::InvalidArgument(format!("coefficient {c} has a denominator divisible by {p}")));
    }
    let num = c.numer().mod_floor(&pb).to_u64().unwrap();
    let inv = den.modpow(&BigInt::from(p - 2), &pb).to_u64().unwrap();
    Ok(num * inv % p)
}

/// `Σ_{P in P^3(F_p)} (1 + χ_p(f8(P)))` with `χ_p(0) = 0`.
pub fn count_double_octic(f8: &MultiPoly, p: u64) -> Result<u64> {
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if f8.nvars() != 4 {
        return Err(Error::InvalidArgument("octic must be in 4 variables".into()));
    }
    if f8.terms().keys().any(|e| e.iter().sum::<u32>() != 8) {
        return Err(Error::InvalidArgument("octic must be homogeneous of degree 8".into()));
    }
    let terms: Vec<([usize; 4], u64)> = f8
        .terms()
        .iter()
        .map(|(e, c)| Ok(([e[0] as usize, e[1] as usize, e[2] as usize, e[3] as usize], mod_p(c, p)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|t| t.1 != 0)
        .collect();
    let pu = p as usize;
    let chi: Vec<i64> = (0..p)
        .map(|a| {
            if a == 0 {
                return 0;
            }
            let r = BigInt::from(a).modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
            if r.is_one() {
                1
            } else {
                -1
            }
        })
        .collect();
    let pow: Vec<Vec<u64>> =
        (0..p).map(|a| (0..=8).scan(1u64, |acc, _| Some(std::mem::replace(acc, *acc * a % p))).collect()).collect();
    let mut total: i64 = 0;
    let mut visit = |x: [usize; 4]| {
        let mut v = 0u64;
        for (e, c) in &terms {
            let mut m = *c;
            for k in 0..4 {
                m = m * pow[x[k]][e[k]] % p;
            }
            v = (v + m) % p;
        }
        total += 1 + chi[v as usize];
    };
    // Representatives with the first nonzero coordinate equal to 1.
    for lead in 0..4 {
        let free = 3 - lead;
        for idx in 0..pu.pow(free as u32) {
            let mut x = [0usize; 4];
            x[lead] = 1;
            let mut r = idx;
            for k in lead + 1..4 {
                x[k] = r % pu;
                r /= pu;
            }
            visit(x);
        }
    }
    Ok(total as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_multipoly;
    use proptest::prelude::*;

    const XYZV: [&str; 4] = ["x", "y", "z", "v"];

    fn octic(s: &str) -> MultiPoly {
        parse_multipoly(s, &XYZV).unwrap()
    }

    /// Count affine solutions of `u^2 = f(x)` with `x != 0` and divide by
    /// the free `F_p^*` action `(x, u) -> (λx, λ^4 u)`.
    fn brute_force(f: &MultiPoly, p: u64) -> u64 {
        let mut n = 0;
        for i in 1..p.pow(4) {
            let x: Vec<crate::arith::Rational> =
                (0..4).map(|k| crate::arith::int(((i / p.pow(k)) % p) as i64)).collect();
            let v = mod_p(&f.eval(&x), p).unwrap();
            n += (0..p).filter(|u| u * u % p == v).count() as u64;
        }
        n / (p - 1)
    }

    #[test]
    fn f32_and_weight_four_values() {
        let f32 = eta_product(&find_form("f32").unwrap().eta.unwrap(), 30);
        assert_eq!(f32.coeff(5), BigInt::from(-2));
        assert_eq!(f32.coeff(13), BigInt::from(6));
        let s61 = eta_product(&find_form("6/1").unwrap().eta.unwrap(), 30);
        assert_eq!(s61.coeff(2), BigInt::from(-2));
        assert_eq!(s61.coeff(5), BigInt::from(6));
        for f in forms().into_iter().filter_map(|f| f.eta) {
            assert_eq!(eta_product(&f, 5).coeff(1), BigInt::one());
        }
    }

    #[test]
    fn tables_match() {
        for name in ["f32", "8", "16", "6/1", "8/1"] {
            let r = verify_form_table(name, 30).unwrap();
            assert!(r.ok(), "{name}: {:?}", r.mismatches);
            assert!(r.matches.len() >= 9);
        }
        let r = verify_form_table("16", 30).unwrap();
        assert!(r.matches.iter().any(|c| c.prime == 5 && c.expected == "-6"));
        assert!(r.matches.iter().any(|c| c.prime == 13 && c.expected == "10"));
        let r = verify_form_table("8/1", 30).unwrap();
        assert!(r.matches.iter().any(|c| c.prime == 7 && c.computed == "24"));
        for name in ["12/1", "32/1", "32/2", "h"] {
            assert_eq!(verify_form_table(name, 30).unwrap_err(), Error::NoEtaProduct(name.into()));
        }
        assert!(matches!(verify_form_table("nope", 30), Err(Error::UnknownName(_))));
    }

    #[test]
    fn pentagonal_numbers() {
        let eta = eta_product(&EtaProductSpec::new(0, vec![(1, 1)]).unwrap(), 60);
        let mut expect = vec![BigInt::zero(); 61];
        for k in -10i64..=10 {
            let g = k * (3 * k - 1) / 2;
            if (0..=60).contains(&g) {
                expect[g as usize] = BigInt::from(if k % 2 == 0 { 1 } else { -1 });
            }
        }
        assert_eq!(eta.coeffs(), &expect[..]);
        // 1/Π(1-q^n) counts partitions.
        let part = eta_product(&EtaProductSpec::new(0, vec![(1, -1)]).unwrap(), 20);
        assert_eq!(part.coeff(20), BigInt::from(627));
    }

    #[test]
    fn hilbert_values_are_quadratic() {
        let h = find_form("h").unwrap();
        assert_eq!(h.value_at(7).unwrap().to_string(), "16+4*sqrt(2)");
        assert!(!h.value_at(23).unwrap().is_rational());
    }

    #[test]
    fn counts() {
        assert_eq!(count_double_octic(&octic("x^8"), 3).unwrap(), brute_force(&octic("x^8"), 3));
        assert_eq!(count_double_octic(&MultiPoly::zero(4), 5).unwrap(), 125 + 25 + 5 + 1);
        assert_eq!(count_double_octic(&octic("x^8"), 2).unwrap_err(), Error::EvenPrime(2));
        assert!(count_double_octic(&octic("x^7y + x"), 3).is_err());
    }

    #[test]
    fn arrangement_count_is_coordinate_free() {
        let f = "yxzv(x-2y)(y-z-v)(x-y-v)(x-y+z)";
        let g = "vzyx(z-2v)(v-y-x)(z-v-x)(z-v+y)";
        let a = count_double_octic(&octic(f), 5).unwrap();
        assert_eq!(a, count_double_octic(&octic(g), 5).unwrap());
        assert_eq!(a, brute_force(&octic(f), 5));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn eta_multiplicative(a in prop::collection::vec((1u32..5, -3i32..4), 1..3),
                              b in prop::collection::vec((1u32..5, -3i32..4), 1..3)) {
            let sa = EtaProductSpec::new(1, a.into_iter().filter(|f| f.1 != 0).collect()).unwrap();
            let sb = EtaProductSpec::new(0, b.into_iter().filter(|f| f.1 != 0).collect()).unwrap();
            let prod = eta_product(&(&sa * &sb), 25);
            prop_assert_eq!(prod, &eta_product(&sa, 25) * &eta_product(&sb, 25));
        }

        #[test]
        fn character_is_chart_independent(cs in prop::collection::vec(-4i64..5, 4), lam in 1u64..7) {
            let p = 7u64;
            let f = octic(&format!("({})x^8 + ({})x^3y^2zv^2 + ({})z^8 + ({})y^4v^4", cs[0], cs[1], cs[2], cs[3]));
            let pt: Vec<crate::arith::Rational> = [1i64, 2, 3, 5].iter().map(|&v| crate::arith::int(v)).collect();
            let scaled: Vec<crate::arith::Rational> = pt.iter().map(|v| v * crate::arith::int(lam as i64)).collect();
            let a = mod_p(&f.eval(&pt), p).unwrap();
            let b = mod_p(&f.eval(&scaled), p).unwrap();
            let chi = |v: u64| BigInt::from(v).modpow(&BigInt::from(3), &BigInt::from(p));
            prop_assert_eq!(chi(a), chi(b));
            prop_assert_eq!(count_double_octic(&f, p).unwrap(), brute_force(&f, p));
        }
    }
}
