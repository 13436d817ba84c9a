//! JSON, JSON-lines and CSV encodings of the core types.
//!
//! Field elements are written as their integer index `c_0 + c_1 p + …`. Cyclotomic numbers
//! are `{"order": n, "coeffs": [...]}` with one exact `"a"` or `"a/b"` string per basis
//! coefficient; floating point values only ever appear under an `"approx"` key.

use std::io::Write;

use cft_nvm_core::characters::{AddCharacter, MultCharacter, SubgroupChar};
use cft_nvm_core::cyclotomic::{CycError, CycNum};
use cft_nvm_core::finite_field::{FieldElement, FieldSpec};
use cft_nvm_core::nvm::{Method, MinorWitness, NvmReport, UncertaintyReport};
use cft_nvm_core::transform::{CftMatrix, GroupAlgebraElement};
use serde_json::{json, Map, Value};

/// Decimal digits kept in complex approximations.
pub const APPROX_DIGITS: u32 = 12;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn malformed(what: &'static str, detail: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        what,
        detail: detail.into(),
    }
}

pub fn cyc_to_json(x: &CycNum) -> Value {
    json!({ "order": x.order(), "coeffs": x.coefficient_strings() })
}

pub fn cyc_from_json(v: &Value) -> Result<CycNum, FormatError> {
    let order = v
        .get("order")
        .and_then(Value::as_u64)
        .and_then(|n| u32::try_from(n).ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| malformed("cyclotomic number", "missing positive integer \"order\""))?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("cyclotomic number", "missing \"coeffs\" array"))?;
    let strings = coeffs
        .iter()
        .map(|c| c.as_str().ok_or_else(|| malformed("cyclotomic number", "coefficient is not a string")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CycNum::from_coefficient_strings(order, &strings)?)
}

pub fn approx_json(x: &CycNum) -> Value {
    let (re, im) = x.complex_approx(APPROX_DIGITS);
    json!({ "re": re, "im": im })
}

/// `{"exact": …, "approx": {"re", "im"}}`.
pub fn exact_with_approx(x: &CycNum) -> Value {
    json!({ "exact": cyc_to_json(x), "approx": approx_json(x) })
}

pub fn element_json(x: FieldElement) -> Value {
    json!(x.index())
}

pub fn elements_json(xs: &[FieldElement]) -> Value {
    Value::Array(xs.iter().map(|&x| element_json(x)).collect())
}

/// The field description; `with_tables` adds the trace of every element and `log`.
pub fn field_to_json(field: &FieldSpec, with_tables: bool) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), json!(field.p()));
    m.insert("m".into(), json!(field.m()));
    m.insert("q".into(), json!(field.q()));
    m.insert("modulus".into(), json!(field.modulus()));
    m.insert("modulus_text".into(), json!(polynomial_text(field.modulus())));
    m.insert("generator".into(), element_json(field.generator()));
    m.insert("generator_coeffs".into(), json!(field.coeffs(field.generator())));
    if with_tables {
        let trace: Vec<u32> = field.elements().map(|x| field.trace(x)).collect();
        let log: Vec<Value> = field
            .elements()
            .map(|x| field.discrete_log(x).ok().map_or(Value::Null, |t| json!(t)))
            .collect();
        m.insert("trace".into(), json!(trace));
        m.insert("log".into(), Value::Array(log));
    }
    Value::Object(m)
}

/// `x^2 + x + 1` style text for a coefficient list, constant term first.
pub fn polynomial_text(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => var,
            _ => format!("{c}*{var}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

pub fn subgroup_char_json(chi: &SubgroupChar) -> Value {
    let h = chi.subgroup();
    json!({ "index": h.index(), "order": h.order(), "j": chi.exponent() })
}

pub fn mult_char_json(chi: &MultCharacter) -> Value {
    json!({ "k": chi.exponent() })
}

pub fn add_char_json(psi: &AddCharacter) -> Value {
    json!({ "a": psi.parameter().index() })
}

/// An element of the group algebra: `q` numbers in element order.
pub fn group_algebra_json(f: &GroupAlgebraElement) -> Value {
    Value::Array(f.coeffs().iter().map(cyc_to_json).collect())
}

pub fn group_algebra_from_json(field: &FieldSpec, v: &Value) -> Result<GroupAlgebraElement, FormatError> {
    let items = v
        .as_array()
        .ok_or_else(|| malformed("group algebra element", "expected an array"))?;
    let coeffs = items.iter().map(cyc_from_json).collect::<Result<Vec<_>, _>>()?;
    GroupAlgebraElement::new(field, coeffs).map_err(|e| malformed("group algebra element", e.to_string()))
}

pub fn cft_to_json(m: &CftMatrix) -> Value {
    let mat = m.matrix();
    let entries: Vec<Value> = (0..mat.rows())
        .map(|i| Value::Array(mat.row(i).iter().map(cyc_to_json).collect()))
        .collect();
    json!({
        "chi": subgroup_char_json(&m.chi()),
        "R": elements_json(m.r()),
        "S": elements_json(m.s()),
        "entries": entries,
    })
}

fn witness_json(w: &Option<MinorWitness>) -> Value {
    match w {
        Some(w) => json!({ "I": w.rows, "J": w.cols }),
        None => Value::Null,
    }
}

pub fn report_to_json(r: &NvmReport) -> Value {
    json!({
        "q": r.q,
        "index": r.index,
        "chi_j": r.chi_j,
        "method": r.method.as_str(),
        "holds": r.holds,
        "theorem_prediction": r.theorem_prediction,
        "agreement": r.agreement,
        "witness": witness_json(&r.witness),
        "minors_checked": r.minors_checked,
    })
}

/// The fields of a serialized report; the witness determinant is not part of the format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRecord {
    pub q: u32,
    pub index: u32,
    pub chi_j: u32,
    pub method: Method,
    pub holds: bool,
    pub theorem_prediction: Option<bool>,
    pub agreement: Option<bool>,
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub minors_checked: u64,
}

impl From<&NvmReport> for ReportRecord {
    fn from(r: &NvmReport) -> Self {
        ReportRecord {
            q: r.q,
            index: r.index,
            chi_j: r.chi_j,
            method: r.method,
            holds: r.holds,
            theorem_prediction: r.theorem_prediction,
            agreement: r.agreement,
            witness: r.witness.as_ref().map(|w| (w.rows.clone(), w.cols.clone())),
            minors_checked: r.minors_checked,
        }
    }
}

fn get_u32(v: &Value, key: &str) -> Result<u32, FormatError> {
    v.get(key)
        .and_then(Value::as_u64)
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| malformed("report", format!("missing integer {key:?}")))
}

fn get_opt_bool(v: &Value, key: &str) -> Result<Option<bool>, FormatError> {
    match v.get(key) {
        Some(Value::Null) => Ok(None),
        Some(Value::Bool(b)) => Ok(Some(*b)),
        _ => Err(malformed("report", format!("{key:?} must be a boolean or null"))),
    }
}

fn index_list(v: Option<&Value>, key: &str) -> Result<Vec<usize>, FormatError> {
    v.and_then(Value::as_array)
        .ok_or_else(|| malformed("report", format!("witness {key:?} must be an array")))?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| malformed("report", "witness index is not an integer"))
        })
        .collect()
}

pub fn report_from_json(v: &Value) -> Result<ReportRecord, FormatError> {
    let method = v
        .get("method")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("report", "missing \"method\""))?
        .parse::<Method>()
        .map_err(|e| malformed("report", e))?;
    let witness = match v.get("witness") {
        Some(Value::Null) | None => None,
        Some(w) => Some((index_list(w.get("I"), "I")?, index_list(w.get("J"), "J")?)),
    };
    Ok(ReportRecord {
        q: get_u32(v, "q")?,
        index: get_u32(v, "index")?,
        chi_j: get_u32(v, "chi_j")?,
        method,
        holds: v
            .get("holds")
            .and_then(Value::as_bool)
            .ok_or_else(|| malformed("report", "missing \"holds\""))?,
        theorem_prediction: get_opt_bool(v, "theorem_prediction")?,
        agreement: get_opt_bool(v, "agreement")?,
        witness,
        minors_checked: v
            .get("minors_checked")
            .and_then(Value::as_u64)
            .ok_or_else(|| malformed("report", "missing \"minors_checked\""))?,
    })
}

pub fn uncertainty_json(u: &UncertaintyReport) -> Value {
    json!({
        "support": u.support,
        "support_hat": u.support_hat,
        "total": u.support + u.support_hat,
        "bound": u.bound,
        "case": format!("{:?}", u.case),
        "holds": u.holds,
    })
}

/// One compact JSON object per line.
pub fn write_reports_jsonl<W: Write>(mut w: W, reports: &[NvmReport]) -> Result<(), FormatError> {
    for r in reports {
        serde_json::to_writer(&mut w, &report_to_json(r))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub const CSV_HEADER: [&str; 10] = [
    "q",
    "index",
    "chi_j",
    "method",
    "holds",
    "theorem_prediction",
    "agreement",
    "witness_I",
    "witness_J",
    "minors_checked",
];

fn opt_bool(b: Option<bool>) -> String {
    b.map_or(String::new(), |b| b.to_string())
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

/// CSV with header; optional booleans are empty when absent, witness index lists are
/// `;`-separated.
pub fn write_reports_csv<W: Write>(w: W, reports: &[NvmReport]) -> Result<(), FormatError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in reports {
        let (wi, wj) = match &r.witness {
            Some(w) => (join(&w.rows), join(&w.cols)),
            None => (String::new(), String::new()),
        };
        out.write_record([
            r.q.to_string(),
            r.index.to_string(),
            r.chi_j.to_string(),
            r.method.as_str().to_string(),
            r.holds.to_string(),
            opt_bool(r.theorem_prediction),
            opt_bool(r.agreement),
            wi,
            wj,
            r.minors_checked.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn parse_opt_bool(s: &str) -> Result<Option<bool>, FormatError> {
    match s {
        "" => Ok(None),
        "true" => Ok(Some(true)),
        "false" => Ok(Some(false)),
        _ => Err(malformed("csv report", format!("bad boolean {s:?}"))),
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>, FormatError> {
    s.split(';')
        .map(|x| x.parse().map_err(|_| malformed("csv report", format!("bad index {x:?}"))))
        .collect()
}

pub fn read_reports_csv<R: std::io::Read>(r: R) -> Result<Vec<ReportRecord>, FormatError> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    if header != CSV_HEADER {
        return Err(malformed("csv report", "unexpected header"));
    }
    let num = |s: &str| -> Result<u64, FormatError> {
        s.parse().map_err(|_| malformed("csv report", format!("bad integer {s:?}")))
    };
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        let witness = match (f(7), f(8)) {
            ("", "") => None,
            (a, b) => Some((parse_list(a)?, parse_list(b)?)),
        };
        out.push(ReportRecord {
            q: num(f(0))? as u32,
            index: num(f(1))? as u32,
            chi_j: num(f(2))? as u32,
            method: f(3).parse().map_err(|e| malformed("csv report", e))?,
            holds: parse_opt_bool(f(4))?.ok_or_else(|| malformed("csv report", "empty holds"))?,
            theorem_prediction: parse_opt_bool(f(5))?,
            agreement: parse_opt_bool(f(6))?,
            witness,
            minors_checked: num(f(9))?,
        });
    }
    Ok(out)
}

/// Fixed-width text table of reports.
pub fn reports_table(reports: &[NvmReport]) -> String {
    let show = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
    let mut s = format!(
        "{:>5} {:>5} {:>5} {:>7} {:>6} {:>8} {:>9} {:>9} {:<16}\n",
        "q", "index", "chi_j", "method", "holds", "theorem", "agreement", "minors", "witness"
    );
    for r in reports {
        let w = r
            .witness
            .as_ref()
            .map_or("-".to_string(), |w| format!("I={:?} J={:?}", w.rows, w.cols));
        s.push_str(&format!(
            "{:>5} {:>5} {:>5} {:>7} {:>6} {:>8} {:>9} {:>9} {:<16}\n",
            r.q,
            r.index,
            r.chi_j,
            r.method.as_str(),
            r.holds,
            show(r.theorem_prediction),
            show(r.agreement),
            r.minors_checked,
            w
        ));
    }
    s
}
