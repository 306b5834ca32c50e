//! JSON and CSV forms of sequences, matrices and reports.
//!
//! Rationals are always written in canonical `p/q` form. When a decimal
//! precision is given, an extra `decimal_approx` column is added; it is a
//! rounded projection and is never read back.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bandops::{SeqPrefix, TruncatedMatrix};
use crate::classify::{ClassVerdict, ConditionReport};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

/// A term as it may appear in JSON input: `"p/q"`, `"0.25"` or a number.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawTerm {
    Text(String),
    Int(i64),
    Float(f64),
}

impl RawTerm {
    fn into_rational(self) -> Result<Rational> {
        match self {
            RawTerm::Text(s) => rational::parse(&s),
            RawTerm::Int(v) => Ok(rational::int(v)),
            RawTerm::Float(v) if v.is_finite() => rational::parse(&v.to_string()),
            RawTerm::Float(v) => Err(Error::Parse(format!("not a finite number: {v}"))),
        }
    }
}

#[derive(Deserialize)]
struct RawSequence {
    name: Option<String>,
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: Option<usize>,
    cols: Option<usize>,
    entries: Vec<Vec<RawTerm>>,
    provenance: Option<String>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("invalid JSON: {e}"))
}

/// Reads `{"name": ..., "terms": [...]}`, or a bare array of terms.
pub fn sequence_from_json(text: &str) -> Result<SeqPrefix> {
    let value: Value = serde_json::from_str(text).map_err(json_error)?;
    let raw: RawSequence = if value.is_array() {
        RawSequence {
            name: None,
            terms: serde_json::from_value(value).map_err(json_error)?,
        }
    } else {
        serde_json::from_value(value).map_err(json_error)?
    };
    let terms = raw
        .terms
        .into_iter()
        .map(RawTerm::into_rational)
        .collect::<Result<Vec<_>>>()?;
    Ok(match raw.name {
        Some(name) => SeqPrefix::named(name, terms),
        None => SeqPrefix::new(terms),
    })
}

/// Reads one term per line; blank lines, `#` comments and a `term` header
/// are skipped. With two columns the last one is the term.
pub fn sequence_from_csv(text: &str) -> Result<SeqPrefix> {
    let mut terms = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        if field.eq_ignore_ascii_case("term") {
            continue;
        }
        terms.push(rational::parse(field)?);
    }
    Ok(SeqPrefix::new(terms))
}

/// Reads `{"rows", "cols", "entries": [[...]], "provenance"}`; `rows` and
/// `cols` are checked when present.
pub fn matrix_from_json(text: &str) -> Result<TruncatedMatrix> {
    let raw: RawMatrix = serde_json::from_str(text).map_err(json_error)?;
    let rows = raw
        .entries
        .into_iter()
        .map(|row| row.into_iter().map(RawTerm::into_rational).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let matrix = TruncatedMatrix::from_rows(rows)?;
    for (declared, actual) in [(raw.rows, matrix.rows()), (raw.cols, matrix.cols())] {
        if let Some(declared) = declared {
            if declared != actual {
                return Err(Error::LengthMismatch {
                    expected: declared,
                    got: actual,
                });
            }
        }
    }
    Ok(match raw.provenance {
        Some(p) => matrix.with_provenance(p),
        None => matrix.with_provenance("file"),
    })
}

/// Reads one comma-separated row per line.
pub fn matrix_from_csv(text: &str) -> Result<TruncatedMatrix> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').map(rational::parse).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    Ok(TruncatedMatrix::from_rows(rows)?.with_provenance("file"))
}

/// Picks the reader by extension: `.csv` is CSV, anything else JSON.
pub fn read_sequence(path: &std::path::Path) -> Result<SeqPrefix> {
    let text = read(path)?;
    if is_csv(path) {
        sequence_from_csv(&text)
    } else {
        sequence_from_json(&text)
    }
}

pub fn read_matrix(path: &std::path::Path) -> Result<TruncatedMatrix> {
    let text = read(path)?;
    if is_csv(path) {
        matrix_from_csv(&text)
    } else {
        matrix_from_json(&text)
    }
}

fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn is_csv(path: &std::path::Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn terms_json(terms: &[Rational]) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|t| Value::String(rational::format(t)))
            .collect(),
    )
}

fn decimals_json(terms: &[Rational], digits: usize) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|t| Value::String(rational::decimal(t, digits)))
            .collect(),
    )
}

pub fn sequence_to_json(x: &SeqPrefix, decimal: Option<usize>) -> Value {
    let mut map = serde_json::Map::new();
    if let Some(name) = x.name() {
        map.insert("name".into(), Value::String(name.into()));
    }
    map.insert("length".into(), Value::from(x.len()));
    map.insert("terms".into(), terms_json(x.terms()));
    if let Some(digits) = decimal {
        map.insert("decimal_approx".into(), decimals_json(x.terms(), digits));
    }
    Value::Object(map)
}

pub fn sequence_to_csv(x: &SeqPrefix, decimal: Option<usize>) -> String {
    let mut out = String::from(if decimal.is_some() {
        "index,term,decimal_approx\n"
    } else {
        "index,term\n"
    });
    for (k, t) in x.iter().enumerate() {
        out.push_str(&format!("{k},{}", rational::format(t)));
        if let Some(digits) = decimal {
            out.push_str(&format!(",{}", rational::decimal(t, digits)));
        }
        out.push('\n');
    }
    out
}

pub fn matrix_to_json(a: &TruncatedMatrix) -> Value {
    serde_json::json!({
        "rows": a.rows(),
        "cols": a.cols(),
        "entries": a.to_rows().iter().map(|r| terms_json(r)).collect::<Vec<_>>(),
        "provenance": a.provenance(),
    })
}

pub fn matrix_to_csv(a: &TruncatedMatrix) -> String {
    let mut out = String::new();
    for n in 0..a.rows() {
        let row: Vec<String> = a.row(n).iter().map(rational::format).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Header of [`report_to_csv`].
pub const REPORT_CSV_HEADER: &str =
    "source,target,id,subject,zero_limit,verdict,witness_row,witness_column,witness_ladder,witness_value,overall";

/// One line per condition, with the overall verdict repeated.
pub fn report_to_csv(v: &ClassVerdict) -> String {
    let overall = enum_name(&v.overall);
    let mut out = format!("{REPORT_CSV_HEADER}\n");
    for r in &v.conditions {
        out.push_str(&format!(
            "{},{},{},{}\n",
            v.pair.source,
            v.pair.target,
            condition_csv_fields(r),
            overall
        ));
    }
    out
}

/// `id,subject,zero_limit,verdict,witness_row,witness_column,witness_ladder,witness_value`
pub fn condition_csv_fields(r: &ConditionReport) -> String {
    let w = r.witness.as_ref();
    let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
    format!(
        "{},\"{}\",{},{},{},{},{},{}",
        r.id,
        r.subject,
        r.zero_limit,
        enum_name(&r.verdict),
        opt(w.map(|w| w.row)),
        opt(w.and_then(|w| w.column)),
        opt(w.and_then(|w| w.ladder)),
        w.map(|w| rational::format(&w.value)).unwrap_or_default(),
    )
}

/// Serialized name of a unit enum variant.
pub fn enum_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

/// Pretty JSON with a trailing newline; key order follows the structs.
pub fn to_json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}
