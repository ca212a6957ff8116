//! Text, JSON and CSV output.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{parse_poly, ParseError};
use crate::classify::{Classification, ClassificationVerdict};
use crate::jumps::ScanRow;
use crate::localalg::QuotientReport;
use crate::series::{Monomial, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

/// Anything the CLI prints.
pub trait Report {
    fn text(&self) -> String;
    fn json(&self) -> Value;

    /// Header and rows for CSV output. The default is one row holding the
    /// top-level JSON fields.
    fn table(&self) -> (Vec<String>, Vec<Vec<String>>) {
        match self.json() {
            Value::Object(map) => {
                let header = map.keys().cloned().collect();
                let row = map.values().map(cell).collect();
                (header, vec![row])
            }
            v => (vec!["value".into()], vec![vec![cell(&v)]]),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn emit(report: &dyn Report, format: Format) -> Vec<u8> {
    match format {
        Format::Text => {
            let mut s = report.text();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s.into_bytes()
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json()).unwrap();
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let (header, rows) = report.table();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).unwrap();
            for row in rows {
                w.write_record(&row).unwrap();
            }
            w.into_inner().unwrap()
        }
    }
}

/// Plain wrapper for ad-hoc reports.
impl Report for (String, Value) {
    fn text(&self) -> String {
        self.0.clone()
    }

    fn json(&self) -> Value {
        self.1.clone()
    }
}

#[derive(Serialize, Deserialize)]
struct QuotientJson {
    dimension: Option<usize>,
    standard_monomials: Vec<String>,
    certificate_degree: Option<u32>,
    cap_used: u32,
    dims: Vec<usize>,
}

/// Standard monomials are written as strings in ascending monomial order.
pub fn quotient_to_json(r: &QuotientReport, vars: &[String]) -> Value {
    let mut ms = r.standard_monomials.clone();
    ms.sort();
    serde_json::to_value(QuotientJson {
        dimension: r.dimension,
        standard_monomials: ms.iter().map(|m| m.format(vars)).collect(),
        certificate_degree: r.certificate_degree,
        cap_used: r.cap_used,
        dims: r.dims.clone(),
    })
    .unwrap()
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error(transparent)]
    Shape(#[from] serde_json::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("`{0}` is not a monomial")]
    NotMonomial(String),
}

pub fn quotient_from_json(v: &Value, ring: &Ring) -> Result<QuotientReport, JsonError> {
    let q: QuotientJson = serde_json::from_value(v.clone())?;
    let mut ms = q
        .standard_monomials
        .iter()
        .map(|s| {
            let f = parse_poly(s, ring)?;
            let m = match f.terms().next() {
                Some((m, c)) if f.len() == 1 && ring.field().is_one(c) => Some(m.clone()),
                _ => None,
            };
            m.ok_or_else(|| JsonError::NotMonomial(s.clone()))
        })
        .collect::<Result<Vec<Monomial>, _>>()?;
    ms.sort();
    Ok(QuotientReport {
        dimension: q.dimension,
        standard_monomials: ms,
        certificate_degree: q.certificate_degree,
        cap_used: q.cap_used,
        dims: q.dims,
    })
}

impl Report for Classification {
    fn text(&self) -> String {
        self.verdict.to_string()
    }

    fn json(&self) -> Value {
        let v = &self.verdict;
        let (params, witnesses) = match v {
            ClassificationVerdict::Unimodal { params, .. } => {
                let mut m = serde_json::Map::new();
                for (k, x) in &params.ints {
                    m.insert(k.clone(), json!(x));
                }
                if let Some(l) = &params.lambda {
                    m.insert("λ".into(), json!(l.to_string()));
                }
                (Value::Object(m), json!([]))
            }
            ClassificationVerdict::ModalityAtLeast2 {
                witness: Some(w), ..
            } => (json!({}), json!([w])),
            _ => (json!({}), json!([])),
        };
        let detail = match v {
            ClassificationVerdict::Unimodal { normal_form, .. } => json!(normal_form),
            ClassificationVerdict::ModalityAtLeast2 { reason, .. }
            | ClassificationVerdict::Undetermined { reason } => json!(reason),
            _ => Value::Null,
        };
        json!({
            "verdict": v.kind(),
            "symbol": v.symbol(),
            "params": params,
            "witnesses": witnesses,
            "detail": detail,
            "transform_log": self.transform_log,
        })
    }
}

/// Scan rows in the column layout `char,<params>,tau,tau_ext,jump,predicted`.
pub struct ScanTable(pub Vec<ScanRow>);

impl ScanTable {
    fn param_names(&self) -> Vec<String> {
        self.0
            .first()
            .map(|r| r.params.keys().cloned().collect())
            .unwrap_or_default()
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), T::to_string)
}

impl Report for ScanTable {
    fn text(&self) -> String {
        let (header, rows) = self.table();
        let mut out = header.join("\t");
        for r in rows {
            out.push('\n');
            out.push_str(&r.join("\t"));
        }
        out
    }

    fn json(&self) -> Value {
        serde_json::to_value(&self.0).unwrap()
    }

    fn table(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let names = self.param_names();
        let mut header = vec!["char".to_string()];
        header.extend(names.iter().cloned());
        header.extend(["tau", "tau_ext", "jump", "predicted"].map(String::from));
        let rows = self
            .0
            .iter()
            .map(|r| {
                let mut row = vec![r.characteristic.to_string()];
                row.extend(names.iter().map(|n| opt(&r.params.get(n))));
                row.extend([opt(&r.tau), opt(&r.tau_ext), opt(&r.jump), opt(&r.predicted)]);
                row
            })
            .collect();
        (header, rows)
    }
}
