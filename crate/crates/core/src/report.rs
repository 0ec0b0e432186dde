//! Report plumbing: validation check lists and byte-stable JSON/CSV output.
//!
//! Floats are written in scientific notation with 12 significant digits so
//! that identical runs give identical bytes.

use serde_json::{Map, Number, Value};

use crate::error::Result;
use crate::linalg::{CMatrix, CVector, C64};

pub const SCHEMA_VERSION: u64 = 1;

/// Magnitudes below this are printed as zero.
const PRINT_CHOP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn extend(&mut self, prefix: &str, other: ValidationReport) {
        for check in other.checks {
            self.checks.push(Check { name: format!("{prefix}{}", check.name), ..check });
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        let checks = self
            .checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), Value::from(c.name.clone()));
                m.insert("passed".into(), Value::from(c.passed));
                m.insert("detail".into(), Value::from(c.detail.clone()));
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("all_passed".into(), Value::from(self.all_passed()));
        m.insert("checks".into(), Value::Array(checks));
        Value::Object(m)
    }
}

pub fn format_float(x: f64) -> String {
    let x = if x.abs() < PRINT_CHOP { 0.0 } else { x };
    // adding 0.0 folds −0 into +0
    let s = format!("{:.11e}", x + 0.0);
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}

pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let n: Number = serde_json::from_str(&format_float(x)).expect("formatted float is valid JSON");
    Value::Number(n)
}

pub fn complex(z: C64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn vector(v: &CVector) -> Value {
    Value::Array(v.iter().map(|z| complex(*z)).collect())
}

pub fn matrix(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

/// Wraps a report body with the schema version and the report kind.
pub fn envelope(kind: &str, body: Map<String, Value>) -> Value {
    let mut m = body;
    m.insert("schema".into(), Value::from(SCHEMA_VERSION));
    m.insert("report".into(), Value::from(kind));
    Value::Object(m)
}

pub fn to_json_string(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Flattens a JSON document into `path,value` rows.
pub fn to_csv_string(v: &Value) -> Result<String> {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["path", "value"])?;
    for (k, val) in rows {
        w.write_record([k, val])?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, val) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, val, out);
            }
        }
        Value::Array(a) => {
            for (i, val) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), val, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
