//! Canonical JSON and CSV rendering.
//!
//! Floats use the shortest representation that parses back to the same
//! `f64`, so re-reading and re-writing any output is byte-identical.
//! Non-finite values are written as the strings `inf`, `-inf` and `nan`.

use serde_json::{Map, Value};

use crate::discrimination::DiscriminationBounds;
use crate::error::{Error, Result};

pub const SCHEMA: &str = "wernerlab/1";

pub const CURVES_HEADER: &str = "zeta,n,eta,lower,qcb_upper,fid_upper,helstrom_block";

/// Shortest round-trip decimal for `x`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_owned()
    } else if x == f64::INFINITY {
        "inf".to_owned()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_owned()
    } else {
        ryu::Buffer::new().format_finite(x).to_owned()
    }
}

pub fn parse_float(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => s.parse().ok(),
    }
}

pub fn json_float(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format_float(x)))
}

/// One command's output: what was asked and what came back.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub results: Map<String, Value>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            parameters: Map::new(),
            results: Map::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_owned(), value.into());
        self
    }

    pub fn param_f(self, key: &str, value: f64) -> Self {
        self.param(key, json_float(value))
    }

    pub fn result(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.results.insert(key.to_owned(), value.into());
        self
    }

    pub fn result_f(self, key: &str, value: f64) -> Self {
        self.result(key, json_float(value))
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("schema".into(), SCHEMA.into());
        root.insert("command".into(), self.command.clone().into());
        root.insert("parameters".into(), Value::Object(self.parameters.clone()));
        root.insert("results".into(), Value::Object(self.results.clone()));
        Value::Object(root)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("JSON values always serialize")
    }

    /// Header of result keys and one row of values. Nested values are
    /// written as compact JSON.
    pub fn to_csv(&self) -> String {
        let header: Vec<&str> = self.results.keys().map(String::as_str).collect();
        let row: Vec<String> = self.results.values().map(csv_cell).collect();
        format!("{}\n{}\n", header.join(","), row.join(","))
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format_float(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        other => format!("\"{}\"", other.to_string().replace('"', "\"\"")),
    }
}

pub fn bounds_row(b: &DiscriminationBounds) -> String {
    [
        format_float(b.zeta),
        b.n.to_string(),
        format_float(b.eta),
        format_float(b.lower),
        format_float(b.qcb_upper),
        format_float(b.fid_upper),
        format_float(b.helstrom_block),
    ]
    .join(",")
}

pub fn curves_csv(rows: &[DiscriminationBounds]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CURVES_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&bounds_row(r));
        out.push('\n');
    }
    out
}

pub fn bounds_json(b: &DiscriminationBounds) -> Value {
    let mut m = Map::new();
    m.insert("zeta".into(), json_float(b.zeta));
    m.insert("n".into(), b.n.into());
    m.insert("eta".into(), json_float(b.eta));
    m.insert("d".into(), b.d.into());
    m.insert("lower".into(), json_float(b.lower));
    m.insert("qcb_upper".into(), json_float(b.qcb_upper));
    m.insert("fid_upper".into(), json_float(b.fid_upper));
    m.insert("helstrom_block".into(), json_float(b.helstrom_block));
    Value::Object(m)
}

/// Reads a `curves` table back. The dimension is not stored and is set to 2.
pub fn parse_curves_csv(text: &str) -> Result<Vec<DiscriminationBounds>> {
    let malformed = || Error::param("csv", f64::NAN, "malformed curves table");
    let mut lines = text.lines();
    if lines.next() != Some(CURVES_HEADER) {
        return Err(malformed());
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 7 {
                return Err(malformed());
            }
            let f = |i: usize| parse_float(cells[i]).ok_or_else(malformed);
            Ok(DiscriminationBounds {
                zeta: f(0)?,
                n: cells[1].parse().map_err(|_| malformed())?,
                eta: f(2)?,
                d: 2,
                lower: f(3)?,
                qcb_upper: f(4)?,
                fid_upper: f(5)?,
                helstrom_block: f(6)?,
            })
        })
        .collect()
}
