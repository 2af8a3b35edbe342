//! CSV and JSON writers for operator tables, bound reports and suite results.
//!
//! Every JSON document is an envelope
//!
//! ```text
//! { "tool": "homop", "version": ..., "kind": ..., "config": {...}, "columns"?: [...], "results": [...] }
//! ```
//!
//! validated by `schema/homop-output.schema.json`. CSV files carry the rows
//! only, with a fixed header per kind.

use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::BoundReport;
use crate::verify::SuiteResult;

pub const TOOL: &str = "homop";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Operator values at labelled input points; complex values are always
/// written as a `(re, im)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    pub inputs: Vec<&'static str>,
    pub rows: Vec<(Vec<f64>, Complex64)>,
}

impl ValueTable {
    pub fn new(inputs: Vec<&'static str>) -> Self {
        ValueTable { inputs, rows: Vec::new() }
    }

    pub fn push(&mut self, input: Vec<f64>, value: Complex64) {
        debug_assert_eq!(input.len(), self.inputs.len());
        self.rows.push((input, value));
    }

    pub fn columns(&self) -> Vec<&'static str> {
        let mut c = self.inputs.clone();
        c.extend(["re", "im"]);
        c
    }
}

/// One of the three result kinds a command produces.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Values(ValueTable),
    Bounds(Vec<BoundReport>),
    /// `(p, C_p)` pairs.
    Riesz(Vec<(f64, f64)>),
    Suites(Vec<SuiteResult>),
}

impl Output {
    pub fn kind(&self) -> &'static str {
        match self {
            Output::Values(_) => "values",
            Output::Bounds(_) => "bounds",
            Output::Riesz(_) => "riesz-table",
            Output::Suites(_) => "suites",
        }
    }

    pub fn columns(&self) -> Vec<&'static str> {
        match self {
            Output::Values(t) => t.columns(),
            Output::Bounds(_) => BoundReport::CSV_HEADER.to_vec(),
            Output::Riesz(_) => vec!["p", "C_p"],
            Output::Suites(_) => vec!["name", "cases", "skipped", "max_deviation", "tolerance", "verdict", "passed"],
        }
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let num = |v: f64| format!("{v:e}");
        match self {
            Output::Values(t) => t
                .rows
                .iter()
                .map(|(x, v)| x.iter().map(|&a| num(a)).chain([num(v.re), num(v.im)]).collect())
                .collect(),
            Output::Bounds(b) => b.iter().map(|r| r.csv_record().to_vec()).collect(),
            Output::Riesz(t) => t.iter().map(|&(p, c)| vec![p.to_string(), num(c)]).collect(),
            Output::Suites(s) => s
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.cases.to_string(),
                        r.skipped.to_string(),
                        num(r.max_deviation),
                        num(r.tolerance),
                        serde_json::to_value(r.verdict)
                            .ok()
                            .and_then(|v| v.as_str().map(str::to_string))
                            .unwrap_or_default(),
                        r.passed().to_string(),
                    ]
                })
                .collect(),
        }
    }

    fn json_results(&self) -> Value {
        match self {
            // non-finite floats become null in serde_json, so rows keep them as strings
            Output::Values(t) => Value::Array(
                t.rows
                    .iter()
                    .map(|(x, v)| Value::Array(x.iter().chain([&v.re, &v.im]).map(|&a| json_number(a)).collect()))
                    .collect(),
            ),
            Output::Bounds(b) => Value::Array(
                b.iter()
                    .map(|r| {
                        let mut v = serde_json::to_value(r).unwrap_or(Value::Null);
                        v["lhs"] = json_number(r.lhs);
                        v["rhs"] = json_number(r.rhs);
                        v
                    })
                    .collect(),
            ),
            Output::Riesz(t) => Value::Array(t.iter().map(|&(p, c)| json!({ "p": p, "C_p": json_number(c) })).collect()),
            Output::Suites(s) => Value::Array(
                s.iter()
                    .map(|r| {
                        let mut v = serde_json::to_value(r).unwrap_or(Value::Null);
                        v["max_deviation"] = json_number(r.max_deviation);
                        v["passed"] = json!(r.passed());
                        v
                    })
                    .collect(),
            ),
        }
    }

    /// The JSON envelope, with `config` embedded verbatim.
    pub fn to_json(&self, config: &Value) -> Value {
        let mut doc = json!({
            "tool": TOOL,
            "version": VERSION,
            "kind": self.kind(),
            "config": config,
            "results": self.json_results(),
        });
        if let Output::Values(_) = self {
            doc["columns"] = json!(self.columns());
        }
        doc
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(self.columns())?;
        for row in self.csv_rows() {
            wr.write_record(&row)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut w: W, config: &Value) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.to_json(config))?;
        writeln!(w)
    }

    pub fn write<W: Write>(&self, w: W, format: Format, config: &Value) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w).map_err(io::Error::from),
            Format::Json => self.write_json(w, config),
        }
    }

    /// To `path`, or to stdout when `path` is `None` or `-`.
    pub fn write_to(&self, path: Option<&Path>, format: Format, config: &Value) -> io::Result<()> {
        match path {
            Some(p) if p.as_os_str() != "-" => {
                let f = io::BufWriter::new(std::fs::File::create(p)?);
                self.write(f, format, config)
            }
            _ => self.write(io::stdout().lock(), format, config),
        }
    }
}

/// A finite number as a JSON number, anything else as `"inf"`, `"-inf"` or `"nan"`.
pub fn json_number(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundReport;
    use std::collections::BTreeMap;

    fn table() -> Output {
        let mut t = ValueTable::new(vec!["alpha"]);
        t.push(vec![0.5], Complex64::new(1.0, -2.0));
        t.push(vec![-1.0], Complex64::new(0.0, 0.0));
        Output::Values(t)
    }

    #[test]
    fn csv_has_fixed_header_and_pairs() {
        let mut buf = Vec::new();
        table().write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0], "alpha,re,im");
        assert_eq!(lines[1], "5e-1,1e0,-2e0");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn csv_quotes_context() {
        let ctx = BTreeMap::from([("a".to_string(), json!("x,y"))]);
        let out = Output::Bounds(vec![BoundReport::new("est3", 1.0, f64::INFINITY, 1.0, ctx)]);
        let mut buf = Vec::new();
        out.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains(r#""{""a"":""x,y""}""#), "{s}");
        assert!(s.contains("inf"));
    }

    #[test]
    fn json_envelope() {
        let cfg = json!({"N": 2048});
        let v = table().to_json(&cfg);
        assert_eq!(v["tool"], "homop");
        assert_eq!(v["kind"], "values");
        assert_eq!(v["config"]["N"], 2048);
        assert_eq!(v["columns"], json!(["alpha", "re", "im"]));
        assert_eq!(v["results"][0], json!([0.5, 1.0, -2.0]));
        let b = Output::Bounds(vec![BoundReport::new("x", 1.0, f64::INFINITY, 1.0, BTreeMap::new())]);
        assert_eq!(b.to_json(&cfg)["results"][0]["rhs"], "inf");
    }

    #[test]
    fn json_is_byte_stable() {
        let cfg = json!({"b": 1, "a": 2});
        let mut x = Vec::new();
        let mut y = Vec::new();
        table().write_json(&mut x, &cfg).unwrap();
        table().write_json(&mut y, &cfg).unwrap();
        assert_eq!(x, y);
        let s = String::from_utf8(x).unwrap();
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }
}
