//! The machine-readable report and its serializations.

use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use wigner_core::protoparse::AssertionOutcome;
use wigner_core::scenarios::{ScenarioOutput, Table};

pub const SCHEMA: &str = "wigner-lab/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema: String,
    pub version: String,
    pub scenario: String,
    pub parameters: BTreeMap<String, Value>,
    pub tables: BTreeMap<String, Table>,
    pub derived_quantities: BTreeMap<String, f64>,
    pub assertions: Vec<AssertionOutcome>,
    pub seed: u64,
    /// Wall-clock seconds. Empty unless timings were requested, so that
    /// repeated runs stay byte-identical.
    pub timings: BTreeMap<String, f64>,
    /// Table emitted by the CSV format; only sweeps set it.
    #[serde(skip)]
    pub sweep: Option<String>,
}

impl ReportDocument {
    pub fn new(output: ScenarioOutput, seed: u64) -> Self {
        Self {
            schema: SCHEMA.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            scenario: output.scenario,
            parameters: output.parameters,
            tables: output.tables,
            derived_quantities: output.derived_quantities,
            assertions: Vec::new(),
            seed,
            timings: BTreeMap::new(),
            sweep: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    /// Short human summary, one fact per line.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.derived_quantities {
            let _ = writeln!(s, "{}: {k} = {}", self.scenario, g17(*v));
        }
        for a in &self.assertions {
            let at = if a.line > 0 { format!(" line {}", a.line) } else { String::new() };
            let _ = writeln!(
                s,
                "{}{at}: {} (actual {}, delta {})",
                if a.passed { "PASS" } else { "FAIL" },
                a.statement,
                g17(a.actual),
                g17(a.delta)
            );
        }
        for (k, v) in &self.timings {
            let _ = writeln!(s, "{}: {k} took {v:.3} s", self.scenario);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportError(pub String);

impl std::fmt::Display for ReportError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ReportError {}

/// Serializes `doc`. Floats carry 17 significant digits.
pub fn emit_report(doc: &ReportDocument, format: Format) -> Result<Vec<u8>, ReportError> {
    match format {
        Format::Json => {
            let value = serde_json::to_value(doc).map_err(|e| ReportError(e.to_string()))?;
            let mut out = String::new();
            write_json(&mut out, &value, 0);
            out.push('\n');
            Ok(out.into_bytes())
        }
        Format::Csv => {
            let Some(name) = &doc.sweep else {
                return Err(ReportError(format!("`{}` is not a sweep; CSV needs a sweep table", doc.scenario)));
            };
            let table = doc.tables.get(name).ok_or_else(|| ReportError(format!("missing table `{name}`")))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let err = |e: csv::Error| ReportError(e.to_string());
            w.write_record(&table.columns).map_err(err)?;
            for row in &table.rows {
                w.write_record(row.iter().map(cell)).map_err(err)?;
            }
            w.into_inner().map_err(|e| ReportError(e.to_string()))
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => number(n),
        other => other.to_string(),
    }
}

fn number(n: &serde_json::Number) -> String {
    if n.is_f64() {
        g17(n.as_f64().unwrap_or(f64::NAN))
    } else {
        n.to_string()
    }
}

/// `printf("%.17g")`.
pub fn g17(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    const P: i32 = 17;
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_json(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            out.push('[');
            for (k, i) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_json(out, i, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, i) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_json(out, i, depth + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, i)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_json(out, i, depth + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}
