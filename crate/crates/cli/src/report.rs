use std::str::FromStr;

use gpt_phase::Rational;
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format `{other}` (expected text, csv or json)")),
        }
    }
}

/// One command's output in every format it supports.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    /// Process exit code on success paths; nonzero when a check failed.
    pub exit_code: i32,
}

impl Report {
    pub fn new(json: Value, text: String) -> Self {
        Report { json, text, csv: None, exit_code: 0 }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: ReportFormat) -> CliResult<String> {
        match format {
            ReportFormat::Text => Ok(self.text.clone()),
            ReportFormat::Json => Ok(json_string(&self.json)),
            ReportFormat::Csv => {
                self.csv.clone().ok_or_else(|| CliError::Usage("this command has no csv output".into()))
            }
        }
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serialisable");
    s.push('\n');
    s
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_fraction_string())
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

/// Block-separated rendering such as `(1, 0 | 1/2, 1/2)`.
pub fn blocks(v: &[Rational], sizes: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut at = 0;
    for &n in sizes {
        parts.push(v[at..at + n].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
        at += n;
    }
    format!("({})", parts.join(" | "))
}

/// Cycle notation on 0-based points; `()` for the identity.
pub fn cycles(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut next = perm[start];
        while next != start {
            seen[next] = true;
            cycle.push(next);
            next = perm[next];
        }
        out.push('(');
        out.push_str(&cycle.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Twelve significant digits, shortest decimal form of the rounded value.
/// Values below 1e-14 in magnitude are printed as zero.
pub fn float12(x: f64) -> f64 {
    if x.abs() < 1e-14 {
        return 0.0;
    }
    format!("{x:.11e}").parse().expect("round trip")
}

pub fn float_value(x: f64) -> Value {
    serde_json::Number::from_f64(float12(x)).map(Value::Number).unwrap_or(Value::Null)
}

pub fn float_text(x: f64) -> String {
    let y = float12(x);
    if y == 0.0 {
        "0".into()
    } else {
        format!("{y}")
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
