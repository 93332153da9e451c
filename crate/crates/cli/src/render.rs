use serde::Serialize;
use serde_json::Value;

use crate::{Failure, Format};

/// Output text plus the invariant that failed, if any.
#[derive(Debug)]
pub struct Rendered {
    pub body: String,
    pub violation: Option<String>,
}

impl Rendered {
    pub fn ok(body: String) -> Self {
        Rendered { body, violation: None }
    }

    pub fn violated_if(mut self, cond: bool, msg: impl FnOnce() -> String) -> Self {
        if cond {
            self.violation = Some(msg());
        }
        self
    }

    /// One serializable record: pretty JSON, `key value` lines, or a
    /// two-column `key,value` CSV with nested keys joined by dots.
    pub fn record<T: Serialize>(fmt: Format, value: &T) -> Result<Self, Failure> {
        let json = serde_json::to_value(value).map_err(|e| Failure::Usage(e.to_string()))?;
        match fmt {
            Format::Json => Ok(Rendered::ok(pretty(&json))),
            Format::Text => {
                let mut body = String::new();
                for (k, v) in flatten(&json) {
                    body.push_str(&format!("{k} {v}\n"));
                }
                Ok(Rendered::ok(body))
            }
            Format::Csv => Rendered::csv_rows(&["key", "value"], flatten(&json).into_iter().map(|(k, v)| vec![k, v])),
        }
    }

    pub fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Self, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(csv_err)?;
        for row in rows {
            w.write_record(&row).map_err(csv_err)?;
        }
        finish(w)
    }

    pub fn csv_serialize<T: Serialize>(rows: &[T]) -> Result<Self, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row).map_err(csv_err)?;
        }
        finish(w)
    }
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Rendered, Failure> {
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(Rendered::ok(String::from_utf8(bytes).expect("csv output is utf-8")))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Leaf paths of `v` in document order. Arrays of scalars stay on one line.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    walk(&key(k), child, out);
                }
            }
            Value::Array(items) => {
                let flat: Option<Vec<String>> = items.iter().map(scalar).collect();
                match flat {
                    Some(parts) => out.push((prefix.to_string(), parts.join(" "))),
                    None => {
                        for (i, child) in items.iter().enumerate() {
                            walk(&key(&i.to_string()), child, out);
                        }
                    }
                }
            }
            _ => out.push((prefix.to_string(), scalar(v).expect("leaf"))),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

pub fn trend_text(rows: &[ndl_core::TrendRow]) -> String {
    let mut s = format!(
        "{:>4} {:>3} {:>6} {:>9} {:>9} {:>12} {:>12} {:>10}\n",
        "n", "d", "seed", "lambda", "d/lambda", "h^(1/n)", "theorem", "gap"
    );
    for r in rows {
        s.push_str(&format!(
            "{:>4} {:>3} {:>6} {:>9.4} {:>9.4} {:>12.6} {:>12.6} {:>10.6}\n",
            r.n, r.d, r.seed, r.lambda, r.eigenvalue_ratio, r.h_root, r.theorem_root, r.normalized_gap
        ));
    }
    s
}
