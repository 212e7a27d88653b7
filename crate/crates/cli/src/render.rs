use delpezzo::bps::BpsTable;
use serde_json::{Map, Value};

use crate::{CliError, Format, ResultEnvelope};

pub(crate) fn render(env: &ResultEnvelope, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => serde_json::to_string_pretty(env)
            .map(|s| s + "\n")
            .map_err(|e| CliError::Internal(e.to_string())),
        Format::Csv => csv(env),
        Format::Table => Ok(table(env)),
    }
}

/// Flattens nested JSON into `(path, scalar)` rows; arrays of scalars are
/// joined with commas.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push((prefix.to_string(), items.join(",")));
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "null".into(),
        other => other.to_string(),
    }
}

fn rows(env: &ResultEnvelope) -> Vec<(String, String)> {
    let mut out = Vec::new();
    flatten("", &Value::Object(env.result.clone()), &mut out);
    for (k, v) in &env.certified {
        out.push((format!("certified.{k}"), v.to_string()));
    }
    for (i, w) in env.warnings.iter().enumerate() {
        out.push((format!("warnings.{i}"), w.clone()));
    }
    out
}

fn csv(env: &ResultEnvelope) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(["key", "value"]).map_err(io)?;
    for (k, v) in rows(env) {
        w.write_record([k, v]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

fn table(env: &ResultEnvelope) -> String {
    let mut out = String::new();
    if env.query.subcommand == "bps" {
        if let Ok(t) = serde_json::from_value::<BpsTable>(Value::Object(env.result.clone())) {
            out.push_str(&t.to_text());
            let mut rest = Map::new();
            rest.insert("valid_total".into(), env.result.get("valid_total").cloned().unwrap_or(Value::Null));
            return out + &key_values(&rows(&ResultEnvelope { result: rest, ..env.clone() }));
        }
    }
    out + &key_values(&rows(env))
}

fn key_values(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}
