//! Rendering of reports as JSON, CSV or aligned text.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let nested = items.iter().any(Value::is_array);
            let sep = if nested { "|" } else { ";" };
            items.iter().map(scalar).collect::<Vec<_>>().join(sep)
        }
        Value::Object(_) => v.to_string(),
        other => other.to_string(),
    }
}

/// Nested objects become dotted column names; arrays are joined.
fn flatten_into(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_into(&key, x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    flatten_into("", v, &mut out);
    out
}

/// Rows of a report: an array is a table, anything else a single row.
fn rows(v: &Value) -> Vec<Vec<(String, String)>> {
    match v {
        Value::Array(items) => items.iter().map(flatten).collect(),
        other => vec![flatten(other)],
    }
}

/// Column names in first-seen order across all rows.
fn header(rows: &[Vec<(String, String)>]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for (k, _) in r {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    cols
}

fn lookup<'a>(row: &'a [(String, String)], key: &str) -> &'a str {
    row.iter().find(|(k, _)| k == key).map_or("", |(_, v)| v.as_str())
}

pub fn emit(v: &Value, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(v).expect("reports serialize");
            writeln!(out, "{text}")
        }
        Format::Csv => {
            let rows = rows(v);
            if rows.is_empty() {
                return Ok(());
            }
            let cols = header(&rows);
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&cols)?;
            for r in &rows {
                w.write_record(cols.iter().map(|c| lookup(r, c)))?;
            }
            w.flush()
        }
        Format::Pretty => match v {
            Value::Array(items) if items.is_empty() => writeln!(out, "(no rows)"),
            Value::Array(_) => {
                let rows = rows(v);
                let cols = header(&rows);
                let widths: Vec<usize> = cols
                    .iter()
                    .map(|c| rows.iter().map(|r| lookup(r, c).len()).max().unwrap_or(0).max(c.len()))
                    .collect();
                let line = |cells: Vec<&str>| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(s, w)| format!("{s:<w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                writeln!(out, "{}", line(cols.iter().map(String::as_str).collect()))?;
                for r in &rows {
                    writeln!(out, "{}", line(cols.iter().map(|c| lookup(r, c)).collect()))?;
                }
                Ok(())
            }
            other => {
                let flat = flatten(other);
                let w = flat.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, x) in flat {
                    writeln!(out, "{k:<w$}  {x}")?;
                }
                Ok(())
            }
        },
    }
}

/// Builds a JSON object from key/value pairs, keeping their order.
pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn render(v: &Value, f: Format) -> String {
        let mut buf = Vec::new();
        emit(v, f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_flattens_nested_objects() {
        let v = json!([{"q": 2, "elements": {"S_2": "zero"}, "torsion": ["3"]}, {"q": 3, "elements": {"S_2": "nonzero"}, "torsion": []}]);
        assert_eq!(render(&v, Format::Csv), "q,elements.S_2,torsion\n2,zero,3\n3,nonzero,\n");
    }

    #[test]
    fn matrices_join_rows() {
        let v = json!({"matrix": [["1", "0"], ["0", "1"]]});
        assert_eq!(render(&v, Format::Csv), "matrix\n1;0|0;1\n");
    }

    #[test]
    fn empty_table() {
        assert_eq!(render(&json!([]), Format::Pretty), "(no rows)\n");
        assert_eq!(render(&json!([]), Format::Csv), "");
        assert_eq!(render(&json!([]), Format::Json), "[]\n");
    }
}
