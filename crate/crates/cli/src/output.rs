use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Prints a report. `rows` is the enumeration dump used by `csv`; without it
/// `csv` falls back to flattened `key,value` lines.
pub fn emit(format: Format, value: &Value, rows: Option<Vec<Vec<String>>>) {
    let text = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(value).expect("json")),
        Format::Table => table(value),
        Format::Csv => {
            let rows = rows.unwrap_or_else(|| {
                let mut out = vec![vec!["key".to_string(), "value".to_string()]];
                out.extend(flatten(value, "").into_iter().map(|(k, v)| vec![k, v]));
                out
            });
            rows.iter().map(|row| row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",") + "\n").collect()
        }
    };
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

/// Dotted paths to scalar leaves; arrays of scalars are joined with `; `.
fn flatten(value: &Value, prefix: &str) -> Vec<(String, String)> {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => map.iter().flat_map(|(k, v)| flatten(v, &key(k))).collect(),
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            vec![(prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join("; "))]
        }
        Value::Array(items) => {
            items.iter().enumerate().flat_map(|(i, v)| flatten(v, &key(&i.to_string()))).collect()
        }
        other => vec![(prefix.to_string(), scalar(other))],
    }
}

fn table(value: &Value) -> String {
    let rows = flatten(value, "");
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattening() {
        let v = json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": null}]});
        assert_eq!(
            flatten(&v, ""),
            vec![
                ("a".to_string(), "1".to_string()),
                ("b.c".to_string(), "1; 2".to_string()),
                ("d.0.e".to_string(), "-".to_string()),
            ]
        );
        assert_eq!(table(&json!({"ab": 1, "c": "x"})), "ab  1\nc   x\n");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }
}
