use serde_json::Value;

use crate::{Format, Outcome, RunRecord};

pub fn render(record: &RunRecord, outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(record).expect("record serialises");
            s.push('\n');
            s
        }
        Format::Csv => csv(record),
        Format::Text => {
            let mut s = String::new();
            for line in &outcome.text {
                s.push_str(line);
                s.push('\n');
            }
            s.push_str(&format!("{}: {}\n", record.command, record.status));
            s
        }
    }
}

/// `key,value` rows, one per scalar in the record, keys as dotted paths.
fn csv(record: &RunRecord) -> String {
    let mut rows = vec![
        ("schema_version".to_string(), record.schema_version.to_string()),
        ("command".to_string(), record.command.clone()),
        ("status".to_string(), record.status.clone()),
        ("passed".to_string(), record.passed.to_string()),
    ];
    flatten("result", &record.result, &mut rows);
    rows.push(("wall_time_ms".to_string(), format!("{:.3}", record.wall_time_ms)));
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&quote(&k));
        out.push(',');
        out.push_str(&quote(&v));
        out.push('\n');
    }
    out
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&format!("{prefix}.{k}"), v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
