//! JSON, CSV and plain-text rendering of a serialized report.
//!
//! CSV and text are derived from the JSON value, so all three carry the
//! same numbers. Nested fields become dotted paths (`verdict.exact_match`,
//! `lines.0.leader`); a report with a designated table field renders that
//! array as rows instead.

use serde_json::Value;

use crate::OutputFormat;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `(path, value)` pairs for every scalar leaf, in document order.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(v: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, v)| walk(v, &join(k), out)),
            Value::Array(items) => items
                .iter()
                .enumerate()
                .for_each(|(i, v)| walk(v, &join(&i.to_string()), out)),
            leaf => out.push((prefix.to_string(), scalar(leaf))),
        }
    }
    let mut out = Vec::new();
    walk(v, "", &mut out);
    out
}

fn table_rows(rows: &[Value]) -> (Vec<String>, Vec<Vec<String>>) {
    let header: Vec<String> = match rows.first() {
        Some(Value::Object(m)) => m.keys().cloned().collect(),
        _ => Vec::new(),
    };
    let body = rows
        .iter()
        .map(|r| header.iter().map(|h| r.get(h).map(scalar).unwrap_or_default()).collect())
        .collect();
    (header, body)
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

pub fn render(v: &Value, format: OutputFormat, table: Option<&str>) -> String {
    let rows = table.and_then(|t| v.get(t)).and_then(Value::as_array);
    match (format, rows) {
        (OutputFormat::Json, _) => {
            let mut s = serde_json::to_string_pretty(v).expect("serializable value");
            s.push('\n');
            s
        }
        (OutputFormat::Csv, Some(rows)) => {
            let (h, b) = table_rows(rows);
            csv_text(&h, &b)
        }
        (OutputFormat::Csv, None) => {
            let pairs: Vec<Vec<String>> = flatten(v).into_iter().map(|(k, v)| vec![k, v]).collect();
            csv_text(&["field".into(), "value".into()], &pairs)
        }
        (OutputFormat::Human, rows) => {
            let mut out = String::new();
            let skip = table.filter(|_| rows.is_some());
            for (k, val) in flatten(v) {
                if skip.is_some_and(|t| k.starts_with(&format!("{t}."))) {
                    continue;
                }
                out.push_str(&format!("{k}: {val}\n"));
            }
            if let Some(rows) = rows {
                let (h, b) = table_rows(rows);
                let widths: Vec<usize> = (0..h.len())
                    .map(|i| b.iter().map(|r| r[i].len()).chain([h[i].len()]).max().unwrap_or(0))
                    .collect();
                let fmt_row = |cells: &[String]| {
                    let padded: Vec<String> =
                        cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                    padded.join("  ") + "\n"
                };
                out.push_str(&fmt_row(&h));
                b.iter().for_each(|r| out.push_str(&fmt_row(r)));
            }
            out
        }
    }
}
