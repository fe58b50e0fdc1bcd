//! Plain-text rendering of emitted documents.

use serde_json::{Map, Value};
use unicrit_core::poly::IntPoly;

/// Aligned columns, header first.
fn grid(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header)];
    out.push(line(
        &widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(),
    ));
    out.extend(rows.iter().map(|r| line(r)));
    out.join("\n") + "\n"
}

fn as_poly(v: &Value) -> Option<String> {
    let obj = v.as_object()?;
    if !(obj.contains_key("var") && obj.contains_key("coeffs")) {
        return None;
    }
    let p: IntPoly = serde_json::from_value(Value::Object(
        obj.iter()
            .filter(|(k, _)| *k == "var" || *k == "coeffs")
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
    ))
    .ok()?;
    Some(p.to_string())
}

/// One-cell text for a value.
fn cell(v: &Value) -> String {
    if let Some(p) = as_poly(v) {
        return p;
    }
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Object(o) => o
            .iter()
            .map(|(k, v)| format!("{k}={}", cell(v)))
            .collect::<Vec<_>>()
            .join(" "),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn columns(items: &[Value]) -> Vec<String> {
    let mut keys: Vec<String> = Vec::new();
    for item in items {
        if let Some(o) = item.as_object() {
            for k in o.keys() {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
        }
    }
    keys
}

fn object_table(items: &[Value]) -> String {
    let keys = columns(items);
    let rows: Vec<Vec<String>> = items
        .iter()
        .map(|item| {
            keys.iter()
                .map(|k| item.get(k).map_or("-".into(), cell))
                .collect()
        })
        .collect();
    grid(&keys, &rows)
}

fn key_values(o: &Map<String, Value>) -> String {
    let rows: Vec<Vec<String>> = o.iter().map(|(k, v)| vec![k.clone(), cell(v)]).collect();
    grid(&["field".into(), "value".into()], &rows)
}

fn report(o: &Map<String, Value>) -> String {
    let mut out = format!(
        "claim: {}  cell: {}  verdict: {}\n",
        cell(&o["claim"]),
        cell(&o["cell"]),
        cell(&o["verdict"])
    );
    if let Some(Value::Array(ws)) = o.get("witnesses") {
        out += &object_table(ws);
    }
    out
}

pub fn render(v: &Value) -> String {
    match v {
        Value::Object(o) if o.contains_key("reports") => {
            let reports = o["reports"].as_array().cloned().unwrap_or_default();
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        cell(&r["cell"]),
                        cell(&r["verdict"]),
                        r["witnesses"].as_array().map_or(0, Vec::len).to_string(),
                    ]
                })
                .collect();
            format!(
                "claim: {}  cells: {}  passed: {}  failed: {}  incomplete: {}\n",
                cell(&o["claim"]),
                cell(&o["cells"]),
                cell(&o["passed"]),
                cell(&o["failed"]),
                cell(&o["incomplete"])
            ) + &grid(
                &["cell".into(), "verdict".into(), "witnesses".into()],
                &rows,
            )
        }
        Value::Object(o) if o.contains_key("claim") && o.contains_key("verdict") => report(o),
        Value::Object(o) if as_poly(v).is_some() => {
            let mut fields = o.clone();
            fields.remove("var");
            let coeffs = fields
                .remove("coeffs")
                .and_then(|c| c.as_array().map(Vec::len))
                .unwrap_or(0);
            fields.insert("degree".into(), Value::from(coeffs.saturating_sub(1)));
            fields.insert(
                "polynomial".into(),
                Value::String(as_poly(v).unwrap_or_default()),
            );
            key_values(&fields)
        }
        Value::Object(o) => key_values(o),
        Value::Array(items) if items.iter().all(|i| i.get("verdict").is_some()) => {
            items.iter().map(render).collect::<Vec<_>>().join("\n")
        }
        Value::Array(items) if items.iter().all(Value::is_object) => object_table(items),
        other => cell(other) + "\n",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn polynomial_rows() {
        let v = json!({"var": "c", "coeffs": ["2", "2", "2", "1"], "coordinate": "c", "n": 2});
        let t = render(&v);
        assert!(t.contains("c^3 + 2*c^2 + 2*c + 2"));
        assert!(t.contains("degree"));
    }

    #[test]
    fn aligned_columns() {
        let t = render(&json!([{"a": "1", "bb": "x"}, {"a": "333", "bb": "y"}]));
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "a    bb");
        assert_eq!(lines[2], "1    x");
        assert_eq!(lines[3], "333  y");
    }
}
