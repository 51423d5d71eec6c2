use serde_json::Value;

pub fn emit(doc: &Value, pretty: bool) {
    if pretty {
        let mut out = String::new();
        table(doc, "", &mut out);
        print!("{out}");
    } else {
        println!("{doc}");
    }
}

/// One `path  value` row per scalar; arrays of scalars stay on one row.
fn table(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (key, child) in map {
                let p = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                table(child, &p, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, child) in items.iter().enumerate() {
                table(child, &format!("{path}[{i}]"), out);
            }
        }
        scalar => out.push_str(&format!("{path:<32} {scalar}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_nested_documents() {
        let mut out = String::new();
        table(&json!({"count": 12, "set": {"q": 3, "points": [[0, 1], [1, 0]]}}), "", &mut out);
        let rows: Vec<&str> = out.lines().map(str::trim_end).collect();
        assert_eq!(rows[0].split_whitespace().collect::<Vec<_>>(), ["count", "12"]);
        assert!(rows.iter().any(|r| r.starts_with("set.points[0]") && r.ends_with("[0,1]")));
    }
}
