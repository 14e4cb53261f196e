//! Deterministic JSON layout shared by reports and lift files.

use serde_json::Value;

/// Pretty JSON with sorted keys where arrays free of objects stay on one
/// line, so matrices read as rows and reports diff cleanly.
pub fn to_pretty(v: &Value) -> String {
    let mut out = String::new();
    write(v, 0, &mut out);
    out.push('\n');
    out
}

fn has_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(xs) => xs.iter().any(has_object),
        _ => false,
    }
}

fn indent(n: usize, out: &mut String) {
    for _ in 0..n {
        out.push_str("  ");
    }
}

fn write(v: &Value, depth: usize, out: &mut String) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                indent(depth + 1, out);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write(x, depth + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(depth, out);
            out.push('}');
        }
        Value::Array(xs) if !xs.is_empty() && has_object(v) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                indent(depth + 1, out);
                write(x, depth + 1, out);
                if i + 1 < xs.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(depth, out);
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_and_inlines_numeric_arrays() {
        let v: Value =
            serde_json::from_str(r#"{"b":[[1,2],[3]],"a":{"x":[{"y":null}],"z":"q"},"e":{},"f":[]}"#).unwrap();
        let s = to_pretty(&v);
        assert!(s.contains("\"b\": [[1,2],[3]]"));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
