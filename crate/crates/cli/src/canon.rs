//! Canonical, byte-stable output encoding.
//!
//! Object keys are emitted in sorted order, complex numbers as two-element
//! `[re, im]` arrays, and every float with 17 significant digits, so a fixed
//! `(config, seed)` pair produces byte-identical files across runs.

use std::collections::BTreeMap;

use jcsim_core::Complex64;
use nalgebra::DMatrix;

/// JSON value with deterministic emission order.
#[derive(Debug, Clone)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    Float(f64),
    Str(String),
    Array(Vec<Value>),
    Object(BTreeMap<String, Value>),
}

impl Value {
    pub fn object(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
        Value::Object(
            pairs
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    pub fn complex(z: Complex64) -> Value {
        Value::Array(vec![Value::Float(z.re), Value::Float(z.im)])
    }

    /// Row-major nested arrays of `[re, im]` pairs.
    pub fn matrix(m: &DMatrix<Complex64>) -> Value {
        let mut out = Vec::with_capacity(m.nrows());
        for r in 0..m.nrows() {
            let mut row = Vec::with_capacity(m.ncols());
            for c in 0..m.ncols() {
                row.push(Value::complex(m[(r, c)]));
            }
            out.push(Value::Array(row));
        }
        Value::Array(out)
    }
}

/// 17-significant-digit scientific form; valid as a JSON number literal.
pub fn fmt_f64(x: f64) -> String {
    // Normalize the zero sign so algebraically-zero results are stable.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Serialize a [`Value`] into canonical JSON text.
pub fn to_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out
}

fn write_value(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Int(i) => out.push_str(&i.to_string()),
        Value::UInt(u) => out.push_str(&u.to_string()),
        Value::Float(x) => out.push_str(&fmt_f64(*x)),
        Value::Str(s) => write_json_string(s, out),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json_string(k, out);
                out.push(':');
                write_value(v, out);
            }
            out.push('}');
        }
    }
}

fn write_json_string(s: &str, out: &mut String) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Write one CSV line from preformatted cells.
pub fn csv_line(cells: &[String]) -> String {
    let mut line = cells.join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_json_safe() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.5), "-5.0000000000000000e-1");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(-0.0), "0.0000000000000000e0");
        // Round-trips through a JSON parser.
        let parsed: f64 = serde_json::from_str(&fmt_f64(0.1)).unwrap();
        assert_eq!(parsed, 0.1);
    }

    #[test]
    fn objects_emit_sorted_keys() {
        let v = Value::object([
            ("zeta", Value::Int(1)),
            ("alpha", Value::Bool(true)),
            ("mid", Value::Null),
        ]);
        assert_eq!(to_json(&v), r#"{"alpha":true,"mid":null,"zeta":1}"#);
    }

    #[test]
    fn strings_are_escaped() {
        let v = Value::Str("a\"b\\c\n".into());
        assert_eq!(to_json(&v), r#""a\"b\\c\n""#);
    }
}
