//! Number rendering and compact JSON output with a fixed significant-digit budget.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// Rounds `x` to `digits` significant digits and prints the shortest decimal
/// that reads back to the rounded value. Integral values print without a
/// fractional part.
pub fn number(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let digits = digits.clamp(1, 17);
    let r: f64 = format!("{:.*e}", digits - 1, x).parse().unwrap_or(x);
    if r == 0.0 {
        return "0".to_string();
    }
    let a = r.abs();
    if r.fract() == 0.0 && a < 1e16 {
        format!("{r:.0}")
    } else if (1e-5..1e16).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Serializes `value` to a single line of JSON, key order preserved.
pub fn json<T: Serialize + ?Sized>(value: &T, digits: usize) -> String {
    let v = serde_json::to_value(value).expect("output types serialize to JSON");
    let mut out = String::new();
    write_value(&mut out, &v, digits);
    out
}

fn write_value(out: &mut String, v: &Value, digits: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let x = n.as_f64().unwrap_or(f64::NAN);
                if x.is_finite() {
                    out.push_str(&number(x, digits));
                } else {
                    out.push_str("null");
                }
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item, digits);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(out, item, digits);
            }
            out.push('}');
        }
    }
}
