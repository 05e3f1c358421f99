//! Number formatting and file writing shared by every output.

use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::error::{AppError, Result};

/// `x` with 9 significant digits, like C's `%.9g`.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds every float in a JSON tree to 9 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            if let Some(r) = sig9(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with floats at 9 significant digits and a final newline.
pub fn json_document(mut v: Value) -> String {
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(|e| AppError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| AppError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(-2.5), "-2.5");
        assert_eq!(sig9(0.1 + 0.2), "0.3");
        assert_eq!(sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(sig9(123456789.4), "123456789");
        assert_eq!(sig9(1234567890.0), "1.23456789e9");
        assert_eq!(sig9(9.9999999999), "10");
        assert_eq!(sig9(2.5e-7), "2.5e-7");
        assert_eq!(sig9(0.000123456789123), "0.000123456789");
        assert_eq!(sig9(f64::INFINITY), "inf");
    }

    #[test]
    fn json_rounding() {
        let doc = json_document(serde_json::json!({"x": 1.0 / 3.0, "n": 3, "v": [0.1 + 0.2]}));
        assert!(doc.contains("0.333333333"));
        assert!(!doc.contains("0.3333333333"));
        assert!(doc.contains("0.3\n") || doc.contains("0.3\n  ]"));
        assert!(doc.ends_with("}\n"));
    }
}
