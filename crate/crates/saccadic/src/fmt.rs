//! Fixed decimal formatting for diffable text output.
//!
//! Times in milliseconds are written with three decimals; every other
//! quantity with six significant digits.

use serde_json::Value;

/// Number of decimals that gives `v` six significant digits.
fn sig6_decimals(v: f64) -> usize {
    if v == 0.0 || !v.is_finite() {
        return 5;
    }
    let magnitude = v.abs().log10().floor() as i32;
    (5 - magnitude).max(0) as usize
}

/// `v` with six significant digits, fixed notation.
pub fn sig6(v: f64) -> String {
    format!("{:.*}", sig6_decimals(v), v)
}

/// A time in ms with three decimals.
pub fn ms(v: f64) -> String {
    format!("{v:.3}")
}

fn round_to(v: f64, decimals: usize) -> f64 {
    format!("{:.*}", decimals, v).parse().unwrap_or(v)
}

fn is_time_key(key: &str) -> bool {
    matches!(key, "t" | "onset" | "offset") || key.ends_with("_ms")
}

/// Rounds every float in a JSON tree according to the module rules.
pub fn round_json(value: &mut Value) {
    round_inner(value, false);
}

fn round_inner(value: &mut Value, time: bool) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let v = n.as_f64().unwrap_or(0.0);
            let r = if time {
                round_to(v, 3)
            } else {
                round_to(v, sig6_decimals(v))
            };
            if let Some(num) = serde_json::Number::from_f64(r) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_inner(v, time)),
        Value::Object(map) => {
            for (k, v) in map.iter_mut() {
                round_inner(v, is_time_key(k));
            }
        }
        _ => {}
    }
}

/// Pretty JSON with rounded numbers and a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> crate::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig6(0.579452123), "0.579452");
        assert_eq!(sig6(45.0), "45.0000");
        assert_eq!(sig6(0.0), "0.00000");
        assert_eq!(sig6(-0.00123456789), "-0.00123457");
        assert_eq!(sig6(1234567.8), "1234568");
        assert_eq!(ms(12.34567), "12.346");
    }

    #[test]
    fn json_rounding_by_key() {
        let mut v =
            serde_json::json!({"onset": 1234.56789, "amplitude": 12.3456789, "start_ms": 2.0004, "list": [0.1234567]});
        round_json(&mut v);
        assert_eq!(
            v.to_string(),
            r#"{"onset":1234.568,"amplitude":12.3457,"start_ms":2.0,"list":[0.123457]}"#
        );
    }
}
