//! Deterministic output formatting: every floating-point number is rounded
//! to 12 significant digits and printed in its shortest round-trip form, so
//! identical flags always produce byte-identical output.

use anharm_core::CoreError;
use serde_json::{json, Map, Value};

/// Round to 12 significant digits through the decimal representation.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// JSON number carrying the 12-significant-digit value.
pub fn num(x: f64) -> Value {
    match serde_json::Number::from_f64(sig12(x)) {
        Some(n) => Value::Number(n),
        None => Value::String(format!("{x}")),
    }
}

/// Decimal text of the 12-significant-digit value, for CSV and text output.
pub fn dec(x: f64) -> String {
    format!("{}", sig12(x))
}

/// Compact single-object JSON with a trailing newline.
pub fn to_json_line(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Machine-readable error record emitted on exit code 2.
pub fn error_record(err: &CoreError) -> Value {
    let kind = match err {
        CoreError::InvalidInput(_) => "InvalidInput",
        CoreError::NoSolution(_) => "NoSolution",
        CoreError::NoConvergence(_) => "NoConvergence",
        CoreError::DegenerateDenominator(_) => "DegenerateDenominator",
        CoreError::DomainError(_) => "DomainError",
        CoreError::ConstraintViolated(_) => "ConstraintViolated",
        CoreError::GridTooCoarse(_) => "GridTooCoarse",
        CoreError::InvalidWindow(_) => "InvalidWindow",
        CoreError::NonIntegrable(_) => "NonIntegrable",
    };
    json!({ "error": { "kind": kind, "message": err.to_string() } })
}

/// Insert a possibly-absent integer as a JSON value or null.
pub fn opt_u32(v: Option<u32>) -> Value {
    match v {
        Some(x) => Value::from(x),
        None => Value::Null,
    }
}

/// Convenience for assembling objects with preset keys.
pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}
