//! JSON and CSV formatting shared by the commands.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Number, Value};

pub const SCHEMA: u64 = 1;

/// A float printed with 17 significant digits; non-finite values become null.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    text.parse::<Number>().map(Value::Number).unwrap_or(Value::Null)
}

pub fn rational(q: &BigRational) -> Value {
    let mut m = Map::new();
    m.insert("num".into(), Value::String(q.numer().to_string()));
    m.insert("den".into(), Value::String(q.denom().to_string()));
    Value::Object(m)
}

pub fn integers(coeffs: &[BigInt]) -> Value {
    Value::Array(coeffs.iter().map(|c| Value::String(c.to_string())).collect())
}

/// An object with `schema` and `command` filled in.
pub fn record(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), Value::Number(SCHEMA.into()));
    m.insert("command".into(), Value::String(command.into()));
    m
}

pub fn render(record: Map<String, Value>) -> String {
    let mut text = serde_json::to_string_pretty(&Value::Object(record)).expect("JSON values always serialize");
    text.push('\n');
    text
}

/// Same digits as the JSON floats, for CSV cells and plain text.
pub fn float_text(x: f64) -> String {
    format!("{x:.16e}")
}

/// One RFC 4180 row with LF line ending.
pub fn csv_row<S: AsRef<str>>(cells: &[S]) -> String {
    let mut line = cells
        .iter()
        .map(|c| {
            let c = c.as_ref();
            if c.contains([',', '"', '\n', '\r']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(float(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(float(f64::NAN), Value::Null);
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_row(&["a", "b,c", "d\"e"]), "a,\"b,c\",\"d\"\"e\"\n");
    }

    #[test]
    fn rationals_as_strings() {
        let q = BigRational::new(32.into(), 3.into());
        assert_eq!(rational(&q).to_string(), r#"{"den":"3","num":"32"}"#);
    }
}
