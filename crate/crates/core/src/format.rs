//! Number formatting shared by every report.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use serde_json::{Map, Number, Value};

/// Machine-readable or tabular report layout.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl OutputFormat {
    /// Extension used when persisting; text reports persist as JSON.
    pub fn file_extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            _ => "json",
        }
    }
}

/// Serializes an exact integer as a decimal string.
pub fn serialize_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Significant digits printed for reals.
pub const SIG_DIGITS: usize = 12;

/// `x` with 12 significant digits, in the style of C's `%.12g`.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits.
pub fn round_real(x: f64) -> f64 {
    if x.is_finite() {
        fmt_real(x).parse().expect("formatted real parses")
    } else {
        x
    }
}

/// JSON tree with every non-integer number rounded by [`round_real`].
pub fn to_json_value<T: Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("report serializes");
    round_tree(&mut v);
    v
}

fn round_tree(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *v = Number::from_f64(round_real(x)).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_tree),
        Value::Object(map) => map.values_mut().for_each(round_tree),
        _ => {}
    }
}

/// Pretty JSON with rounded reals and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(&to_json_value(value)).expect("value serializes");
    s.push('\n');
    s
}

/// Two-column `field,value` CSV of a report, nested fields joined by `.`.
pub fn to_field_csv<T: Serialize>(value: &T) -> String {
    let mut rows = Vec::new();
    flatten("", &to_json_value(value), &mut rows);
    let mut s = String::from("field,value\n");
    for (k, v) in rows {
        s.push_str(&k);
        s.push(',');
        s.push_str(&csv_escape(&v));
        s.push('\n');
    }
    s
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => flatten_map(map, &join, out),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), item, out);
            }
        }
        Value::Number(n) => out.push((prefix.to_string(), n.as_f64().map_or_else(|| n.to_string(), |x| {
            if n.is_f64() {
                fmt_real(x)
            } else {
                n.to_string()
            }
        }))),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), String::new())),
    }
}

fn flatten_map(map: &Map<String, Value>, join: &dyn Fn(&str) -> String, out: &mut Vec<(String, String)>) {
    for (k, v) in map {
        flatten(&join(k), v, out);
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(0.972), "0.972");
        assert_eq!(fmt_real(1.0 + 0.5 * 3f64.log2()), "1.79248125036");
        assert_eq!(fmt_real(-0.25), "-0.25");
        assert_eq!(fmt_real(1e-5), "1e-05");
        assert_eq!(fmt_real(1.5e15), "1.5e+15");
        assert_eq!(fmt_real(123456789012.0), "123456789012");
        assert_eq!(fmt_real(0.0001), "0.0001");
        assert_eq!(fmt_real(f64::INFINITY), "inf");
        assert_eq!(fmt_real(-0.0), "0");
    }

    #[test]
    fn json_rounds_reals_only() {
        #[derive(Serialize)]
        struct R {
            n: u64,
            x: f64,
            v: Vec<f64>,
        }
        let s = to_json(&R {
            n: 12345678901234567,
            x: 0.1 + 0.2,
            v: vec![2f64.sqrt()],
        });
        assert!(s.contains("12345678901234567"));
        assert!(s.contains("\"x\": 0.3"), "{s}");
        assert!(s.contains("1.41421356237"), "{s}");
    }

    #[test]
    fn field_csv() {
        #[derive(Serialize)]
        struct Inner {
            b: f64,
        }
        #[derive(Serialize)]
        struct R {
            a: &'static str,
            inner: Inner,
        }
        let csv = to_field_csv(&R {
            a: "x,y",
            inner: Inner { b: 0.5 },
        });
        assert_eq!(csv, "field,value\na,\"x,y\"\ninner.b,0.5\n");
    }
}
