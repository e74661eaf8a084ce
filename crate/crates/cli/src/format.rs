use serde_json::Value;

/// `x` with `digits` significant digits, `%g`-style: fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros dropped.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.clamp(1, 17);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Pretty JSON with every float printed to `digits` significant digits and
/// non-finite floats as `null`.
pub fn json(value: &Value, digits: usize) -> String {
    let mut out = String::new();
    write_json(value, digits, 0, &mut out);
    out.push('\n');
    out
}

fn write_json(value: &Value, digits: usize, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Number(n) => {
            if n.is_u64() || n.is_i64() {
                out.push_str(&n.to_string());
            } else {
                let text = sig(n.as_f64().expect("float"), digits);
                out.push_str(&text);
                if !text.contains(['.', 'e']) {
                    out.push_str(".0");
                }
            }
        }
        Value::Array(items) => {
            if items.iter().all(|v| v.is_number() || v.is_null()) {
                out.push('[');
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_json(v, digits, indent, out);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(v, digits, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_json(v, digits, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Numeric table rendered as CSV.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn csv(&self, digits: usize) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| sig(x, digits)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.1, 17), "0.10000000000000001");
        assert_eq!(sig(0.1, 10), "0.1");
        assert_eq!(sig(1.0, 17), "1");
        assert_eq!(sig(-2.5e-7, 10), "-2.5e-7");
        assert_eq!(sig(123456789012.0, 10), "1.23456789e11");
        assert_eq!(sig(0.3829249225480262, 10), "0.3829249225");
        assert_eq!(sig(f64::INFINITY, 10), "inf");
        for x in [std::f64::consts::PI, 1e-300, 0.1 + 0.2, 6.02e23, -1.0 / 3.0] {
            assert_eq!(sig(x, 17).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_numbers_and_nulls() {
        let v = serde_json::json!({"a": [0.5, 1.0], "b": {"c": 3}, "d": null});
        let text = json(&v, 17);
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}
