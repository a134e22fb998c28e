//! Deterministic text output: `%.Ng`-style numbers and the matrix file layout.

use hsdual_core::ComplexMatrix;

/// Significant digits used unless `--digits` says otherwise; enough to
/// round-trip any `f64`.
pub const DEFAULT_DIGITS: usize = 17;

/// Formats `x` like C's `%.{digits}g`, with `-0` printed as `0`.
pub fn format_g(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Serializes a matrix as a version-1 matrix file, one row per line.
pub fn matrix_file(m: &ComplexMatrix, digits: usize) -> String {
    let mut out = format!(
        "{{\n  \"format\": 1,\n  \"rows\": {},\n  \"cols\": {},\n  \"data\": [\n",
        m.rows(),
        m.cols()
    );
    for i in 0..m.rows() {
        let entries: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                format!("[{}, {}]", format_g(z.re, digits), format_g(z.im, digits))
            })
            .collect();
        let sep = if i + 1 < m.rows() { "," } else { "" };
        out.push_str(&format!("    [{}]{sep}\n", entries.join(", ")));
    }
    out.push_str("  ]\n}\n");
    out
}
