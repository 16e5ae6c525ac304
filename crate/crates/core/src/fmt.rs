//! Locale-free number formatting used by every CSV writer.

/// Formats a real with `digits` significant digits, like C's `%.{digits}g`:
/// fixed notation for decimal exponents in `[-5, digits)`, scientific
/// otherwise, trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

/// Twelve significant digits, the precision of every real in CSV output.
pub fn real(x: f64) -> String {
    format_sig(x, 12)
}

/// Like [`real`], but an absent value becomes an empty field.
pub fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(real(1.25), "1.25");
        assert_eq!(real(0.01), "0.01");
        assert_eq!(real(5099.5), "5099.5");
        assert_eq!(real(1.0 / 3.0), "0.333333333333");
        assert_eq!(real(2.0 / 3.0), "0.666666666667");
        assert_eq!(real(1e-7), "1e-07");
        assert_eq!(real(123456789012345.0), "1.23456789012e+14");
        assert_eq!(real(-4.0), "-4");
        assert_eq!(real(100.0), "100");
        assert_eq!(real(0.0001234), "0.0001234");
        assert_eq!(format_sig(0.086_071_3, 5), "0.086071");
    }

    #[test]
    fn rounding_across_power_of_ten() {
        // 9.9999999999995 rounds up to 10 at 12 digits.
        assert_eq!(real(9.999_999_999_999_5), "10");
    }

    #[test]
    fn non_finite() {
        assert_eq!(real(f64::NAN), "nan");
        assert_eq!(real(f64::NEG_INFINITY), "-inf");
        assert_eq!(opt_real(None), "");
    }
}
