//! Decimal text I/O for real and complex values.
//!
//! Complex literals are either rectangular (`a`, `bi`, `a+bi`, `a-bi`,
//! with `i` alone standing for `1i`) or polar (`m@theta`, argument in
//! radians). Components are plain decimal literals with an optional
//! exponent.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use astro_float::BigFloat;

use super::arith::Arith;
use super::complex::ComplexValue;
use crate::error::{Error, Result};

fn parse_err(token: &str, reason: &'static str) -> Error {
    Error::Parse {
        token: token.to_string(),
        reason,
    }
}

/// Length of the decimal literal at the start of `s` (sign included), or 0.
fn scan_literal(s: &[u8]) -> usize {
    let mut i = 0;
    if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < s.len() && s[i].is_ascii_digit() {
        i += 1;
    }
    let mut mantissa_digits = i - int_start;
    if i < s.len() && s[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        mantissa_digits += i - frac_start;
    }
    if mantissa_digits == 0 {
        return 0;
    }
    if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
        let mut j = i + 1;
        if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < s.len() && s[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_start {
            i = j;
        }
    }
    i
}

fn literal_value(lit: &str, ar: &Arith) -> Result<BigFloat> {
    let body = lit.strip_prefix('+').unwrap_or(lit);
    let v = ar.parse_decimal(body);
    if v.is_nan() || v.is_inf() {
        return Err(parse_err(lit, "literal out of range"));
    }
    Ok(v)
}

/// Parses a real decimal literal such as `-1.25e-3`.
pub fn parse_real(s: &str, ar: &Arith) -> Result<BigFloat> {
    let t = s.trim();
    let n = scan_literal(t.as_bytes());
    if n == 0 {
        return Err(parse_err(t, "expected a decimal literal"));
    }
    if n != t.len() {
        return Err(parse_err(&t[n..], "unexpected trailing characters"));
    }
    literal_value(t, ar)
}

/// Parses a complex literal at the precision of `ar`.
pub fn parse_complex(s: &str, ar: &Arith) -> Result<ComplexValue> {
    let t = s.trim();
    if t.is_empty() {
        return Err(parse_err(s, "empty literal"));
    }
    if let Some((m, theta)) = t.split_once('@') {
        let modulus = parse_real(m, ar)?;
        if modulus.is_negative() {
            return Err(parse_err(m.trim(), "modulus must be non-negative"));
        }
        let arg = parse_real(theta, ar)?;
        if modulus.is_zero() {
            return Ok(ComplexValue::zero(ar));
        }
        return Ok(ComplexValue::from_polar(&modulus, &arg, ar));
    }

    let b = t.as_bytes();
    // leading component: a literal, or a bare (signed) `i`
    let n1 = scan_literal(b);
    if n1 == 0 {
        let sign_len = usize::from(matches!(b[0], b'+' | b'-'));
        if &t[sign_len..] == "i" {
            let one = ar.one();
            let im = if b[0] == b'-' { one.neg() } else { one };
            return Ok(ComplexValue::new(ar.zero(), im));
        }
        return Err(parse_err(t, "expected a decimal literal or `i`"));
    }
    let first = literal_value(&t[..n1], ar)?;
    let rest = &t[n1..];
    if rest.is_empty() {
        return Ok(ComplexValue::new(first, ar.zero()));
    }
    if rest == "i" {
        return Ok(ComplexValue::new(ar.zero(), first));
    }
    let rb = rest.as_bytes();
    if !matches!(rb[0], b'+' | b'-') {
        return Err(parse_err(rest, "expected `+`, `-` or `i` after the real part"));
    }
    let n2 = scan_literal(rb);
    let im = if n2 == 0 {
        // `a+i` / `a-i`
        if &rest[1..] != "i" {
            return Err(parse_err(rest, "malformed imaginary part"));
        }
        let one = ar.one();
        if rb[0] == b'-' {
            one.neg()
        } else {
            one
        }
    } else {
        let tail = &rest[n2..];
        if tail != "i" {
            let bad = if tail.is_empty() { rest } else { tail };
            return Err(parse_err(bad, "imaginary part must end in `i`"));
        }
        literal_value(&rest[..n2], ar)?
    };
    Ok(ComplexValue::new(first, im))
}

/// Sign, decimal digits and exponent of the exact binary value, read as
/// `d1.d2d3... * 10^e`.
fn decompose(v: &BigFloat, ar: &Arith) -> Option<(bool, Vec<u8>, i64)> {
    let raw = ar.raw_decimal(v)?;
    let (neg, body) = match raw.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, raw.as_str()),
    };
    let (mant, exp) = body.split_once('e')?;
    let exp: i64 = exp.parse().ok()?;
    let mut digits: Vec<u8> = mant
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|c| c - b'0')
        .collect();
    // normalise away any leading zeros
    let lead = digits.iter().take_while(|&&d| d == 0).count();
    if lead == digits.len() {
        return None;
    }
    digits.drain(..lead);
    Some((neg, digits, exp - lead as i64))
}

/// Renders `v` with at most `sig` significant digits, rounding half up
/// and dropping trailing zeros. Moderate magnitudes print in positional
/// notation, others as `d.ddde-N`.
pub fn format_real(v: &BigFloat, sig: usize, ar: &Arith) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_inf() {
        return if v.is_negative() { "-inf" } else { "inf" }.into();
    }
    if v.is_zero() {
        return "0".into();
    }
    let Some((neg, mut digits, mut exp)) = decompose(v, ar) else {
        return "NaN".into();
    };
    let sig = sig.max(1);
    if digits.len() > sig {
        let round_up = digits[sig] >= 5;
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(sig);
                    exp += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    while digits.len() > 1 && digits.last() == Some(&0) {
        digits.pop();
    }
    let ch = |d: &u8| char::from(b'0' + *d);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-7..21).contains(&exp) {
        if exp < 0 {
            out.push_str("0.");
            for _ in 0..(-exp - 1) {
                out.push('0');
            }
            out.extend(digits.iter().map(ch));
        } else {
            let int_len = exp as usize + 1;
            for k in 0..int_len {
                out.push(digits.get(k).map_or('0', ch));
            }
            if digits.len() > int_len {
                out.push('.');
                out.extend(digits[int_len..].iter().map(ch));
            }
        }
    } else {
        out.push(ch(&digits[0]));
        if digits.len() > 1 {
            out.push('.');
            out.extend(digits[1..].iter().map(ch));
        }
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}

/// Rectangular rendering `a+bi` accepted by [`parse_complex`].
pub fn format_complex(z: &ComplexValue, sig: usize, ar: &Arith) -> String {
    let re = format_real(&z.re, sig, ar);
    if z.im.is_zero() {
        return re;
    }
    let im = format_real(&z.im, sig, ar);
    if im.starts_with('-') {
        alloc::format!("{re}{im}i")
    } else {
        alloc::format!("{re}+{im}i")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::arith::to_f64;

    #[test]
    fn rectangular_forms() {
        let ar = Arith::with_digits(30);
        let cases = [
            ("1", 1.0, 0.0),
            ("-2.5", -2.5, 0.0),
            ("0.5i", 0.0, 0.5),
            ("i", 0.0, 1.0),
            ("-i", 0.0, -1.0),
            ("1+i", 1.0, 1.0),
            ("3-2i", 3.0, -2.0),
            ("1e-3+2.5E+1i", 1e-3, 25.0),
            ("-.5-.25i", -0.5, -0.25),
            (" 4 ", 4.0, 0.0),
        ];
        for (s, re, im) in cases {
            let z = parse_complex(s, &ar).unwrap();
            assert_eq!(to_f64(&z.re), re, "{s}");
            assert_eq!(to_f64(&z.im), im, "{s}");
        }
    }

    #[test]
    fn polar_forms() {
        let ar = Arith::with_digits(30);
        let z = parse_complex("0@1.5", &ar).unwrap();
        assert!(z.is_zero());
        let z = parse_complex("0.9@0.7853981633974483", &ar).unwrap();
        // 0.9 cos(pi/4) = 0.9 sin(pi/4) = 0.636396103067893...
        let expect = 0.9 * core::f64::consts::FRAC_1_SQRT_2;
        assert!((to_f64(&z.re) - expect).abs() < 1e-15);
        assert!((to_f64(&z.im) - expect).abs() < 1e-15);
    }

    #[test]
    fn malformed_literals_name_the_token() {
        let ar = Arith::with_digits(30);
        for (s, tok) in [
            ("1.5e", "e"),
            ("abc", "abc"),
            ("1+2", "+2"),
            ("1+2j", "j"),
            ("-1@2", "-1"),
            ("1x", "x"),
            ("", ""),
        ] {
            match parse_complex(s, &ar) {
                Err(Error::Parse { token, .. }) => assert_eq!(token, tok, "{s}"),
                other => panic!("{s}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn formatting() {
        let ar = Arith::with_digits(40);
        assert_eq!(format_real(&ar.int(1), 10, &ar), "1");
        assert_eq!(format_real(&ar.zero(), 10, &ar), "0");
        assert_eq!(format_real(&ar.frac(1, 3), 5, &ar), "0.33333");
        assert_eq!(format_real(&ar.frac(2, 3), 5, &ar), "0.66667");
        assert_eq!(format_real(&ar.frac(-1, 8), 10, &ar), "-0.125");
        assert_eq!(format_real(&ar.int(1234567), 3, &ar), "1230000");
        assert_eq!(format_real(&ar.frac(9999, 10000), 3, &ar), "1");
        assert_eq!(format_real(&ar.pow10(-40), 5, &ar), "1e-40");
        assert_eq!(format_real(&ar.mul(&ar.int(-15), &ar.pow10(30)), 4, &ar), "-1.5e31");
        let z = ComplexValue::new(ar.frac(1, 2), ar.frac(-1, 4));
        assert_eq!(format_complex(&z, 10, &ar), "0.5-0.25i");
    }
}
