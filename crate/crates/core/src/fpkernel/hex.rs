use std::fmt::Write;

use thiserror::Error;

use super::{compose, decompose, ComposeError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HexError {
    #[error("malformed hexadecimal literal at byte {pos}: {msg}")]
    Malformed { pos: usize, msg: &'static str },
    #[error("hexadecimal literal is not exactly representable in binary64")]
    Inexact,
    #[error("hexadecimal literal overflows binary64")]
    Overflow,
}

/// Canonical C99 hexadecimal rendering: lowercase, shortest significand,
/// explicit exponent sign, subnormals normalized (`0x1p-1074`). Infinities
/// render as `infinity`/`-infinity` and NaN as `nan`.
pub fn f64_to_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}infinity");
    }
    let Some((mant, exp)) = decompose(x) else {
        return format!("{sign}0x0p+0");
    };
    // Normalize so the leading 1 sits at bit 52.
    let shift = mant.leading_zeros() as i32 - 11;
    let m = mant << shift;
    let e = exp - shift + 52;
    let mut frac = m & ((1u64 << 52) - 1);
    let mut out = format!("{sign}0x1");
    if frac != 0 {
        let mut digits = 13;
        while frac & 0xf == 0 {
            frac >>= 4;
            digits -= 1;
        }
        write!(out, ".{frac:0digits$x}").unwrap();
    }
    write!(out, "p{}{}", if e < 0 { '-' } else { '+' }, e.abs()).unwrap();
    out
}

/// Parses a C99 hexadecimal floating literal (`[+-]0x<hex>[.<hex>][p[+-]<dec>]`,
/// case-insensitive). A missing binary exponent means `p0`. The literal must
/// denote a binary64 value exactly.
pub fn hex_to_f64(s: &str) -> Result<f64, HexError> {
    let b = s.as_bytes();
    let mut i = 0;
    let negative = match b.first() {
        Some(b'-') => {
            i += 1;
            true
        }
        Some(b'+') => {
            i += 1;
            false
        }
        _ => false,
    };
    if b.len() < i + 2 || b[i] != b'0' || !matches!(b[i + 1], b'x' | b'X') {
        return Err(HexError::Malformed { pos: i, msg: "expected 0x prefix" });
    }
    i += 2;

    let mut digits: Vec<u8> = Vec::new();
    let mut frac_digits: i64 = 0;
    let mut seen_point = false;
    let mut any_digit = false;
    while i < b.len() {
        let c = b[i];
        if let Some(d) = (c as char).to_digit(16) {
            any_digit = true;
            // Leading zeros carry no information.
            if !(digits.is_empty() && d == 0) {
                digits.push(d as u8);
            }
            if seen_point {
                frac_digits += 1;
            }
        } else if c == b'.' && !seen_point {
            seen_point = true;
        } else {
            break;
        }
        i += 1;
    }
    if !any_digit {
        return Err(HexError::Malformed { pos: i, msg: "expected hexadecimal digits" });
    }

    let mut exp: i64 = 0;
    if i < b.len() {
        if !matches!(b[i], b'p' | b'P') {
            return Err(HexError::Malformed { pos: i, msg: "unexpected character" });
        }
        i += 1;
        let exp_negative = match b.get(i) {
            Some(b'-') => {
                i += 1;
                true
            }
            Some(b'+') => {
                i += 1;
                false
            }
            _ => false,
        };
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            // Saturate: anything this large is out of range either way.
            exp = (exp * 10 + (b[i] - b'0') as i64).min(1 << 40);
            i += 1;
        }
        if i == start {
            return Err(HexError::Malformed { pos: i, msg: "expected exponent digits" });
        }
        if i != b.len() {
            return Err(HexError::Malformed { pos: i, msg: "trailing characters" });
        }
        if exp_negative {
            exp = -exp;
        }
    }

    // Digits before the point count too, so trim from the zero-stripped end.
    let mut zeros_dropped = 0i64;
    while digits.last() == Some(&0) {
        digits.pop();
        zeros_dropped += 1;
    }
    let value = if digits.is_empty() {
        0.0
    } else {
        if digits.len() > 15 {
            return Err(HexError::Inexact);
        }
        let mant = digits.iter().fold(0u64, |acc, &d| (acc << 4) | d as u64);
        let e = exp + 4 * (zeros_dropped - frac_digits);
        compose(mant, e).map_err(|err| match err {
            ComposeError::Inexact => HexError::Inexact,
            ComposeError::Overflow => HexError::Overflow,
        })?
    };
    Ok(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpkernel::{MAXREAL, MIN_SUBNORMAL};

    #[test]
    fn parses_reference_literals() {
        assert_eq!(hex_to_f64("0X1.999999999999AP-4").unwrap(), 0.1);
        assert_eq!(hex_to_f64("0x1.8p0").unwrap(), 1.5);
        assert_eq!(hex_to_f64("0X1.FFFFFFFFFFFFP+0").unwrap(), 2.0 - 2f64.powi(-48));
        assert_eq!(hex_to_f64("-0x0p+0").unwrap().to_bits(), (-0.0f64).to_bits());
        assert_eq!(hex_to_f64("0x.8").unwrap(), 0.5);
        assert_eq!(hex_to_f64("0x10").unwrap(), 16.0);
        assert_eq!(hex_to_f64("0x0.0000000000001p-1022").unwrap(), MIN_SUBNORMAL);
        assert_eq!(hex_to_f64("0x1.fffffffffffffp+1023").unwrap(), MAXREAL);
    }

    #[test]
    fn canonical_output() {
        assert_eq!(f64_to_hex(1.0), "0x1p+0");
        assert_eq!(f64_to_hex(0.1), "0x1.999999999999ap-4");
        assert_eq!(f64_to_hex(-0.0), "-0x0p+0");
        assert_eq!(f64_to_hex(MIN_SUBNORMAL), "0x1p-1074");
        assert_eq!(f64_to_hex(MAXREAL), "0x1.fffffffffffffp+1023");
        assert_eq!(f64_to_hex(f64::NEG_INFINITY), "-infinity");
        assert_eq!(f64_to_hex(3.0 * MIN_SUBNORMAL), "0x1.8p-1073");
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(hex_to_f64("1.0"), Err(HexError::Malformed { .. })));
        assert!(matches!(hex_to_f64("0x"), Err(HexError::Malformed { .. })));
        assert!(matches!(hex_to_f64("0x1p"), Err(HexError::Malformed { .. })));
        assert!(matches!(hex_to_f64("0x1.0q"), Err(HexError::Malformed { .. })));
        assert_eq!(hex_to_f64("0x1.00000000000001p0"), Err(HexError::Inexact));
        assert_eq!(hex_to_f64("0x1p-1075"), Err(HexError::Inexact));
        assert_eq!(hex_to_f64("0x1p+1024"), Err(HexError::Overflow));
        assert_eq!(hex_to_f64("0x1p99999999999999999999"), Err(HexError::Overflow));
    }
}
