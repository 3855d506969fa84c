//! Interval literals.
//!
//! Accepted forms: `[l, u]`, `[p]`, `[empty]` (or `[]`), `[entire]`, with
//! optional whitespace and case-insensitive keywords. Numbers are decimal
//! or C99 hexadecimal literals, or `inf`/`infinity` with an optional sign.
//! Literals that are not binary64 values are rounded outward.

use num_bigint::BigUint;

use crate::fpkernel::{f64_to_hex, hex_to_f64, Dir, HexError};
use crate::oracle::{decimal_to_f64, BigFloat};

use super::{Interval, IntervalError};

fn malformed(s: &str, why: &str) -> IntervalError {
    IntervalError::UndefinedOperation(format!("{why}: {s:?}"))
}

/// Exact value of a well-formed hexadecimal literal.
fn hex_value(s: &str) -> BigFloat {
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let body = &body[2..];
    let (digits, exp) = match body.find(['p', 'P']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0).clamp(-(1 << 40), 1 << 40)),
        None => (body, 0),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let text = format!("{int_part}{frac_part}");
    let mant = BigUint::parse_bytes(text.as_bytes(), 16).unwrap_or_default();
    BigFloat::from_parts(negative, mant, exp - 4 * frac_part.len() as i64)
}

/// Parses one bound, rounding in direction `dir` when the literal is not a
/// binary64 value.
pub fn parse_number(s: &str, dir: Dir) -> Result<f64, IntervalError> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    let (sign, word) = match lower.as_bytes().first() {
        Some(b'-') => (-1.0, &lower[1..]),
        Some(b'+') => (1.0, &lower[1..]),
        _ => (1.0, &lower[..]),
    };
    if word == "inf" || word == "infinity" {
        return Ok(sign * f64::INFINITY);
    }
    if word.starts_with("0x") {
        return match hex_to_f64(t) {
            Ok(v) => Ok(v),
            Err(HexError::Inexact | HexError::Overflow) => Ok(hex_value(t).to_f64(dir)),
            Err(e) => Err(malformed(t, &e.to_string())),
        };
    }
    decimal_to_f64(t, dir).map_err(|e| malformed(t, &e.to_string()))
}

/// Parses an interval literal. A malformed literal or one that denotes no
/// interval signals UndefinedOperation.
pub fn text_to_interval(s: &str) -> Result<Interval, IntervalError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| malformed(s, "interval literal must be bracketed"))?
        .trim();
    match inner.to_ascii_lowercase().as_str() {
        "" | "empty" => return Ok(Interval::EMPTY),
        "entire" => return Ok(Interval::ENTIRE),
        _ => {}
    }
    let (l, u) = inner.split_once(',').unwrap_or((inner, inner));
    if u.contains(',') {
        return Err(malformed(s, "too many bounds"));
    }
    let lo = parse_number(l, Dir::Down)?;
    let hi = parse_number(u, Dir::Up)?;
    Interval::new(lo, hi)
}

/// Canonical rendering with hexadecimal bounds, e.g. `[0x1p+0, 0x1.8p+1]`.
pub fn interval_to_text(x: &Interval) -> String {
    render(x, f64_to_hex)
}

/// Rendering with exact decimal bounds, e.g. `[0.5, 3]`.
pub fn interval_to_decimal_text(x: &Interval) -> String {
    render(x, exact_decimal)
}

fn render(x: &Interval, number: fn(f64) -> String) -> String {
    if x.is_empty() {
        "[empty]".to_string()
    } else if x.is_entire() {
        "[entire]".to_string()
    } else {
        format!("[{}, {}]", number(x.lo()), number(x.hi()))
    }
}

/// Exact decimal expansion: 1074 fraction digits cover every binary64.
fn exact_decimal(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "infinity" } else { "-infinity" }.to_string();
    }
    let s = format!("{v:.1074}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
