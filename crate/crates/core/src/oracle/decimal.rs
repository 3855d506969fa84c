//! Exact conversion of decimal literals into directed binary64 bounds.

use num_bigint::BigUint;
use num_traits::{Num, Zero};
use thiserror::Error;

use crate::fpkernel::{Dir, MAXREAL, MIN_SUBNORMAL};

use super::bigfloat::BigFloat;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecimalError {
    #[error("malformed decimal literal: {0}")]
    Malformed(String),
}

/// A decimal literal `±digits × 10^exp`, held exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    pub negative: bool,
    pub digits: BigUint,
    pub exp10: i64,
}

impl Decimal {
    /// Parses `[+-]digits[.digits][(e|E)[+-]digits]`; at least one digit is
    /// required in the significand.
    pub fn parse(s: &str) -> Result<Decimal, DecimalError> {
        let bad = || DecimalError::Malformed(s.to_string());
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (mantissa, exponent) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], Some(&body[i + 1..])),
            None => (body, None),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
            None => (mantissa, ""),
        };
        let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if int_part.len() + frac_part.len() == 0 || !all_digits(int_part) || !all_digits(frac_part) {
            return Err(bad());
        }
        let mut exp10: i64 = -(frac_part.len() as i64);
        if let Some(e) = exponent {
            let (eneg, edigits) = match e.as_bytes().first() {
                Some(b'-') => (true, &e[1..]),
                Some(b'+') => (false, &e[1..]),
                _ => (false, e),
            };
            if edigits.is_empty() || !all_digits(edigits) {
                return Err(bad());
            }
            // Saturate: such exponents over- or underflow regardless.
            let mut v: i64 = 0;
            for b in edigits.bytes() {
                v = (v * 10 + (b - b'0') as i64).min(1 << 40);
            }
            exp10 += if eneg { -v } else { v };
        }
        let text = format!("{int_part}{frac_part}");
        let digits = BigUint::from_str_radix(&text, 10).map_err(|_| bad())?;
        Ok(Decimal { negative, digits, exp10 })
    }

    /// The binary64 bound of the exact value in direction `dir`. A literal
    /// equal to zero gives `+0`.
    pub fn to_f64(&self, dir: Dir) -> f64 {
        if self.digits.is_zero() {
            return 0.0;
        }
        // Decimal magnitude is within a factor 10 of 10^(ndigits + exp10 - 1).
        let ndigits = self.digits.to_string().len() as i64;
        let mag10 = ndigits + self.exp10;
        let away = (dir == Dir::Up) != self.negative;
        let signed = |v: f64| if self.negative { -v } else { v };
        if mag10 > 330 {
            return signed(if away { f64::INFINITY } else { MAXREAL });
        }
        if mag10 < -330 {
            return signed(if away { MIN_SUBNORMAL } else { 0.0 });
        }
        let n = BigFloat::from_parts(self.negative, self.digits.clone(), 0);
        let ten = BigUint::from(10u32);
        let value = if self.exp10 >= 0 {
            n.mul_exact(&BigFloat::from_parts(false, ten.pow(self.exp10 as u32), 0))
        } else {
            let d = BigFloat::from_parts(false, ten.pow((-self.exp10) as u32), 0);
            // Directed roundings compose, so rounding first to 64 bits in
            // the same direction does not change the binary64 bound.
            n.div(&d, 64, dir)
        };
        value.to_f64(dir)
    }
}

/// Directed binary64 bound of a decimal literal.
pub fn decimal_to_f64(s: &str, dir: Dir) -> Result<f64, DecimalError> {
    Ok(Decimal::parse(s)?.to_f64(dir))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_tenth_is_bracketed_by_adjacent_values() {
        let lo = decimal_to_f64("0.1", Dir::Down).unwrap();
        let hi = decimal_to_f64("0.1", Dir::Up).unwrap();
        assert_eq!(lo.next_up(), hi);
        // The nearest value (0.1 itself) is the upper one.
        assert_eq!(hi, 0.1);
    }

    #[test]
    fn exact_literals() {
        for s in ["1", "1.5", "-2.25", "1e3", "0.125", "+4", "9007199254740992"] {
            let lo = decimal_to_f64(s, Dir::Down).unwrap();
            let hi = decimal_to_f64(s, Dir::Up).unwrap();
            assert_eq!(lo, hi, "{s}");
            assert_eq!(lo, s.parse::<f64>().unwrap());
        }
    }

    #[test]
    fn range_limits() {
        assert_eq!(decimal_to_f64("1e400", Dir::Down).unwrap(), MAXREAL);
        assert_eq!(decimal_to_f64("1e400", Dir::Up).unwrap(), f64::INFINITY);
        assert_eq!(decimal_to_f64("-1e-400", Dir::Down).unwrap(), -MIN_SUBNORMAL);
        assert!(decimal_to_f64("-1e-400", Dir::Up).unwrap() == 0.0);
        let lo = decimal_to_f64("2.5e-324", Dir::Down).unwrap();
        assert_eq!(lo, 0.0);
        assert_eq!(decimal_to_f64("2.5e-324", Dir::Up).unwrap(), MIN_SUBNORMAL);
        assert_eq!(decimal_to_f64("0e999999999999", Dir::Up).unwrap(), 0.0);
    }

    #[test]
    fn malformed() {
        for s in ["", ".", "1e", "e5", "1.2.3", "0x10", "--1", "1e+-2", "one"] {
            assert!(decimal_to_f64(s, Dir::Down).is_err(), "{s}");
        }
        assert!(decimal_to_f64(".5", Dir::Down).is_ok());
        assert!(decimal_to_f64("5.", Dir::Down).is_ok());
    }
}
