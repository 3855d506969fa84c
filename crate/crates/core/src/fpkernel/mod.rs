//! Bit-exact binary64 utilities.
//!
//! Everything in here works under the ambient round-to-nearest mode: directed
//! results are obtained from the nearest result plus the sign of an exact
//! residual, never by switching the hardware rounding mode. All functions are
//! pure and may be called from any thread.

mod directed;
mod eft;
mod hex;

pub use directed::{add, dir_op, div, fma, mul, sqrt, sub, ArithOp};
pub use eft::{two_prod, two_sum, EftPair, Residual};
pub use hex::{f64_to_hex, hex_to_f64, HexError};

/// Largest finite binary64 value.
pub const MAXREAL: f64 = f64::MAX;

/// Smallest positive subnormal, 2^-1074.
pub const MIN_SUBNORMAL: f64 = f64::from_bits(1);

/// Rounding direction for directed operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Down,
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// Adjacent value towards +inf. `next_up(-0.0)` is the smallest positive
/// subnormal and `+inf` is a fixed point.
#[inline]
pub fn next_up(x: f64) -> f64 {
    x.next_up()
}

/// Adjacent value towards -inf. `-inf` is a fixed point.
#[inline]
pub fn next_down(x: f64) -> f64 {
    x.next_down()
}

/// Splits a finite nonzero value into an integer significand and a binary
/// exponent so that `|x| = mant * 2^exp` exactly. Returns `None` for zero,
/// infinities and NaN.
pub fn decompose(x: f64) -> Option<(u64, i32)> {
    if x == 0.0 || !x.is_finite() {
        return None;
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if biased == 0 {
        Some((frac, -1074))
    } else {
        Some((frac | (1u64 << 52), biased - 1075))
    }
}

/// Like [`decompose`] but with trailing zero bits stripped, so the
/// significand is odd.
pub fn decompose_odd(x: f64) -> Option<(u64, i32)> {
    decompose(x).map(|(m, e)| {
        let tz = m.trailing_zeros();
        (m >> tz, e + tz as i32)
    })
}

/// Why [`compose`] could not produce a binary64 value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComposeError {
    /// More significant bits than the format holds at that magnitude.
    Inexact,
    /// Magnitude at or above 2^1024.
    Overflow,
}

/// Builds the positive value `mant * 2^exp` if it is exactly representable.
pub fn compose(mant: u64, exp: i64) -> Result<f64, ComposeError> {
    if mant == 0 {
        return Ok(0.0);
    }
    let tz = mant.trailing_zeros();
    let m = mant >> tz;
    let e = exp + tz as i64;
    let bits = 64 - m.leading_zeros() as i64;
    let top = e + bits - 1;
    if top > 1023 {
        return Err(ComposeError::Overflow);
    }
    if bits > 53 || e < -1074 {
        return Err(ComposeError::Inexact);
    }
    if top >= -1022 {
        let norm = m << (53 - bits);
        let frac = norm & ((1u64 << 52) - 1);
        let biased = (top + 1023) as u64;
        Ok(f64::from_bits((biased << 52) | frac))
    } else {
        Ok(f64::from_bits(m << (e + 1074)))
    }
}

/// Exponent of the leading bit: `floor(log2 |x|)` for finite nonzero `x`.
pub fn exponent(x: f64) -> Option<i32> {
    decompose(x).map(|(m, e)| e + 63 - m.leading_zeros() as i32)
}

/// Multiplies by `2^k`, exactly whenever the result is representable.
pub fn scale(x: f64, k: i32) -> f64 {
    let mut x = x;
    let mut k = k;
    while k > 1000 {
        x *= f64::from_bits(((1000 + 1023) as u64) << 52);
        k -= 1000;
    }
    while k < -1000 {
        x *= f64::from_bits(((-1000 + 1023) as u64) << 52);
        k += 1000;
    }
    x * f64::from_bits(((k + 1023) as u64) << 52)
}

/// Gap between `|x|` and the next value away from zero.
pub fn ulp(x: f64) -> f64 {
    let a = x.abs();
    if a == f64::MAX {
        return a - a.next_down();
    }
    a.next_up() - a
}

/// Position of `x` in the ordered sequence of doubles: monotone, with both
/// zeros at 0 and adjacent values one apart.
pub fn ordinal(x: f64) -> i64 {
    let b = x.to_bits() as i64;
    if b < 0 {
        -(b & i64::MAX)
    } else {
        b
    }
}

/// Inverse of [`ordinal`]; ordinal 0 maps to `+0`.
pub fn from_ordinal(k: i64) -> f64 {
    if k < 0 {
        -f64::from_bits(k.unsigned_abs())
    } else {
        f64::from_bits(k as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors_at_boundaries() {
        assert_eq!(next_up(0.0), MIN_SUBNORMAL);
        assert_eq!(next_up(-0.0), MIN_SUBNORMAL);
        assert_eq!(next_up(MAXREAL), f64::INFINITY);
        assert_eq!(next_down(f64::INFINITY), MAXREAL);
        assert_eq!(next_up(f64::INFINITY), f64::INFINITY);
        assert_eq!(next_down(f64::NEG_INFINITY), f64::NEG_INFINITY);
        assert!(next_up(f64::NAN).is_nan());
        assert_eq!(MIN_SUBNORMAL, f64::from_bits(1));
    }

    #[test]
    fn ordinals_are_monotone() {
        let xs = [f64::NEG_INFINITY, -MAXREAL, -1.0, -MIN_SUBNORMAL, 0.0, MIN_SUBNORMAL, 1.0, MAXREAL, f64::INFINITY];
        for w in xs.windows(2) {
            assert!(ordinal(w[0]) < ordinal(w[1]));
        }
        assert_eq!(ordinal(-0.0), 0);
        assert_eq!(ordinal(next_up(1.0)) - ordinal(1.0), 1);
        for x in xs {
            assert_eq!(from_ordinal(ordinal(x)), x);
        }
    }

    #[test]
    fn compose_round_trips_decompose() {
        for &x in &[1.0, 0.1, MAXREAL, MIN_SUBNORMAL, 3.5e-310, 2f64.powi(-1022)] {
            let (m, e) = decompose(x).unwrap();
            assert_eq!(compose(m, e as i64).unwrap(), x);
            let (m, e) = decompose_odd(x).unwrap();
            assert_eq!(m % 2, 1);
            assert_eq!(compose(m, e as i64).unwrap(), x);
        }
        assert_eq!(compose(1, 1024), Err(ComposeError::Overflow));
        assert_eq!(compose(1, -1075), Err(ComposeError::Inexact));
        assert_eq!(compose((1 << 53) + 1, 0), Err(ComposeError::Inexact));
    }

    #[test]
    fn scale_is_exact_across_the_range() {
        assert_eq!(scale(MIN_SUBNORMAL, 1074), 1.0);
        assert_eq!(scale(1.0, -1074), MIN_SUBNORMAL);
        assert_eq!(scale(MAXREAL, -1023), MAXREAL / 2f64.powi(1023));
        assert_eq!(exponent(MAXREAL), Some(1023));
        assert_eq!(exponent(MIN_SUBNORMAL), Some(-1074));
    }
}
