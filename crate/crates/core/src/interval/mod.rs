//! The reference set-based interval engine over binary64.
//!
//! Arithmetic operations return the tightest binary64 enclosure of the exact
//! range. Elementary functions are accurate: each endpoint is within one
//! ulp outward of the tightest one.

mod arith;
pub(crate) mod elem;
mod sets;
mod text;

use std::fmt;

use thiserror::Error;

use crate::fpkernel::f64_to_hex;
use crate::ops::Op;

pub use arith::{add, div, fma, mul, neg, recip, sqr, sqrt, sub};
pub use elem::{atan, cos, exp, log, log10, log2, pow, sin, tan};
pub use sets::{
    convex_hull, disjoint, equal, inf, interior, intersection, is_empty, is_entire, is_member, mag, mid, mig, rad,
    subset, sup, wid,
};
pub use text::{interval_to_decimal_text, interval_to_text, parse_number, text_to_interval};

/// Evaluates an interval-valued operation on interval arguments. `None` if
/// `op` is not of that shape or the argument count is wrong.
pub fn apply(op: Op, args: &[Interval]) -> Option<Interval> {
    if !op.is_interval_valued() || args.len() != op.arity() {
        return None;
    }
    let x = &args[0];
    let y = || &args[1];
    Some(match op {
        Op::Neg => neg(x),
        Op::Add => add(x, y()),
        Op::Sub => sub(x, y()),
        Op::Mul => mul(x, y()),
        Op::Div => div(x, y()),
        Op::Recip => recip(x),
        Op::Sqr => sqr(x),
        Op::Sqrt => sqrt(x),
        Op::Fma => fma(x, y(), &args[2]),
        Op::Exp => exp(x),
        Op::Log => log(x),
        Op::Log2 => log2(x),
        Op::Log10 => log10(x),
        Op::Sin => sin(x),
        Op::Cos => cos(x),
        Op::Tan => tan(x),
        Op::Atan => atan(x),
        Op::Pow => pow(x, y()),
        Op::Intersection => intersection(x, y()),
        Op::ConvexHull => convex_hull(x, y()),
        _ => return None,
    })
}

/// Exceptions an interval operation can signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signal {
    UndefinedOperation,
    PossiblyUndefinedOperation,
}

impl Signal {
    pub fn name(self) -> &'static str {
        match self {
            Signal::UndefinedOperation => "UndefinedOperation",
            Signal::PossiblyUndefinedOperation => "PossiblyUndefinedOperation",
        }
    }

    pub fn from_name(name: &str) -> Option<Signal> {
        match name {
            "UndefinedOperation" => Some(Signal::UndefinedOperation),
            "PossiblyUndefinedOperation" => Some(Signal::PossiblyUndefinedOperation),
            _ => None,
        }
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("undefined operation: {0}")]
    UndefinedOperation(String),
}

impl IntervalError {
    pub fn signal(&self) -> Signal {
        match self {
            IntervalError::UndefinedOperation(_) => Signal::UndefinedOperation,
        }
    }
}

/// A closed, connected set of reals with binary64 endpoints, possibly empty
/// or unbounded.
///
/// The empty set stores NaN endpoints. Zero endpoints are stored as `+0`.
#[derive(Clone, Copy, Debug)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[inline]
fn unsign_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl Interval {
    pub const EMPTY: Interval = Interval { lo: f64::NAN, hi: f64::NAN };
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    /// Checked constructor.
    pub fn new(lo: f64, hi: f64) -> Result<Interval, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(IntervalError::UndefinedOperation(format!(
                "no interval with bounds {} and {}",
                f64_to_hex(lo),
                f64_to_hex(hi)
            )));
        }
        Ok(Interval { lo: unsign_zero(lo), hi: unsign_zero(hi) })
    }

    /// Builds an interval from bounds already known to be valid, or the
    /// empty set if either bound is NaN. Used by the engine's own
    /// operations, whose bounds are valid by construction.
    pub(crate) fn from_bounds(lo: f64, hi: f64) -> Interval {
        if lo.is_nan() || hi.is_nan() {
            return Interval::EMPTY;
        }
        debug_assert!(lo <= hi, "inverted bounds {lo} {hi}");
        Interval { lo: unsign_zero(lo), hi: unsign_zero(hi) }
    }

    pub fn point(x: f64) -> Result<Interval, IntervalError> {
        Interval::new(x, x)
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_nan()
    }

    pub fn is_entire(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    pub fn is_bounded(&self) -> bool {
        self.is_empty() || (self.lo.is_finite() && self.hi.is_finite())
    }

    /// Lower bound (NaN for the empty set).
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Upper bound (NaN for the empty set).
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        !self.is_empty() && self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// Moves each finite bound one ulp outward; infinite bounds are kept.
    pub fn next_out(&self) -> Interval {
        if self.is_empty() {
            return *self;
        }
        let lo = if self.lo.is_finite() { self.lo.next_down() } else { self.lo };
        let hi = if self.hi.is_finite() { self.hi.next_up() } else { self.hi };
        Interval::from_bounds(lo, hi)
    }
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => true,
            (false, false) => self.lo == other.lo && self.hi == other.hi,
            _ => false,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&interval_to_text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_validation() {
        let x = Interval::new(1.0, 2.0).unwrap();
        assert_eq!((x.lo(), x.hi()), (1.0, 2.0));
        let z = Interval::new(-0.0, 0.0).unwrap();
        assert!(z.lo().is_sign_positive());
        assert_eq!(z, Interval::new(0.0, 0.0).unwrap());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::INFINITY, f64::INFINITY).is_err());
        assert!(Interval::new(f64::NEG_INFINITY, f64::NEG_INFINITY).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert_eq!(Interval::new(2.0, 1.0).unwrap_err().signal(), Signal::UndefinedOperation);
    }

    #[test]
    fn empty_and_entire() {
        assert!(Interval::EMPTY.is_empty());
        assert_eq!(Interval::EMPTY, Interval::EMPTY);
        assert!(Interval::ENTIRE.is_entire());
        assert!(!Interval::ENTIRE.is_bounded());
        assert!(!Interval::EMPTY.contains(0.0));
        assert!(Interval::ENTIRE.contains(0.0));
        assert!(!Interval::ENTIRE.contains(f64::NAN));
    }

    #[test]
    fn next_out_keeps_infinities() {
        let x = Interval::new(1.0, f64::INFINITY).unwrap().next_out();
        assert_eq!(x.lo(), 1.0f64.next_down());
        assert_eq!(x.hi(), f64::INFINITY);
        let z = Interval::new(0.0, 0.0).unwrap().next_out();
        assert_eq!(z.lo(), -crate::fpkernel::MIN_SUBNORMAL);
    }
}
