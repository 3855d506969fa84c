//! Arbitrary-precision oracle.
//!
//! Computes certified tightest binary64 enclosures by bracketing exact
//! values at increasing precision until both ends of the bracket round to
//! the same binary64 number. Everything here is pure; the only shared state
//! is the lazily built table of constants.

mod bigfloat;
mod bounds;
mod consts;
mod decimal;
mod elem;
mod quadrant;
mod tightest;

use thiserror::Error;

use crate::fpkernel::{ArithOp, Dir};
use crate::ops::Op;

pub use bigfloat::{BigFloat, Precision, MAX_PRECISION, MIN_PRECISION};
pub use bounds::Bounds;
pub use decimal::{decimal_to_f64, Decimal, DecimalError};
pub use elem::{bf_elem, elem_enclosure, ElemFn, ElemValue};
pub use consts::{ln2, pi};
pub use quadrant::floor_half_pi;
pub use tightest::{confirms_bound, numeric_eval, point_bound, tightest_eval, Enclosure53, PointBound};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("precision {0} outside [{MIN_PRECISION}, {MAX_PRECISION}]")]
    PrecisionOutOfRange(u32),
    #[error("operation {0} is not evaluated by the oracle")]
    Unsupported(Op),
    #[error("operation {op} takes {expected} arguments, got {got}")]
    Arity { op: Op, expected: usize, got: usize },
}

/// Directed arithmetic at `q` bits: exact before rounding for add, sub, mul
/// and fma; correctly rounded for div and sqrt.
pub fn bf_arith(op: ArithOp, dir: Dir, q: Precision, args: &[BigFloat]) -> BigFloat {
    assert_eq!(args.len(), op.arity(), "arity mismatch for {op:?}");
    let q = q.bits() as u64;
    match op {
        ArithOp::Add => args[0].add(&args[1], q, dir),
        ArithOp::Sub => args[0].sub(&args[1], q, dir),
        ArithOp::Mul => args[0].mul(&args[1], q, dir),
        ArithOp::Div => args[0].div(&args[1], q, dir),
        ArithOp::Sqrt => args[0].sqrt(q, dir),
        ArithOp::Fma => args[0].fma(&args[1], &args[2], q, dir),
    }
}

/// `RD53`/`RU53` of an arithmetic operation on binary64 operands, computed
/// exactly.
pub fn rounded_arith(op: ArithOp, dir: Dir, args: &[f64]) -> f64 {
    let args: Vec<BigFloat> = args.iter().map(|&a| BigFloat::from_f64(a)).collect();
    // Rounding first to 64 bits in the same direction does not change the
    // final directed binary64 result.
    let q = Precision::new(64).expect("valid");
    bf_arith(op, dir, q, &args).to_f64(dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    #[test]
    fn precision_bounds() {
        assert!(Precision::new(52).is_err());
        assert!(Precision::new(4097).is_err());
        assert_eq!(Precision::new(4096).unwrap().bits(), 4096);
    }

    #[test]
    fn arith_examples() {
        let one = BigFloat::one();
        let r = bf_arith(ArithOp::Add, Dir::Up, q(53), &[one.clone(), BigFloat::ZERO]);
        assert_eq!(r, one);
        let lo = bf_arith(ArithOp::Sqrt, Dir::Down, q(100), &[BigFloat::from_i64(2)]);
        let two = BigFloat::from_i64(2);
        assert!(lo.mul_exact(&lo).le(&two));
        let next = lo.add_exact(&BigFloat::pow2(lo.top_exp().unwrap() - 99));
        assert!(two.lt(&next.mul_exact(&next)));
    }

    #[test]
    fn rounded_arith_matches_known_values() {
        assert_eq!(rounded_arith(ArithOp::Div, Dir::Down, &[1.0, 3.0]), f64::from_bits(0x3FD5555555555555));
        assert_eq!(rounded_arith(ArithOp::Mul, Dir::Up, &[f64::MAX, f64::MAX]), f64::INFINITY);
        assert!(rounded_arith(ArithOp::Sub, Dir::Down, &[1.0, 1.0]).is_sign_negative());
        assert!(rounded_arith(ArithOp::Sqrt, Dir::Down, &[-1.0]).is_nan());
    }

    #[test]
    fn zero_sums_follow_ieee_signs() {
        let sign = |op, dir, args: &[f64]| rounded_arith(op, dir, args).is_sign_negative();
        assert!(sign(ArithOp::Add, Dir::Down, &[0.0, -0.0]));
        assert!(!sign(ArithOp::Add, Dir::Up, &[0.0, -0.0]));
        assert!(sign(ArithOp::Add, Dir::Up, &[-0.0, -0.0]));
        assert!(!sign(ArithOp::Sub, Dir::Down, &[0.0, -0.0]));
        assert!(sign(ArithOp::Fma, Dir::Down, &[0.0, -1.0, 0.0]));
        assert!(!sign(ArithOp::Fma, Dir::Up, &[0.0, -1.0, 0.0]));
    }
}
