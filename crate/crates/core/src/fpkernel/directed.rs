use num_bigint::BigInt;
use num_traits::Signed;
use std::cmp::Ordering;

use super::{decompose, exponent, next_down, next_up, scale, two_prod, two_sum, Dir, MAXREAL};

/// Operations available with directed rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Fma,
}

impl ArithOp {
    pub fn arity(self) -> usize {
        match self {
            ArithOp::Sqrt => 1,
            ArithOp::Fma => 3,
            _ => 2,
        }
    }
}

/// Directed-rounded `op(args)`. Panics if `args.len()` does not match the
/// arity of `op`.
pub fn dir_op(op: ArithOp, dir: Dir, args: &[f64]) -> f64 {
    assert_eq!(args.len(), op.arity(), "arity mismatch for {op:?}");
    match op {
        ArithOp::Add => add(args[0], args[1], dir),
        ArithOp::Sub => sub(args[0], args[1], dir),
        ArithOp::Mul => mul(args[0], args[1], dir),
        ArithOp::Div => div(args[0], args[1], dir),
        ArithOp::Sqrt => sqrt(args[0], dir),
        ArithOp::Fma => fma(args[0], args[1], args[2], dir),
    }
}

/// Result for an exact value whose round-to-nearest overflowed.
#[inline]
fn overflowed(positive: bool, dir: Dir) -> f64 {
    match (positive, dir) {
        (true, Dir::Down) => MAXREAL,
        (true, Dir::Up) => f64::INFINITY,
        (false, Dir::Down) => f64::NEG_INFINITY,
        (false, Dir::Up) => -MAXREAL,
    }
}

/// Steps the nearest result `r` towards the exact value, given the sign of
/// `exact - r`.
#[inline]
fn adjust(r: f64, residual: Ordering, dir: Dir) -> f64 {
    match (dir, residual) {
        (Dir::Down, Ordering::Less) => next_down(r),
        (Dir::Up, Ordering::Greater) => next_up(r),
        _ => r,
    }
}

#[inline]
fn sign_of(x: f64) -> Ordering {
    x.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

/// Zero produced by an exact cancellation.
#[inline]
fn cancelled_zero(dir: Dir) -> f64 {
    match dir {
        Dir::Down => -0.0,
        Dir::Up => 0.0,
    }
}

pub fn add(a: f64, b: f64, dir: Dir) -> f64 {
    let s = a + b;
    if s.is_nan() {
        return s;
    }
    if s.is_infinite() {
        if a.is_infinite() || b.is_infinite() {
            return s;
        }
        return overflowed(s > 0.0, dir);
    }
    if s == 0.0 {
        if a == 0.0 && b == 0.0 && a.is_sign_negative() == b.is_sign_negative() {
            return a;
        }
        return cancelled_zero(dir);
    }
    adjust(s, sign_of(two_sum(a, b).lo), dir)
}

pub fn sub(a: f64, b: f64, dir: Dir) -> f64 {
    add(a, -b, dir)
}

pub fn mul(a: f64, b: f64, dir: Dir) -> f64 {
    let p = a * b;
    if p.is_nan() {
        return p;
    }
    if p.is_infinite() {
        if a.is_infinite() || b.is_infinite() {
            return p;
        }
        return overflowed(p > 0.0, dir);
    }
    if a == 0.0 || b == 0.0 {
        return p;
    }
    let (pair, _) = two_prod(a, b);
    adjust(p, sign_of(pair.lo), dir)
}

pub fn div(a: f64, b: f64, dir: Dir) -> f64 {
    let q = a / b;
    if q.is_nan() || b == 0.0 || a == 0.0 || a.is_infinite() || b.is_infinite() {
        return q;
    }
    let positive = (a > 0.0) == (b > 0.0);
    if q.is_infinite() {
        return overflowed(positive, dir);
    }
    if q == 0.0 {
        // Exact quotient is nonzero but below half the smallest subnormal.
        let tiny = super::MIN_SUBNORMAL;
        return match (positive, dir) {
            (true, Dir::Down) => 0.0,
            (true, Dir::Up) => tiny,
            (false, Dir::Down) => -tiny,
            (false, Dir::Up) => -0.0,
        };
    }
    // Scale into [1, 2) so the back-multiplied residual cannot underflow.
    let ea = exponent(a).unwrap();
    let eb = exponent(b).unwrap();
    let a1 = scale(a, -ea);
    let b1 = scale(b, -eb);
    let q1 = scale(q, eb - ea);
    let r = (-q1).mul_add(b1, a1);
    let mut residual = sign_of(r);
    if b < 0.0 {
        residual = residual.reverse();
    }
    adjust(q, residual, dir)
}

pub fn sqrt(a: f64, dir: Dir) -> f64 {
    if a.is_nan() || a < 0.0 {
        return f64::NAN;
    }
    if a == 0.0 || a.is_infinite() {
        return a;
    }
    let s = a.sqrt();
    let k = exponent(a).unwrap().div_euclid(2);
    let a1 = scale(a, -2 * k);
    let s1 = scale(s, -k);
    let r = (-s1).mul_add(s1, a1);
    adjust(s, sign_of(r), dir)
}

/// Directed `a*b + c` with a single rounding.
///
/// The residual sign comes from exact integer arithmetic on the operands'
/// significands, since the tail of a three-operand sum cannot be captured by
/// a fixed number of float transforms near the exponent limits.
pub fn fma(a: f64, b: f64, c: f64, dir: Dir) -> f64 {
    let r = a.mul_add(b, c);
    if r.is_nan() || !a.is_finite() || !b.is_finite() || !c.is_finite() {
        return r;
    }
    let exact = ExactSum::new(&[(a, b), (r, -1.0), (c, 1.0)]);
    if r.is_infinite() {
        // Exact sum is finite but beyond the overflow threshold.
        return overflowed(r > 0.0, dir);
    }
    let residual = exact.sign();
    if r == 0.0 && residual == Ordering::Equal {
        let prod_zero = a == 0.0 || b == 0.0;
        if prod_zero && c == 0.0 {
            let prod_neg = a.is_sign_negative() != b.is_sign_negative();
            if prod_neg == c.is_sign_negative() {
                return c;
            }
        }
        return cancelled_zero(dir);
    }
    adjust(r, residual, dir)
}

/// Exact value of a short sum of products of binary64 values.
struct ExactSum {
    value: BigInt,
}

impl ExactSum {
    fn new(terms: &[(f64, f64)]) -> Self {
        // Every product of two binary64 values is a multiple of 2^-2148.
        const BASE: i64 = -2148;
        let mut value = BigInt::from(0);
        for &(x, y) in terms {
            let (Some((mx, ex)), Some((my, ey))) = (decompose(x), decompose(y)) else {
                continue;
            };
            let mut t = BigInt::from(mx) * BigInt::from(my);
            t <<= (ex as i64 + ey as i64 - BASE) as usize;
            if (x < 0.0) != (y < 0.0) {
                t = -t;
            }
            value += t;
        }
        ExactSum { value }
    }

    fn sign(&self) -> Ordering {
        if self.value.is_positive() {
            Ordering::Greater
        } else if self.value.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpkernel::MIN_SUBNORMAL;

    #[test]
    fn add_with_tiny_residual() {
        let t = 2f64.powi(-60);
        assert_eq!(add(1.0, t, Dir::Down), 1.0);
        assert_eq!(add(1.0, t, Dir::Up), next_up(1.0));
        assert_eq!(add(1.0, -t, Dir::Down), next_down(1.0));
        assert_eq!(add(1.0, -t, Dir::Up), 1.0);
    }

    #[test]
    fn overflow_and_infinities() {
        assert_eq!(mul(MAXREAL, MAXREAL, Dir::Up), f64::INFINITY);
        assert_eq!(mul(MAXREAL, MAXREAL, Dir::Down), MAXREAL);
        assert_eq!(mul(-MAXREAL, MAXREAL, Dir::Up), -MAXREAL);
        assert_eq!(add(MAXREAL, MAXREAL, Dir::Down), MAXREAL);
        assert_eq!(add(f64::INFINITY, -MAXREAL, Dir::Down), f64::INFINITY);
        assert!(add(f64::INFINITY, f64::NEG_INFINITY, Dir::Down).is_nan());
        assert_eq!(div(1.0, 0.0, Dir::Down), f64::INFINITY);
        assert!(sqrt(-1.0, Dir::Up).is_nan());
        assert!(mul(f64::NAN, 1.0, Dir::Up).is_nan());
    }

    #[test]
    fn division_one_third() {
        let down = div(1.0, 3.0, Dir::Down);
        assert_eq!(down, f64::from_bits(0x3FD5555555555555));
        assert_eq!(div(1.0, 3.0, Dir::Up), next_up(down));
        assert_eq!(div(-1.0, 3.0, Dir::Up), -down);
        assert_eq!(div(6.0, 3.0, Dir::Up), 2.0);
    }

    #[test]
    fn division_underflow() {
        assert_eq!(div(MIN_SUBNORMAL, 3.0, Dir::Up), MIN_SUBNORMAL);
        assert_eq!(div(MIN_SUBNORMAL, 3.0, Dir::Down), 0.0);
        assert_eq!(div(-MIN_SUBNORMAL, 3.0, Dir::Down), -MIN_SUBNORMAL);
        // Subnormal quotient with a residual below the subnormal grid.
        let a = 3.0 * MIN_SUBNORMAL;
        let b = 1.5 + 2f64.powi(-52);
        let lo = div(a, b, Dir::Down);
        let hi = div(a, b, Dir::Up);
        assert_eq!(lo, MIN_SUBNORMAL);
        assert_eq!(hi, 2.0 * MIN_SUBNORMAL);
    }

    #[test]
    fn sqrt_directed() {
        let lo = sqrt(2.0, Dir::Down);
        let hi = sqrt(2.0, Dir::Up);
        assert_eq!(next_up(lo), hi);
        assert!(lo * lo < 2.0);
        assert_eq!(sqrt(4.0, Dir::Down), 2.0);
        assert_eq!(sqrt(MIN_SUBNORMAL, Dir::Down), 2f64.powi(-537));
    }

    #[test]
    fn signed_zero_rules() {
        assert!(add(1.0, -1.0, Dir::Down).is_sign_negative());
        assert!(add(1.0, -1.0, Dir::Up).is_sign_positive());
        assert!(add(-0.0, -0.0, Dir::Up).is_sign_negative());
        assert!(add(0.0, -0.0, Dir::Down).is_sign_negative());
        assert!(mul(-0.0, 5.0, Dir::Up).is_sign_negative());
        assert!(fma(1.0, 1.0, -1.0, Dir::Down).is_sign_negative());
    }

    #[test]
    fn fma_directed() {
        let t = 2f64.powi(-80);
        assert_eq!(fma(1.0, 1.0, t, Dir::Up), next_up(1.0));
        assert_eq!(fma(1.0, 1.0, t, Dir::Down), 1.0);
        assert_eq!(fma(MAXREAL, 2.0, -MAXREAL, Dir::Down), MAXREAL);
        assert_eq!(fma(MAXREAL, 2.0, 0.0, Dir::Down), MAXREAL);
        assert_eq!(fma(MIN_SUBNORMAL, 0.5, 0.0, Dir::Up), MIN_SUBNORMAL);
        assert_eq!(fma(MIN_SUBNORMAL, 0.5, 0.0, Dir::Down), 0.0);
    }
}
