//! Arbitrary-precision binary floating point with directed rounding.
//!
//! A finite value is `±mant · 2^exp` with `mant` odd, so every value has a
//! single representation and its precision is the bit length of `mant`.
//! Addition, subtraction and multiplication are exact; division and square
//! root are correctly rounded at the requested precision.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::fpkernel::{self, Dir};

use super::OracleError;

/// Lowest working precision accepted by the public entry points.
pub const MIN_PRECISION: u32 = 53;
/// Highest working precision the certification ladder climbs to.
pub const MAX_PRECISION: u32 = 4096;

/// Working precision in bits, within `[MIN_PRECISION, MAX_PRECISION]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u32) -> Result<Self, OracleError> {
        if (MIN_PRECISION..=MAX_PRECISION).contains(&bits) {
            Ok(Precision(bits))
        } else {
            Err(OracleError::PrecisionOutOfRange(bits))
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BigFloat {
    Nan,
    Zero { neg: bool },
    Inf { neg: bool },
    Finite { neg: bool, mant: BigUint, exp: i64 },
}

fn strip(mant: BigUint, exp: i64) -> (BigUint, i64) {
    match mant.trailing_zeros() {
        Some(tz) if tz > 0 => (mant >> tz, exp + tz as i64),
        _ => (mant, exp),
    }
}

impl BigFloat {
    pub const ZERO: BigFloat = BigFloat::Zero { neg: false };

    pub fn one() -> Self {
        BigFloat::Finite { neg: false, mant: BigUint::one(), exp: 0 }
    }

    /// `±mant · 2^exp`, normalized.
    pub fn from_parts(neg: bool, mant: BigUint, exp: i64) -> Self {
        if mant.is_zero() {
            return BigFloat::Zero { neg };
        }
        let (mant, exp) = strip(mant, exp);
        BigFloat::Finite { neg, mant, exp }
    }

    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() {
            return BigFloat::Nan;
        }
        let neg = x.is_sign_negative();
        if x.is_infinite() {
            return BigFloat::Inf { neg };
        }
        match fpkernel::decompose_odd(x) {
            None => BigFloat::Zero { neg },
            Some((m, e)) => BigFloat::Finite { neg, mant: BigUint::from(m), exp: e as i64 },
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_parts(v < 0, BigUint::from(v.unsigned_abs()), 0)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self::from_parts(v.sign() == Sign::Minus, v.magnitude().clone(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        BigFloat::Finite { neg: false, mant: BigUint::one(), exp: k }
    }

    pub fn is_nan(&self) -> bool {
        matches!(self, BigFloat::Nan)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, BigFloat::Zero { .. })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BigFloat::Zero { .. } | BigFloat::Finite { .. })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BigFloat::Inf { .. })
    }

    /// Sign bit; false for NaN.
    pub fn is_sign_negative(&self) -> bool {
        match self {
            BigFloat::Nan => false,
            BigFloat::Zero { neg } | BigFloat::Inf { neg } | BigFloat::Finite { neg, .. } => *neg,
        }
    }

    /// Strictly negative value.
    pub fn is_negative(&self) -> bool {
        matches!(self, BigFloat::Inf { neg: true } | BigFloat::Finite { neg: true, .. })
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, BigFloat::Inf { neg: false } | BigFloat::Finite { neg: false, .. })
    }

    /// Number of significant bits (0 for non-finite or zero values).
    pub fn precision(&self) -> u64 {
        match self {
            BigFloat::Finite { mant, .. } => mant.bits(),
            _ => 0,
        }
    }

    /// `floor(log2 |x|)` for finite nonzero values.
    pub fn top_exp(&self) -> Option<i64> {
        match self {
            BigFloat::Finite { mant, exp, .. } => Some(exp + mant.bits() as i64 - 1),
            _ => None,
        }
    }

    pub fn neg(&self) -> Self {
        match self.clone() {
            BigFloat::Nan => BigFloat::Nan,
            BigFloat::Zero { neg } => BigFloat::Zero { neg: !neg },
            BigFloat::Inf { neg } => BigFloat::Inf { neg: !neg },
            BigFloat::Finite { neg, mant, exp } => BigFloat::Finite { neg: !neg, mant, exp },
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_sign_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        match self.clone() {
            BigFloat::Finite { neg, mant, exp } => BigFloat::Finite { neg, mant, exp: exp + k },
            other => other,
        }
    }

    /// Numeric comparison; zeros of either sign compare equal and NaN is
    /// unordered.
    pub fn cmp_value(&self, other: &Self) -> Option<Ordering> {
        use BigFloat::*;
        let rank = |x: &BigFloat| -> i8 {
            match x {
                Inf { neg: true } => -2,
                Finite { neg: true, .. } => -1,
                Zero { .. } => 0,
                Finite { neg: false, .. } => 1,
                Inf { neg: false } => 2,
                Nan => 0,
            }
        };
        if self.is_nan() || other.is_nan() {
            return None;
        }
        let (ra, rb) = (rank(self), rank(other));
        if ra != rb {
            return Some(ra.cmp(&rb));
        }
        match (self, other) {
            (Finite { neg, mant: ma, exp: ea }, Finite { mant: mb, exp: eb, .. }) => {
                let mag = cmp_mag(ma, *ea, mb, *eb);
                Some(if *neg { mag.reverse() } else { mag })
            }
            _ => Some(Ordering::Equal),
        }
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.cmp_value(other) == Some(Ordering::Less)
    }

    pub fn le(&self, other: &Self) -> bool {
        matches!(self.cmp_value(other), Some(Ordering::Less | Ordering::Equal))
    }

    pub fn min_value(a: &Self, b: &Self) -> Self {
        if b.lt(a) {
            b.clone()
        } else {
            a.clone()
        }
    }

    pub fn max_value(a: &Self, b: &Self) -> Self {
        if a.lt(b) {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// Rounds to `q` significant bits in direction `dir`.
    pub fn round(&self, q: u64, dir: Dir) -> Self {
        match self {
            BigFloat::Finite { neg, mant, exp } => {
                let bits = mant.bits();
                if bits <= q {
                    return self.clone();
                }
                let shift = bits - q;
                let mut m = mant >> shift;
                // `mant` is odd, so dropping bits is always inexact.
                if away(*neg, dir) {
                    m += 1u32;
                }
                Self::from_parts(*neg, m, exp + shift as i64)
            }
            _ => self.clone(),
        }
    }

    /// Exact sum. An exact zero from cancellation is `+0`.
    pub fn add_exact(&self, other: &Self) -> Self {
        use BigFloat::*;
        match (self, other) {
            (Nan, _) | (_, Nan) => Nan,
            (Inf { neg: a }, Inf { neg: b }) => {
                if a == b {
                    Inf { neg: *a }
                } else {
                    Nan
                }
            }
            (Inf { .. }, _) => self.clone(),
            (_, Inf { .. }) => other.clone(),
            (Zero { neg: a }, Zero { neg: b }) => Zero { neg: *a && *b },
            (Zero { .. }, _) => other.clone(),
            (_, Zero { .. }) => self.clone(),
            (Finite { neg: na, mant: ma, exp: ea }, Finite { neg: nb, mant: mb, exp: eb }) => {
                let e = (*ea).min(*eb);
                let a = ma << (ea - e) as u64;
                let b = mb << (eb - e) as u64;
                if na == nb {
                    Self::from_parts(*na, a + b, e)
                } else {
                    match a.cmp(&b) {
                        Ordering::Equal => Zero { neg: false },
                        Ordering::Greater => Self::from_parts(*na, a - b, e),
                        Ordering::Less => Self::from_parts(*nb, b - a, e),
                    }
                }
            }
        }
    }

    pub fn sub_exact(&self, other: &Self) -> Self {
        self.add_exact(&other.neg())
    }

    pub fn mul_exact(&self, other: &Self) -> Self {
        use BigFloat::*;
        let neg = self.is_sign_negative() != other.is_sign_negative();
        match (self, other) {
            (Nan, _) | (_, Nan) => Nan,
            (Inf { .. }, Zero { .. }) | (Zero { .. }, Inf { .. }) => Nan,
            (Inf { .. }, _) | (_, Inf { .. }) => Inf { neg },
            (Zero { .. }, _) | (_, Zero { .. }) => Zero { neg },
            (Finite { mant: ma, exp: ea, .. }, Finite { mant: mb, exp: eb, .. }) => {
                BigFloat::Finite { neg, mant: ma * mb, exp: ea + eb }
            }
        }
    }

    /// Directed sum at `q` bits, with the IEEE sign rule for exact zeros.
    pub fn add(&self, other: &Self, q: u64, dir: Dir) -> Self {
        let s = self.add_exact(other);
        if let BigFloat::Zero { .. } = s {
            if self.is_zero() && other.is_zero() && self.is_sign_negative() == other.is_sign_negative() {
                return s;
            }
            return BigFloat::Zero { neg: dir == Dir::Down };
        }
        s.round(q, dir)
    }

    pub fn sub(&self, other: &Self, q: u64, dir: Dir) -> Self {
        self.add(&other.neg(), q, dir)
    }

    pub fn mul(&self, other: &Self, q: u64, dir: Dir) -> Self {
        self.mul_exact(other).round(q, dir)
    }

    /// `self*b + c` with a single rounding.
    pub fn fma(&self, b: &Self, c: &Self, q: u64, dir: Dir) -> Self {
        let p = self.mul_exact(b);
        let s = p.add_exact(c);
        if let BigFloat::Zero { .. } = s {
            if p.is_zero() && c.is_zero() && p.is_sign_negative() == c.is_sign_negative() {
                return s;
            }
            return BigFloat::Zero { neg: dir == Dir::Down };
        }
        s.round(q, dir)
    }

    /// Correctly rounded quotient.
    pub fn div(&self, other: &Self, q: u64, dir: Dir) -> Self {
        use BigFloat::*;
        let neg = self.is_sign_negative() != other.is_sign_negative();
        match (self, other) {
            (Nan, _) | (_, Nan) => Nan,
            (Inf { .. }, Inf { .. }) | (Zero { .. }, Zero { .. }) => Nan,
            (Inf { .. }, _) | (_, Zero { .. }) => Inf { neg },
            (Zero { .. }, _) | (_, Inf { .. }) => Zero { neg },
            (Finite { mant: ma, exp: ea, .. }, Finite { mant: mb, exp: eb, .. }) => {
                let want = q as i64 + 2;
                let k = (want + mb.bits() as i64 - ma.bits() as i64 + 1).max(0);
                let (quot, rem) = (ma << k as u64).div_rem(mb);
                let exp = ea - eb - k;
                let (m, e) = if rem.is_zero() { (quot, exp) } else { ((quot << 1u8) | BigUint::one(), exp - 1) };
                Self::from_parts(neg, m, e).round(q, dir)
            }
        }
    }

    /// Correctly rounded square root; NaN for negative input.
    pub fn sqrt(&self, q: u64, dir: Dir) -> Self {
        match self {
            BigFloat::Nan => BigFloat::Nan,
            BigFloat::Zero { .. } => self.clone(),
            BigFloat::Inf { neg: false } => self.clone(),
            _ if self.is_negative() => BigFloat::Nan,
            BigFloat::Finite { mant, exp, .. } => {
                let mut k = (2 * q as i64 + 6 - mant.bits() as i64).max(0);
                if (exp - k).rem_euclid(2) != 0 {
                    k += 1;
                }
                let m = mant << k as u64;
                let s = m.sqrt();
                let exact = &s * &s == m;
                let e = (exp - k) / 2;
                let (m, e) = if exact { (s, e) } else { ((s << 1u8) | BigUint::one(), e - 1) };
                Self::from_parts(false, m, e).round(q, dir)
            }
            BigFloat::Inf { neg: true } => BigFloat::Nan,
        }
    }

    /// Rounds into binary64 in direction `dir`, honoring the subnormal grid
    /// and overflow threshold.
    pub fn to_f64(&self, dir: Dir) -> f64 {
        self.to_f64_with(Rounding::Directed(dir))
    }

    /// Round-to-nearest-even into binary64.
    pub fn to_f64_nearest(&self) -> f64 {
        self.to_f64_with(Rounding::Nearest)
    }

    fn to_f64_with(&self, mode: Rounding) -> f64 {
        let (neg, mant, exp) = match self {
            BigFloat::Nan => return f64::NAN,
            BigFloat::Zero { neg } => return if *neg { -0.0 } else { 0.0 },
            BigFloat::Inf { neg } => return if *neg { f64::NEG_INFINITY } else { f64::INFINITY },
            BigFloat::Finite { neg, mant, exp } => (*neg, mant, *exp),
        };
        let signed = |v: f64| if neg { -v } else { v };
        let round_away = |truncated_odd: bool, half: bool, rest: bool| match mode {
            Rounding::Directed(dir) => away(neg, dir),
            Rounding::Nearest => half && (rest || truncated_odd),
        };
        let top = exp + mant.bits() as i64 - 1;
        if top > 1023 {
            return signed(if round_away(false, true, true) { f64::INFINITY } else { f64::MAX });
        }
        let lsb = (top - 52).max(-1074);
        let (m, e) = if exp >= lsb {
            (mant.clone(), exp)
        } else {
            let shift = (lsb - exp) as u64;
            let truncated = mant >> shift;
            let half = mant.bit(shift - 1);
            // `mant` is odd: anything below the half bit is nonzero unless
            // the half bit is the last one.
            let rest = shift >= 2;
            let odd = truncated.bit(0);
            if round_away(odd, half, rest) {
                (truncated + 1u32, lsb)
            } else {
                (truncated, lsb)
            }
        };
        if m.is_zero() {
            return signed(0.0);
        }
        let m = u64::try_from(&m).expect("at most 54 bits");
        match fpkernel::compose(m, e) {
            Ok(v) => signed(v),
            Err(_) => signed(match mode {
                Rounding::Directed(dir) if !away(neg, dir) => f64::MAX,
                _ => f64::INFINITY,
            }),
        }
    }

    /// Nearest integer (ties away from zero) of a finite value.
    pub fn to_bigint_round(&self) -> BigInt {
        match self {
            BigFloat::Finite { neg, mant, exp } => {
                let mag = if *exp >= 0 {
                    mant << *exp as u64
                } else {
                    let shift = (-exp) as u64;
                    let t = mant >> shift;
                    if mant.bit(shift - 1) {
                        t + 1u32
                    } else {
                        t
                    }
                };
                BigInt::from_biguint(if *neg { Sign::Minus } else { Sign::Plus }, mag)
            }
            _ => BigInt::zero(),
        }
    }

    /// `floor(x)` of a finite value.
    pub fn to_bigint_floor(&self) -> BigInt {
        match self {
            BigFloat::Finite { neg, mant, exp } => {
                if *exp >= 0 {
                    let v = BigInt::from(mant << *exp as u64);
                    return if *neg { -v } else { v };
                }
                let shift = (-exp) as u64;
                let t = BigInt::from(mant >> shift);
                // The fractional part is nonzero because `mant` is odd.
                if *neg {
                    -t - 1
                } else {
                    t
                }
            }
            _ => BigInt::zero(),
        }
    }

    /// Exact integer value, if the value is an integer.
    pub fn to_bigint_exact(&self) -> Option<BigInt> {
        match self {
            BigFloat::Zero { .. } => Some(BigInt::zero()),
            BigFloat::Finite { exp, .. } if *exp >= 0 => Some(self.to_bigint_floor()),
            _ => None,
        }
    }
}

#[derive(Clone, Copy)]
enum Rounding {
    Directed(Dir),
    Nearest,
}

/// Whether rounding in `dir` increases the magnitude of a value of the given
/// sign.
#[inline]
fn away(neg: bool, dir: Dir) -> bool {
    (dir == Dir::Up) != neg
}

fn cmp_mag(ma: &BigUint, ea: i64, mb: &BigUint, eb: i64) -> Ordering {
    let ta = ea + ma.bits() as i64;
    let tb = eb + mb.bits() as i64;
    if ta != tb {
        return ta.cmp(&tb);
    }
    let e = ea.min(eb);
    (ma << (ea - e) as u64).cmp(&(mb << (eb - e) as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpkernel::{MAXREAL, MIN_SUBNORMAL};

    fn bf(x: f64) -> BigFloat {
        BigFloat::from_f64(x)
    }

    #[test]
    fn round_trip_f64() {
        for &x in &[1.0, -0.1, MAXREAL, MIN_SUBNORMAL, -3.7e-310, 0.0, -0.0] {
            let b = bf(x);
            assert_eq!(b.to_f64(Dir::Down).to_bits(), x.to_bits());
            assert_eq!(b.to_f64(Dir::Up).to_bits(), x.to_bits());
            assert_eq!(b.to_f64_nearest().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn directed_conversion_edges() {
        let big = bf(MAXREAL).add_exact(&bf(1.0));
        assert_eq!(big.to_f64(Dir::Down), MAXREAL);
        assert_eq!(big.to_f64(Dir::Up), f64::INFINITY);
        assert_eq!(big.to_f64_nearest(), MAXREAL);
        assert_eq!(big.neg().to_f64(Dir::Up), -MAXREAL);

        let tiny = BigFloat::pow2(-1080);
        assert_eq!(tiny.to_f64(Dir::Down), 0.0);
        assert_eq!(tiny.to_f64(Dir::Up), MIN_SUBNORMAL);
        assert_eq!(tiny.neg().to_f64(Dir::Down), -MIN_SUBNORMAL);
        assert!(tiny.neg().to_f64(Dir::Up).is_sign_negative());

        // Exactly half the smallest subnormal: ties to even gives zero.
        assert_eq!(BigFloat::pow2(-1075).to_f64_nearest(), 0.0);
        let just_over = BigFloat::pow2(-1075).add_exact(&BigFloat::pow2(-1200));
        assert_eq!(just_over.to_f64_nearest(), MIN_SUBNORMAL);
    }

    #[test]
    fn add_up_exact() {
        let r = bf(1.0).add(&bf(0.0), 53, Dir::Up);
        assert_eq!(r, BigFloat::one());
        let z = bf(1.0).add(&bf(-1.0), 53, Dir::Down);
        assert_eq!(z, BigFloat::Zero { neg: true });
    }

    #[test]
    fn division_matches_long_division() {
        // 1/3 = 0.010101...b; 60 significant bits end at 2^-61, so the
        // truncation is floor(2^61 / 3) * 2^-61.
        let r = bf(1.0).div(&bf(3.0), 60, Dir::Down);
        let m = (BigUint::one() << 61u32) / 3u32;
        assert_eq!(r, BigFloat::from_parts(false, m, -61));
        let up = bf(1.0).div(&bf(3.0), 60, Dir::Up);
        assert!(r.lt(&up));
        assert!(up.sub_exact(&r).cmp_value(&BigFloat::pow2(-61)) == Some(Ordering::Equal));
    }

    #[test]
    fn sqrt_bracket() {
        let two = bf(2.0);
        let lo = two.sqrt(100, Dir::Down);
        let hi = two.sqrt(100, Dir::Up);
        assert_eq!(lo.precision(), 100);
        assert!(lo.mul_exact(&lo).lt(&two));
        assert!(two.lt(&hi.mul_exact(&hi)));
        assert_eq!(hi.sub_exact(&lo), BigFloat::pow2(lo.top_exp().unwrap() - 99));
        assert_eq!(bf(4.0).sqrt(64, Dir::Down), bf(2.0));
    }

    #[test]
    fn comparisons() {
        assert!(bf(1.0).lt(&bf(2.0)));
        assert!(bf(-2.0).lt(&bf(-1.0)));
        assert_eq!(bf(0.0).cmp_value(&bf(-0.0)), Some(Ordering::Equal));
        assert!(bf(f64::NEG_INFINITY).lt(&bf(-MAXREAL)));
        assert_eq!(bf(f64::NAN).cmp_value(&bf(1.0)), None);
    }

    #[test]
    fn integer_conversions() {
        assert_eq!(bf(2.5).to_bigint_floor(), BigInt::from(2));
        assert_eq!(bf(-2.5).to_bigint_floor(), BigInt::from(-3));
        assert_eq!(bf(-2.5).to_bigint_round(), BigInt::from(-3));
        assert_eq!(bf(2.4).to_bigint_round(), BigInt::from(2));
        assert_eq!(bf(8.0).to_bigint_exact(), Some(BigInt::from(8)));
        assert_eq!(bf(8.5).to_bigint_exact(), None);
    }
}
