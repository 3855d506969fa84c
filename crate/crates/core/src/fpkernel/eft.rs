use super::{decompose_odd, MIN_SUBNORMAL};

/// 2^1022.
const HALVING_THRESHOLD: f64 = f64::from_bits(0x7fd0_0000_0000_0000);

/// Rounded result plus residual of an error-free transform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EftPair {
    pub hi: f64,
    pub lo: f64,
}

/// Whether `lo` of a product transform is the exact residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Residual {
    Exact,
    /// The residual fell below the subnormal grid; `lo` carries its sign and
    /// an approximate magnitude (at least one subnormal step when nonzero).
    Inexact,
}

/// Branch-free 2Sum: `hi = RN(a + b)` and, whenever `hi` is finite,
/// `hi + lo == a + b` exactly. If `hi` is infinite or NaN, `lo` is NaN.
#[inline]
pub fn two_sum(a: f64, b: f64) -> EftPair {
    let hi = a + b;
    if !hi.is_finite() {
        return EftPair { hi, lo: f64::NAN };
    }
    // Huge operands can overflow the intermediate `hi - a`; halve them. An
    // operand whose halving is inexact is an odd multiple of 2^-1074, far
    // below half an ulp of its huge partner, so it is itself the residual.
    if a.abs() >= HALVING_THRESHOLD || b.abs() >= HALVING_THRESHOLD {
        let (ha, hb) = (a * 0.5, b * 0.5);
        if ha * 2.0 != a {
            return EftPair { hi, lo: a };
        }
        if hb * 2.0 != b {
            return EftPair { hi, lo: b };
        }
        let r = two_sum_plain(ha, hb);
        return EftPair { hi, lo: r.lo * 2.0 };
    }
    two_sum_plain(a, b)
}

#[inline]
fn two_sum_plain(a: f64, b: f64) -> EftPair {
    let hi = a + b;
    let bv = hi - a;
    let av = hi - bv;
    let lo = (a - av) + (b - bv);
    EftPair { hi, lo }
}

/// Product transform via fused multiply-add: `hi = RN(a * b)`,
/// `lo = a*b - hi` when representable. If `hi` is infinite or NaN, `lo` is
/// NaN and the status is [`Residual::Inexact`].
pub fn two_prod(a: f64, b: f64) -> (EftPair, Residual) {
    let hi = a * b;
    if !hi.is_finite() {
        return (EftPair { hi, lo: f64::NAN }, Residual::Inexact);
    }
    if a == 0.0 || b == 0.0 {
        return (EftPair { hi, lo: 0.0 }, Residual::Exact);
    }
    let fma_lo = a.mul_add(b, -hi);
    let (ma, ea) = decompose_odd(a).expect("finite nonzero");
    let (mb, eb) = decompose_odd(b).expect("finite nonzero");
    let prod = ma as u128 * mb as u128;
    let e = ea + eb;
    let negative = (a < 0.0) != (b < 0.0);

    // Exact residual as an integer multiple of 2^e.
    let resid: i128 = match decompose_odd(hi) {
        None => prod as i128,
        Some((mh, eh)) => {
            debug_assert!(eh >= e);
            let shifted = (mh as u128) << (eh - e) as u32;
            prod as i128 - shifted as i128
        }
    };
    if resid == 0 {
        return (EftPair { hi, lo: 0.0 }, Residual::Exact);
    }
    let mag = resid.unsigned_abs();
    let tz = mag.trailing_zeros();
    let m = mag >> tz;
    let re = e + tz as i32;
    let representable = m < (1u128 << 53) && re >= -1074;
    if representable {
        return (EftPair { hi, lo: fma_lo }, Residual::Exact);
    }
    let positive = (resid > 0) != negative;
    let lo = if fma_lo == 0.0 {
        if positive {
            MIN_SUBNORMAL
        } else {
            -MIN_SUBNORMAL
        }
    } else {
        fma_lo
    };
    (EftPair { hi, lo }, Residual::Inexact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpkernel::{next_up, MAXREAL};

    #[test]
    fn two_sum_small_residual() {
        let tiny = 2f64.powi(-60);
        assert_eq!(two_sum(1.0, tiny), EftPair { hi: 1.0, lo: tiny });
        let r = two_sum(3.5, 0.0);
        assert_eq!((r.hi, r.lo), (3.5, 0.0));
    }

    #[test]
    fn two_sum_overflow_is_degenerate() {
        let r = two_sum(MAXREAL, MAXREAL);
        assert_eq!(r.hi, f64::INFINITY);
        assert!(r.lo.is_nan());
    }

    #[test]
    fn two_sum_huge_operands() {
        let r = two_sum(MAXREAL, -MIN_SUBNORMAL);
        assert_eq!(r.hi, MAXREAL);
        assert_eq!(r.lo, -MIN_SUBNORMAL);
        let r = two_sum(MAXREAL, -2f64.powi(969));
        assert_eq!(r.hi, MAXREAL);
        assert_eq!(r.lo, -2f64.powi(969));
    }

    #[test]
    fn two_prod_exact_and_underflow() {
        let (p, s) = two_prod(1.5, 2.0);
        assert_eq!((p.hi, p.lo, s), (3.0, 0.0, Residual::Exact));

        let x = next_up(1.0);
        let (p, s) = two_prod(x, x);
        // (1 + 2^-52)^2 = 1 + 2^-51 + 2^-104
        assert_eq!(p.hi, 1.0 + 2f64.powi(-51));
        assert_eq!(p.lo, 2f64.powi(-104));
        assert_eq!(s, Residual::Exact);

        let t = 2f64.powi(-538);
        let (p, s) = two_prod(t, t);
        assert_eq!(p.hi, 0.0);
        assert_eq!(p.lo, MIN_SUBNORMAL);
        assert_eq!(s, Residual::Inexact);
        let (p, s) = two_prod(-t, t);
        assert_eq!(p.lo, -MIN_SUBNORMAL);
        assert_eq!(s, Residual::Inexact);
    }
}
