//! Exact location of a binary64 value relative to the multiples of pi/2.

use num_bigint::BigInt;
use num_traits::Zero;

use super::bigfloat::BigFloat;
use super::bounds::Bounds;
use super::consts;

/// `floor(x / (pi/2))` for finite `x`.
///
/// Since `x * 2/pi` is irrational for every nonzero binary64 `x`, the floor is
/// always decidable at a high enough precision.
pub fn floor_half_pi(x: f64) -> BigInt {
    assert!(x.is_finite(), "quadrant of a non-finite value");
    if x == 0.0 {
        return BigInt::zero();
    }
    // The quotient below carries a relative error of a few 2^-53, so when
    // |t| < 2^30 its absolute error stays under 2^-21.
    let t = x / std::f64::consts::FRAC_PI_2;
    if t.abs() < 1073741824.0 {
        let f = t.floor();
        let frac = t - f;
        if frac > 1e-6 && frac < 1.0 - 1e-6 {
            return BigInt::from(f as i64);
        }
    }
    floor_half_pi_exact(x)
}

fn floor_half_pi_exact(x: f64) -> BigInt {
    let xb = BigFloat::from_f64(x);
    let ex = xb.top_exp().unwrap_or(0).max(0) as u64;
    let mut p = ex + 128;
    loop {
        let half_pi = consts::pi(p).expect("pi table covers binary64 range").mul_pow2(-1);
        let t = Bounds::exact(xb.clone()).div(&half_pi, p);
        let lo = t.lo.to_bigint_floor();
        if lo == t.hi.to_bigint_floor() {
            return lo;
        }
        p *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn small_arguments() {
        assert_eq!(floor_half_pi(1.0), BigInt::from(0));
        assert_eq!(floor_half_pi(-1.0), BigInt::from(-1));
        assert_eq!(floor_half_pi(2.0), BigInt::from(1));
        assert_eq!(floor_half_pi(7.0), BigInt::from(4));
    }

    #[test]
    fn near_multiples_of_half_pi() {
        // The binary64 pi/2 is below the real pi/2, its successor above.
        assert_eq!(floor_half_pi(FRAC_PI_2), BigInt::from(0));
        assert_eq!(floor_half_pi(FRAC_PI_2.next_up()), BigInt::from(1));
        // Likewise binary64 pi is below pi.
        assert_eq!(floor_half_pi(PI), BigInt::from(1));
        assert_eq!(floor_half_pi(PI.next_up()), BigInt::from(2));
        assert_eq!(floor_half_pi(-PI), BigInt::from(-2));
    }

    #[test]
    fn huge_arguments_agree_with_slow_path() {
        for &x in &[1e22, 1e300, -3.5e200, 6381956970095103.0 * 2f64.powi(797)] {
            let k = floor_half_pi(x);
            assert_eq!(k, floor_half_pi_exact(x));
            let approx = x / FRAC_PI_2;
            let kf: f64 = k.to_string().parse().unwrap();
            assert!((kf - approx).abs() <= approx.abs() * 1e-12);
        }
    }
}
