//! Set operations, numeric functions and boolean predicates.

use crate::fpkernel::{self, Dir, MAXREAL};

use super::Interval;

const INF: f64 = f64::INFINITY;
const NEG_INF: f64 = f64::NEG_INFINITY;
// 2^1022: below it the sum of two bounds cannot overflow.
const HALF_RANGE: f64 = f64::from_bits(0x7fd0_0000_0000_0000);

pub fn intersection(x: &Interval, y: &Interval) -> Interval {
    if x.is_empty() || y.is_empty() {
        return Interval::EMPTY;
    }
    let lo = x.lo().max(y.lo());
    let hi = x.hi().min(y.hi());
    if lo > hi {
        Interval::EMPTY
    } else {
        Interval::from_bounds(lo, hi)
    }
}

pub fn convex_hull(x: &Interval, y: &Interval) -> Interval {
    match (x.is_empty(), y.is_empty()) {
        (true, _) => *y,
        (_, true) => *x,
        _ => Interval::from_bounds(x.lo().min(y.lo()), x.hi().max(y.hi())),
    }
}

/// Lower bound; `+inf` for the empty set and `-0` for a zero bound.
pub fn inf(x: &Interval) -> f64 {
    if x.is_empty() {
        INF
    } else if x.lo() == 0.0 {
        -0.0
    } else {
        x.lo()
    }
}

/// Upper bound; `-inf` for the empty set and `+0` for a zero bound.
pub fn sup(x: &Interval) -> f64 {
    if x.is_empty() {
        NEG_INF
    } else if x.hi() == 0.0 {
        0.0
    } else {
        x.hi()
    }
}

/// Midpoint rounded to nearest.
///
/// Halving is exact outside the subnormal range, and a sum of subnormals is
/// exact, so either branch rounds only once.
pub fn mid(x: &Interval) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    let (l, h) = (x.lo(), x.hi());
    match (l.is_finite(), h.is_finite()) {
        (false, false) => 0.0,
        (false, true) => -MAXREAL,
        (true, false) => MAXREAL,
        _ if l.abs() >= HALF_RANGE || h.abs() >= HALF_RANGE => l * 0.5 + h * 0.5,
        _ => (l + h) * 0.5,
    }
}

/// Radius, rounded up so that `[mid - rad, mid + rad]` contains `x`.
pub fn rad(x: &Interval) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    if !x.is_bounded() {
        return INF;
    }
    let m = mid(x);
    fpkernel::sub(m, x.lo(), Dir::Up).max(fpkernel::sub(x.hi(), m, Dir::Up))
}

pub fn wid(x: &Interval) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    fpkernel::sub(x.hi(), x.lo(), Dir::Up)
}

pub fn mag(x: &Interval) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    x.lo().abs().max(x.hi().abs())
}

pub fn mig(x: &Interval) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    if x.contains_zero() {
        0.0
    } else {
        x.lo().abs().min(x.hi().abs())
    }
}

pub fn is_empty(x: &Interval) -> bool {
    x.is_empty()
}

pub fn is_entire(x: &Interval) -> bool {
    x.is_entire()
}

pub fn equal(x: &Interval, y: &Interval) -> bool {
    x == y
}

pub fn subset(x: &Interval, y: &Interval) -> bool {
    x.is_empty() || (!y.is_empty() && y.lo() <= x.lo() && x.hi() <= y.hi())
}

/// `x` lies in the topological interior of `y`. An infinite bound of `y`
/// is not a member, so it strictly exceeds any bound of `x`.
pub fn interior(x: &Interval, y: &Interval) -> bool {
    if x.is_empty() {
        return true;
    }
    if y.is_empty() {
        return false;
    }
    let below = y.lo() < x.lo() || y.lo() == NEG_INF;
    let above = x.hi() < y.hi() || y.hi() == INF;
    below && above
}

pub fn disjoint(x: &Interval, y: &Interval) -> bool {
    x.is_empty() || y.is_empty() || x.hi() < y.lo() || y.hi() < x.lo()
}

/// Only real numbers are members: NaN and infinities never are.
pub fn is_member(m: f64, x: &Interval) -> bool {
    m.is_finite() && x.contains(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(l: f64, h: f64) -> Interval {
        Interval::new(l, h).unwrap()
    }

    #[test]
    fn set_ops() {
        assert_eq!(intersection(&iv(1.0, 3.0), &iv(2.0, 5.0)), iv(2.0, 3.0));
        assert!(intersection(&iv(1.0, 2.0), &iv(3.0, 4.0)).is_empty());
        assert_eq!(intersection(&iv(1.0, 2.0), &iv(2.0, 4.0)), iv(2.0, 2.0));
        assert_eq!(convex_hull(&iv(1.0, 2.0), &Interval::EMPTY), iv(1.0, 2.0));
        assert_eq!(convex_hull(&iv(1.0, 2.0), &iv(5.0, 6.0)), iv(1.0, 6.0));
    }

    #[test]
    fn numeric_functions() {
        assert_eq!(mid(&iv(1.0, 3.0)), 2.0);
        assert_eq!(mid(&Interval::ENTIRE), 0.0);
        assert!(mid(&Interval::EMPTY).is_nan());
        assert_eq!(mid(&iv(NEG_INF, 1.0)), -MAXREAL);
        assert_eq!(mid(&iv(-MAXREAL, MAXREAL)), 0.0);
        let m = mid(&iv(MAXREAL / 2.0, MAXREAL));
        assert!(m.is_finite() && m > MAXREAL / 2.0);
        assert_eq!(inf(&Interval::EMPTY), INF);
        assert_eq!(sup(&Interval::EMPTY), NEG_INF);
        assert!(inf(&iv(0.0, 1.0)).is_sign_negative());
        assert!(sup(&iv(-1.0, 0.0)).is_sign_positive());
        assert_eq!(wid(&iv(-MAXREAL, MAXREAL)), INF);
        assert_eq!(wid(&iv(1.0, 1.0 + f64::EPSILON)), f64::EPSILON);
        assert_eq!(mag(&iv(-3.0, 2.0)), 3.0);
        assert_eq!(mig(&iv(-3.0, 2.0)), 0.0);
        assert_eq!(mig(&iv(-3.0, -2.0)), 2.0);
        assert_eq!(rad(&iv(1.0, INF)), INF);
    }

    #[test]
    fn radius_covers_interval() {
        let x = iv(0.1, 1e300);
        let (m, r) = (mid(&x), rad(&x));
        assert!(fpkernel::sub(m, r, Dir::Down) <= x.lo());
        assert!(fpkernel::add(m, r, Dir::Up) >= x.hi());
    }

    #[test]
    fn predicates() {
        assert!(subset(&Interval::EMPTY, &iv(1.0, 2.0)));
        assert!(subset(&Interval::EMPTY, &Interval::EMPTY));
        assert!(!subset(&iv(1.0, 2.0), &Interval::EMPTY));
        assert!(!interior(&iv(1.0, 2.0), &iv(1.0, 3.0)));
        assert!(interior(&iv(1.5, 2.0), &iv(1.0, 3.0)));
        assert!(interior(&Interval::ENTIRE, &Interval::ENTIRE));
        assert!(interior(&Interval::EMPTY, &Interval::EMPTY));
        assert!(is_member(4.0, &iv(4.0, 4.0)));
        assert!(!is_member(f64::NAN, &Interval::ENTIRE));
        assert!(!is_member(INF, &Interval::ENTIRE));
        assert!(disjoint(&iv(1.0, 2.0), &iv(3.0, 4.0)));
        assert!(!disjoint(&iv(1.0, 3.0), &iv(3.0, 4.0)));
        assert!(disjoint(&Interval::EMPTY, &Interval::ENTIRE));
        assert!(equal(&iv(-0.0, 1.0), &iv(0.0, 1.0)));
        assert!(is_entire(&Interval::ENTIRE) && is_empty(&Interval::EMPTY));
    }
}
