//! Tightest interval arithmetic. Every bound is one directed operation on
//! binary64 values, so the result is the smallest enclosing interval.

use crate::fpkernel::{self, Dir};

use super::Interval;

const INF: f64 = f64::INFINITY;
const NEG_INF: f64 = f64::NEG_INFINITY;

pub fn neg(x: &Interval) -> Interval {
    if x.is_empty() {
        return Interval::EMPTY;
    }
    Interval::from_bounds(-x.hi(), -x.lo())
}

pub fn add(x: &Interval, y: &Interval) -> Interval {
    if x.is_empty() || y.is_empty() {
        return Interval::EMPTY;
    }
    Interval::from_bounds(fpkernel::add(x.lo(), y.lo(), Dir::Down), fpkernel::add(x.hi(), y.hi(), Dir::Up))
}

pub fn sub(x: &Interval, y: &Interval) -> Interval {
    add(x, &neg(y))
}

/// Product bound at a corner, with `0 * inf = 0`: a zero bound is attained
/// while an infinite one is only approached.
fn mul_corner(a: f64, b: f64, dir: Dir) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        fpkernel::mul(a, b, dir)
    }
}

pub fn mul(x: &Interval, y: &Interval) -> Interval {
    if x.is_empty() || y.is_empty() {
        return Interval::EMPTY;
    }
    let corners = [(x.lo(), y.lo()), (x.lo(), y.hi()), (x.hi(), y.lo()), (x.hi(), y.hi())];
    let lo = corners.iter().map(|&(a, b)| mul_corner(a, b, Dir::Down)).fold(INF, f64::min);
    let hi = corners.iter().map(|&(a, b)| mul_corner(a, b, Dir::Up)).fold(NEG_INF, f64::max);
    Interval::from_bounds(lo, hi)
}

/// Quotient bound at a corner of `x / y_part`, where `y_part` lies on the
/// side `sign` of zero. A zero divisor bound stands for the limit towards
/// zero from that side. Infinite-over-infinite corners carry no information
/// and are skipped.
fn div_corner(a: f64, b: f64, sign: f64, dir: Dir) -> Option<f64> {
    if a.is_infinite() && b.is_infinite() {
        return None;
    }
    if b == 0.0 {
        return Some(if a == 0.0 { 0.0 } else { (a * sign).signum() * INF });
    }
    Some(fpkernel::div(a, b, dir))
}

pub fn div(x: &Interval, y: &Interval) -> Interval {
    if x.is_empty() || y.is_empty() {
        return Interval::EMPTY;
    }
    let (yl, yh) = (y.lo(), y.hi());
    if yl == 0.0 && yh == 0.0 {
        return Interval::EMPTY;
    }
    if x.lo() == 0.0 && x.hi() == 0.0 {
        return Interval::from_bounds(0.0, 0.0);
    }
    // Split the divisor at zero and take the hull of both quotients.
    let mut lo = INF;
    let mut hi = NEG_INF;
    let mut part = |pl: f64, ph: f64, sign: f64| {
        for a in [x.lo(), x.hi()] {
            for b in [pl, ph] {
                if let Some(v) = div_corner(a, b, sign, Dir::Down) {
                    lo = lo.min(v);
                }
                if let Some(v) = div_corner(a, b, sign, Dir::Up) {
                    hi = hi.max(v);
                }
            }
        }
    };
    if yl < 0.0 {
        part(yl, yh.min(0.0), -1.0);
    }
    if yh > 0.0 {
        part(yl.max(0.0), yh, 1.0);
    }
    Interval::from_bounds(lo, hi)
}

pub fn recip(x: &Interval) -> Interval {
    div(&Interval::from_bounds(1.0, 1.0), x)
}

pub fn sqr(x: &Interval) -> Interval {
    if x.is_empty() {
        return Interval::EMPTY;
    }
    let (l, h) = (x.lo(), x.hi());
    if x.contains_zero() {
        let m = l.abs().max(h.abs());
        return Interval::from_bounds(0.0, fpkernel::mul(m, m, Dir::Up));
    }
    let (a, b) = if l > 0.0 { (l, h) } else { (-h, -l) };
    Interval::from_bounds(fpkernel::mul(a, a, Dir::Down), fpkernel::mul(b, b, Dir::Up))
}

pub fn sqrt(x: &Interval) -> Interval {
    if x.is_empty() || x.hi() < 0.0 {
        return Interval::EMPTY;
    }
    let l = x.lo().max(0.0);
    Interval::from_bounds(fpkernel::sqrt(l, Dir::Down), fpkernel::sqrt(x.hi(), Dir::Up))
}

/// `a*b + c` bound at a corner, with `0 * inf = 0`. `c` is finite: an
/// infinite `z` bound is handled by the caller.
fn fma_corner(a: f64, b: f64, c: f64, dir: Dir) -> f64 {
    if a == 0.0 || b == 0.0 {
        return c;
    }
    if a.is_infinite() || b.is_infinite() {
        return if (a < 0.0) != (b < 0.0) { NEG_INF } else { INF };
    }
    fpkernel::fma(a, b, c, dir)
}

pub fn fma(x: &Interval, y: &Interval, z: &Interval) -> Interval {
    if x.is_empty() || y.is_empty() || z.is_empty() {
        return Interval::EMPTY;
    }
    let corners = [(x.lo(), y.lo()), (x.lo(), y.hi()), (x.hi(), y.lo()), (x.hi(), y.hi())];
    let lo = if z.lo() == NEG_INF {
        NEG_INF
    } else {
        corners.iter().map(|&(a, b)| fma_corner(a, b, z.lo(), Dir::Down)).fold(INF, f64::min)
    };
    let hi = if z.hi() == INF {
        INF
    } else {
        corners.iter().map(|&(a, b)| fma_corner(a, b, z.hi(), Dir::Up)).fold(NEG_INF, f64::max)
    };
    Interval::from_bounds(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpkernel::{hex_to_f64, MAXREAL};

    fn iv(l: f64, h: f64) -> Interval {
        Interval::new(l, h).unwrap()
    }

    #[test]
    fn sample_additions() {
        assert!(add(&iv(-1.0, 1.0), &Interval::EMPTY).is_empty());
        assert_eq!(add(&iv(1.0, 2.0), &iv(3.0, INF)), iv(4.0, INF));
        assert_eq!(add(&iv(1.0, INF), &iv(NEG_INF, 4.0)), Interval::ENTIRE);
        let a = hex_to_f64("0X1.FFFFFFFFFFFFP+0").unwrap();
        let b = hex_to_f64("0X1.999999999999AP-4").unwrap();
        let lo = hex_to_f64("0X1.0CCCCCCCCCCC4P+1").unwrap();
        let hi = hex_to_f64("0X1.0CCCCCCCCCCC5P+1").unwrap();
        assert_eq!(add(&iv(a, a), &iv(b, b)), iv(lo, hi));
    }

    #[test]
    fn sample_divisions() {
        assert!(div(&Interval::EMPTY, &Interval::EMPTY).is_empty());
        assert_eq!(div(&iv(-30.0, 15.0), &Interval::ENTIRE), Interval::ENTIRE);
    }

    #[test]
    fn division_by_zero_cases() {
        assert!(div(&iv(1.0, 2.0), &iv(0.0, 0.0)).is_empty());
        assert_eq!(div(&iv(1.0, 2.0), &iv(0.0, 1.0)), iv(1.0, INF));
        assert_eq!(div(&iv(1.0, 2.0), &iv(-1.0, 0.0)), iv(NEG_INF, -1.0));
        assert_eq!(div(&iv(-2.0, -1.0), &iv(0.0, 4.0)), iv(NEG_INF, -0.25));
        assert_eq!(div(&iv(-2.0, -1.0), &iv(-4.0, 0.0)), iv(0.25, INF));
        assert_eq!(div(&iv(1.0, 2.0), &iv(-1.0, 1.0)), Interval::ENTIRE);
        assert_eq!(div(&iv(0.0, 0.0), &iv(0.0, 1.0)), iv(0.0, 0.0));
        assert_eq!(div(&iv(0.0, 1.0), &iv(0.0, 1.0)), iv(0.0, INF));
        assert_eq!(div(&iv(-1.0, 0.0), &iv(0.0, 1.0)), iv(NEG_INF, 0.0));
        assert_eq!(div(&iv(-1.0, 2.0), &iv(0.0, 3.0)), Interval::ENTIRE);
        assert_eq!(div(&iv(1.0, 2.0), &iv(0.0, INF)), iv(0.0, INF));
        assert_eq!(div(&iv(0.0, 0.0), &iv(1.0, 2.0)), iv(0.0, 0.0));
        assert_eq!(div(&iv(1.0, INF), &iv(1.0, INF)), iv(0.0, INF));
        assert_eq!(recip(&iv(2.0, 4.0)), iv(0.25, 0.5));
    }

    #[test]
    fn products_with_zero_and_infinity() {
        assert_eq!(mul(&iv(0.0, MAXREAL), &iv(0.0, MAXREAL)), iv(0.0, INF));
        let big = 0.75 * MAXREAL;
        assert_eq!(mul(&iv(big, MAXREAL), &iv(big, MAXREAL)), iv(MAXREAL, INF));
        assert_eq!(mul(&Interval::ENTIRE, &iv(0.0, 0.0)), iv(0.0, 0.0));
        assert_eq!(mul(&iv(-1.0, 2.0), &iv(-3.0, 4.0)), iv(-6.0, 8.0));
        assert_eq!(mul(&iv(0.0, INF), &iv(-1.0, 0.0)), iv(NEG_INF, 0.0));
    }

    #[test]
    fn unary_ops() {
        assert_eq!(sqrt(&iv(-1.0, 4.0)), iv(0.0, 2.0));
        assert!(sqrt(&iv(-2.0, -1.0)).is_empty());
        assert_eq!(sqr(&iv(-3.0, 2.0)), iv(0.0, 9.0));
        assert_eq!(sqr(&iv(-3.0, -2.0)), iv(4.0, 9.0));
        assert_eq!(neg(&iv(1.0, INF)), iv(NEG_INF, -1.0));
        let s = sqrt(&iv(2.0, 2.0));
        assert_eq!(s.lo().next_up(), s.hi());
    }

    #[test]
    fn fused_multiply_add() {
        assert_eq!(fma(&iv(1.0, 2.0), &iv(3.0, 4.0), &iv(-1.0, 1.0)), iv(2.0, 9.0));
        assert_eq!(fma(&iv(0.0, INF), &iv(1.0, 1.0), &iv(1.0, 1.0)), iv(1.0, INF));
        assert_eq!(fma(&Interval::ENTIRE, &iv(0.0, 0.0), &iv(1.0, 2.0)), iv(1.0, 2.0));
        assert_eq!(fma(&iv(1.0, 1.0), &iv(1.0, 1.0), &iv(NEG_INF, 0.0)), iv(NEG_INF, 1.0));
        let t = 2f64.powi(-80);
        let r = fma(&iv(1.0, 1.0), &iv(1.0, 1.0), &iv(t, t));
        assert_eq!((r.lo(), r.hi()), (1.0, 1.0f64.next_up()));
    }
}
