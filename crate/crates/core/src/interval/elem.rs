//! Accurate elementary functions.
//!
//! Bounds start from the host's round-to-nearest functions widened one ulp
//! outward. Host libraries are not reliably faithful (glibc's `log10` is
//! off by 1.5 ulp at 0.5625), so each widened value is confirmed against a
//! 64-bit oracle enclosure and replaced by the certified oracle bound when
//! the check fails.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::fpkernel::Dir;
use crate::oracle::{confirms_bound, floor_half_pi, point_bound, ElemFn};

use super::Interval;

const INF: f64 = f64::INFINITY;
const NEG_INF: f64 = f64::NEG_INFINITY;

fn host(f: ElemFn, x: f64, y: f64) -> f64 {
    match f {
        ElemFn::Exp => x.exp(),
        ElemFn::Log => x.ln(),
        ElemFn::Log2 => x.log2(),
        ElemFn::Log10 => x.log10(),
        ElemFn::Sin => x.sin(),
        ElemFn::Cos => x.cos(),
        ElemFn::Tan => x.tan(),
        ElemFn::Atan => x.atan(),
        ElemFn::Pow => x.powf(y),
    }
}

/// Directed bound of `f` at a point where the value is not a known exact
/// case.
fn bound(f: ElemFn, x: f64, y: f64, dir: Dir) -> f64 {
    let args: &[f64] = if f == ElemFn::Pow { &[x, y] } else { &[x] };
    let v = host(f, x, y);
    let c = match dir {
        Dir::Down => v.next_down(),
        Dir::Up => v.next_up(),
    };
    if !c.is_nan() && confirms_bound(f, args, c, dir) {
        c
    } else {
        point_bound(f, args, dir).value
    }
}

/// Known exact values at single points.
fn exact_value(f: ElemFn, x: f64) -> Option<f64> {
    match f {
        ElemFn::Exp => match x {
            0.0 => Some(1.0),
            NEG_INF => Some(0.0),
            INF => Some(INF),
            _ => None,
        },
        ElemFn::Log | ElemFn::Log2 | ElemFn::Log10 => {
            if x == 0.0 {
                return Some(NEG_INF);
            }
            if x == INF || x == 1.0 {
                return Some(if x == 1.0 { 0.0 } else { INF });
            }
            match f {
                ElemFn::Log2 => {
                    let (m, e) = crate::fpkernel::decompose_odd(x)?;
                    (m == 1).then_some(e as f64)
                }
                ElemFn::Log10 => (1..=22).find(|&k| 10f64.powi(k) == x).map(|k| k as f64),
                _ => None,
            }
        }
        ElemFn::Sin | ElemFn::Tan | ElemFn::Atan => (x == 0.0).then_some(0.0),
        ElemFn::Cos => (x == 0.0).then_some(1.0),
        ElemFn::Pow => None,
    }
}

fn endpoint(f: ElemFn, x: f64, dir: Dir) -> f64 {
    exact_value(f, x).unwrap_or_else(|| bound(f, x, 0.0, dir))
}

/// Bounds of an increasing function over `[lo, hi]`.
fn increasing(f: ElemFn, lo: f64, hi: f64) -> Interval {
    Interval::from_bounds(endpoint(f, lo, Dir::Down), endpoint(f, hi, Dir::Up))
}

pub fn exp(x: &Interval) -> Interval {
    if x.is_empty() {
        return Interval::EMPTY;
    }
    let r = increasing(ElemFn::Exp, x.lo(), x.hi());
    Interval::from_bounds(r.lo().max(0.0), r.hi())
}

fn logarithm(f: ElemFn, x: &Interval) -> Interval {
    if x.is_empty() || x.hi() <= 0.0 {
        return Interval::EMPTY;
    }
    increasing(f, x.lo().max(0.0), x.hi())
}

pub fn log(x: &Interval) -> Interval {
    logarithm(ElemFn::Log, x)
}

pub fn log2(x: &Interval) -> Interval {
    logarithm(ElemFn::Log2, x)
}

pub fn log10(x: &Interval) -> Interval {
    logarithm(ElemFn::Log10, x)
}

pub fn atan(x: &Interval) -> Interval {
    if x.is_empty() {
        return Interval::EMPTY;
    }
    increasing(ElemFn::Atan, x.lo(), x.hi())
}

/// Residues mod 4 of the multiples of pi/2 inside `(lo, hi]`, or `None` if
/// all four occur.
fn crossings(lo: f64, hi: f64) -> Option<Vec<u8>> {
    let kl = floor_half_pi(lo);
    let kh = floor_half_pi(hi);
    if (&kh - &kl).to_u64().is_none_or(|d| d >= 4) {
        return None;
    }
    let mut out = Vec::new();
    let mut m = kl + BigInt::one();
    while m <= kh {
        let r: BigInt = ((&m % 4) + 4) % 4;
        out.push(r.to_u8().expect("small"));
        m += 1;
    }
    Some(out)
}

fn periodic(f: ElemFn, x: &Interval, peak: u8, trough: u8) -> Interval {
    if x.is_empty() {
        return Interval::EMPTY;
    }
    let whole = Interval::from_bounds(-1.0, 1.0);
    if !x.is_bounded() {
        return whole;
    }
    let Some(crossed) = crossings(x.lo(), x.hi()) else {
        return whole;
    };
    let lo = if crossed.contains(&trough) {
        -1.0
    } else {
        endpoint(f, x.lo(), Dir::Down).min(endpoint(f, x.hi(), Dir::Down)).max(-1.0)
    };
    let hi = if crossed.contains(&peak) {
        1.0
    } else {
        endpoint(f, x.lo(), Dir::Up).max(endpoint(f, x.hi(), Dir::Up)).min(1.0)
    };
    Interval::from_bounds(lo, hi)
}

pub fn sin(x: &Interval) -> Interval {
    periodic(ElemFn::Sin, x, 1, 3)
}

pub fn cos(x: &Interval) -> Interval {
    periodic(ElemFn::Cos, x, 0, 2)
}

pub fn tan(x: &Interval) -> Interval {
    if x.is_empty() {
        return Interval::EMPTY;
    }
    if tan_has_pole(x) {
        Interval::ENTIRE
    } else {
        increasing(ElemFn::Tan, x.lo(), x.hi())
    }
}

/// Whether a nonempty `x` contains an odd multiple of pi/2.
pub(crate) fn tan_has_pole(x: &Interval) -> bool {
    if !x.is_bounded() {
        return true;
    }
    !matches!(crossings(x.lo(), x.hi()), Some(c) if c.iter().all(|m| m % 2 == 0))
}

/// `x^y` bound at a corner, taking limits where the corner is only
/// approached from inside the domain.
fn pow_corner(x: f64, y: f64, dir: Dir) -> f64 {
    if x == 0.0 {
        return if y > 0.0 { 0.0 } else { INF };
    }
    if x == INF {
        return if y > 0.0 {
            INF
        } else if y < 0.0 {
            0.0
        } else {
            1.0
        };
    }
    if y.is_infinite() {
        return if x == 1.0 {
            1.0
        } else if (x > 1.0) == (y > 0.0) {
            INF
        } else {
            0.0
        };
    }
    if y == 0.0 || x == 1.0 {
        return 1.0;
    }
    if y == 1.0 {
        return x;
    }
    let v = bound(ElemFn::Pow, x, y, dir);
    if dir == Dir::Down {
        v.max(0.0)
    } else {
        v
    }
}

/// Power function on the domain `x > 0`, extended by `0^y = 0` for `y > 0`.
pub fn pow(x: &Interval, y: &Interval) -> Interval {
    if x.is_empty() || y.is_empty() || x.hi() < 0.0 {
        return Interval::EMPTY;
    }
    let xl = x.lo().max(0.0);
    if x.hi() == 0.0 {
        return if y.hi() > 0.0 { Interval::from_bounds(0.0, 0.0) } else { Interval::EMPTY };
    }
    let mut lo = INF;
    let mut hi = NEG_INF;
    for a in [xl, x.hi()] {
        for b in [y.lo(), y.hi()] {
            if a == 0.0 && b == 0.0 {
                continue;
            }
            lo = lo.min(pow_corner(a, b, Dir::Down));
            hi = hi.max(pow_corner(a, b, Dir::Up));
        }
    }
    Interval::from_bounds(lo, hi)
}
