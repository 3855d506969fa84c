//! Certified tightest binary64 enclosures of operation ranges.
//!
//! The range of an operation over an input box is reduced, by a case
//! analysis written independently of the reference engine, to a handful of
//! point evaluations at box corners or critical points. Each point value is
//! bracketed at precisions 64, 128, ... up to the cap, and a bound is
//! certified once both ends of the bracket round to the same binary64 value.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::fpkernel::{Dir, MAXREAL, MIN_SUBNORMAL};
use crate::interval::Interval;
use crate::ops::{Op, OpKind};

use super::bigfloat::{BigFloat, MAX_PRECISION};
use super::bounds::Bounds;
use super::elem::{elem_enclosure, ElemFn, ElemValue};
use super::quadrant::floor_half_pi;
use super::OracleError;

/// A certified (or best-effort outward) binary64 enclosure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure53 {
    pub interval: Interval,
    /// Whether every bound reached agreement below the precision cap.
    pub certified: bool,
    /// Highest precision used by any bound.
    pub q_final: u32,
}

/// One directed bound of a point value.
#[derive(Clone, Copy, Debug)]
pub struct PointBound {
    pub value: f64,
    pub certified: bool,
    pub q: u32,
}

fn ladder() -> impl Iterator<Item = u64> {
    std::iter::successors(Some(64u64), |q| Some(q * 2)).take_while(|&q| q <= MAX_PRECISION as u64)
}

/// Rounds one end of an enclosure. Enclosed values are finite and
/// nonzero, so an infinite end only says the value lies beyond the binary64
/// range, and a zero end that it lies strictly on the far side of zero.
fn round_end(b: &BigFloat, dir: Dir, upper: bool) -> f64 {
    match (b, dir) {
        (BigFloat::Inf { neg: false }, Dir::Down) => MAXREAL,
        (BigFloat::Inf { neg: true }, Dir::Up) => -MAXREAL,
        (BigFloat::Zero { .. }, Dir::Up) if !upper => MIN_SUBNORMAL,
        (BigFloat::Zero { .. }, Dir::Down) if upper => -MIN_SUBNORMAL,
        _ => b.to_f64(dir),
    }
}

/// Climbs the precision ladder until the bracket from `eval` rounds to a
/// single binary64 value in direction `dir`.
fn certify(eval: impl Fn(u64) -> ElemValue, dir: Dir) -> PointBound {
    let mut fallback = f64::NAN;
    for q in ladder() {
        match eval(q) {
            ElemValue::Nan => return PointBound { value: f64::NAN, certified: true, q: q as u32 },
            ElemValue::Exact(v) => return PointBound { value: v.to_f64(dir), certified: true, q: q as u32 },
            ElemValue::Enclosed(b) => {
                let a = round_end(&b.lo, dir, false);
                let c = round_end(&b.hi, dir, true);
                if a == c {
                    return PointBound { value: a, certified: true, q: q as u32 };
                }
                fallback = if dir == Dir::Down { a } else { c };
            }
        }
    }
    PointBound { value: fallback, certified: false, q: MAX_PRECISION }
}

/// Certified directed bound of an elementary function at a point.
pub fn point_bound(f: ElemFn, args: &[f64], dir: Dir) -> PointBound {
    let args: Vec<BigFloat> = args.iter().map(|&a| BigFloat::from_f64(a)).collect();
    certify(|q| elem_enclosure(f, &args, q), dir)
}

/// Whether `c` is a sound directed bound of `f(args)` that lies at most one
/// ulp outward of the correctly rounded one, judged from a single 64-bit
/// enclosure. A `false` answer may just mean the enclosure was too coarse.
pub fn confirms_bound(f: ElemFn, args: &[f64], c: f64, dir: Dir) -> bool {
    let args: Vec<BigFloat> = args.iter().map(|&a| BigFloat::from_f64(a)).collect();
    let (near, far) = match elem_enclosure(f, &args, 64) {
        ElemValue::Nan => return false,
        ElemValue::Exact(v) => (v.to_f64(dir), v.to_f64(dir)),
        // `near` bounds the exact value on the side `c` must respect, `far`
        // bounds its directed rounding on the other.
        ElemValue::Enclosed(b) => match dir {
            Dir::Down => (round_end(&b.lo, dir, false), round_end(&b.hi, dir, true)),
            Dir::Up => (round_end(&b.hi, dir, true), round_end(&b.lo, dir, false)),
        },
    };
    match dir {
        Dir::Down => c <= near && c >= far.next_down(),
        Dir::Up => c >= near && c <= far.next_up(),
    }
}

fn bf(x: f64) -> BigFloat {
    BigFloat::from_f64(x)
}

/// Accumulates candidate bounds for the lower and upper ends of a range.
struct Range {
    lo: f64,
    hi: f64,
    certified: bool,
    q: u32,
}

impl Range {
    fn new() -> Self {
        Range { lo: f64::INFINITY, hi: f64::NEG_INFINITY, certified: true, q: 64 }
    }

    fn take(&mut self, b: PointBound, dir: Dir) {
        self.certified &= b.certified;
        self.q = self.q.max(b.q);
        match dir {
            Dir::Down => self.lo = self.lo.min(b.value),
            Dir::Up => self.hi = self.hi.max(b.value),
        }
    }

    /// Adds a point value as a candidate for both ends.
    fn both(&mut self, eval: impl Fn(u64) -> ElemValue) {
        self.take(certify(&eval, Dir::Down), Dir::Down);
        self.take(certify(&eval, Dir::Up), Dir::Up);
    }

    fn exact(&mut self, v: BigFloat) {
        self.both(|_| ElemValue::Exact(v.clone()));
    }

    fn finish(self) -> Enclosure53 {
        let interval = if self.lo.is_nan() || self.hi.is_nan() || self.lo > self.hi {
            Interval::EMPTY
        } else {
            Interval::new(self.lo, self.hi).expect("oracle range is a valid interval")
        };
        Enclosure53 { interval, certified: self.certified, q_final: self.q }
    }
}

fn fixed(interval: Interval) -> Enclosure53 {
    Enclosure53 { interval, certified: true, q_final: 64 }
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("valid bounds")
}

/// Certified tightest enclosure of an interval-valued operation over the
/// input box.
pub fn tightest_eval(op: Op, args: &[Interval]) -> Result<Enclosure53, OracleError> {
    if !op.is_interval_valued() {
        return Err(OracleError::Unsupported(op));
    }
    if args.len() != op.arity() {
        return Err(OracleError::Arity { op, expected: op.arity(), got: args.len() });
    }
    if args.iter().any(Interval::is_empty) {
        return Ok(fixed(Interval::EMPTY));
    }
    let x = &args[0];
    Ok(match op {
        Op::Neg => fixed(iv(-x.hi(), -x.lo())),
        Op::Add | Op::Sub => {
            let y = if op == Op::Add { args[1] } else { iv(-args[1].hi(), -args[1].lo()) };
            let mut r = Range::new();
            let lo = bf(x.lo()).add_exact(&bf(y.lo()));
            let hi = bf(x.hi()).add_exact(&bf(y.hi()));
            r.take(certify(|_| ElemValue::Exact(lo.clone()), Dir::Down), Dir::Down);
            r.take(certify(|_| ElemValue::Exact(hi.clone()), Dir::Up), Dir::Up);
            r.finish()
        }
        Op::Mul => {
            let y = &args[1];
            let mut r = Range::new();
            for a in [x.lo(), x.hi()] {
                for b in [y.lo(), y.hi()] {
                    r.exact(product_limit(a, b));
                }
            }
            r.finish()
        }
        Op::Sqr => {
            let mut r = Range::new();
            for a in [x.lo(), x.hi()] {
                r.exact(product_limit(a, a));
            }
            if x.contains_zero() {
                r.exact(BigFloat::ZERO);
            }
            r.finish()
        }
        Op::Div => quotient(x, &args[1]),
        Op::Recip => quotient(&iv(1.0, 1.0), x),
        Op::Sqrt => {
            if x.hi() < 0.0 {
                return Ok(fixed(Interval::EMPTY));
            }
            let mut r = Range::new();
            for a in [x.lo().max(0.0), x.hi()] {
                r.both(|q| sqrt_value(&bf(a), q));
            }
            r.finish()
        }
        Op::Fma => fused(x, &args[1], &args[2]),
        Op::Exp => monotone(ElemFn::Exp, x.lo(), x.hi()),
        Op::Log | Op::Log2 | Op::Log10 => {
            if x.hi() <= 0.0 {
                return Ok(fixed(Interval::EMPTY));
            }
            let f = match op {
                Op::Log => ElemFn::Log,
                Op::Log2 => ElemFn::Log2,
                _ => ElemFn::Log10,
            };
            monotone(f, x.lo().max(0.0), x.hi())
        }
        Op::Atan => monotone(ElemFn::Atan, x.lo(), x.hi()),
        Op::Sin | Op::Cos => sin_cos(op == Op::Sin, x),
        Op::Tan => tangent(x),
        Op::Pow => power(x, &args[1]),
        Op::Intersection => {
            let y = &args[1];
            let lo = x.lo().max(y.lo());
            let hi = x.hi().min(y.hi());
            fixed(if lo > hi { Interval::EMPTY } else { iv(lo, hi) })
        }
        Op::ConvexHull => {
            let y = &args[1];
            fixed(iv(x.lo().min(y.lo()), x.hi().max(y.hi())))
        }
        _ => unreachable!("filtered by kind"),
    })
}

/// Corner product with `0 * inf = 0`.
fn product_limit(a: f64, b: f64) -> BigFloat {
    if a == 0.0 || b == 0.0 {
        BigFloat::ZERO
    } else {
        bf(a).mul_exact(&bf(b))
    }
}

fn quotient_value(a: &BigFloat, b: &BigFloat, q: u64) -> ElemValue {
    let lo = a.div(b, q, Dir::Down);
    let hi = a.div(b, q, Dir::Up);
    if lo == hi {
        ElemValue::Exact(lo)
    } else {
        ElemValue::Enclosed(Bounds::new(lo, hi))
    }
}

fn sqrt_value(a: &BigFloat, q: u64) -> ElemValue {
    let lo = a.sqrt(q, Dir::Down);
    let hi = a.sqrt(q, Dir::Up);
    if lo == hi {
        ElemValue::Exact(lo)
    } else {
        ElemValue::Enclosed(Bounds::new(lo, hi))
    }
}

/// Sign class of an interval relative to zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Class {
    /// Strictly positive.
    P1,
    /// Zero lower bound, positive upper bound.
    P0,
    /// Zero strictly inside.
    M,
    /// Negative lower bound, zero upper bound.
    N0,
    /// Strictly negative.
    N1,
    /// Exactly zero.
    Z,
}

fn classify(x: &Interval) -> Class {
    let (l, h) = (x.lo(), x.hi());
    if l == 0.0 && h == 0.0 {
        Class::Z
    } else if l > 0.0 {
        Class::P1
    } else if l == 0.0 {
        Class::P0
    } else if h < 0.0 {
        Class::N1
    } else if h == 0.0 {
        Class::N0
    } else {
        Class::M
    }
}

/// Set-based division by the sign-class table.
fn quotient(x: &Interval, y: &Interval) -> Enclosure53 {
    use Class::*;
    const INF: f64 = f64::INFINITY;
    let (cx, cy) = (classify(x), classify(y));
    if cy == Z {
        return fixed(Interval::EMPTY);
    }
    if cx == Z {
        return fixed(iv(0.0, 0.0));
    }
    let mut r = Range::new();
    let mut bound = |a: f64, b: f64, dir: Dir| {
        let (a, b) = (bf(a), bf(b));
        r.take(certify(|q| quotient_value(&a, &b, q), dir), dir);
    };
    match (cx, cy) {
        (_, P1) | (_, N1) => {
            // Divisor excludes zero: the extremes sit at corners; an
            // infinite-over-infinite corner is covered by its neighbours.
            for a in [x.lo(), x.hi()] {
                for b in [y.lo(), y.hi()] {
                    if !(a.is_infinite() && b.is_infinite()) {
                        bound(a, b, Dir::Down);
                        bound(a, b, Dir::Up);
                    }
                }
            }
            r.finish()
        }
        (M, _) | (_, M) => fixed(Interval::ENTIRE),
        (P0, P0) | (N0, N0) => fixed(iv(0.0, INF)),
        (P0, N0) | (N0, P0) => fixed(iv(-INF, 0.0)),
        (P1, P0) => {
            bound(x.lo(), y.hi(), Dir::Down);
            let lo = r.lo;
            Enclosure53 { interval: iv(lo, INF), certified: r.certified, q_final: r.q }
        }
        (P1, N0) => {
            bound(x.lo(), y.lo(), Dir::Up);
            Enclosure53 { interval: iv(-INF, r.hi), certified: r.certified, q_final: r.q }
        }
        (N1, P0) => {
            bound(x.hi(), y.hi(), Dir::Up);
            Enclosure53 { interval: iv(-INF, r.hi), certified: r.certified, q_final: r.q }
        }
        (N1, N0) => {
            bound(x.hi(), y.lo(), Dir::Down);
            Enclosure53 { interval: iv(r.lo, INF), certified: r.certified, q_final: r.q }
        }
        _ => unreachable!("all sign classes covered"),
    }
}

fn fused(x: &Interval, y: &Interval, z: &Interval) -> Enclosure53 {
    let mut r = Range::new();
    for (dir, c) in [(Dir::Down, z.lo()), (Dir::Up, z.hi())] {
        let cb = bf(c);
        for a in [x.lo(), x.hi()] {
            for b in [y.lo(), y.hi()] {
                let s = if cb.is_infinite() { cb.clone() } else { product_limit(a, b).add_exact(&cb) };
                r.take(certify(|_| ElemValue::Exact(s.clone()), dir), dir);
            }
        }
    }
    r.finish()
}

fn monotone(f: ElemFn, lo: f64, hi: f64) -> Enclosure53 {
    let mut r = Range::new();
    r.take(point_bound(f, &[lo], Dir::Down), Dir::Down);
    r.take(point_bound(f, &[hi], Dir::Up), Dir::Up);
    r.finish()
}

fn mod4(k: &BigInt) -> u8 {
    let four = BigInt::from(4);
    (((k % &four) + &four) % &four).to_u8().expect("small")
}

/// Residues mod 4 of the multiples `m` of pi/2 with `lo < m pi/2 <= hi`;
/// `None` when all four occur.
fn crossed_quadrants(lo: f64, hi: f64) -> Option<Vec<u8>> {
    let kl = floor_half_pi(lo);
    let kh = floor_half_pi(hi);
    let span = (&kh - &kl).to_i64().unwrap_or(i64::MAX);
    if span >= 4 {
        return None;
    }
    let mut m = kl + BigInt::one();
    let mut out = Vec::new();
    while m <= kh {
        out.push(mod4(&m));
        m += 1;
    }
    Some(out)
}

fn sin_cos(is_sin: bool, x: &Interval) -> Enclosure53 {
    if !x.is_bounded() {
        return fixed(iv(-1.0, 1.0));
    }
    let Some(crossed) = crossed_quadrants(x.lo(), x.hi()) else {
        return fixed(iv(-1.0, 1.0));
    };
    // sin peaks at m = 1 (mod 4) and bottoms at m = 3; cos at 0 and 2.
    let (peak, trough) = if is_sin { (1, 3) } else { (0, 2) };
    let f = if is_sin { ElemFn::Sin } else { ElemFn::Cos };
    let mut r = Range::new();
    for a in [x.lo(), x.hi()] {
        r.take(point_bound(f, &[a], Dir::Down), Dir::Down);
        r.take(point_bound(f, &[a], Dir::Up), Dir::Up);
    }
    if crossed.contains(&peak) {
        r.hi = 1.0;
    }
    if crossed.contains(&trough) {
        r.lo = -1.0;
    }
    r.finish()
}

fn tangent(x: &Interval) -> Enclosure53 {
    if !x.is_bounded() {
        return fixed(Interval::ENTIRE);
    }
    match crossed_quadrants(x.lo(), x.hi()) {
        // Poles sit at odd multiples of pi/2.
        None => fixed(Interval::ENTIRE),
        Some(c) if c.iter().any(|m| m % 2 == 1) => fixed(Interval::ENTIRE),
        Some(_) => monotone(ElemFn::Tan, x.lo(), x.hi()),
    }
}

/// `x^y` at a corner of the box, as a limit where the corner lies outside
/// the domain but is approached from inside it.
fn power_corner(a: f64, b: f64, q: u64) -> ElemValue {
    if a == 0.0 && b < 0.0 {
        return ElemValue::Exact(BigFloat::Inf { neg: false });
    }
    elem_enclosure(ElemFn::Pow, &[bf(a), bf(b)], q)
}

fn power(x: &Interval, y: &Interval) -> Enclosure53 {
    if x.hi() < 0.0 {
        return fixed(Interval::EMPTY);
    }
    let xl = x.lo().max(0.0);
    if x.hi() == 0.0 {
        return fixed(if y.hi() <= 0.0 { Interval::EMPTY } else { iv(0.0, 0.0) });
    }
    // x^y is monotone in each argument, so extremes lie at corners; the
    // corner (0, 0) is outside the domain and its neighbourhood is covered
    // by the other corners.
    let mut r = Range::new();
    for a in [xl, x.hi()] {
        for b in [y.lo(), y.hi()] {
            if a == 0.0 && b == 0.0 {
                continue;
            }
            r.both(|q| power_corner(a, b, q));
        }
    }
    r.finish()
}

/// Exact numeric functions of an interval.
pub fn numeric_eval(op: Op, x: &Interval) -> Result<f64, OracleError> {
    if op.kind() != OpKind::Numeric {
        return Err(OracleError::Unsupported(op));
    }
    let empty = x.is_empty();
    let bounded = x.is_bounded();
    let (l, h) = (x.lo(), x.hi());
    Ok(match op {
        Op::Inf if empty => f64::INFINITY,
        Op::Sup if empty => f64::NEG_INFINITY,
        Op::Inf => {
            if l == 0.0 {
                -0.0
            } else {
                l
            }
        }
        Op::Sup => {
            if h == 0.0 {
                0.0
            } else {
                h
            }
        }
        _ if empty => f64::NAN,
        Op::Mid => exact_mid(x),
        Op::Rad => {
            if !bounded {
                f64::INFINITY
            } else {
                let m = bf(exact_mid(x));
                let a = m.sub_exact(&bf(l));
                let b = bf(h).sub_exact(&m);
                BigFloat::max_value(&a, &b).to_f64(Dir::Up)
            }
        }
        Op::Wid => {
            if !bounded {
                f64::INFINITY
            } else {
                bf(h).sub_exact(&bf(l)).to_f64(Dir::Up)
            }
        }
        Op::Mag => l.abs().max(h.abs()),
        Op::Mig => {
            if x.contains_zero() {
                0.0
            } else {
                l.abs().min(h.abs())
            }
        }
        _ => unreachable!("filtered by kind"),
    })
}

fn exact_mid(x: &Interval) -> f64 {
    match (x.lo().is_finite(), x.hi().is_finite()) {
        (false, false) => 0.0,
        (false, true) => -MAXREAL,
        (true, false) => MAXREAL,
        (true, true) => bf(x.lo()).add_exact(&bf(x.hi())).mul_pow2(-1).to_f64_nearest(),
    }
}
