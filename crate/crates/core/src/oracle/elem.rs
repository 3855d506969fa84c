//! Rigorous enclosures of the elementary functions at a chosen precision.
//!
//! Each function reduces its argument, sums a Taylor or atanh series in
//! interval arithmetic and widens the result by a bound on the truncated
//! tail, so the returned [`Bounds`] always contain the exact value.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::fpkernel::Dir;

use super::bigfloat::{BigFloat, Precision};
use super::bounds::{negligible, Bounds};
use super::consts;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElemFn {
    Exp,
    Log,
    Log2,
    Log10,
    Sin,
    Cos,
    Tan,
    Atan,
    Pow,
}

impl ElemFn {
    pub fn arity(self) -> usize {
        match self {
            ElemFn::Pow => 2,
            _ => 1,
        }
    }
}

/// Outcome of evaluating an elementary function at a point.
#[derive(Clone, Debug)]
pub enum ElemValue {
    /// The value is exactly representable as a [`BigFloat`] (possibly an
    /// infinity standing for a limit).
    Exact(BigFloat),
    /// The value lies in the enclosure and is not itself an endpoint.
    Enclosed(Bounds),
    /// Outside the domain.
    Nan,
}

/// Beyond this magnitude `exp` is bounded crudely instead of evaluated.
const EXP_LIMIT_EXP: i64 = 40;
/// Arguments below `2^-TINY_EXP` use closed-form strict bounds.
const TINY_EXP: i64 = 64;

/// Directed value of `f(args)` at `q` bits: a lower bound for
/// [`Dir::Down`], an upper bound for [`Dir::Up`]. NaN outside the domain.
pub fn bf_elem(f: ElemFn, dir: Dir, q: Precision, args: &[BigFloat]) -> BigFloat {
    assert_eq!(args.len(), f.arity(), "arity mismatch for {f:?}");
    let q = q.bits() as u64;
    match elem_enclosure(f, args, q + 32) {
        ElemValue::Nan => BigFloat::Nan,
        ElemValue::Exact(v) => v.round(q, dir),
        ElemValue::Enclosed(b) => match dir {
            Dir::Down => b.lo.round(q, Dir::Down),
            Dir::Up => b.hi.round(q, Dir::Up),
        },
    }
}

/// Enclosure of `f(args)` whose relative width is about `2^-w`.
pub fn elem_enclosure(f: ElemFn, args: &[BigFloat], w: u64) -> ElemValue {
    if args.iter().any(BigFloat::is_nan) {
        return ElemValue::Nan;
    }
    let x = &args[0];
    match f {
        ElemFn::Exp => exp_point(x, w),
        ElemFn::Log | ElemFn::Log2 | ElemFn::Log10 => log_point(f, x, w),
        ElemFn::Sin | ElemFn::Cos | ElemFn::Tan => trig_point(f, x, w),
        ElemFn::Atan => atan_point(x, w),
        ElemFn::Pow => pow_point(x, &args[1], w),
    }
}

fn exp_point(x: &BigFloat, w: u64) -> ElemValue {
    match x {
        BigFloat::Inf { neg: false } => ElemValue::Exact(x.clone()),
        BigFloat::Inf { neg: true } => ElemValue::Exact(BigFloat::ZERO),
        BigFloat::Zero { .. } => ElemValue::Exact(BigFloat::one()),
        _ => ElemValue::Enclosed(exp_bounds(x, w)),
    }
}

fn log_point(f: ElemFn, x: &BigFloat, w: u64) -> ElemValue {
    if x.is_negative() {
        return ElemValue::Nan;
    }
    match x {
        BigFloat::Zero { .. } => return ElemValue::Exact(BigFloat::Inf { neg: true }),
        BigFloat::Inf { .. } => return ElemValue::Exact(x.clone()),
        _ => {}
    }
    if let Some(k) = exact_log(f, x) {
        return ElemValue::Exact(BigFloat::from_i64(k));
    }
    let wp = w + 16;
    let l = log_bounds(x, wp + 8);
    let b = match f {
        ElemFn::Log => l,
        ElemFn::Log2 => l.div(&consts::ln2(wp + 8).expect("table precision"), wp),
        _ => l.div(&log_bounds(&BigFloat::from_i64(10), wp + 8), wp),
    };
    ElemValue::Enclosed(b.round(w))
}

/// Integer results of `log2(2^k)` and `log10(10^k)`, plus `log(1)`.
fn exact_log(f: ElemFn, x: &BigFloat) -> Option<i64> {
    let BigFloat::Finite { mant, exp, .. } = x else {
        return None;
    };
    match f {
        ElemFn::Log => (mant.is_one() && *exp == 0).then_some(0),
        ElemFn::Log2 => mant.is_one().then_some(*exp),
        ElemFn::Log10 => {
            // 10^k = 5^k * 2^k.
            if *exp < 0 {
                return None;
            }
            let k = *exp;
            (num_bigint::BigUint::from(5u32).pow(k as u32) == *mant).then_some(k)
        }
        _ => None,
    }
}

fn trig_point(f: ElemFn, x: &BigFloat, w: u64) -> ElemValue {
    match x {
        BigFloat::Inf { .. } => return ElemValue::Nan,
        BigFloat::Zero { .. } => {
            return ElemValue::Exact(if f == ElemFn::Cos { BigFloat::one() } else { x.clone() });
        }
        _ => {}
    }
    if let Some(b) = tiny_bounds(f, x) {
        return ElemValue::Enclosed(b);
    }
    let whole = || match f {
        ElemFn::Tan => Bounds::new(BigFloat::Inf { neg: true }, BigFloat::Inf { neg: false }),
        _ => Bounds::new(BigFloat::from_i64(-1), BigFloat::one()),
    };
    let wp = w + 16;
    let Some((k, r)) = reduce_half_pi(x, wp) else {
        return ElemValue::Enclosed(whole());
    };
    let quadrant = k.mod_floor_4();
    let s = || sin_series(&r, wp);
    let c = || cos_series(&r, wp);
    let b = match f {
        ElemFn::Sin => match quadrant {
            0 => s(),
            1 => c(),
            2 => s().neg(),
            _ => c().neg(),
        },
        ElemFn::Cos => match quadrant {
            0 => c(),
            1 => s().neg(),
            2 => c().neg(),
            _ => s(),
        },
        _ => {
            // tan has period pi: odd quadrants give -cot(r).
            let (num, den) = if quadrant % 2 == 0 { (s(), c()) } else { (c().neg(), s()) };
            if den.contains_zero() {
                return ElemValue::Enclosed(whole());
            }
            num.div(&den, wp)
        }
    };
    ElemValue::Enclosed(b.round(w))
}

fn atan_point(x: &BigFloat, w: u64) -> ElemValue {
    match x {
        BigFloat::Zero { .. } => return ElemValue::Exact(x.clone()),
        BigFloat::Inf { neg } => {
            let h = consts::pi(w + 8).expect("table precision").mul_pow2(-1).round(w);
            return ElemValue::Enclosed(if *neg { h.neg() } else { h });
        }
        _ => {}
    }
    if let Some(b) = tiny_bounds(ElemFn::Atan, x) {
        return ElemValue::Enclosed(b);
    }
    ElemValue::Enclosed(atan_bounds(x, w + 16).round(w))
}

fn pow_point(x: &BigFloat, y: &BigFloat, w: u64) -> ElemValue {
    use BigFloat::*;
    let one = BigFloat::one();
    if x.is_negative() {
        return ElemValue::Nan;
    }
    let inf = Inf { neg: false };
    match (x, y) {
        (Zero { .. }, _) => {
            return if y.is_positive() { ElemValue::Exact(BigFloat::ZERO) } else { ElemValue::Nan };
        }
        (Inf { .. }, _) => {
            return ElemValue::Exact(match y {
                Zero { .. } => one,
                _ if y.is_positive() => inf,
                _ => BigFloat::ZERO,
            });
        }
        (_, Inf { neg }) => {
            let above_one = one.lt(x);
            return ElemValue::Exact(if x == &one {
                one
            } else if above_one != *neg {
                inf
            } else {
                BigFloat::ZERO
            });
        }
        (_, Zero { .. }) => return ElemValue::Exact(one),
        _ => {}
    }
    if x == &one {
        return ElemValue::Exact(one);
    }
    if let Some(v) = pow_exact(x, y) {
        return ElemValue::Exact(v);
    }
    // x^y = exp(y log x); size the log precision to the magnitude of the
    // product so the exponent carries `w` correct bits after scaling.
    let lx_mag = log_bounds(x, 64).max_abs().top_exp().unwrap_or(0);
    let p_mag = (lx_mag + y.top_exp().unwrap_or(0)).max(0) as u64;
    let wp = w + 24 + p_mag;
    let lx = log_bounds(x, wp);
    let p = lx.mul(&Bounds::exact(y.clone()), wp);
    let lo = exp_bounds_at(&p.lo, w + 8).lo;
    let hi = exp_bounds_at(&p.hi, w + 8).hi;
    ElemValue::Enclosed(Bounds::new(lo, hi).round(w))
}

/// Exact dyadic value of `x^y` when one exists.
fn pow_exact(x: &BigFloat, y: &BigFloat) -> Option<BigFloat> {
    let BigFloat::Finite { mant: xm, exp: xe, .. } = x else {
        return None;
    };
    let BigFloat::Finite { neg: yneg, mant: ym, exp: ye } = y else {
        return None;
    };
    if xm.is_one() {
        // (2^xe)^y is a power of two exactly when xe*y is an integer.
        let z = BigFloat::from_i64(*xe).mul_exact(y);
        let k = z.to_bigint_exact()?.to_i64()?;
        return (k.abs() <= 1 << EXP_LIMIT_EXP).then(|| BigFloat::pow2(k));
    }
    // y = n / 2^b with n odd.
    let b = (-ye).max(0);
    if b > 6 {
        return None;
    }
    let n = (ym << (*ye + b) as u64).to_u64()?;
    if *yneg || n > 64 {
        // A non-power-of-two base to a negative power is not dyadic, and a
        // large power has too many bits to be a binary64 value.
        return None;
    }
    let mut r = x.clone();
    for _ in 0..b {
        let s = r.sqrt(r.precision() + 2, Dir::Down);
        if s.mul_exact(&s) != r {
            return None;
        }
        r = s;
    }
    let mut acc = BigFloat::one();
    for _ in 0..n {
        acc = acc.mul_exact(&r);
    }
    Some(acc)
}

/// Closed-form strict bounds for tiny nonzero arguments.
fn tiny_bounds(f: ElemFn, x: &BigFloat) -> Option<Bounds> {
    if x.top_exp()? >= -TINY_EXP {
        return None;
    }
    let ax = x.abs();
    let x2 = ax.mul_exact(&ax);
    let x3 = x2.mul_exact(&ax);
    let one = BigFloat::one();
    let odd = |lo: BigFloat, hi: BigFloat| {
        let b = Bounds::new(lo, hi);
        if x.is_negative() {
            b.neg()
        } else {
            b
        }
    };
    Some(match f {
        ElemFn::Exp => {
            let lo = one.add_exact(x);
            let hi = lo.add_exact(&x2);
            Bounds::new(lo, hi)
        }
        ElemFn::Sin => odd(ax.sub_exact(&x3.mul_pow2(-2)), ax.sub_exact(&x3.mul_pow2(-3))),
        ElemFn::Cos => Bounds::new(one.sub_exact(&x2.mul_pow2(-1)), one.sub_exact(&x2.mul_pow2(-2))),
        ElemFn::Tan => odd(ax.add_exact(&x3.mul_pow2(-2)), ax.add_exact(&x3.mul_pow2(-1))),
        ElemFn::Atan => odd(ax.sub_exact(&x3.mul_pow2(-1)), ax.sub_exact(&x3.mul_pow2(-2))),
        _ => return None,
    })
}

/// `exp(x)` for finite `x`, including crude bounds for huge magnitudes.
fn exp_bounds_at(x: &BigFloat, w: u64) -> Bounds {
    match x {
        BigFloat::Zero { .. } => Bounds::exact(BigFloat::one()),
        BigFloat::Inf { neg: false } => Bounds::exact(x.clone()),
        BigFloat::Inf { neg: true } => Bounds::exact(BigFloat::ZERO),
        _ => exp_bounds(x, w),
    }
}

/// `exp(x)` for finite nonzero `x`.
pub(crate) fn exp_bounds(x: &BigFloat, w: u64) -> Bounds {
    if let Some(b) = tiny_bounds(ElemFn::Exp, x) {
        return b;
    }
    let top = x.top_exp().expect("finite nonzero");
    if top >= EXP_LIMIT_EXP {
        let edge = BigFloat::pow2(1 << EXP_LIMIT_EXP);
        return if x.is_negative() {
            Bounds::new(BigFloat::ZERO, BigFloat::one().div(&edge, 64, Dir::Up))
        } else {
            Bounds::new(edge, BigFloat::Inf { neg: false })
        };
    }
    // x = k ln2 + r with |r| <= ln2/2 (roughly), then exp(r) = (exp(r/2^s))^2^s.
    let halvings = ((w as f64).sqrt() as u64 / 2).max(4);
    let wp = w + halvings + 24;
    let wr = wp + top.max(0) as u64 + 16;
    let ln2 = consts::ln2(wr).expect("table precision");
    let k = x.div(&ln2.lo, top.max(0) as u64 + 64, Dir::Down).to_bigint_round();
    let kb = Bounds::exact(BigFloat::from_bigint(&k));
    let r = Bounds::exact(x.clone()).sub(&kb.mul(&ln2, wr), wr).round(wp);
    let t = r.mul_pow2(-(halvings as i64));

    let mut term = Bounds::from_i64(1);
    let mut sum = term.clone();
    let mut n = 1u64;
    loop {
        term = term.mul(&t, wp).div_int(n, wp);
        sum = sum.add(&term, wp);
        if negligible(&term, 0, wp) {
            break;
        }
        n += 1;
    }
    // Tail after the n-th term is at most 2 |term_n| |t| for |t| <= 1/2.
    let tail = term.max_abs().mul(&t.max_abs(), wp, Dir::Up).mul_pow2(1);
    let mut e = sum.widen(&tail, wp);
    if e.lo.is_negative() {
        e.lo = BigFloat::ZERO;
    }
    for _ in 0..halvings {
        e = e.sqr(wp);
    }
    e.mul_pow2(k.to_i64().expect("bounded exponent"))
}

/// `log(x)` for finite positive `x`.
pub(crate) fn log_bounds(x: &BigFloat, w: u64) -> Bounds {
    let wp = w + 16;
    let mut e = x.top_exp().expect("finite nonzero");
    let mut y = x.mul_pow2(-e);
    // Center y on 1: y in [1/sqrt2, sqrt2).
    if BigFloat::from_i64(2).lt(&y.mul_exact(&y)) {
        e += 1;
        y = y.mul_pow2(-1);
    }
    let one = BigFloat::one();
    let s = if y == one {
        Bounds::exact(BigFloat::ZERO)
    } else {
        let num = Bounds::exact(y.sub_exact(&one));
        let den = Bounds::exact(y.add_exact(&one));
        let t = num.div(&den, wp);
        let t2 = t.sqr(wp);
        let scale = t.max_abs().top_exp().expect("nonzero");
        let mut p = t.clone();
        let mut sum = t.clone();
        let mut n = 1u64;
        loop {
            p = p.mul(&t2, wp);
            sum = sum.add(&p.div_int(2 * n + 1, wp), wp);
            if negligible(&p, scale, wp) {
                break;
            }
            n += 1;
        }
        let tail = p.max_abs().mul(&t2.max_abs(), wp, Dir::Up).mul_pow2(1);
        sum.widen(&tail, wp).mul_pow2(1)
    };
    if e == 0 {
        return s.round(w);
    }
    let eb = (e.unsigned_abs() as f64).log2() as u64 + 2;
    let ln2 = consts::ln2(wp + eb).expect("table precision");
    let head = ln2.mul(&Bounds::from_i64(e), wp);
    head.add(&s, wp).round(w)
}

/// `x - k pi/2` with `k` the nearest integer to `x/(pi/2)`, enclosed to
/// relative width `2^-w`. `None` if the constant table is too short.
pub(crate) fn reduce_half_pi(x: &BigFloat, w: u64) -> Option<(BigInt, Bounds)> {
    let ex = x.top_exp()?.max(0) as u64;
    let mut p = w + ex + 64;
    loop {
        let half_pi = consts::pi(p)?.mul_pow2(-1);
        let k = x.div(&half_pi.lo, ex + 64, Dir::Down).to_bigint_round();
        let xb = Bounds::exact(x.clone());
        let r = if k.is_zero() {
            xb
        } else {
            xb.sub(&Bounds::exact(BigFloat::from_bigint(&k)).mul(&half_pi, p), p)
        };
        if r.is_tight(w + 4) {
            return Some((k, r.round(w + 4)));
        }
        p *= 2;
    }
}

trait Mod4 {
    fn mod_floor_4(&self) -> u8;
}

impl Mod4 for BigInt {
    fn mod_floor_4(&self) -> u8 {
        let four = BigInt::from(4);
        let m = ((self % &four) + &four) % &four;
        m.to_u8().expect("small")
    }
}

/// Taylor series of sin on a reduced argument with |r| < 1.
fn sin_series(r: &Bounds, w: u64) -> Bounds {
    if r.width().is_zero() && r.lo.is_zero() {
        return r.clone();
    }
    let r2 = r.sqr(w);
    let scale = r.max_abs().top_exp().unwrap_or(0);
    let mut term = r.clone();
    let mut sum = r.clone();
    let mut n = 1u64;
    loop {
        term = term.mul(&r2, w).div_int((2 * n) * (2 * n + 1), w).neg();
        sum = sum.add(&term, w);
        if negligible(&term, scale, w) {
            break;
        }
        n += 1;
    }
    let tail = term.max_abs().mul(&r2.max_abs(), w, Dir::Up);
    sum.widen(&tail, w)
}

/// Taylor series of cos on a reduced argument with |r| < 1.
fn cos_series(r: &Bounds, w: u64) -> Bounds {
    let r2 = r.sqr(w);
    let mut term = Bounds::from_i64(1);
    let mut sum = term.clone();
    let mut n = 1u64;
    loop {
        term = term.mul(&r2, w).div_int((2 * n - 1) * (2 * n), w).neg();
        sum = sum.add(&term, w);
        if negligible(&term, -1, w) {
            break;
        }
        n += 1;
    }
    let tail = term.max_abs().mul(&r2.max_abs(), w, Dir::Up);
    sum.widen(&tail, w)
}

/// `atan(x)` for finite nonzero `x`.
pub(crate) fn atan_bounds(x: &BigFloat, w: u64) -> Bounds {
    let wp = w + 16;
    let ax = x.abs();
    let one = BigFloat::one();
    let inverted = one.lt(&ax);
    let t = if inverted {
        Bounds::exact(one.clone()).div(&Bounds::exact(ax.clone()), wp)
    } else {
        Bounds::exact(ax.clone())
    };
    let a = atan_small(&t, wp);
    let r = if inverted {
        let half_pi = consts::pi(wp).expect("table precision").mul_pow2(-1);
        half_pi.sub(&a, wp)
    } else {
        a
    };
    let r = r.round(w);
    if x.is_negative() {
        r.neg()
    } else {
        r
    }
}

/// `atan(t)` for `0 < t <= 1` via argument halving and the alternating
/// series.
fn atan_small(t: &Bounds, w: u64) -> Bounds {
    let halvings = ((w as f64).sqrt() as u64 / 4).max(3);
    let wp = w + halvings + 16;
    let one = Bounds::from_i64(1);
    let mut t = t.clone();
    for _ in 0..halvings {
        // atan(t) = 2 atan(t / (1 + sqrt(1 + t^2)))
        let den = one.add(&one.add(&t.sqr(wp), wp).sqrt(wp), wp);
        t = t.div(&den, wp);
    }
    let t2 = t.sqr(wp);
    let scale = t.max_abs().top_exp().unwrap_or(0);
    let mut p = t.clone();
    let mut sum = t.clone();
    let mut n = 1u64;
    loop {
        p = p.mul(&t2, wp);
        let term = p.div_int(2 * n + 1, wp);
        sum = if n % 2 == 1 { sum.sub(&term, wp) } else { sum.add(&term, wp) };
        if negligible(&p, scale, wp) {
            break;
        }
        n += 1;
    }
    let tail = p.max_abs().mul(&t2.max_abs(), wp, Dir::Up);
    sum.widen(&tail, wp).mul_pow2(halvings as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(x: f64) -> BigFloat {
        BigFloat::from_f64(x)
    }

    /// The enclosure rounds outward to two adjacent doubles, one of them
    /// the correctly rounded `rn`.
    fn brackets(b: &Bounds, rn: f64) -> bool {
        let (d, u) = (b.lo.to_f64(Dir::Down), b.hi.to_f64(Dir::Up));
        (d == rn || u == rn) && d.next_up() == u
    }

    fn enclosure(f: ElemFn, args: &[f64], w: u64) -> Bounds {
        let args: Vec<_> = args.iter().map(|&a| bf(a)).collect();
        match elem_enclosure(f, &args, w) {
            ElemValue::Enclosed(b) => b,
            ElemValue::Exact(v) => Bounds::exact(v),
            ElemValue::Nan => panic!("unexpected NaN"),
        }
    }

    /// The enclosure must be tight and lie within one ulp of the host
    /// library's result, which is itself accurate to about an ulp.
    fn near_host(f: ElemFn, x: f64, host: f64) {
        let b = enclosure(f, &[x], 80);
        assert!(b.is_tight(70), "{f:?}({x}) not tight: {b:?}");
        let lo = b.lo.to_f64(Dir::Down);
        let hi = b.hi.to_f64(Dir::Up);
        assert!(lo.next_down() <= host && host <= hi.next_up(), "{f:?}({x}): [{lo}, {hi}] vs {host}");
    }

    #[test]
    fn agree_with_host_library() {
        for &x in &[0.5, 1.0, -3.25, 10.0, 100.0, 700.0, -745.0, 1e-5] {
            near_host(ElemFn::Exp, x, x.exp());
        }
        for &x in &[0.5, 2.0, 3.0, 1e-300, 1e300, 1.0 + 1e-12, 0.999] {
            near_host(ElemFn::Log, x, x.ln());
            near_host(ElemFn::Log2, x, x.log2());
            near_host(ElemFn::Log10, x, x.log10());
        }
        for &x in &[0.5, 1.0, 3.0, -2.0, 1e5, 1e22, 355.0, 1e300] {
            near_host(ElemFn::Sin, x, x.sin());
            near_host(ElemFn::Cos, x, x.cos());
            near_host(ElemFn::Tan, x, x.tan());
        }
        for &x in &[0.25, 1.0, -2.0, 1e10, 1e-10] {
            near_host(ElemFn::Atan, x, x.atan());
        }
    }

    #[test]
    fn pow_cases() {
        let b = enclosure(ElemFn::Pow, &[2.0, 0.5], 80);
        assert!(brackets(&b, std::f64::consts::SQRT_2));
        assert!(b.is_tight(70));
        let exact = enclosure(ElemFn::Pow, &[4.0, 1.5], 80);
        assert_eq!(exact.lo, bf(8.0));
        assert_eq!(exact.hi, bf(8.0));
        let exact = enclosure(ElemFn::Pow, &[8.0, -1.0 / 3.0 * 3.0], 80);
        assert_eq!(exact.lo, bf(0.125));
        let b = enclosure(ElemFn::Pow, &[3.0, -2.0], 80);
        assert!(b.lo.lt(&b.hi) && brackets(&b, 1.0 / 9.0));
        let huge = enclosure(ElemFn::Pow, &[10.0, 400.0], 80);
        assert_eq!(huge.lo.to_f64(Dir::Down), f64::MAX);
        assert!(matches!(elem_enclosure(ElemFn::Pow, &[bf(0.0), bf(0.0)], 64), ElemValue::Nan));
        assert!(matches!(elem_enclosure(ElemFn::Pow, &[bf(-1.0), bf(2.0)], 64), ElemValue::Nan));
    }

    #[test]
    fn identities_bracket() {
        // sin^2 + cos^2 = 1 and exp(log 3) = 3.
        let x = bf(12345.678);
        let s = match elem_enclosure(ElemFn::Sin, std::slice::from_ref(&x), 200) {
            ElemValue::Enclosed(b) => b,
            _ => unreachable!(),
        };
        let c = match elem_enclosure(ElemFn::Cos, &[x], 200) {
            ElemValue::Enclosed(b) => b,
            _ => unreachable!(),
        };
        let one = s.sqr(400).add(&c.sqr(400), 400);
        assert!(one.lo.le(&BigFloat::one()) && BigFloat::one().le(&one.hi));
        assert!(one.is_tight(150));

        let l = log_bounds(&bf(3.0), 200);
        let lo = exp_bounds(&l.lo, 200).lo;
        let hi = exp_bounds(&l.hi, 200).hi;
        assert!(lo.le(&bf(3.0)) && bf(3.0).le(&hi));
    }

    #[test]
    fn tiny_arguments_are_strict() {
        let t = 2f64.powi(-80);
        let b = enclosure(ElemFn::Sin, &[t], 64);
        assert_eq!(b.lo.to_f64(Dir::Down), t.next_down());
        assert_eq!(b.hi.to_f64(Dir::Down), t.next_down());
        assert_eq!(b.hi.to_f64(Dir::Up), t);
        let b = enclosure(ElemFn::Exp, &[-t], 64);
        assert_eq!(b.lo.to_f64(Dir::Up), 1.0);
        assert_eq!(b.hi.to_f64(Dir::Down), 1.0f64.next_down());
    }

    #[test]
    fn exact_logs_and_specials() {
        assert!(matches!(elem_enclosure(ElemFn::Log2, &[bf(1024.0)], 64), ElemValue::Exact(v) if v == bf(10.0)));
        assert!(matches!(elem_enclosure(ElemFn::Log10, &[bf(1000.0)], 64), ElemValue::Exact(v) if v == bf(3.0)));
        assert!(matches!(elem_enclosure(ElemFn::Log, &[bf(0.0)], 64), ElemValue::Exact(BigFloat::Inf { neg: true })));
        assert!(matches!(elem_enclosure(ElemFn::Log, &[bf(-1.0)], 64), ElemValue::Nan));
        assert!(matches!(elem_enclosure(ElemFn::Sin, &[bf(f64::INFINITY)], 64), ElemValue::Nan));
        let b = enclosure(ElemFn::Atan, &[f64::INFINITY], 64);
        assert!(brackets(&b, std::f64::consts::FRAC_PI_2));
        let b = enclosure(ElemFn::Exp, &[1e300], 64);
        assert_eq!(b.lo.to_f64(Dir::Down), f64::MAX);
    }

    #[test]
    fn directed_entry_point() {
        let q = Precision::new(53).unwrap();
        let lo = bf_elem(ElemFn::Exp, Dir::Down, q, &[bf(1.0)]);
        let hi = bf_elem(ElemFn::Exp, Dir::Up, q, &[bf(1.0)]);
        assert_eq!(lo.to_f64(Dir::Down), std::f64::consts::E);
        assert_eq!(hi.to_f64(Dir::Up), std::f64::consts::E.next_up());
    }
}
