//! Randomised inclusion checks.
//!
//! For an operation `F` and input box `X`, points are drawn from `X` and two
//! things are checked at each: the host's round-to-nearest value of `f` at
//! the point lies in `F(X)` up to one ulp either way, and the provider's
//! own `F` on the point interval stays inside `F(X)`. One last verdict
//! screens the width of `F(X)` against the oracle in valid mode.

use std::panic::{self, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fpkernel::{f64_to_hex, from_ordinal, next_down, next_up, ordinal, MAXREAL};
use crate::harness::{Capability, Provider, Value};
use crate::interval::{self, Interval};
use crate::judge::{judge_interval, AccuracyMode, Status, Verdict};
use crate::ops::{Op, OpKind};
use crate::oracle::{pi, tightest_eval};

const MIN_NORMAL: f64 = f64::MIN_POSITIVE;

/// Uniform over the bit patterns from `lo` to `hi`.
fn bit_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    from_ordinal(rng.random_range(ordinal(lo)..=ordinal(hi)))
}

/// `n` points of `x` (at least its special points): the bounds, with
/// infinite ones replaced by `±MAXREAL`, zero when contained, a subnormal
/// when the interval reaches one, the rest uniform over bit patterns.
pub fn sample_points(x: &Interval, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    if x.is_empty() {
        return Vec::new();
    }
    let lo = x.lo().max(-MAXREAL);
    let hi = x.hi().min(MAXREAL);
    let mut pts = vec![lo, hi];
    if x.contains_zero() {
        pts.push(0.0);
    }
    let (sl, sh) = (lo.max(-next_down(MIN_NORMAL)), hi.min(next_down(MIN_NORMAL)));
    if sl <= sh && (sl != 0.0 || sh != 0.0) {
        let s = bit_uniform(rng, sl, sh);
        pts.push(if s == 0.0 { if sh > 0.0 { f64::from_bits(1) } else { -f64::from_bits(1) } } else { s });
    }
    while pts.len() < n {
        pts.push(bit_uniform(rng, lo, hi));
    }
    pts
}

/// Whether `f` is defined at the point.
fn defined(op: Op, p: &[f64]) -> bool {
    match op {
        Op::Div => p[1] != 0.0,
        Op::Recip => p[0] != 0.0,
        Op::Sqrt => p[0] >= 0.0,
        Op::Log | Op::Log2 | Op::Log10 => p[0] > 0.0,
        Op::Pow => p[0] > 0.0 || (p[0] == 0.0 && p[1] > 0.0),
        _ => true,
    }
}

/// The host's round-to-nearest value of `f` at a point.
fn host(op: Op, p: &[f64]) -> f64 {
    match op {
        Op::Neg => -p[0],
        Op::Add => p[0] + p[1],
        Op::Sub => p[0] - p[1],
        Op::Mul => p[0] * p[1],
        Op::Div => p[0] / p[1],
        Op::Recip => 1.0 / p[0],
        Op::Sqr => p[0] * p[0],
        Op::Sqrt => p[0].sqrt(),
        Op::Fma => p[0].mul_add(p[1], p[2]),
        Op::Exp => p[0].exp(),
        Op::Log => p[0].ln(),
        Op::Log2 => p[0].log2(),
        Op::Log10 => p[0].log10(),
        Op::Sin => p[0].sin(),
        Op::Cos => p[0].cos(),
        Op::Tan => p[0].tan(),
        Op::Atan => p[0].atan(),
        Op::Pow => p[0].powf(p[1]),
        _ => unreachable!("not a point function"),
    }
}

fn describe(p: &[f64]) -> String {
    p.iter().map(|&v| f64_to_hex(v)).collect::<Vec<_>>().join(" ")
}

fn call(provider: &dyn Provider, op: Op, args: &[Interval]) -> Result<Interval, String> {
    let vals: Vec<Value> = args.iter().map(|&x| Value::Interval(x)).collect();
    match panic::catch_unwind(AssertUnwindSafe(|| provider.evaluate(op, &vals))) {
        Ok(o) => match o.values.first() {
            Some(Value::Interval(x)) => Ok(*x),
            Some(Value::Decorated(d)) => Ok(d.interval()),
            other => Err(format!("non-interval result {other:?}")),
        },
        Err(_) => Err("provider panicked".into()),
    }
}

/// Checks `op` over the box `args` at `n` points per input, drawn with
/// `seed`. Returns one verdict per point and a final width screen.
pub fn fuzz_check(provider: &dyn Provider, op: Op, args: &[Interval], n: usize, seed: u64) -> Vec<Verdict> {
    assert!(n >= 1, "at least one point");
    let mode = AccuracyMode::valid(1.0);
    let box_text = args.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let verdict = |status, reason: String, observed: String| Verdict::new(status, reason, observed, box_text.clone(), mode);
    if !matches!(op.kind(), OpKind::Arith | OpKind::Elem) || args.len() != op.arity() {
        return vec![verdict(Status::Error, format!("{op} cannot be fuzzed on {} inputs", args.len()), String::new())];
    }
    if provider.capability(op) == Capability::Absent {
        return vec![verdict(Status::SkipUnsupported, format!("{op} not provided"), String::new())];
    }
    let whole = match call(provider, op, args) {
        Ok(x) => x,
        Err(e) => return vec![verdict(Status::Error, format!("on the whole box: {e}"), String::new())],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let axes: Vec<Vec<f64>> = args.iter().map(|x| sample_points(x, n, &mut rng)).collect();
    let count = axes.iter().map(Vec::len).min().unwrap_or(0);
    let mut out = Vec::with_capacity(count + 1);
    for i in 0..count {
        let p: Vec<f64> = axes.iter().map(|a| a[i]).collect();
        let at = describe(&p);
        if !defined(op, &p) {
            out.push(verdict(Status::Pass, String::new(), at));
            continue;
        }
        let v = host(op, &p);
        let near = v.is_nan() || (whole.hi() >= next_down(v) && whole.lo() <= next_up(v));
        if !near {
            let why = format!("f({at}) = {} lies outside {whole}", f64_to_hex(v));
            out.push(verdict(Status::Fail, why, at));
            continue;
        }
        let points: Vec<Interval> = p.iter().map(|&x| Interval::new(x, x).expect("finite point")).collect();
        out.push(match call(provider, op, &points) {
            Err(e) => verdict(Status::Error, format!("at {at}: {e}"), at),
            Ok(y) if interval::subset(&y, &whole) => verdict(Status::Pass, String::new(), at),
            Ok(y) => verdict(Status::Fail, format!("F({at}) = {y} escapes {whole}"), at),
        });
    }
    out.push(match tightest_eval(op, args) {
        Ok(t) => judge_interval(&whole, &t.interval, mode),
        Err(e) => verdict(Status::Error, e.to_string(), whole.to_string()),
    });
    out
}

/// One entry of the seeded fuzzing corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzCase {
    pub op: Op,
    pub args: Vec<Interval>,
}

/// Nearest binary64 value to `k * pi / 2`.
pub fn nearest_half_pi_multiple(k: i64) -> f64 {
    let mut w = 128;
    loop {
        let b = pi(w).expect("within table").mul(&crate::oracle::Bounds::from_i64(k), w).mul_pow2(-1);
        let (a, c) = (b.lo.to_f64_nearest(), b.hi.to_f64_nearest());
        if a == c {
            return a;
        }
        w *= 2;
    }
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo.min(hi), lo.max(hi)).expect("valid bounds")
}

/// A random interval of the given theme for `op`.
fn themed(theme: usize, rng: &mut ChaCha8Rng) -> Interval {
    let pow2 = |k: i32| crate::fpkernel::scale(1.0, k);
    match theme {
        // Wide, across many binades.
        0 => {
            let (a, b) = (rng.random_range(-40..0), rng.random_range(1..40));
            iv(pow2(a), pow2(b))
        }
        // Around zero, through the subnormals.
        1 => {
            let a = bit_uniform(rng, -pow2(-1000), -f64::from_bits(1));
            let b = bit_uniform(rng, f64::from_bits(1), pow2(-1030));
            iv(a, b)
        }
        // Near the top of the range.
        2 => iv(bit_uniform(rng, pow2(1000), MAXREAL), MAXREAL),
        // Anything.
        _ => {
            let mut r = || loop {
                let v = f64::from_bits(rng.random::<u64>());
                if v.is_finite() {
                    return v;
                }
            };
            iv(r(), r())
        }
    }
}

const FUZZ_OPS: [Op; 18] = [
    Op::Neg,
    Op::Add,
    Op::Sub,
    Op::Mul,
    Op::Div,
    Op::Recip,
    Op::Sqr,
    Op::Sqrt,
    Op::Fma,
    Op::Exp,
    Op::Log,
    Op::Log2,
    Op::Log10,
    Op::Sin,
    Op::Cos,
    Op::Tan,
    Op::Atan,
    Op::Pow,
];

/// Fifty cases: every fuzzable operation over binade-spanning, subnormal
/// and near-overflow boxes, plus sin, cos and tan around multiples of
/// `pi/2` up to `10^6`.
pub fn fuzz_corpus(seed: u64) -> Vec<FuzzCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (i, &op) in FUZZ_OPS.iter().cycle().take(38).enumerate() {
        let args = (0..op.arity()).map(|j| themed((i + j) % 4, &mut rng)).collect();
        out.push(FuzzCase { op, args });
    }
    for j in 0..12 {
        let k = if j < 4 { j as i64 + 1 } else { rng.random_range(1..=1_000_000) };
        let c = nearest_half_pi_multiple(k);
        let spread = rng.random_range(1..1 << 20) as f64 * crate::fpkernel::ulp(c);
        let op = [Op::Sin, Op::Cos, Op::Tan][j % 3];
        out.push(FuzzCase { op, args: vec![iv(c - spread, c + spread)] });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{ConstantEntire, Reference};

    #[test]
    fn special_points_come_first() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = sample_points(&iv(-1.0, f64::INFINITY), 10, &mut rng);
        assert_eq!(p.len(), 10);
        assert_eq!(&p[..3], &[-1.0, MAXREAL, 0.0]);
        assert!(p[3] != 0.0 && p[3].abs() < MIN_NORMAL);
        assert!(p.iter().all(|&v| (-1.0..=MAXREAL).contains(&v)));
        let q = sample_points(&iv(1.0, 2.0), 5, &mut rng);
        assert_eq!(q.len(), 5);
        assert!(sample_points(&Interval::EMPTY, 5, &mut rng).is_empty());
    }

    #[test]
    fn reference_sin_passes() {
        let v = fuzz_check(&Reference, Op::Sin, &[iv(0.0, 7.0)], 1000, 3);
        assert_eq!(v.len(), 1001);
        assert!(v.iter().all(Verdict::is_pass), "{:?}", v.iter().find(|x| !x.is_pass()));
    }

    #[test]
    fn reference_exp_through_overflow() {
        let v = fuzz_check(&Reference, Op::Exp, &[iv(709.0, 710.0)], 100, 4);
        assert!(v.iter().all(Verdict::is_pass));
    }

    #[test]
    fn entire_stub_only_fails_the_screen() {
        let v = fuzz_check(&ConstantEntire, Op::Add, &[iv(1.0, 2.0), iv(3.0, 4.0)], 10, 5);
        let (last, points) = v.split_last().unwrap();
        assert!(points.iter().all(Verdict::is_pass));
        assert_eq!(last.status, Status::Fail);
    }

    #[test]
    fn half_pi_multiples() {
        assert_eq!(nearest_half_pi_multiple(1), std::f64::consts::FRAC_PI_2);
        assert_eq!(nearest_half_pi_multiple(2), std::f64::consts::PI);
        assert_eq!(nearest_half_pi_multiple(-4), -2.0 * std::f64::consts::PI);
    }

    #[test]
    fn corpus_is_seeded() {
        let c = fuzz_corpus(9);
        assert_eq!(c.len(), 50);
        assert_eq!(c, fuzz_corpus(9));
        assert!(c.iter().all(|f| f.args.len() == f.op.arity()));
    }
}
