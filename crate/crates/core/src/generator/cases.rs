//! Candidate inputs per operation and category. Expected values are
//! attached later by the oracle; here only the inputs are chosen.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::decorations::{enumerate_dec_cases, DecoratedInterval, Decoration};
use crate::fpkernel::{f64_to_hex, from_ordinal, next_down, next_up, ordinal, scale, MAXREAL, MIN_SUBNORMAL};
use crate::interval::Interval;
use crate::itl::{IntervalLit, Literal};
use crate::ops::{Op, OpKind};

use super::fuzz::nearest_half_pi_multiple;
use super::validate::decorated_lit;
use super::Category;

const INF: f64 = f64::INFINITY;

fn pow2(k: i32) -> f64 {
    scale(1.0, k)
}

/// An interval written with hexadecimal bounds, zero signs kept.
fn hex_iv(lo: f64, hi: f64) -> Literal {
    Literal::Interval(IntervalLit::Bounds(f64_to_hex(lo), f64_to_hex(hi)))
}

/// An interval written with short decimal bounds. Only for values whose
/// shortest decimal form is exact.
fn dec_iv(lo: f64, hi: f64) -> Literal {
    Literal::Interval(IntervalLit::Bounds(decimal(lo), decimal(hi)))
}

fn decimal(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "infinity".into() } else { "-infinity".into() };
    }
    format!("{v:?}")
}

fn num(v: f64) -> Literal {
    Literal::Number(f64_to_hex(v))
}

fn empty() -> Literal {
    Literal::Interval(IntervalLit::Empty)
}

fn entire() -> Literal {
    Literal::Interval(IntervalLit::Entire)
}

fn text(s: &str) -> Literal {
    Literal::Text(s.to_string())
}

/// `m * 2^e` with small `m` and `e`: exact in short decimal.
fn nice(rng: &mut ChaCha8Rng) -> f64 {
    let m = rng.random_range(1..=16) as f64;
    let e = rng.random_range(-4..=4);
    let v = m * pow2(e);
    if rng.random_bool(0.3) {
        -v
    } else {
        v
    }
}

fn nice_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (a, b) = (nice(rng), nice(rng));
    (a.min(b), a.max(b))
}

fn bit_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    from_ordinal(rng.random_range(ordinal(lo)..=ordinal(hi)))
}

fn any_finite(rng: &mut ChaCha8Rng) -> f64 {
    bit_uniform(rng, -MAXREAL, MAXREAL)
}

fn sorted(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// How an operation takes its arguments.
enum Shape {
    Intervals(usize),
    /// `is_member`: a number, then an interval.
    Member,
    Text,
    Numbers,
}

fn shape(op: Op) -> Shape {
    match op.kind() {
        OpKind::Parse => Shape::Text,
        OpKind::Construct => Shape::Numbers,
        _ if op == Op::IsMember => Shape::Member,
        _ => Shape::Intervals(op.arity()),
    }
}

/// Category-specific intervals for one argument slot.
/// Special intervals for `cat`. Random categories draw `count` of them.
fn special_intervals(cat: Category, count: usize, rng: &mut ChaCha8Rng) -> Vec<Literal> {
    match cat {
        Category::Easy => (0..count.max(4))
            .map(|_| {
                let (a, b) = nice_pair(rng);
                dec_iv(a, b)
            })
            .collect(),
        Category::SignedZero => {
            let a = nice(rng).abs();
            vec![
                hex_iv(0.0, 0.0),
                hex_iv(-0.0, -0.0),
                hex_iv(-0.0, 0.0),
                hex_iv(0.0, a),
                hex_iv(-0.0, a),
                hex_iv(-a, 0.0),
                hex_iv(-a, -0.0),
                hex_iv(-0.0, INF),
                hex_iv(-INF, 0.0),
            ]
        }
        Category::Infinity => {
            let a = nice(rng).abs();
            vec![hex_iv(-INF, a), hex_iv(a, INF), entire(), hex_iv(-INF, -a), hex_iv(0.0, INF), hex_iv(-INF, 0.0)]
        }
        Category::Overflow => vec![
            hex_iv(0.0, MAXREAL),
            hex_iv(0.75 * MAXREAL, MAXREAL),
            hex_iv(-MAXREAL, -0.75 * MAXREAL),
            hex_iv(-MAXREAL, MAXREAL),
            hex_iv(bit_uniform(rng, pow2(1000), MAXREAL), MAXREAL),
        ],
        Category::Subnormal => {
            let s = bit_uniform(rng, MIN_SUBNORMAL, pow2(-1023));
            let mut v = vec![
                hex_iv(MIN_SUBNORMAL, pow2(-1040)),
                hex_iv(-pow2(-1030), pow2(-1050)),
                hex_iv(s, 1.0),
                hex_iv(-s, s),
                hex_iv(next_down(pow2(-1022)), pow2(-1022)),
            ];
            while v.len() < count {
                let (a, b) = sorted(bit_uniform(rng, MIN_SUBNORMAL, pow2(-1022)), bit_uniform(rng, MIN_SUBNORMAL, pow2(-1022)));
                v.push(hex_iv(a, b));
            }
            v
        }
        Category::Binade => (0..count.div_ceil(4).max(1))
            .flat_map(|_| {
                let k = rng.random_range(-1020..1020);
                let lo = bit_uniform(rng, pow2(k - 1), next_down(pow2(k)));
                let hi = bit_uniform(rng, pow2(k), next_down(pow2(k + 1)));
                [
                    hex_iv(next_down(pow2(k)), next_up(pow2(k))),
                    hex_iv(pow2(k), next_down(pow2(k + 1))),
                    hex_iv(lo, hi),
                    hex_iv(-hi, -lo),
                ]
            })
            .collect(),
        Category::IoForms => {
            let (a, b) = nice_pair(rng);
            let long = |v: f64| format!("{}000000000000000000", decimal(v));
            let expo = |v: f64| format!("{:e}", v);
            vec![
                dec_iv(a, b),
                Literal::Interval(IntervalLit::Bounds(long(a), long(b))),
                Literal::Interval(IntervalLit::Bounds(expo(a), expo(b))),
                Literal::Interval(IntervalLit::Bounds(f64_to_hex(a).to_uppercase(), f64_to_hex(b).to_uppercase())),
                Literal::Interval(IntervalLit::Point(decimal(a))),
                Literal::Interval(IntervalLit::Bounds("0.1".into(), "0.2".into())),
            ]
        }
        Category::Fuzz => (0..count.max(4))
            .map(|_| {
                let (a, b) = sorted(any_finite(rng), any_finite(rng));
                hex_iv(a, b)
            })
            .collect(),
        Category::Nan | Category::TrigReduction | Category::Decorations => Vec::new(),
    }
}

/// Fixed inputs that must appear for particular operations.
fn canon(op: Op, cat: Category) -> Vec<Vec<Literal>> {
    let b = |l: &str, h: &str| Literal::Interval(IntervalLit::bounds(l, h));
    let p = |v: &str| Literal::Interval(IntervalLit::Point(v.to_string()));
    match (op, cat) {
        (Op::Add, Category::Easy) => vec![
            vec![b("-1.0", "1.0"), empty()],
            vec![b("1.0", "2.0"), b("3.0", "infinity")],
            vec![b("1.0", "infinity"), b("-infinity", "4.0")],
            vec![p("0X1.FFFFFFFFFFFFP+0"), p("0X1.999999999999AP-4")],
        ],
        (Op::Div, Category::Easy) => vec![vec![empty(), empty()], vec![b("-30.0", "15.0"), entire()]],
        (Op::Mul, Category::Overflow) => vec![
            vec![hex_iv(0.0, MAXREAL), hex_iv(0.0, MAXREAL)],
            vec![hex_iv(0.75 * MAXREAL, MAXREAL), hex_iv(0.75 * MAXREAL, MAXREAL)],
        ],
        (Op::Sqr, Category::Overflow) => vec![vec![hex_iv(pow2(511), pow2(513))]],
        (Op::Exp, Category::Overflow) => vec![vec![hex_iv(709.0, 710.0)], vec![hex_iv(709.75, 709.8125)]],
        (Op::Pow, Category::Overflow) => vec![vec![hex_iv(2.0, 4.0), hex_iv(1000.0, 1100.0)]],
        (Op::Recip, Category::Overflow) => vec![vec![hex_iv(MIN_SUBNORMAL, 1.0)]],
        (Op::Exp, Category::Subnormal) => {
            vec![vec![hex_iv(-740.0, -730.0)], vec![hex_iv(-745.25, -744.0)], vec![hex_iv(-708.5, -708.0)]]
        }
        (Op::Log | Op::Log2 | Op::Log10, Category::Subnormal) => {
            vec![vec![hex_iv(MIN_SUBNORMAL, pow2(-1060))], vec![hex_iv(pow2(-1070), 1.0)]]
        }
        (Op::Mul, Category::Subnormal) => vec![vec![hex_iv(pow2(-600), pow2(-599)), hex_iv(pow2(-500), pow2(-499))]],
        (Op::Div, Category::Subnormal) => vec![vec![hex_iv(MIN_SUBNORMAL, MIN_SUBNORMAL), hex_iv(2.0, 3.0)]],
        _ => Vec::new(),
    }
}

/// Interval-slot candidates: each special interval in turn, in each slot,
/// with easy intervals elsewhere.
fn interval_candidates(op: Op, cat: Category, arity: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Literal>> {
    let mut out = canon(op, cat);
    let specials = special_intervals(cat, count, rng);
    for (i, s) in specials.into_iter().enumerate() {
        let slot = i % arity;
        let args = (0..arity)
            .map(|j| {
                if j == slot {
                    s.clone()
                } else {
                    let (a, b) = nice_pair(rng);
                    dec_iv(a, b)
                }
            })
            .collect();
        out.push(args);
    }
    out
}

fn trig_candidates(count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Literal>> {
    let mut out = Vec::new();
    let multiples = count.div_ceil(3).max(1);
    for j in 0..multiples {
        let k = match j {
            0 => 1,
            1 => 1_000_000,
            _ => rng.random_range(2..=1_000_000),
        };
        let c = nearest_half_pi_multiple(k);
        for v in [next_down(c), c, next_up(c)] {
            out.push(vec![hex_iv(v, v)]);
        }
    }
    out
}

/// Decorated witnesses from the combinatorial enumeration, spread evenly.
fn decoration_candidates(op: Op, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Literal>>, String> {
    if op.kind() == OpKind::Set {
        let decs = [Decoration::Com, Decoration::Dac, Decoration::Def, Decoration::Trv];
        return Ok((0..count)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        let (a, b) = nice_pair(rng);
                        let x = Interval::new(a, b).expect("ordered");
                        decorated_lit(&DecoratedInterval::new(x, decs[(i + j) % 4]).expect("bounded"))
                    })
                    .collect()
            })
            .collect());
    }
    let e = enumerate_dec_cases(op).map_err(|e| e.to_string())?;
    let n = e.cases.len();
    let step = (n / count.max(1)).max(1);
    Ok(e.cases.iter().step_by(step).map(|c| c.inputs.iter().map(decorated_lit).collect()).collect())
}

fn number_candidates(cat: Category, count: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match cat {
        Category::Easy | Category::IoForms => (0..count.max(4)).map(|_| nice(rng)).collect(),
        Category::SignedZero => vec![0.0, -0.0],
        Category::Infinity => vec![INF, -INF],
        Category::Nan => vec![f64::NAN],
        Category::Overflow => vec![MAXREAL, -MAXREAL],
        Category::Subnormal => vec![MIN_SUBNORMAL, -bit_uniform(rng, MIN_SUBNORMAL, pow2(-1023))],
        Category::Binade => {
            let k = rng.random_range(-1020..1020);
            vec![next_down(pow2(k)), pow2(k)]
        }
        Category::Fuzz => (0..count.max(4)).map(|_| any_finite(rng)).collect(),
        Category::TrigReduction | Category::Decorations => Vec::new(),
    }
}

fn text_candidates(cat: Category, rng: &mut ChaCha8Rng) -> Vec<Literal> {
    let (a, b) = nice_pair(rng);
    let (da, db) = (decimal(a), decimal(b));
    match cat {
        Category::Easy => vec![text(&format!("[{da}, {db}]")), text(&format!("[{da}]")), text("[]"), text("[entire]")],
        Category::SignedZero => vec![text("[-0, +0]"), text("[-0.0, -0.0]"), text(&format!("[-0, {db}]"))],
        Category::Infinity => vec![text(&format!("[-inf, {db}]")), text(&format!("[{da}, +infinity]")), text("[-Infinity, Inf]")],
        Category::Nan => vec![text("[nan, 1]"), text("[1, NaN]")],
        Category::Overflow => vec![text("[1e308, 1e309]"), text("[-1e400, -1e300]"), text("[1e309, 1e310]")],
        Category::Subnormal => vec![text("[4.9e-324, 1e-320]"), text("[-2.2250738585072011e-308, 0]")],
        Category::Binade => {
            let k = rng.random_range(-60..60);
            vec![text(&format!("[{}, {}]", decimal(pow2(k)), decimal(next_up(pow2(k)))))]
        }
        Category::IoForms => {
            // Three field lengths per numeric field.
            let long = |s: &str| format!("{s}{}", "0".repeat(24));
            vec![
                text(&format!("[{da}, {db}]")),
                text(&format!("[{}, {}]", long(&da), long(&db))),
                text(&format!("[{a:e}, {b:e}]")),
                text(&format!("[{}, {}]", f64_to_hex(a), f64_to_hex(b))),
                text(&format!("[ {da} , {db} ]")),
                text("[0.1, 0.1]"),
                text("[0.33333333333333333333333333333333333333]"),
                text(&format!("[{db}, {da}]")),
                text("[1, 2, 3]"),
            ]
        }
        Category::Fuzz => {
            let (x, y) = sorted(any_finite(rng), any_finite(rng));
            vec![text(&format!("[{}, {}]", f64_to_hex(x), f64_to_hex(y)))]
        }
        Category::TrigReduction | Category::Decorations => Vec::new(),
    }
}

/// Candidate input lists for `op` in `cat`, or why the category does not
/// apply to it.
pub(super) fn candidates(op: Op, cat: Category, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Literal>>, String> {
    let na = |why: &str| Err(format!("{cat} does not apply to {op}: {why}"));
    match cat {
        Category::TrigReduction => {
            return if matches!(op, Op::Sin | Op::Cos | Op::Tan) {
                Ok(trig_candidates(count, rng))
            } else {
                na("not a periodic function")
            };
        }
        Category::Decorations => {
            return match op.kind() {
                OpKind::Arith | OpKind::Elem | OpKind::Set if op.arity() <= 2 => decoration_candidates(op, count, rng),
                OpKind::Arith => na("ternary operations are not enumerated"),
                _ => na("not an interval-valued operation"),
            };
        }
        _ => {}
    }
    Ok(match shape(op) {
        Shape::Intervals(_) if cat == Category::Nan => {
            if op.kind() == OpKind::Numeric {
                vec![vec![empty()]]
            } else {
                return na("no NaN can reach an interval argument");
            }
        }
        Shape::Intervals(n) => interval_candidates(op, cat, n, count, rng),
        Shape::Member => {
            let xs = number_candidates(cat, count, rng);
            let mut ivs = special_intervals(cat, count, rng);
            ivs.push(entire());
            xs.iter().enumerate().map(|(i, &x)| vec![num(x), ivs[i % ivs.len()].clone()]).collect()
        }
        Shape::Numbers => {
            let xs = number_candidates(cat, count, rng);
            let mut out = Vec::new();
            for (i, &x) in xs.iter().enumerate() {
                let y = xs[(i + 1) % xs.len()];
                out.push(vec![num(x), num(y)]);
                let other = nice(rng);
                out.push(vec![num(x.min(other)), num(if x.is_nan() { other } else { x.max(other) })]);
            }
            out
        }
        Shape::Text => text_candidates(cat, rng).into_iter().map(|t| vec![t]).collect(),
    })
}
