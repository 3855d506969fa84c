//! Systematic decoration test cases and an independent check of them.

use itertools::Itertools;

use crate::fpkernel::{from_ordinal, ordinal, MAXREAL};
use crate::interval::{self, Interval};
use crate::ops::{Op, OpKind};
use crate::oracle::tightest_eval;

use super::{dec_op, DecoratedInterval, Decoration, DecorationError};

/// One decorated witness: inputs and the propagated output.
#[derive(Clone, Debug, PartialEq)]
pub struct DecCase {
    pub op: Op,
    pub inputs: Vec<DecoratedInterval>,
    pub output: DecoratedInterval,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecEnumeration {
    pub op: Op,
    pub cases: Vec<DecCase>,
    /// Combinations (input decorations, output decoration) with no witness.
    pub unreachable: Vec<(Vec<Decoration>, Decoration)>,
}

fn iv(l: f64, h: f64) -> Interval {
    Interval::new(l, h).expect("valid")
}

/// Candidate bare inputs: signs, zero, domain edges, poles, overflow and
/// unbounded shapes.
fn pool() -> Vec<Interval> {
    vec![
        iv(1.0, 2.0),
        iv(0.1, 0.2),
        iv(-2.0, -1.0),
        iv(-1.0, 4.0),
        iv(0.0, 0.0),
        iv(0.0, 1.0),
        iv(-1.0, 0.0),
        iv(1.5, 1.6),
        iv(700.0, 710.0),
        iv(1e300, 1e308),
        iv(1.0, f64::INFINITY),
        iv(f64::NEG_INFINITY, -1.0),
        Interval::ENTIRE,
        Interval::EMPTY,
    ]
}

/// Whether a bare interval may carry `dec`.
fn admits(x: &Interval, dec: Decoration) -> bool {
    DecoratedInterval::new(*x, dec).is_ok()
}

/// For every combination of input decorations and output decoration, the
/// first witness found in a fixed candidate pool. Combinations without a
/// witness are listed as unreachable. Only unary and binary arithmetic and
/// elementary operations are enumerated.
pub fn enumerate_dec_cases(op: Op) -> Result<DecEnumeration, DecorationError> {
    if !matches!(op.kind(), OpKind::Arith | OpKind::Elem) || op.arity() > 2 {
        return Err(DecorationError::NotDecorated(op));
    }
    let arity = op.arity();
    let pool = pool();
    let mut cases = Vec::new();
    let mut unreachable = Vec::new();
    for decs in (0..arity).map(|_| Decoration::ALL).multi_cartesian_product() {
        let choices: Vec<Vec<DecoratedInterval>> = decs
            .iter()
            .map(|&dec| {
                if dec == Decoration::Ill {
                    vec![DecoratedInterval::NAI]
                } else {
                    pool.iter().filter(|x| admits(x, dec)).map(|&x| DecoratedInterval::new(x, dec).expect("admitted")).collect()
                }
            })
            .collect();
        let mut found: Vec<Option<DecCase>> = vec![None; Decoration::ALL.len()];
        for inputs in choices.into_iter().multi_cartesian_product() {
            let output = dec_op(op, &inputs)?;
            let slot = &mut found[output.dec() as usize];
            if slot.is_none() && bare_part_agrees(op, &inputs, &output) {
                *slot = Some(DecCase { op, inputs, output });
            }
        }
        for (out, case) in Decoration::ALL.into_iter().zip(found) {
            match case {
                Some(c) => cases.push(c),
                None => unreachable.push((decs.clone(), out)),
            }
        }
    }
    Ok(DecEnumeration { op, cases, unreachable })
}

/// The bare output matches the oracle: exactly for arithmetic, within the
/// one-ulp band for elementary functions.
fn bare_part_agrees(op: Op, inputs: &[DecoratedInterval], output: &DecoratedInterval) -> bool {
    if output.is_nai() {
        return true;
    }
    let bare: Vec<Interval> = inputs.iter().map(|d| d.interval()).collect();
    let Ok(t) = tightest_eval(op, &bare) else {
        return false;
    };
    let got = output.interval();
    if op.kind() == OpKind::Arith {
        return t.certified && got == t.interval;
    }
    let band = t.interval.next_out();
    interval::subset(&t.interval, &got) && interval::subset(&got, &band)
}

/// Sample points of `x`: both bounds (infinite ones replaced by
/// `±MAXREAL`), zero when contained, and points spread uniformly over the
/// bit patterns in between.
fn grid(x: &Interval, n: usize) -> Vec<f64> {
    let lo = x.lo().max(-MAXREAL);
    let hi = x.hi().min(MAXREAL);
    let mut pts = vec![lo, hi];
    if x.contains_zero() {
        pts.push(0.0);
    }
    let (a, b) = (ordinal(lo) as i128, ordinal(hi) as i128);
    for i in 1..n {
        pts.push(from_ordinal((a + (b - a) * i as i128 / n as i128) as i64));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|p, q| p == q);
    pts
}

/// Decoration of a case recomputed by sampling, without the analytic domain
/// rules: a grid point where the oracle's result is empty lies outside the
/// domain, and a bounded grid cell whose oracle image is the whole line
/// contains a pole.
pub fn brute_force_dec(op: Op, inputs: &[DecoratedInterval], output: &Interval) -> Decoration {
    if inputs.iter().any(DecoratedInterval::is_nai) {
        return Decoration::Ill;
    }
    let inherited = inputs.iter().map(|d| d.dec()).min().expect("nonempty");
    let bare: Vec<Interval> = inputs.iter().map(|d| d.interval()).collect();
    if bare.iter().any(Interval::is_empty) {
        return inherited.min(Decoration::Trv);
    }
    let n = if bare.len() == 1 { 48 } else { 8 };
    let axes: Vec<Vec<f64>> = bare.iter().map(|x| grid(x, n)).collect();
    let eval = |args: &[Interval]| tightest_eval(op, args).expect("interval op").interval;
    let mut defined = axes
        .iter()
        .map(|a| a.iter().copied())
        .multi_cartesian_product()
        .all(|p| !eval(&p.iter().map(|&v| iv(v, v)).collect::<Vec<_>>()).is_empty());
    if defined {
        let cells: Vec<Vec<Interval>> =
            axes.iter().map(|a| a.windows(2).map(|w| iv(w[0], w[1])).collect()).collect();
        defined = cells.into_iter().multi_cartesian_product().all(|cell| !eval(&cell).is_entire());
    }
    let local = if !defined {
        Decoration::Trv
    } else if bare.iter().all(Interval::is_bounded) && output.is_bounded() {
        Decoration::Com
    } else {
        Decoration::Dac
    };
    inherited.min(local)
}
