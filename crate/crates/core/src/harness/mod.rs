//! Running suites against providers.
//!
//! Each assertion is resolved to an operation, checked against the
//! provider's capability table, evaluated and judged. Assertions for
//! another flavor are skipped, as are operations the provider lacks; a
//! panicking provider yields an error verdict for that assertion only.

mod provider;
mod report;
pub mod wire;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::decorations::new_dec;
use crate::interval::{text_to_interval, Signal};
use crate::itl::{self, Assertion, IntervalLit, Literal, TestCase, TestSuite, DEFAULT_FLAVOR};
use crate::judge::{
    judge_boolean, judge_decorated, judge_interval, judge_numeric, judge_signal, AccuracyMode, Status, Verdict,
};
use crate::ops::{Op, OpKind};

pub use provider::{
    provider_by_name, Capability, ConstantEntire, Crashy, Echo, NextOut, NoDiv, Outcome, Provider, Reference, Value,
    PROVIDER_NAMES,
};
pub use report::{render_report, Format};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Replaces every assertion's own accuracy mode.
    pub mode: Option<AccuracyMode>,
    /// Keeps only assertions whose testcase name or operation matches.
    pub filter: Option<glob::Pattern>,
    /// Worker threads; 0 and 1 both mean sequential.
    pub jobs: usize,
}

/// Where a suite came from: its name, path as given and the SHA-256 of
/// its canonical text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteId {
    pub name: String,
    pub path: Option<PathBuf>,
    pub sha256: String,
}

impl SuiteId {
    pub fn of(suite: &TestSuite) -> SuiteId {
        let digest = Sha256::digest(itl::serialize(suite).as_bytes());
        SuiteId { name: suite.name.clone(), path: suite.path.clone(), sha256: hex::encode(digest) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssertionResult {
    pub suite: String,
    pub testcase: String,
    /// Position within the testcase, from 1.
    pub index: usize,
    pub line: u32,
    pub op: String,
    pub inputs: String,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub skip_unsupported: usize,
    pub skip_flavor: usize,
    pub error: usize,
}

impl Totals {
    fn count(&mut self, s: Status) {
        match s {
            Status::Pass => self.pass += 1,
            Status::Fail => self.fail += 1,
            Status::SkipUnsupported => self.skip_unsupported += 1,
            Status::SkipFlavor => self.skip_flavor += 1,
            Status::Error => self.error += 1,
        }
    }

    pub fn skipped(&self) -> usize {
        self.skip_unsupported + self.skip_flavor
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.skipped() + self.error
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub provider: String,
    pub suites: Vec<SuiteId>,
    pub results: Vec<AssertionResult>,
    pub totals: Totals,
    /// Not rendered, so that reports stay reproducible.
    pub wall_time: Duration,
}

impl Report {
    /// Concatenates reports for one provider in the order given.
    pub fn merge(reports: Vec<Report>) -> Report {
        let mut out = Report {
            provider: reports.first().map(|r| r.provider.clone()).unwrap_or_default(),
            suites: Vec::new(),
            results: Vec::new(),
            totals: Totals::default(),
            wall_time: Duration::ZERO,
        };
        for r in reports {
            out.suites.extend(r.suites);
            out.results.extend(r.results);
            out.wall_time += r.wall_time;
        }
        out.totals = tally(&out.results);
        out
    }

    /// 0 when nothing failed or errored, 1 otherwise. Skips do not count.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.totals.fail + self.totals.error > 0)
    }
}

fn tally(results: &[AssertionResult]) -> Totals {
    let mut t = Totals::default();
    for r in results {
        t.count(r.verdict.status);
    }
    t
}

pub fn run_suite(provider: &dyn Provider, suite: &TestSuite, mode: Option<AccuracyMode>) -> Report {
    run_suite_with(provider, suite, &RunOptions { mode, ..RunOptions::default() })
}

pub fn run_suite_with(provider: &dyn Provider, suite: &TestSuite, opts: &RunOptions) -> Report {
    let start = Instant::now();
    let block = |tc: &TestCase| run_testcase(provider, &suite.name, tc, opts);
    let parallel = opts.jobs > 1 && provider.concurrency_safe();
    let per_case: Vec<Vec<AssertionResult>> = if parallel {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().expect("thread pool");
        pool.install(|| suite.testcases.par_iter().map(block).collect())
    } else {
        suite.testcases.iter().map(block).collect()
    };
    let results: Vec<AssertionResult> = per_case.into_iter().flatten().collect();
    Report {
        provider: provider.name().to_string(),
        suites: vec![SuiteId::of(suite)],
        totals: tally(&results),
        results,
        wall_time: start.elapsed(),
    }
}

fn run_testcase(provider: &dyn Provider, suite: &str, tc: &TestCase, opts: &RunOptions) -> Vec<AssertionResult> {
    let selected = |a: &Assertion| match &opts.filter {
        None => true,
        Some(p) => p.matches(&tc.name) || p.matches(&a.op),
    };
    tc.assertions
        .iter()
        .enumerate()
        .filter(|(_, a)| selected(a))
        .map(|(i, a)| {
            let (inputs, verdict) = execute(provider, a, opts.mode);
            AssertionResult {
                suite: suite.to_string(),
                testcase: tc.name.clone(),
                index: i + 1,
                line: a.line,
                op: a.op.clone(),
                inputs,
                verdict,
            }
        })
        .collect()
}

fn literals_text(lits: &[Literal]) -> String {
    lits.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

fn values_text(vals: &[Value]) -> String {
    vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn is_decorated_literal(l: &Literal) -> bool {
    matches!(l, Literal::Decorated(..) | Literal::Interval(IntervalLit::Nai))
}

/// Converts an input literal to the value shape `op` takes at `pos`.
fn input_value(op: Op, pos: usize, lit: &Literal, decorated: bool) -> Result<Value, String> {
    let err = |e: itl::LiteralError| e.to_string();
    let interval = |lit: &Literal| -> Result<Value, String> {
        if decorated {
            match lit {
                Literal::Interval(IntervalLit::Nai) | Literal::Decorated(..) => lit.as_decorated().map(Value::Decorated).map_err(err),
                _ => lit.as_interval().map(|x| Value::Decorated(new_dec(x))).map_err(err),
            }
        } else if let Literal::Decorated(..) = lit {
            lit.as_decorated().map(|d| Value::Interval(d.interval())).map_err(err)
        } else {
            lit.as_interval().map(Value::Interval).map_err(err)
        }
    };
    match op.kind() {
        OpKind::Parse => lit.as_text().map(|s| Value::Text(s.to_string())).map_err(err),
        OpKind::Construct => lit.as_number().map(Value::Number).map_err(err),
        OpKind::Boolean if op == Op::IsMember && pos == 0 => lit.as_number().map(Value::Number).map_err(err),
        _ => interval(lit),
    }
}

/// Judges one computed value against one expected literal.
fn judge_value(computed: &Value, expected: &Literal, mode: AccuracyMode) -> Verdict {
    let mismatch = |what: &str| {
        Verdict::new(Status::Fail, format!("expected a {what} result"), computed.to_string(), expected.to_string(), mode)
    };
    let bad = |e: itl::LiteralError| {
        Verdict::new(Status::Error, format!("invalid expected literal: {e}"), computed.to_string(), expected.to_string(), mode)
    };
    match expected {
        Literal::Interval(IntervalLit::Nai) | Literal::Decorated(..) => match (computed, expected.as_decorated()) {
            (Value::Decorated(c), Ok(e)) => judge_decorated(c, &e, mode),
            (_, Err(e)) => bad(e),
            _ => mismatch("decorated interval"),
        },
        Literal::Interval(_) => match (computed, expected.as_interval()) {
            (Value::Interval(c), Ok(e)) => judge_interval(c, &e, mode),
            (Value::Decorated(c), Ok(e)) if !c.is_nai() => judge_interval(&c.interval(), &e, mode),
            (_, Err(e)) => bad(e),
            _ => mismatch("interval"),
        },
        Literal::Number(_) => match (computed, expected.as_number()) {
            (Value::Number(c), Ok(e)) => judge_numeric(*c, e, expected.has_explicit_sign()),
            (_, Err(e)) => bad(e),
            _ => mismatch("number"),
        },
        Literal::Boolean(e) => match computed {
            Value::Boolean(c) => judge_boolean(*c, *e),
            _ => mismatch("boolean"),
        },
        Literal::Text(e) => match computed {
            // Texts denoting the same interval are equivalent.
            Value::Text(c) => match (text_to_interval(c), text_to_interval(e)) {
                (Ok(ci), Ok(ei)) => judge_interval(&ci, &ei, AccuracyMode::TIGHTEST),
                _ if c == e => Verdict::new(Status::Pass, "", c.clone(), e.clone(), mode),
                _ => Verdict::new(Status::Fail, "texts differ", format!("{c:?}"), format!("{e:?}"), mode),
            },
            _ => mismatch("string"),
        },
        Literal::Signal(_) => unreachable!("signals are judged separately"),
    }
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".to_string()
    }
}

/// Runs one assertion. Returns the rendered inputs and the verdict.
pub fn execute(provider: &dyn Provider, a: &Assertion, mode: Option<AccuracyMode>) -> (String, Verdict) {
    let mode = mode.unwrap_or(a.mode);
    let raw_inputs = literals_text(&a.inputs);
    let expected_text = literals_text(&a.expected);
    let verdict = |status, reason: String, observed: String| Verdict::new(status, reason, observed, expected_text.clone(), mode);

    if a.flavor != DEFAULT_FLAVOR {
        return (raw_inputs, verdict(Status::SkipFlavor, format!("flavor {} not supported", a.flavor), String::new()));
    }
    let Some(op) = Op::from_name(&a.op) else {
        return (raw_inputs, verdict(Status::SkipUnsupported, format!("unknown operation {}", a.op), String::new()));
    };
    let decorated = op.is_interval_valued() && a.inputs.iter().chain(&a.expected).any(is_decorated_literal);
    let needed = if decorated { Capability::Decorated } else { Capability::Bare };
    let cap = provider.capability(op);
    if cap == Capability::Absent || (needed == Capability::Decorated && cap == Capability::Bare) {
        let what = if decorated { "decorated " } else { "" };
        return (raw_inputs, verdict(Status::SkipUnsupported, format!("{what}{op} not provided"), String::new()));
    }
    if a.inputs.len() != op.arity() {
        let why = format!("{op} takes {} arguments, got {}", op.arity(), a.inputs.len());
        return (raw_inputs, verdict(Status::Error, why, String::new()));
    }
    let args = match a.inputs.iter().enumerate().map(|(i, l)| input_value(op, i, l, decorated)).collect::<Result<Vec<_>, _>>() {
        Ok(v) => v,
        Err(e) => return (raw_inputs, verdict(Status::Error, format!("invalid input: {e}"), String::new())),
    };
    let mut signals = Vec::new();
    for name in a.expected_signals() {
        match Signal::from_name(name) {
            Some(s) => signals.push(s),
            None => return (raw_inputs, verdict(Status::Error, format!("unknown signal {name}"), String::new())),
        }
    }
    let inputs = values_text(&args);

    let outcome = match panic::catch_unwind(AssertUnwindSafe(|| provider.evaluate(op, &args))) {
        Ok(o) => o,
        Err(p) => {
            let why = format!("provider panicked: {}", panic_message(p.as_ref()));
            return (inputs, verdict(Status::Error, why, String::new()));
        }
    };
    let observed = values_text(&outcome.values);
    let expected: Vec<&Literal> = a.expected_values().collect();
    if expected.len() != outcome.values.len() {
        let why = format!("expected {} results, got {}", expected.len(), outcome.values.len());
        return (inputs, verdict(Status::Fail, why, observed));
    }
    for (c, e) in outcome.values.iter().zip(expected) {
        let v = judge_value(c, e, mode);
        if !v.is_pass() {
            return (inputs, v);
        }
    }
    let checks: Vec<Verdict> = if signals.is_empty() {
        vec![judge_signal(&outcome.signals, None)]
    } else {
        signals.iter().map(|s| judge_signal(&outcome.signals, Some(*s))).collect()
    };
    if let Some(v) = checks.into_iter().find(|v| !v.is_pass()) {
        return (inputs, Verdict { mode, ..v });
    }
    (inputs, verdict(Status::Pass, String::new(), observed))
}
