//! Libraries under test and the built-in ones.

use std::fmt;

use crate::decorations::{dec_op, DecoratedInterval};
use crate::fpkernel::f64_to_hex;
use crate::interval::{self, Interval, Signal};
use crate::ops::{Op, OpKind};
use crate::oracle::tightest_eval;

use super::wire;

/// How a provider supports an operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capability {
    Absent,
    /// Bare intervals only.
    Bare,
    /// Bare and decorated intervals.
    Decorated,
}

/// An argument or result crossing the provider boundary.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Interval(Interval),
    Decorated(DecoratedInterval),
    Number(f64),
    Boolean(bool),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Interval(x) => write!(f, "{x}"),
            Value::Decorated(d) => write!(f, "{d}"),
            Value::Number(v) => f.write_str(&f64_to_hex(*v)),
            Value::Boolean(b) => write!(f, "{b}"),
            Value::Text(s) => write!(f, "{s:?}"),
        }
    }
}

/// Results of one call plus the signals it raised.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub values: Vec<Value>,
    pub signals: Vec<Signal>,
}

impl Outcome {
    pub fn value(v: Value) -> Outcome {
        Outcome { values: vec![v], signals: Vec::new() }
    }

    pub fn signalled(v: Value, s: Signal) -> Outcome {
        Outcome { values: vec![v], signals: vec![s] }
    }
}

/// A library under test.
///
/// `evaluate` is only called for operations whose capability is not
/// `Absent`, with arguments of the shape the operation expects: intervals
/// (or decorated intervals when the capability allows), a number and an
/// interval for `is_member`, two numbers for `make_interval` and a string
/// for `text_to_interval`.
pub trait Provider: Send + Sync {
    fn name(&self) -> &str;

    fn capability(&self, op: Op) -> Capability;

    /// Whether `evaluate` may run on several threads at once.
    fn concurrency_safe(&self) -> bool {
        true
    }

    fn evaluate(&self, op: Op, args: &[Value]) -> Outcome;
}

fn interval_arg(v: &Value) -> Interval {
    match v {
        Value::Interval(x) => *x,
        Value::Decorated(d) => d.interval(),
        other => panic!("expected an interval argument, got {other}"),
    }
}

fn number_arg(v: &Value) -> f64 {
    match v {
        Value::Number(x) => *x,
        other => panic!("expected a number argument, got {other}"),
    }
}

/// The reference engine.
#[derive(Clone, Copy, Debug, Default)]
pub struct Reference;

impl Reference {
    pub fn evaluate_op(op: Op, args: &[Value]) -> Outcome {
        if op.is_interval_valued() && matches!(args.first(), Some(Value::Decorated(_))) {
            let xs: Vec<DecoratedInterval> = args
                .iter()
                .map(|a| match a {
                    Value::Decorated(d) => *d,
                    Value::Interval(x) => crate::decorations::new_dec(*x),
                    other => panic!("expected a decorated interval, got {other}"),
                })
                .collect();
            return Outcome::value(Value::Decorated(dec_op(op, &xs).expect("decorated op")));
        }
        match op.kind() {
            OpKind::Arith | OpKind::Elem | OpKind::Set => {
                let xs: Vec<Interval> = args.iter().map(interval_arg).collect();
                Outcome::value(Value::Interval(interval::apply(op, &xs).expect("interval op")))
            }
            OpKind::Numeric => {
                let x = interval_arg(&args[0]);
                let v = match op {
                    Op::Inf => interval::inf(&x),
                    Op::Sup => interval::sup(&x),
                    Op::Mid => interval::mid(&x),
                    Op::Rad => interval::rad(&x),
                    Op::Wid => interval::wid(&x),
                    Op::Mag => interval::mag(&x),
                    _ => interval::mig(&x),
                };
                Outcome::value(Value::Number(v))
            }
            OpKind::Boolean => {
                let b = match op {
                    Op::IsEmpty => interval::is_empty(&interval_arg(&args[0])),
                    Op::IsEntire => interval::is_entire(&interval_arg(&args[0])),
                    Op::IsMember => interval::is_member(number_arg(&args[0]), &interval_arg(&args[1])),
                    _ => {
                        let (x, y) = (interval_arg(&args[0]), interval_arg(&args[1]));
                        match op {
                            Op::Equal => interval::equal(&x, &y),
                            Op::Subset => interval::subset(&x, &y),
                            Op::Interior => interval::interior(&x, &y),
                            _ => interval::disjoint(&x, &y),
                        }
                    }
                };
                Outcome::value(Value::Boolean(b))
            }
            OpKind::Parse => {
                let Value::Text(s) = &args[0] else { panic!("expected a string argument") };
                match interval::text_to_interval(s) {
                    Ok(x) => Outcome::value(Value::Interval(x)),
                    Err(e) => Outcome::signalled(Value::Interval(Interval::EMPTY), e.signal()),
                }
            }
            OpKind::Format => Outcome::value(Value::Text(interval::interval_to_text(&interval_arg(&args[0])))),
            OpKind::Construct => match Interval::new(number_arg(&args[0]), number_arg(&args[1])) {
                Ok(x) => Outcome::value(Value::Interval(x)),
                Err(e) => Outcome::signalled(Value::Interval(Interval::EMPTY), e.signal()),
            },
        }
    }
}

impl Provider for Reference {
    fn name(&self) -> &str {
        "reference"
    }

    fn capability(&self, op: Op) -> Capability {
        if matches!(op.kind(), OpKind::Arith | OpKind::Elem | OpKind::Set) {
            Capability::Decorated
        } else {
            Capability::Bare
        }
    }

    fn evaluate(&self, op: Op, args: &[Value]) -> Outcome {
        Reference::evaluate_op(op, args)
    }
}

fn bare_interval_ops(op: Op) -> Capability {
    if op.is_interval_valued() {
        Capability::Bare
    } else {
        Capability::Absent
    }
}

/// Answers every interval operation with the whole real line.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConstantEntire;

impl Provider for ConstantEntire {
    fn name(&self) -> &str {
        "entire"
    }

    fn capability(&self, op: Op) -> Capability {
        bare_interval_ops(op)
    }

    fn evaluate(&self, _op: Op, _args: &[Value]) -> Outcome {
        Outcome::value(Value::Interval(Interval::ENTIRE))
    }
}

/// Answers with the tightest enclosure widened by one ulp on each finite
/// side: accurate but never tightest.
#[derive(Clone, Copy, Debug, Default)]
pub struct NextOut;

impl Provider for NextOut {
    fn name(&self) -> &str {
        "nextout"
    }

    fn capability(&self, op: Op) -> Capability {
        bare_interval_ops(op)
    }

    fn evaluate(&self, op: Op, args: &[Value]) -> Outcome {
        let xs: Vec<Interval> = args.iter().map(interval_arg).collect();
        let t = tightest_eval(op, &xs).expect("interval op");
        Outcome::value(Value::Interval(t.interval.next_out()))
    }
}

/// The reference engine without division.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoDiv;

impl Provider for NoDiv {
    fn name(&self) -> &str {
        "no-div"
    }

    fn capability(&self, op: Op) -> Capability {
        if op == Op::Div {
            Capability::Absent
        } else {
            Reference.capability(op)
        }
    }

    fn evaluate(&self, op: Op, args: &[Value]) -> Outcome {
        Reference::evaluate_op(op, args)
    }
}

/// The reference engine, except that division panics.
#[derive(Clone, Copy, Debug, Default)]
pub struct Crashy;

impl Provider for Crashy {
    fn name(&self) -> &str {
        "crashy"
    }

    fn capability(&self, op: Op) -> Capability {
        Reference.capability(op)
    }

    fn evaluate(&self, op: Op, args: &[Value]) -> Outcome {
        if op == Op::Div {
            panic!("crashy provider: division is broken");
        }
        Reference::evaluate_op(op, args)
    }
}

/// Goes through the out-of-process wire format: every call is encoded as
/// a JSON request, answered by an in-process endpoint backed by the
/// reference engine, and decoded again.
#[derive(Clone, Copy, Debug, Default)]
pub struct Echo;

impl Provider for Echo {
    fn name(&self) -> &str {
        "echo"
    }

    fn capability(&self, op: Op) -> Capability {
        Reference.capability(op)
    }

    fn evaluate(&self, op: Op, args: &[Value]) -> Outcome {
        let request = wire::encode_request(op, args);
        let reply = wire::reference_endpoint(&request);
        wire::decode_reply(&reply).expect("well-formed reply")
    }
}

pub const PROVIDER_NAMES: [&str; 6] = ["reference", "entire", "nextout", "no-div", "crashy", "echo"];

pub fn provider_by_name(name: &str) -> Option<Box<dyn Provider>> {
    Some(match name {
        "reference" => Box::new(Reference),
        "entire" => Box::new(ConstantEntire),
        "nextout" => Box::new(NextOut),
        "no-div" => Box::new(NoDiv),
        "crashy" => Box::new(Crashy),
        "echo" => Box::new(Echo),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(l: f64, h: f64) -> Value {
        Value::Interval(Interval::new(l, h).unwrap())
    }

    #[test]
    fn capability_tables_are_total() {
        for name in PROVIDER_NAMES {
            let p = provider_by_name(name).unwrap();
            assert_eq!(p.name(), name);
            for op in Op::ALL {
                let _ = p.capability(op);
            }
        }
        assert!(provider_by_name("mpfi").is_none());
        assert_eq!(NoDiv.capability(Op::Div), Capability::Absent);
        assert_eq!(ConstantEntire.capability(Op::Mid), Capability::Absent);
    }

    #[test]
    fn reference_dispatch() {
        let r = Reference.evaluate(Op::Add, &[iv(1.0, 2.0), iv(3.0, 4.0)]);
        assert_eq!(r.values, [iv(4.0, 6.0)]);
        let r = Reference.evaluate(Op::Mid, &[iv(1.0, 3.0)]);
        assert_eq!(r.values, [Value::Number(2.0)]);
        let r = Reference.evaluate(Op::IsMember, &[Value::Number(4.0), iv(4.0, 4.0)]);
        assert_eq!(r.values, [Value::Boolean(true)]);
        let r = Reference.evaluate(Op::TextToInterval, &[Value::Text("[4, 3]".into())]);
        assert_eq!(r.signals, [Signal::UndefinedOperation]);
        let r = Reference.evaluate(Op::MakeInterval, &[Value::Number(2.0), Value::Number(1.0)]);
        assert_eq!(r.signals, [Signal::UndefinedOperation]);
        let d = DecoratedInterval::new(Interval::new(-1.0, 4.0).unwrap(), crate::decorations::Decoration::Com).unwrap();
        let r = Reference.evaluate(Op::Sqrt, &[Value::Decorated(d)]);
        let Value::Decorated(out) = r.values[0] else { panic!() };
        assert_eq!(out.dec(), crate::decorations::Decoration::Trv);
    }

    #[test]
    fn stubs() {
        let t = NextOut.evaluate(Op::Add, &[iv(1.0, 2.0), iv(3.0, 4.0)]);
        assert_eq!(t.values, [Value::Interval(Interval::new(4.0, 6.0).unwrap().next_out())]);
        let e = ConstantEntire.evaluate(Op::Sin, &[iv(0.0, 1.0)]);
        assert_eq!(e.values, [Value::Interval(Interval::ENTIRE)]);
        let echoed = Echo.evaluate(Op::Div, &[iv(1.0, 2.0), iv(3.0, 3.0)]);
        assert_eq!(echoed, Reference.evaluate(Op::Div, &[iv(1.0, 2.0), iv(3.0, 3.0)]));
        assert!(std::panic::catch_unwind(|| Crashy.evaluate(Op::Div, &[iv(1.0, 2.0), iv(1.0, 2.0)])).is_err());
    }
}
