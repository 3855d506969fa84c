//! Oracle derivation of expected results, and suite self-validation.

use std::fmt;

use crate::decorations::{brute_force_dec, new_dec, DecoratedInterval, Decoration};
use crate::fpkernel::f64_to_hex;
use crate::interval::{self, Interval, Signal};
use crate::itl::{IntervalLit, Literal, TestSuite, DEFAULT_FLAVOR};
use crate::judge::judge_numeric;
use crate::ops::{Op, OpKind};
use crate::oracle::{numeric_eval, tightest_eval};

/// What the oracle says an assertion should produce.
#[derive(Clone, Debug, PartialEq)]
pub struct Derived {
    pub values: Vec<Literal>,
    pub signal: Option<Signal>,
    pub certified: bool,
    pub q_final: u32,
}

impl Derived {
    fn exact(v: Literal) -> Derived {
        Derived { values: vec![v], signal: None, certified: true, q_final: 64 }
    }

    /// Expected literals in assertion order: values, then the signal.
    pub fn literals(&self) -> Vec<Literal> {
        let mut out = self.values.clone();
        out.extend(self.signal.map(|s| Literal::Signal(s.name().to_string())));
        out
    }
}

pub(crate) fn interval_lit(x: &Interval) -> IntervalLit {
    if x.is_empty() {
        IntervalLit::Empty
    } else if x.is_entire() {
        IntervalLit::Entire
    } else {
        IntervalLit::Bounds(f64_to_hex(x.lo()), f64_to_hex(x.hi()))
    }
}

pub(crate) fn decorated_lit(d: &DecoratedInterval) -> Literal {
    if d.is_nai() {
        Literal::Interval(IntervalLit::Nai)
    } else {
        Literal::Decorated(interval_lit(&d.interval()), d.dec())
    }
}

fn is_decorated(l: &Literal) -> bool {
    matches!(l, Literal::Decorated(..) | Literal::Interval(IntervalLit::Nai))
}

fn bare(l: &Literal) -> Result<Interval, String> {
    match l {
        Literal::Decorated(..) => l.as_decorated().map(|d| d.interval()).map_err(|e| e.to_string()),
        _ => l.as_interval().map_err(|e| e.to_string()),
    }
}

fn decorated(l: &Literal) -> Result<DecoratedInterval, String> {
    match l {
        Literal::Interval(IntervalLit::Nai) | Literal::Decorated(..) => l.as_decorated().map_err(|e| e.to_string()),
        _ => l.as_interval().map(new_dec).map_err(|e| e.to_string()),
    }
}

fn number(l: &Literal) -> Result<f64, String> {
    l.as_number().map_err(|e| e.to_string())
}

/// Derives the expected result of `op` on literal inputs from the oracle
/// alone. Interval results are certified tightest enclosures; decorations
/// come from sampling the domain, not from the engine's rules.
pub fn derive_expected(op: Op, inputs: &[Literal]) -> Result<Derived, String> {
    if inputs.len() != op.arity() {
        return Err(format!("{op} takes {} arguments, got {}", op.arity(), inputs.len()));
    }
    let intervals = || inputs.iter().map(bare).collect::<Result<Vec<_>, _>>();
    match op.kind() {
        OpKind::Arith | OpKind::Elem | OpKind::Set if inputs.iter().any(is_decorated) => {
            let xs = inputs.iter().map(decorated).collect::<Result<Vec<_>, _>>()?;
            if xs.iter().any(DecoratedInterval::is_nai) {
                return Ok(Derived::exact(Literal::Interval(IntervalLit::Nai)));
            }
            let bare: Vec<Interval> = xs.iter().map(|d| d.interval()).collect();
            let t = tightest_eval(op, &bare).map_err(|e| e.to_string())?;
            let dec = if op.kind() == OpKind::Set {
                xs.iter().map(|d| d.dec()).min().expect("nonempty").min(Decoration::Trv)
            } else {
                brute_force_dec(op, &xs, &t.interval)
            };
            let out = DecoratedInterval::new(t.interval, dec).map_err(|e| e.to_string())?;
            Ok(Derived { values: vec![decorated_lit(&out)], signal: None, certified: t.certified, q_final: t.q_final })
        }
        OpKind::Arith | OpKind::Elem | OpKind::Set => {
            let t = tightest_eval(op, &intervals()?).map_err(|e| e.to_string())?;
            let v = Literal::Interval(interval_lit(&t.interval));
            Ok(Derived { values: vec![v], signal: None, certified: t.certified, q_final: t.q_final })
        }
        OpKind::Numeric => {
            let v = numeric_eval(op, &intervals()?[0]).map_err(|e| e.to_string())?;
            Ok(Derived::exact(Literal::Number(f64_to_hex(v))))
        }
        OpKind::Boolean => {
            let b = if op == Op::IsMember {
                interval::is_member(number(&inputs[0])?, &bare(&inputs[1])?)
            } else {
                let xs = intervals()?;
                match op {
                    Op::IsEmpty => xs[0].is_empty(),
                    Op::IsEntire => xs[0].is_entire(),
                    Op::Equal => interval::equal(&xs[0], &xs[1]),
                    Op::Subset => interval::subset(&xs[0], &xs[1]),
                    Op::Interior => interval::interior(&xs[0], &xs[1]),
                    _ => interval::disjoint(&xs[0], &xs[1]),
                }
            };
            Ok(Derived::exact(Literal::Boolean(b)))
        }
        OpKind::Parse => {
            let s = inputs[0].as_text().map_err(|e| e.to_string())?;
            Ok(match interval::text_to_interval(s) {
                Ok(x) => Derived::exact(Literal::Interval(interval_lit(&x))),
                Err(e) => Derived { signal: Some(e.signal()), ..Derived::exact(Literal::Interval(IntervalLit::Empty)) },
            })
        }
        OpKind::Format => Ok(Derived::exact(Literal::Text(interval::interval_to_text(&intervals()?[0])))),
        OpKind::Construct => Ok(match Interval::new(number(&inputs[0])?, number(&inputs[1])?) {
            Ok(x) => Derived::exact(Literal::Interval(interval_lit(&x))),
            Err(e) => Derived { signal: Some(e.signal()), ..Derived::exact(Literal::Interval(IntervalLit::Empty)) },
        }),
    }
}

/// Whether an expected literal states the same thing as a derived one.
fn agrees(expected: &Literal, derived: &Literal) -> bool {
    match (expected, derived) {
        (Literal::Interval(IntervalLit::Nai), d) | (d, Literal::Interval(IntervalLit::Nai)) => {
            matches!(d, Literal::Interval(IntervalLit::Nai))
        }
        (Literal::Decorated(..), Literal::Decorated(..)) => {
            matches!((expected.as_decorated(), derived.as_decorated()), (Ok(a), Ok(b)) if a == b)
        }
        (Literal::Interval(_), Literal::Interval(_)) => {
            matches!((expected.as_interval(), derived.as_interval()), (Ok(a), Ok(b)) if a == b)
        }
        (Literal::Number(_), Literal::Number(_)) => match (expected.as_number(), derived.as_number()) {
            (Ok(e), Ok(d)) => judge_numeric(d, e, expected.has_explicit_sign()).is_pass(),
            _ => false,
        },
        (Literal::Text(e), Literal::Text(d)) => match (interval::text_to_interval(e), interval::text_to_interval(d)) {
            (Ok(a), Ok(b)) => a == b,
            _ => e == d,
        },
        (a, b) => a == b,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Finding {
    pub testcase: String,
    pub index: usize,
    pub line: u32,
    pub op: String,
    pub detail: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{} (line {}) {}: {}", self.testcase, self.index, self.line, self.op, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub confirmed: usize,
    /// Confirmed assertions by operation kind, for arithmetic-only counts.
    pub confirmed_arith: usize,
    pub mismatches: Vec<Finding>,
    pub unverifiable: Vec<Finding>,
    pub skipped: Vec<Finding>,
}

impl ValidationReport {
    pub fn checked(&self) -> usize {
        self.confirmed + self.mismatches.len() + self.unverifiable.len()
    }

    /// 1 when any expectation is contradicted by the oracle.
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.mismatches.is_empty())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for m in &self.mismatches {
            out.push_str(&format!("MISMATCH {m}\n"));
        }
        for u in &self.unverifiable {
            out.push_str(&format!("UNVERIFIABLE {u}\n"));
        }
        for s in &self.skipped {
            out.push_str(&format!("SKIPPED {s}\n"));
        }
        out.push_str(&format!(
            "VALIDATE confirmed={} mismatch={} unverifiable={} skipped={}\n",
            self.confirmed,
            self.mismatches.len(),
            self.unverifiable.len(),
            self.skipped.len()
        ));
        out
    }
}

/// Re-derives every expected value in `suite` with the oracle.
pub fn self_validate(suite: &TestSuite) -> ValidationReport {
    let mut rep = ValidationReport::default();
    for tc in &suite.testcases {
        for (i, a) in tc.assertions.iter().enumerate() {
            let finding = |detail: String| Finding {
                testcase: tc.name.clone(),
                index: i + 1,
                line: a.line,
                op: a.op.clone(),
                detail,
            };
            if a.flavor != DEFAULT_FLAVOR {
                rep.skipped.push(finding(format!("flavor {}", a.flavor)));
                continue;
            }
            let Some(op) = Op::from_name(&a.op) else {
                rep.skipped.push(finding("unknown operation".into()));
                continue;
            };
            let d = match derive_expected(op, &a.inputs) {
                Ok(d) => d,
                Err(e) => {
                    rep.mismatches.push(finding(format!("cannot evaluate: {e}")));
                    continue;
                }
            };
            let want = d.literals();
            let ok = want.len() == a.expected.len() && a.expected.iter().zip(&want).all(|(e, w)| agrees(e, w));
            let oracle = want.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
            if !d.certified {
                rep.unverifiable.push(finding(format!("oracle could not certify at {} bits; best {oracle}", d.q_final)));
            } else if !ok {
                rep.mismatches.push(finding(format!("oracle gives {oracle}")));
            } else {
                rep.confirmed += 1;
                if op.kind() == OpKind::Arith {
                    rep.confirmed_arith += 1;
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itl::parse;

    #[test]
    fn sample_is_confirmed() {
        let p = parse(include_str!("../../suites/sample.itl"));
        let r = self_validate(&p.suite);
        assert_eq!(r.confirmed, 6);
        assert!(r.mismatches.is_empty() && r.unverifiable.is_empty());
    }

    #[test]
    fn corrupted_golden_is_caught() {
        let p = parse("testcase bad { add [1.0, 2.0] [3.0, infinity] = [4.0, 5.0]; }");
        let r = self_validate(&p.suite);
        assert_eq!(r.mismatches.len(), 1);
        assert!(r.mismatches[0].detail.contains("[ 0x1p+2, infinity ]"), "{}", r.mismatches[0].detail);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn derived_kinds() {
        let lit = |s: &str| parse(&format!("testcase t {{ x {s} = [1]; }}")).suite.testcases[0].assertions[0].inputs.clone();
        let d = derive_expected(Op::Sqrt, &lit("[-1, 4]_com")).unwrap();
        assert_eq!(d.values, [Literal::Decorated(IntervalLit::bounds("0x0p+0", "0x1p+1"), Decoration::Trv)]);
        let d = derive_expected(Op::Inf, &lit("[0, 1]")).unwrap();
        assert_eq!(d.values, [Literal::Number("-0x0p+0".into())]);
        let d = derive_expected(Op::MakeInterval, &lit("nan 1")).unwrap();
        assert_eq!(d.signal, Some(Signal::UndefinedOperation));
        let d = derive_expected(Op::TextToInterval, &lit("\"[0.1, 0.1]\"")).unwrap();
        let x = d.values[0].as_interval().unwrap();
        assert!(x.lo() < 0.1 && x.hi() == 0.1);
        assert!(derive_expected(Op::Add, &lit("[1, 2]")).is_err());
    }

    #[test]
    fn zero_sign_and_skips() {
        let src = "testcase z {\n  inf [0, 1] = -0;\n  inf [0, 1] = 0;\n  inf [0, 1] = +0;\n  add [1,2] [1,2] = [2,4] <tightest flavor=kaucher>;\n}\n";
        let r = self_validate(&parse(src).suite);
        assert_eq!(r.confirmed, 2);
        assert_eq!(r.mismatches.len(), 1);
        assert_eq!(r.mismatches[0].index, 3);
        assert_eq!(r.skipped.len(), 1);
    }
}
