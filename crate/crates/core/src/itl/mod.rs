//! The Interval Test Language.
//!
//! A suite is a sequence of blocks
//!
//! ```text
//! testcase NAME {
//!     OP LITERAL... = LITERAL... [<MODE [tau=R] [flavor=F]>];
//! }
//! ```
//!
//! with `//` and `/* */` comments. Literals are intervals (`[a, b]`, `[a]`,
//! `[empty]`, `[entire]`, `[nai]`), optionally decorated (`[a, b]_com`),
//! numbers, `true`/`false`, double-quoted strings and `signal NAME`. The
//! angle-bracket annotation is an extension; without it an assertion is
//! judged in tightest mode under the set-based flavor.

mod parser;

use std::fmt;
use std::path::PathBuf;

use crate::decorations::{DecoratedInterval, Decoration, DecorationError};
use crate::fpkernel::Dir;
use crate::interval::{parse_number, Interval, IntervalError};
use crate::judge::{AccuracyMode, Level};

pub use parser::{parse, parse_file, Diagnostic, Parsed, Severity};

pub const DEFAULT_FLAVOR: &str = "set-based";

#[derive(Clone, Debug, PartialEq, Default)]
pub struct TestSuite {
    pub name: String,
    pub path: Option<PathBuf>,
    pub testcases: Vec<TestCase>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestCase {
    pub name: String,
    pub line: u32,
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub op: String,
    pub inputs: Vec<Literal>,
    pub expected: Vec<Literal>,
    pub mode: AccuracyMode,
    pub flavor: String,
    pub line: u32,
}

impl Assertion {
    pub fn new(op: &str, inputs: Vec<Literal>, expected: Vec<Literal>) -> Assertion {
        Assertion {
            op: op.to_string(),
            inputs,
            expected,
            mode: AccuracyMode::TIGHTEST,
            flavor: DEFAULT_FLAVOR.to_string(),
            line: 0,
        }
    }

    pub fn with_mode(mut self, mode: AccuracyMode) -> Assertion {
        self.mode = mode;
        self
    }

    /// Expected values other than signals.
    pub fn expected_values(&self) -> impl Iterator<Item = &Literal> {
        self.expected.iter().filter(|l| !matches!(l, Literal::Signal(_)))
    }

    /// Names of the signals the assertion expects.
    pub fn expected_signals(&self) -> impl Iterator<Item = &str> {
        self.expected.iter().filter_map(|l| match l {
            Literal::Signal(s) => Some(s.as_str()),
            _ => None,
        })
    }
}

/// The body of an interval literal. Number tokens are kept as written.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntervalLit {
    Empty,
    Entire,
    Nai,
    Point(String),
    Bounds(String, String),
}

impl IntervalLit {
    pub fn bounds(lo: &str, hi: &str) -> IntervalLit {
        IntervalLit::Bounds(lo.to_string(), hi.to_string())
    }

    /// The interval denoted, with inexact bounds rounded outward.
    pub fn to_interval(&self) -> Result<Interval, IntervalError> {
        match self {
            IntervalLit::Empty | IntervalLit::Nai => Ok(Interval::EMPTY),
            IntervalLit::Entire => Ok(Interval::ENTIRE),
            IntervalLit::Point(p) => Interval::new(parse_number(p, Dir::Down)?, parse_number(p, Dir::Up)?),
            IntervalLit::Bounds(l, u) => Interval::new(parse_number(l, Dir::Down)?, parse_number(u, Dir::Up)?),
        }
    }
}

impl fmt::Display for IntervalLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalLit::Empty => f.write_str("[ empty ]"),
            IntervalLit::Entire => f.write_str("[ entire ]"),
            IntervalLit::Nai => f.write_str("[ nai ]"),
            IntervalLit::Point(p) => write!(f, "[ {p} ]"),
            IntervalLit::Bounds(l, u) => write!(f, "[ {l}, {u} ]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    Interval(IntervalLit),
    Decorated(IntervalLit, Decoration),
    Number(String),
    Boolean(bool),
    Text(String),
    Signal(String),
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LiteralError {
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Decoration(#[from] DecorationError),
    #[error("expected {expected}, found {found}")]
    Kind { expected: &'static str, found: String },
}

impl Literal {
    pub fn kind(&self) -> &'static str {
        match self {
            Literal::Interval(_) => "interval",
            Literal::Decorated(..) => "decorated interval",
            Literal::Number(_) => "number",
            Literal::Boolean(_) => "boolean",
            Literal::Text(_) => "string",
            Literal::Signal(_) => "signal",
        }
    }

    fn kind_error(&self, expected: &'static str) -> LiteralError {
        LiteralError::Kind { expected, found: self.to_string() }
    }

    /// A bare interval. An undecorated `[nai]` is rejected.
    pub fn as_interval(&self) -> Result<Interval, LiteralError> {
        match self {
            Literal::Interval(IntervalLit::Nai) => Err(self.kind_error("interval")),
            Literal::Interval(b) => Ok(b.to_interval()?),
            _ => Err(self.kind_error("interval")),
        }
    }

    pub fn as_decorated(&self) -> Result<DecoratedInterval, LiteralError> {
        match self {
            Literal::Interval(IntervalLit::Nai) => Ok(DecoratedInterval::NAI),
            Literal::Decorated(b, d) => Ok(DecoratedInterval::new(b.to_interval()?, *d)?),
            _ => Err(self.kind_error("decorated interval")),
        }
    }

    /// A binary64 number. Decimal literals that are not binary64 values
    /// are rounded to nearest; `nan` is accepted.
    pub fn as_number(&self) -> Result<f64, LiteralError> {
        let Literal::Number(t) = self else {
            return Err(self.kind_error("number"));
        };
        let lower = t.to_ascii_lowercase();
        if matches!(lower.trim_start_matches(['+', '-']), "nan") {
            return Ok(f64::NAN);
        }
        let lo = parse_number(t, Dir::Down)?;
        let hi = parse_number(t, Dir::Up)?;
        if lo == hi || lower.contains("0x") {
            // Sign of a zero literal follows the token.
            return Ok(if lo == 0.0 && t.starts_with('-') { -0.0 } else { lo });
        }
        Ok(t.parse::<f64>().unwrap_or(lo))
    }

    pub fn as_bool(&self) -> Result<bool, LiteralError> {
        match self {
            Literal::Boolean(b) => Ok(*b),
            _ => Err(self.kind_error("boolean")),
        }
    }

    pub fn as_text(&self) -> Result<&str, LiteralError> {
        match self {
            Literal::Text(s) => Ok(s),
            _ => Err(self.kind_error("string")),
        }
    }

    /// Whether a number literal carries an explicit sign.
    pub fn has_explicit_sign(&self) -> bool {
        matches!(self, Literal::Number(t) if t.starts_with(['+', '-']))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Interval(b) => write!(f, "{b}"),
            Literal::Decorated(b, d) => write!(f, "{b}_{d}"),
            Literal::Number(t) => f.write_str(t),
            Literal::Boolean(b) => write!(f, "{b}"),
            Literal::Text(s) => write!(f, "\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")),
            Literal::Signal(s) => write!(f, "signal {s}"),
        }
    }
}

/// Canonical annotation text, or nothing for the defaults.
fn annotation(a: &Assertion) -> String {
    let mut parts = Vec::new();
    if a.mode.level != Level::Tightest || a.mode.tau != 0.0 {
        parts.push(a.mode.level.name().to_string());
    }
    if a.mode.tau != 0.0 {
        parts.push(format!("tau={}", a.mode.tau));
    }
    if a.flavor != DEFAULT_FLAVOR {
        parts.push(format!("flavor={}", a.flavor));
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!(" <{}>", parts.join(" "))
    }
}

fn join(lits: &[Literal]) -> String {
    lits.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} = {}{};", self.op, join(&self.inputs), join(&self.expected), annotation(self))
    }
}

/// Canonical text: one assertion per line, four-space indent, single
/// spaces between tokens. Comments are not kept.
pub fn serialize(suite: &TestSuite) -> String {
    let mut out = String::new();
    for tc in &suite.testcases {
        out.push_str(&format!("testcase {} {{\n", tc.name));
        for a in &tc.assertions {
            out.push_str(&format!("    {a}\n"));
        }
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_values() {
        let l = Literal::Interval(IntervalLit::bounds("0.1", "0X1P+1"));
        let x = l.as_interval().unwrap();
        assert_eq!(x.hi(), 2.0);
        assert!(x.lo() < 0.1);
        assert_eq!(Literal::Number("0.1".into()).as_number().unwrap(), 0.1);
        assert!(Literal::Number("-0x0p+0".into()).as_number().unwrap().is_sign_negative());
        assert!(Literal::Number("nan".into()).as_number().unwrap().is_nan());
        assert_eq!(Literal::Number("-infinity".into()).as_number().unwrap(), f64::NEG_INFINITY);
        assert!(Literal::Interval(IntervalLit::Nai).as_decorated().unwrap().is_nai());
        assert!(Literal::Boolean(true).as_interval().is_err());
        let d = Literal::Decorated(IntervalLit::Entire, Decoration::Com);
        assert!(d.as_decorated().is_err());
    }

    #[test]
    fn assertion_display() {
        let a = Assertion::new(
            "add",
            vec![Literal::Interval(IntervalLit::bounds("1.0", "2.0")), Literal::Interval(IntervalLit::Empty)],
            vec![Literal::Interval(IntervalLit::Empty)],
        );
        assert_eq!(a.to_string(), "add [ 1.0, 2.0 ] [ empty ] = [ empty ];");
        let v = a.clone().with_mode(AccuracyMode::valid(1.5));
        assert_eq!(v.to_string(), "add [ 1.0, 2.0 ] [ empty ] = [ empty ] <valid tau=1.5>;");
        let t = Literal::Text("[1, \"x\"]".into());
        assert_eq!(t.to_string(), "\"[1, \\\"x\\\"]\"");
    }
}
