//! Recursive-descent parser with batch diagnostics.
//!
//! A malformed assertion produces one diagnostic and parsing resumes after
//! the next `;` (or at the closing brace of the block).

use std::fmt;
use std::path::Path;

use crate::decorations::Decoration;
use crate::fpkernel::Dir;
use crate::interval::parse_number;
use crate::judge::{AccuracyMode, Level};

use super::{Assertion, IntervalLit, Literal, TestCase, TestSuite};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    /// A construct outside the supported language, skipped.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: u32,
    pub col: u32,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Skipped => "skipped",
        };
        write!(f, "{}:{}: {kind}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub suite: TestSuite,
    pub diagnostics: Vec<Diagnostic>,
}

impl Parsed {
    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }
}

struct Error {
    line: u32,
    col: u32,
    message: String,
}

type PResult<T> = Result<T, Error>;

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

/// Characters that end a bare word.
fn is_delim(c: char) -> bool {
    c.is_whitespace() || matches!(c, ';' | '=' | '<' | '>' | '[' | ']' | '{' | '}' | '"')
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0, line: 1, col: 1 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(Error { line: self.line, col: self.col, message: message.into() })
    }

    fn skip_trivia(&mut self) -> PResult<()> {
        loop {
            let r = self.rest();
            if r.starts_with("//") {
                while !matches!(self.peek(), None | Some('\n')) {
                    self.bump();
                }
            } else if r.starts_with("/*") {
                let (line, col) = (self.line, self.col);
                self.bump();
                self.bump();
                while !self.rest().starts_with("*/") {
                    if self.bump().is_none() {
                        return Err(Error { line, col, message: "unterminated block comment".into() });
                    }
                }
                self.bump();
                self.bump();
            } else if self.peek().is_some_and(char::is_whitespace) {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| !is_delim(c)) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        self.skip_trivia()?;
        match self.peek() {
            Some(d) if d == c => {
                self.bump();
                Ok(())
            }
            Some(d) => self.error(format!("expected '{c}', found '{d}'")),
            None => self.error(format!("expected '{c}', found end of input")),
        }
    }

    /// Skips past the next `;`, stopping before a `}` or at the end.
    fn recover(&mut self) {
        loop {
            if self.skip_trivia().is_err() {
                self.pos = self.src.len();
                return;
            }
            match self.peek() {
                None | Some('}') => return,
                Some(';') => {
                    self.bump();
                    return;
                }
                Some('"') => {
                    let _ = self.string();
                }
                _ => {
                    self.bump();
                }
            }
        }
    }

    /// Skips an unsupported construct: up to a `;` or past a balanced
    /// brace block.
    fn skip_construct(&mut self) {
        let mut depth = 0usize;
        loop {
            if self.skip_trivia().is_err() {
                self.pos = self.src.len();
                return;
            }
            match self.bump() {
                None => return,
                Some('{') => depth += 1,
                Some('}') => {
                    depth = depth.saturating_sub(1);
                    if depth == 0 {
                        return;
                    }
                }
                Some(';') if depth == 0 => return,
                _ => {}
            }
        }
    }

    fn string(&mut self) -> PResult<String> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return self.error("unterminated string"),
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some(c @ ('"' | '\\')) => out.push(c),
                    _ => return self.error("unknown escape in string"),
                },
                Some(c) => out.push(c),
            }
        }
    }

    fn number_token(&self, t: &str) -> PResult<String> {
        let bare = t.trim_start_matches(['+', '-']);
        if bare.eq_ignore_ascii_case("nan") || parse_number(t, Dir::Down).is_ok() {
            Ok(t.to_string())
        } else {
            self.error(format!("malformed number '{t}'"))
        }
    }

    fn interval(&mut self) -> PResult<Literal> {
        self.bump();
        let start = self.pos;
        while !matches!(self.peek(), None | Some(']' | ';' | '\n')) {
            self.bump();
        }
        if self.peek() != Some(']') {
            return self.error("unterminated interval literal");
        }
        let body = self.src[start..self.pos].trim();
        self.bump();
        let lit = match body.to_ascii_lowercase().as_str() {
            "" | "empty" => IntervalLit::Empty,
            "entire" => IntervalLit::Entire,
            "nai" => IntervalLit::Nai,
            _ => {
                let parts: Vec<&str> = body.split(',').map(str::trim).collect();
                for p in &parts {
                    if p.is_empty() || p.contains(char::is_whitespace) {
                        return self.error(format!("malformed interval bound in '[{body}]'"));
                    }
                }
                match parts.as_slice() {
                    [p] => IntervalLit::Point(self.number_token(p)?),
                    [l, u] => IntervalLit::Bounds(self.number_token(l)?, self.number_token(u)?),
                    _ => return self.error(format!("too many bounds in '[{body}]'")),
                }
            }
        };
        if self.peek() == Some('_') {
            self.bump();
            let name = self.word();
            let Some(dec) = Decoration::from_name(name) else {
                return self.error(format!("unknown decoration '{name}'"));
            };
            return Ok(Literal::Decorated(lit, dec));
        }
        Ok(Literal::Interval(lit))
    }

    fn literal(&mut self) -> PResult<Literal> {
        match self.peek() {
            Some('[') => self.interval(),
            Some('"') => Ok(Literal::Text(self.string()?)),
            Some(c) if !is_delim(c) => {
                let w = self.word();
                match w {
                    "true" => Ok(Literal::Boolean(true)),
                    "false" => Ok(Literal::Boolean(false)),
                    "signal" => {
                        self.skip_trivia()?;
                        let name = self.word();
                        if name.is_empty() {
                            return self.error("expected a signal name");
                        }
                        Ok(Literal::Signal(name.to_string()))
                    }
                    _ => Ok(Literal::Number(self.number_token(w)?)),
                }
            }
            Some(c) => self.error(format!("unexpected '{c}'")),
            None => self.error("unexpected end of input"),
        }
    }

    fn annotation(&mut self, a: &mut Assertion) -> PResult<()> {
        self.bump();
        let mut level = None;
        let mut tau = 0.0;
        loop {
            self.skip_trivia()?;
            if self.peek() == Some('>') {
                self.bump();
                break;
            }
            let key = self.word();
            if key.is_empty() {
                return self.error("unterminated annotation");
            }
            let owned;
            let w = if self.peek() == Some('=') {
                self.bump();
                owned = format!("{key}={}", self.word());
                owned.as_str()
            } else {
                key
            };
            if let Some(v) = w.strip_prefix("tau=") {
                tau = match v.parse::<f64>() {
                    Ok(t) if t >= 0.0 => t,
                    _ => return self.error(format!("tau must be a nonnegative number, found '{v}'")),
                };
            } else if let Some(f) = w.strip_prefix("flavor=") {
                a.flavor = f.to_string();
            } else if let Some(l) = Level::from_name(w) {
                level = Some(l);
            } else {
                return self.error(format!("unknown annotation '{w}'"));
            }
        }
        a.mode = AccuracyMode { level: level.unwrap_or(Level::Tightest), tau };
        Ok(())
    }

    fn assertion(&mut self) -> PResult<Assertion> {
        let line = self.line;
        let op = self.word();
        let ident = op.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && op.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ident {
            return self.error(format!("expected an operation name, found '{op}'"));
        }
        let mut a = Assertion::new(op, Vec::new(), Vec::new());
        a.line = line;
        loop {
            self.skip_trivia()?;
            match self.peek() {
                Some('=') => {
                    self.bump();
                    break;
                }
                Some(';') | Some('}') | None => return self.error("expected '=' before the expected values"),
                _ => a.inputs.push(self.literal()?),
            }
        }
        if a.inputs.is_empty() {
            return self.error("assertion has no inputs");
        }
        loop {
            self.skip_trivia()?;
            match self.peek() {
                Some(';') => {
                    self.bump();
                    break;
                }
                Some('<') => {
                    self.annotation(&mut a)?;
                    self.expect(';')?;
                    break;
                }
                Some('}') | None => return self.error("expected ';'"),
                _ => a.expected.push(self.literal()?),
            }
        }
        if a.expected.is_empty() {
            return self.error("assertion has no expected values");
        }
        Ok(a)
    }
}

/// Parses ITL text. Well-formed assertions are kept even when others fail.
pub fn parse(text: &str) -> Parsed {
    let mut s = Scanner::new(text);
    let mut suite = TestSuite::default();
    let mut diagnostics = Vec::new();
    let diag = |e: Error, severity: Severity| Diagnostic { line: e.line, col: e.col, severity, message: e.message };
    loop {
        if let Err(e) = s.skip_trivia() {
            diagnostics.push(diag(e, Severity::Error));
            break;
        }
        if s.peek().is_none() {
            break;
        }
        let (line, col) = (s.line, s.col);
        let keyword = s.word();
        if keyword != "testcase" {
            let what = if keyword.is_empty() { s.peek().map(String::from).unwrap_or_default() } else { keyword.to_string() };
            diagnostics.push(Diagnostic {
                line,
                col,
                severity: Severity::Skipped,
                message: format!("unsupported construct '{what}'"),
            });
            if keyword.is_empty() {
                s.bump();
            }
            s.skip_construct();
            continue;
        }
        let _ = s.skip_trivia();
        let name = s.word().to_string();
        if name.is_empty() {
            diagnostics.push(Diagnostic { line: s.line, col: s.col, severity: Severity::Error, message: "expected a testcase name".into() });
            s.skip_construct();
            continue;
        }
        if let Err(e) = s.expect('{') {
            diagnostics.push(diag(e, Severity::Error));
            s.skip_construct();
            continue;
        }
        let mut tc = TestCase { name, line, assertions: Vec::new() };
        let mut had_errors = false;
        loop {
            if let Err(e) = s.skip_trivia() {
                diagnostics.push(diag(e, Severity::Error));
                break;
            }
            match s.peek() {
                None => {
                    diagnostics.push(Diagnostic { line: s.line, col: s.col, severity: Severity::Error, message: format!("testcase '{}' is not closed", tc.name) });
                    break;
                }
                Some('}') => {
                    s.bump();
                    break;
                }
                _ => match s.assertion() {
                    Ok(a) => tc.assertions.push(a),
                    Err(e) => {
                        had_errors = true;
                        diagnostics.push(diag(e, Severity::Error));
                        s.recover();
                    }
                },
            }
        }
        if suite.testcases.iter().any(|t| t.name == tc.name) {
            diagnostics.push(Diagnostic { line, col, severity: Severity::Error, message: format!("duplicate testcase '{}'", tc.name) });
        } else if tc.assertions.is_empty() {
            if !had_errors {
                diagnostics.push(Diagnostic { line, col, severity: Severity::Error, message: format!("testcase '{}' has no assertions", tc.name) });
            }
        } else {
            suite.testcases.push(tc);
        }
    }
    Parsed { suite, diagnostics }
}

/// Reads and parses a file; the suite is named after the file stem.
pub fn parse_file(path: &Path) -> std::io::Result<Parsed> {
    let text = std::fs::read_to_string(path)?;
    let mut parsed = parse(&text);
    parsed.suite.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parsed.suite.path = Some(path.to_path_buf());
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itl::{serialize, DEFAULT_FLAVOR};

    const SAMPLE: &str = include_str!("../../suites/sample.itl");

    #[test]
    fn sample_parses_cleanly() {
        let p = parse(SAMPLE);
        assert!(p.diagnostics.is_empty(), "{:?}", p.diagnostics);
        let s = &p.suite;
        assert_eq!(s.testcases.len(), 2);
        assert_eq!(s.testcases[0].name, "addition.test");
        assert_eq!(s.testcases[0].assertions.len(), 4);
        assert_eq!(s.testcases[1].assertions.len(), 2);
        let hex = &s.testcases[0].assertions[3];
        assert_eq!(hex.inputs[0], Literal::Interval(IntervalLit::Point("0X1.FFFFFFFFFFFFP+0".into())));
        assert_eq!(hex.expected[0], Literal::Interval(IntervalLit::bounds("0X1.0CCCCCCCCCCC4P+1", "0X1.0CCCCCCCCCCC5P+1")));
        assert_eq!(hex.line, 7);
        assert_eq!(s.testcases[1].assertions[0].mode, AccuracyMode::TIGHTEST);
        assert_eq!(s.testcases[1].assertions[0].flavor, DEFAULT_FLAVOR);
    }

    #[test]
    fn serialization_round_trips() {
        let p = parse(SAMPLE);
        let text = serialize(&p.suite);
        let again = parse(&text);
        assert!(again.diagnostics.is_empty());
        let strip = |mut s: TestSuite| {
            for tc in &mut s.testcases {
                tc.line = 0;
                tc.assertions.iter_mut().for_each(|a| a.line = 0);
            }
            s
        };
        assert_eq!(strip(again.suite.clone()), strip(p.suite));
        assert_eq!(serialize(&again.suite), text);
        assert!(text.contains("add [ 0X1.FFFFFFFFFFFFP+0 ] [ 0X1.999999999999AP-4 ] = [ 0X1.0CCCCCCCCCCC4P+1, 0X1.0CCCCCCCCCCC5P+1 ];"));
    }

    #[test]
    fn extensions() {
        let p = parse(
            "testcase t {\n  add [1,2]_com [3,4]_dac = [4,6]_dac <accurate>;\n  sin [0, 1] = [0, 1] <valid tau=2 flavor=kaucher>;\n  \
             text_to_interval \"[4, 3]\" = [empty] signal UndefinedOperation;\n  is_member 4.0 [4] = true;\n  mid [entire] = 0x0p+0;\n}",
        );
        assert!(p.diagnostics.is_empty(), "{:?}", p.diagnostics);
        let a = &p.suite.testcases[0].assertions;
        assert_eq!(a[0].inputs[0], Literal::Decorated(IntervalLit::bounds("1", "2"), Decoration::Com));
        assert_eq!(a[0].mode.level, Level::Accurate);
        assert_eq!(a[1].mode, AccuracyMode::valid(2.0));
        assert_eq!(a[1].flavor, "kaucher");
        assert_eq!(a[2].inputs[0], Literal::Text("[4, 3]".into()));
        assert_eq!(a[2].expected_signals().collect::<Vec<_>>(), ["UndefinedOperation"]);
        assert_eq!(a[3].expected[0], Literal::Boolean(true));
        let text = serialize(&p.suite);
        assert_eq!(serialize(&parse(&text).suite), text);
    }

    #[test]
    fn unknown_operations_parse() {
        let p = parse("testcase t { add [1,2] = [1,2]; cosh [0] = [1]; }");
        assert!(p.diagnostics.is_empty());
        assert_eq!(p.suite.testcases[0].assertions[1].op, "cosh");
    }

    #[test]
    fn errors_recover_at_semicolon() {
        let p = parse("testcase t {\n  add [2,1] ;\n  add [1,2] [3,4] = [4,6];\n  mul [1,x] [1] = [1];\n  neg [1] = [-1];\n}");
        assert_eq!(p.errors().count(), 2);
        assert_eq!(p.diagnostics[0].line, 2);
        assert_eq!(p.diagnostics[1].line, 4);
        let ops: Vec<_> = p.suite.testcases[0].assertions.iter().map(|a| a.op.as_str()).collect();
        assert_eq!(ops, ["add", "neg"]);
    }

    #[test]
    fn structural_errors() {
        assert!(parse("testcase t { add [1] = [1] }").has_errors());
        assert!(parse("testcase t { add [1] = [1];").has_errors());
        assert!(parse("testcase t { }").has_errors());
        assert!(parse("testcase t { add [1] = [1]; } testcase t { neg [1] = [-1]; }").has_errors());
        assert!(parse("/* open").has_errors());
        assert!(parse("testcase t { add [1] = [1]_foo; }").has_errors());
        assert!(parse("testcase t { add [1] = [1] <fast>; }").has_errors());
    }

    #[test]
    fn unsupported_constructs_are_skipped() {
        let p = parse("include \"other.itl\";\nversion { 2 }\ntestcase t { neg [1] = [-1]; }");
        assert!(!p.has_errors());
        assert_eq!(p.diagnostics.len(), 2);
        assert!(p.diagnostics.iter().all(|d| d.severity == Severity::Skipped));
        assert_eq!(p.suite.testcases.len(), 1);
    }
}
