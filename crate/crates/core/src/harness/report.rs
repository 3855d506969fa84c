//! Text and NDJSON renderings of a report.
//!
//! Text lists every verdict other than a pass,
//!
//! ```text
//! FAIL sample.addition.test#2 add [0x1p+0, 0x1p+1] ... expected=E got=G mode=tightest reason=R
//! ```
//!
//! followed by a summary block. NDJSON has one object per assertion. Both
//! end in `TOTAL pass=.. fail=.. skip=.. error=..`.

use serde::Serialize;

use super::{AssertionResult, Report};
use crate::judge::Status;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Ndjson,
}

impl Format {
    pub fn from_name(name: &str) -> Option<Format> {
        match name {
            "text" => Some(Format::Text),
            "ndjson" => Some(Format::Ndjson),
            _ => None,
        }
    }
}

#[derive(Serialize)]
struct Line<'a> {
    suite: &'a str,
    testcase: &'a str,
    index: usize,
    line: u32,
    op: &'a str,
    inputs: &'a str,
    status: &'a str,
    expected: &'a str,
    observed: &'a str,
    mode: String,
    reason: &'a str,
}

fn tag(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::SkipUnsupported => "SKIP-UNSUPPORTED",
        Status::SkipFlavor => "SKIP-FLAVOR",
        Status::Error => "ERROR",
    }
}

fn text_line(r: &AssertionResult) -> String {
    let v = &r.verdict;
    format!(
        "{} {}.{}#{} {} {} expected={} got={} mode={} reason={}\n",
        tag(v.status),
        r.suite,
        r.testcase,
        r.index,
        r.op,
        r.inputs,
        v.expected,
        v.observed,
        v.mode,
        v.reason
    )
}

fn totals_line(r: &Report) -> String {
    let t = &r.totals;
    format!("TOTAL pass={} fail={} skip={} error={}\n", t.pass, t.fail, t.skipped(), t.error)
}

pub fn render_report(r: &Report, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Text => {
            for res in r.results.iter().filter(|x| !x.verdict.is_pass()) {
                out.push_str(&text_line(res));
            }
            out.push_str(&format!("provider: {}\n", r.provider));
            for s in &r.suites {
                let path = s.path.as_ref().map(|p| format!(" ({})", p.display())).unwrap_or_default();
                out.push_str(&format!("suite: {}{} sha256={}\n", s.name, path, s.sha256));
            }
            let t = &r.totals;
            out.push_str(&format!("assertions: {}\n", t.total()));
            for (name, n) in [
                ("pass", t.pass),
                ("fail", t.fail),
                ("skip-unsupported", t.skip_unsupported),
                ("skip-flavor", t.skip_flavor),
                ("error", t.error),
            ] {
                out.push_str(&format!("  {name}: {n}\n"));
            }
        }
        Format::Ndjson => {
            for res in &r.results {
                let v = &res.verdict;
                let line = Line {
                    suite: &res.suite,
                    testcase: &res.testcase,
                    index: res.index,
                    line: res.line,
                    op: &res.op,
                    inputs: &res.inputs,
                    status: v.status.name(),
                    expected: &v.expected,
                    observed: &v.observed,
                    mode: v.mode.to_string(),
                    reason: &v.reason,
                };
                out.push_str(&serde_json::to_string(&line).expect("serializable"));
                out.push('\n');
            }
        }
    }
    out.push_str(&totals_line(r));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_suite, NextOut, Reference};
    use crate::itl::parse;

    const SRC: &str = "testcase t {\n  add [1, 2] [3, 4] = [4, 6];\n  add [1, 2] [empty] = [empty];\n}\n";

    #[test]
    fn all_pass_text_is_summary_only() {
        let r = run_suite(&Reference, &parse(SRC).suite, None);
        let text = render_report(&r, Format::Text);
        assert!(!text.contains("FAIL"));
        assert!(text.starts_with("provider: reference\n"));
        assert!(text.ends_with("TOTAL pass=2 fail=0 skip=0 error=0\n"));
    }

    #[test]
    fn single_failure_line() {
        let r = run_suite(&NextOut, &parse(SRC).suite, None);
        let text = render_report(&r, Format::Text);
        let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
        assert_eq!(fails.len(), 1);
        assert_eq!(
            fails[0],
            "FAIL .t#1 add [0x1p+0, 0x1p+1] [0x1.8p+1, 0x1p+2] expected=[0x1p+2, 0x1.8p+2] \
             got=[0x1.fffffffffffffp+1, 0x1.8000000000001p+2] mode=tightest reason=not the tightest enclosure"
        );
    }

    #[test]
    fn ndjson_has_one_line_per_assertion() {
        let r = run_suite(&Reference, &parse(SRC).suite, None);
        let out = render_report(&r, Format::Ndjson);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), r.results.len() + 1);
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["status"], "pass");
        assert_eq!(first["op"], "add");
        assert_eq!(lines[2], "TOTAL pass=2 fail=0 skip=0 error=0");
    }
}
