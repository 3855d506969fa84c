//! End-to-end behaviour of the `itlconform` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sample() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/suites/sample.itl")
}

fn itlconform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itlconform")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn usage_errors_exit_2() {
    let s = sample();
    let s = s.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.itl");
    fs::write(&broken, "testcase t {\n    add [ 1.0, 2.0 ] = \n").unwrap();
    let broken = broken.to_str().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["run"],
        vec!["run", s, "--provider", "nobody"],
        vec!["run", "/definitely/not/here.itl"],
        vec!["run", broken],
        vec!["run", s, "--tau", "-1"],
        vec!["run", s, "--mode", "sloppy"],
        vec!["gen", "--categories", "weird"],
        vec!["validate", broken],
        vec!["fuzz", "--op", "frobnicate"],
        vec!["fuzz", "--n", "0"],
    ] {
        let o = itlconform(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", text(&o.stderr));
        assert!(!o.stderr.is_empty(), "{args:?} printed no diagnostic");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&itlconform(&["--help"])), 0);
    assert_eq!(code(&itlconform(&["--version"])), 0);
}

#[test]
fn failing_provider_exits_1_with_one_line_per_failure() {
    let o = itlconform(&["run", sample().to_str().unwrap(), "--provider", "nextout"]);
    assert_eq!(code(&o), 1);
    let out = text(&o.stdout);
    let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL ")).collect();
    assert_eq!(fails.len(), 2, "{out}");
    assert!(fails[0].starts_with("FAIL sample.addition.test#2 add "), "{}", fails[0]);
    assert!(fails[1].starts_with("FAIL sample.addition.test#4 add "), "{}", fails[1]);
    assert!(fails.iter().all(|l| l.ends_with("reason=not the tightest enclosure")));
    assert!(out.contains("TOTAL pass=4 fail=2 skip=0 error=0"), "{out}");
    // One ulp out is fine at the accurate level.
    let o = itlconform(&["run", sample().to_str().unwrap(), "--provider", "nextout", "--mode", "accurate"]);
    assert_eq!(code(&o), 0, "{}", text(&o.stdout));
}

#[test]
fn skips_do_not_fail_a_run() {
    let o = itlconform(&["run", sample().to_str().unwrap(), "--provider", "no-div"]);
    assert_eq!(code(&o), 0);
    let out = text(&o.stdout);
    assert_eq!(out.lines().filter(|l| l.starts_with("SKIP-UNSUPPORTED sample.division.test#")).count(), 2, "{out}");
    assert!(out.contains("TOTAL pass=4 fail=0 skip=2 error=0"));
}

#[test]
fn filter_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.ndjson");
    let o = itlconform(&[
        "run",
        sample().to_str().unwrap(),
        "--filter",
        "div*",
        "--format",
        "ndjson",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let report = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = report.lines().filter(|l| l.starts_with('{')).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.contains("\"testcase\":\"division.test\"")));
    assert!(report.ends_with("TOTAL pass=2 fail=0 skip=0 error=0\n"));
}

#[test]
fn gen_then_validate_then_run() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("mini.itl");
    let o = itlconform(&[
        "gen",
        "--ops",
        "add,exp,bogus",
        "--categories",
        "easy,overflow",
        "--count",
        "3",
        "--seed",
        "5",
        "--out",
        suite.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o.stderr));
    assert!(text(&o.stderr).contains("unsupported operation 'bogus'"));
    let prov = fs::read_to_string(suite.with_extension("provenance")).unwrap();
    assert!(prov.lines().next().unwrap().starts_with("add.easy#1 line=2 category=easy certified=true"), "{prov}");

    let v = itlconform(&["validate", suite.to_str().unwrap()]);
    assert_eq!(code(&v), 0);
    assert!(text(&v.stdout).contains("mismatch=0 unverifiable=0"), "{}", text(&v.stdout));

    let r = itlconform(&["run", suite.to_str().unwrap(), "--jobs", "3"]);
    assert_eq!(code(&r), 0, "{}", text(&r.stdout));
}

#[test]
fn validate_flags_a_corrupted_golden() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.itl");
    let golden = fs::read_to_string(sample()).unwrap();
    fs::write(&bad, golden.replace("= [ 4.0, infinity ]", "= [ 5.0, infinity ]")).unwrap();
    let o = itlconform(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let out = text(&o.stdout);
    assert!(out.lines().any(|l| l.contains(": MISMATCH addition.test#2 (line 4) add")), "{out}");
    assert!(out.contains("VALIDATE confirmed=5 mismatch=1 unverifiable=0"), "{out}");
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_itlconform"));
        c.args(["gen", "--ops", "sin", "--categories", "fuzz", "--count", "2"]).args(args);
        if let Some(v) = env {
            c.env("ITLCONFORM_SEED", v);
        } else {
            c.env_remove("ITLCONFORM_SEED");
        }
        c.output().unwrap().stdout
    };
    assert_eq!(run(Some("42"), &[]), run(None, &["--seed", "42"]));
    assert_ne!(run(Some("42"), &[]), run(None, &[]));
}

#[test]
fn fuzz_reports_clean_reference_and_dirty_stub() {
    let o = itlconform(&["fuzz", "--op", "sin", "--n", "50"]);
    assert_eq!(code(&o), 0);
    let out = text(&o.stdout);
    assert!(out.trim_end().ends_with("bad=0"), "{out}");
    let o = itlconform(&["fuzz", "--op", "add", "--n", "10", "--provider", "entire"]);
    assert_eq!(code(&o), 1);
    assert!(text(&o.stdout).lines().any(|l| l.starts_with("FAIL add")));
}
