//! Verdicts on computed results.
//!
//! Three accuracy levels are recognised. `tightest` demands the exact
//! expected interval; `accurate` allows each finite bound to sit one ulp
//! further out; `valid` only demands containment, screened by a width
//! ratio `tau` so that trivially wide answers do not pass.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decorations::{DecoratedInterval, Decoration};
use crate::fpkernel::{self, f64_to_hex, Dir, MAXREAL};
use crate::interval::{self, Interval, Signal};
use crate::oracle::BigFloat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Tightest,
    Accurate,
    Valid,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Tightest => "tightest",
            Level::Accurate => "accurate",
            Level::Valid => "valid",
        }
    }

    pub fn from_name(name: &str) -> Option<Level> {
        [Level::Tightest, Level::Accurate, Level::Valid].into_iter().find(|l| l.name() == name)
    }
}

/// Accuracy level plus the width slack used in valid mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyMode {
    pub level: Level,
    pub tau: f64,
}

impl AccuracyMode {
    pub const TIGHTEST: AccuracyMode = AccuracyMode { level: Level::Tightest, tau: 0.0 };
    pub const ACCURATE: AccuracyMode = AccuracyMode { level: Level::Accurate, tau: 0.0 };

    pub fn valid(tau: f64) -> AccuracyMode {
        assert!(tau >= 0.0, "tau must be nonnegative");
        AccuracyMode { level: Level::Valid, tau }
    }
}

impl fmt::Display for AccuracyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            Level::Valid => write!(f, "valid(tau={})", self.tau),
            l => f.write_str(l.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkipUnsupported,
    SkipFlavor,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkipUnsupported => "skip-unsupported",
            Status::SkipFlavor => "skip-flavor",
            Status::Error => "error",
        }
    }
}

/// Outcome of one comparison. `observed` and `expected` are rendered
/// values, intervals in hexadecimal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub reason: String,
    pub observed: String,
    pub expected: String,
    pub mode: AccuracyMode,
}

impl Verdict {
    pub fn new(status: Status, reason: impl Into<String>, observed: String, expected: String, mode: AccuracyMode) -> Self {
        Verdict { status, reason: reason.into(), observed, expected, mode }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    fn decide(ok: bool, reason: impl FnOnce() -> String, observed: String, expected: String, mode: AccuracyMode) -> Self {
        if ok {
            Verdict::new(Status::Pass, "", observed, expected, mode)
        } else {
            Verdict::new(Status::Fail, reason(), observed, expected, mode)
        }
    }
}

/// Largest acceptable valid-mode width, `(1 + tau) * wid(e) + 2 ulp(mag(e))`,
/// computed exactly so that it cannot overflow.
fn width_limit(e: &Interval, tau: f64) -> BigFloat {
    let wid = BigFloat::from_f64(e.hi()).sub_exact(&BigFloat::from_f64(e.lo()));
    let slack = BigFloat::from_f64(fpkernel::ulp(interval::mag(e))).mul_pow2(1);
    BigFloat::one().add_exact(&BigFloat::from_f64(tau)).mul_exact(&wid).add_exact(&slack)
}

/// Exact width of `c` for the valid-mode screen. An infinite bound facing
/// an expected bound of `±MAXREAL` counts as that bound, since rounding an
/// overflowing bound outward lands there.
fn screened_width(c: &Interval, e: &Interval) -> BigFloat {
    let lo = if c.lo() == f64::NEG_INFINITY && e.lo() == -MAXREAL { -MAXREAL } else { c.lo() };
    let hi = if c.hi() == f64::INFINITY && e.hi() == MAXREAL { MAXREAL } else { c.hi() };
    if lo.is_infinite() || hi.is_infinite() {
        return BigFloat::Inf { neg: false };
    }
    BigFloat::from_f64(hi).sub_exact(&BigFloat::from_f64(lo))
}

pub fn judge_interval(computed: &Interval, expected: &Interval, mode: AccuracyMode) -> Verdict {
    let (obs, exp) = (computed.to_string(), expected.to_string());
    let contains = interval::subset(expected, computed);
    if !contains && interval::subset(computed, expected) {
        return Verdict::new(Status::Fail, "containment violated: oracle or provider bug", obs, exp, mode);
    }
    match mode.level {
        Level::Tightest => Verdict::decide(computed == expected, || "not the tightest enclosure".into(), obs, exp, mode),
        Level::Accurate => {
            let ok = contains && interval::subset(computed, &expected.next_out());
            let why = || if contains { "wider than one ulp outside tightest" } else { "does not contain the exact range" }.into();
            Verdict::decide(ok, why, obs, exp, mode)
        }
        Level::Valid => {
            if !contains {
                return Verdict::new(Status::Fail, "does not contain the exact range", obs, exp, mode);
            }
            if expected.is_empty() {
                // Nothing can be narrower than the empty set.
                return Verdict::decide(computed.is_empty(), || "expected the empty set".into(), obs, exp, mode);
            }
            if !expected.is_bounded() {
                return Verdict::new(Status::Pass, "", obs, exp, mode);
            }
            let (w, limit) = (screened_width(computed, expected), width_limit(expected, mode.tau));
            let why = || {
                let show = |x: &BigFloat| f64_to_hex(x.to_f64(Dir::Up));
                format!("too wide: width {} exceeds {}", show(&w), show(&limit))
            };
            Verdict::decide(w.le(&limit), why, obs, exp, mode)
        }
    }
}

/// Decorated comparison. The bare parts are judged as intervals. In
/// tightest and accurate mode the decorations must match; in valid mode a
/// weaker decoration is accepted, since it is still a true statement. NaI
/// must match exactly.
pub fn judge_decorated(computed: &DecoratedInterval, expected: &DecoratedInterval, mode: AccuracyMode) -> Verdict {
    let (obs, exp) = (computed.to_string(), expected.to_string());
    if computed.is_nai() || expected.is_nai() {
        let ok = computed.is_nai() && expected.is_nai();
        return Verdict::decide(ok, || "NaI mismatch".into(), obs, exp, mode);
    }
    let bare = judge_interval(&computed.interval(), &expected.interval(), mode);
    if !bare.is_pass() {
        return Verdict { observed: obs, expected: exp, ..bare };
    }
    let (c, e) = (computed.dec(), expected.dec());
    let ok = match mode.level {
        Level::Valid => c <= e && c != Decoration::Ill,
        _ => c == e,
    };
    let why = || if c > e { format!("decoration {c} claims more than {e}") } else { format!("decoration {c} differs from {e}") };
    Verdict::decide(ok, why, obs, exp, mode)
}

/// Bitwise comparison with NaN equal to NaN. The sign of zero matters only
/// when `zero_sign_matters`.
pub fn judge_numeric(computed: f64, expected: f64, zero_sign_matters: bool) -> Verdict {
    let ok = if expected.is_nan() {
        computed.is_nan()
    } else if expected == 0.0 && computed == 0.0 {
        !zero_sign_matters || expected.is_sign_negative() == computed.is_sign_negative()
    } else {
        computed == expected
    };
    Verdict::decide(ok, || "numbers differ".into(), f64_to_hex(computed), f64_to_hex(expected), AccuracyMode::TIGHTEST)
}

pub fn judge_boolean(computed: bool, expected: bool) -> Verdict {
    Verdict::decide(computed == expected, || "wrong truth value".into(), computed.to_string(), expected.to_string(), AccuracyMode::TIGHTEST)
}

/// Passes iff the expected signal was raised, or, when none is expected,
/// iff nothing was raised.
pub fn judge_signal(observed: &[Signal], expected: Option<Signal>) -> Verdict {
    let obs = observed.iter().map(|s| s.name()).collect::<Vec<_>>().join(",");
    let exp = expected.map(|s| s.name().to_string()).unwrap_or_default();
    let (ok, why) = match expected {
        Some(s) => (observed.contains(&s), "expected signal not raised"),
        None => (observed.is_empty(), "spurious signal"),
    };
    Verdict::decide(ok, || why.into(), format!("{{{obs}}}"), format!("{{{exp}}}"), AccuracyMode::TIGHTEST)
}
