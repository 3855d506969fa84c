//! Decorated intervals of the set-based flavor.

mod enumerate;

use std::fmt;

use thiserror::Error;

use crate::interval::{self, Interval};
use crate::ops::{Op, OpKind};

pub use enumerate::{brute_force_dec, enumerate_dec_cases, DecCase, DecEnumeration};

/// The decoration lattice, ordered `ill < trv < def < dac < com`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decoration {
    Ill,
    Trv,
    Def,
    Dac,
    Com,
}

impl Decoration {
    pub const ALL: [Decoration; 5] = [Decoration::Ill, Decoration::Trv, Decoration::Def, Decoration::Dac, Decoration::Com];

    pub fn name(self) -> &'static str {
        match self {
            Decoration::Ill => "ill",
            Decoration::Trv => "trv",
            Decoration::Def => "def",
            Decoration::Dac => "dac",
            Decoration::Com => "com",
        }
    }

    pub fn from_name(name: &str) -> Option<Decoration> {
        Decoration::ALL.into_iter().find(|d| d.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecorationError {
    #[error("decoration {dec} is not allowed on {interval}")]
    Inconsistent { interval: String, dec: Decoration },
    #[error("operation {0} has no decorated form")]
    NotDecorated(Op),
    #[error("operation {op} takes {expected} arguments, got {got}")]
    Arity { op: Op, expected: usize, got: usize },
}

/// An interval paired with a decoration. NaI is the empty set decorated
/// `ill`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecoratedInterval {
    interval: Interval,
    dec: Decoration,
}

impl DecoratedInterval {
    pub const NAI: DecoratedInterval = DecoratedInterval { interval: Interval::EMPTY, dec: Decoration::Ill };

    /// Checked constructor: `com` needs a nonempty bounded interval, `dac`
    /// and `def` a nonempty one, and `ill` only decorates the empty set.
    pub fn new(interval: Interval, dec: Decoration) -> Result<Self, DecorationError> {
        let ok = match dec {
            Decoration::Com => !interval.is_empty() && interval.is_bounded(),
            Decoration::Dac | Decoration::Def => !interval.is_empty(),
            Decoration::Trv => true,
            Decoration::Ill => interval.is_empty(),
        };
        if ok {
            Ok(DecoratedInterval { interval, dec })
        } else {
            Err(DecorationError::Inconsistent { interval: interval.to_string(), dec })
        }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn dec(&self) -> Decoration {
        self.dec
    }

    pub fn is_nai(&self) -> bool {
        self.dec == Decoration::Ill
    }
}

impl fmt::Display for DecoratedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_nai() {
            f.write_str("[nai]")
        } else {
            write!(f, "{}_{}", self.interval, self.dec)
        }
    }
}

/// The standard constructor decoration: `com` when bounded, `dac` when
/// unbounded, `trv` for the empty set.
pub fn new_dec(x: Interval) -> DecoratedInterval {
    let dec = if x.is_empty() {
        Decoration::Trv
    } else if x.is_bounded() {
        Decoration::Com
    } else {
        Decoration::Dac
    };
    DecoratedInterval { interval: x, dec }
}

/// Decoration an operation contributes on the input box `xs`, given its
/// bare result.
///
/// Every operation here is continuous wherever it is defined, so the local
/// decoration is `trv` when the box leaves the domain and otherwise `com`
/// or `dac` depending on boundedness.
pub fn local_dec(op: Op, xs: &[Interval], result: &Interval) -> Decoration {
    if xs.iter().any(Interval::is_empty) {
        return Decoration::Trv;
    }
    let x = &xs[0];
    let defined = match op {
        Op::Div => !xs[1].contains_zero(),
        Op::Recip => !x.contains_zero(),
        Op::Sqrt => x.lo() >= 0.0,
        Op::Log | Op::Log2 | Op::Log10 => x.lo() > 0.0,
        Op::Tan => !interval::elem::tan_has_pole(x),
        Op::Pow => x.lo() > 0.0 || (x.lo() == 0.0 && xs[1].lo() > 0.0),
        // Set operations do not preserve any history.
        Op::Intersection | Op::ConvexHull => return Decoration::Trv,
        _ => true,
    };
    if !defined {
        Decoration::Trv
    } else if xs.iter().all(Interval::is_bounded) && result.is_bounded() {
        Decoration::Com
    } else {
        Decoration::Dac
    }
}

/// Decorated evaluation: the bare result of the engine, decorated with the
/// minimum of the input decorations and the local decoration. NaI inputs
/// give NaI.
pub fn dec_op(op: Op, xs: &[DecoratedInterval]) -> Result<DecoratedInterval, DecorationError> {
    if !matches!(op.kind(), OpKind::Arith | OpKind::Elem | OpKind::Set) {
        return Err(DecorationError::NotDecorated(op));
    }
    if xs.len() != op.arity() {
        return Err(DecorationError::Arity { op, expected: op.arity(), got: xs.len() });
    }
    if xs.iter().any(DecoratedInterval::is_nai) {
        return Ok(DecoratedInterval::NAI);
    }
    let bare: Vec<Interval> = xs.iter().map(|d| d.interval).collect();
    let result = interval::apply(op, &bare).expect("interval-valued op");
    let inherited = xs.iter().map(|d| d.dec).min().expect("arity is at least one");
    let dec = inherited.min(local_dec(op, &bare, &result));
    Ok(DecoratedInterval { interval: result, dec })
}
