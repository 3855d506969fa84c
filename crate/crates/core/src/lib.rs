//! Conformance testing for set-based interval arithmetic over binary64.
//!
//! The crate bundles a reference interval engine, an arbitrary-precision
//! oracle that certifies tightest enclosures, a parser for the ITL test
//! language, a test generator, a judge and a harness that runs suites
//! against pluggable providers.

pub mod decorations;
pub mod fpkernel;
pub mod generator;
pub mod harness;
pub mod interval;
pub mod itl;
pub mod judge;
pub mod ops;
pub mod oracle;

pub use interval::{Interval, IntervalError, Signal};
pub use ops::{Op, OpKind};
