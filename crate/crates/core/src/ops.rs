//! The operation vocabulary shared by the engine, the oracle, the test
//! language and the runner.

use std::fmt;

/// Every operation the framework knows how to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Recip,
    Sqr,
    Sqrt,
    Fma,
    Exp,
    Log,
    Log2,
    Log10,
    Sin,
    Cos,
    Tan,
    Atan,
    Pow,
    Intersection,
    ConvexHull,
    Inf,
    Sup,
    Mid,
    Rad,
    Wid,
    Mag,
    Mig,
    IsEmpty,
    IsEntire,
    Equal,
    Subset,
    Interior,
    Disjoint,
    IsMember,
    TextToInterval,
    IntervalToText,
    MakeInterval,
}

/// Broad family of an operation, which fixes the shape of its arguments and
/// result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    /// Interval arguments, interval result, tightest by contract.
    Arith,
    /// Interval arguments, interval result, accurate by contract.
    Elem,
    /// Exact set operations on intervals.
    Set,
    /// Interval argument, number result.
    Numeric,
    /// Boolean result.
    Boolean,
    /// `text_to_interval`: text argument, interval result.
    Parse,
    /// `interval_to_text`: interval argument, text result.
    Format,
    /// `make_interval`: two numbers, interval result.
    Construct,
}

impl Op {
    pub const ALL: [Op; 37] = [
        Op::Neg,
        Op::Add,
        Op::Sub,
        Op::Mul,
        Op::Div,
        Op::Recip,
        Op::Sqr,
        Op::Sqrt,
        Op::Fma,
        Op::Exp,
        Op::Log,
        Op::Log2,
        Op::Log10,
        Op::Sin,
        Op::Cos,
        Op::Tan,
        Op::Atan,
        Op::Pow,
        Op::Intersection,
        Op::ConvexHull,
        Op::Inf,
        Op::Sup,
        Op::Mid,
        Op::Rad,
        Op::Wid,
        Op::Mag,
        Op::Mig,
        Op::IsEmpty,
        Op::IsEntire,
        Op::Equal,
        Op::Subset,
        Op::Interior,
        Op::Disjoint,
        Op::IsMember,
        Op::TextToInterval,
        Op::IntervalToText,
        Op::MakeInterval,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Op::Neg => "neg",
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Div => "div",
            Op::Recip => "recip",
            Op::Sqr => "sqr",
            Op::Sqrt => "sqrt",
            Op::Fma => "fma",
            Op::Exp => "exp",
            Op::Log => "log",
            Op::Log2 => "log2",
            Op::Log10 => "log10",
            Op::Sin => "sin",
            Op::Cos => "cos",
            Op::Tan => "tan",
            Op::Atan => "atan",
            Op::Pow => "pow",
            Op::Intersection => "intersection",
            Op::ConvexHull => "convex_hull",
            Op::Inf => "inf",
            Op::Sup => "sup",
            Op::Mid => "mid",
            Op::Rad => "rad",
            Op::Wid => "wid",
            Op::Mag => "mag",
            Op::Mig => "mig",
            Op::IsEmpty => "is_empty",
            Op::IsEntire => "is_entire",
            Op::Equal => "equal",
            Op::Subset => "subset",
            Op::Interior => "interior",
            Op::Disjoint => "disjoint",
            Op::IsMember => "is_member",
            Op::TextToInterval => "text_to_interval",
            Op::IntervalToText => "interval_to_text",
            Op::MakeInterval => "make_interval",
        }
    }

    pub fn from_name(name: &str) -> Option<Op> {
        Op::ALL.iter().copied().find(|op| op.name() == name)
    }

    pub fn kind(self) -> OpKind {
        use Op::*;
        match self {
            Neg | Add | Sub | Mul | Div | Recip | Sqr | Sqrt | Fma => OpKind::Arith,
            Exp | Log | Log2 | Log10 | Sin | Cos | Tan | Atan | Pow => OpKind::Elem,
            Intersection | ConvexHull => OpKind::Set,
            Inf | Sup | Mid | Rad | Wid | Mag | Mig => OpKind::Numeric,
            IsEmpty | IsEntire | Equal | Subset | Interior | Disjoint | IsMember => OpKind::Boolean,
            TextToInterval => OpKind::Parse,
            IntervalToText => OpKind::Format,
            MakeInterval => OpKind::Construct,
        }
    }

    /// Number of arguments.
    pub fn arity(self) -> usize {
        use Op::*;
        match self {
            Fma => 3,
            Add | Sub | Mul | Div | Pow | Intersection | ConvexHull | Equal | Subset | Interior | Disjoint
            | IsMember | MakeInterval => 2,
            _ => 1,
        }
    }

    /// Whether the operation maps intervals to an interval, so that it can
    /// be decorated and judged at the three accuracy levels.
    pub fn is_interval_valued(self) -> bool {
        matches!(self.kind(), OpKind::Arith | OpKind::Elem | OpKind::Set)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for op in Op::ALL {
            assert_eq!(Op::from_name(op.name()), Some(op));
        }
        assert_eq!(Op::from_name("cosh"), None);
    }

    #[test]
    fn arities() {
        assert_eq!(Op::Fma.arity(), 3);
        assert_eq!(Op::Pow.arity(), 2);
        assert_eq!(Op::Sqrt.arity(), 1);
        assert_eq!(Op::IsMember.arity(), 2);
    }
}
