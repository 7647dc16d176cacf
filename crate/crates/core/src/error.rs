use alloc::string::String;
use core::fmt;

/// Errors raised by the exact-arithmetic engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two quadratic-extension operands carry different nonzero radicands.
    RadicandMismatch {
        left: u64,
        right: u64,
    },
    DivisionByZero,
    /// The square-free part of a radicand could not be certified.
    RadicandTooLarge,
    /// Textual scalar, vector or lattice name that could not be parsed.
    Parse(String),
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// A generator set spans only the zero lattice.
    ZeroSpan,
    NotSquare,
    NotSymmetric,
    /// Operation requires a nondegenerate lattice.
    Degenerate,
    /// A rank-2 form was required.
    NotBinary,
    /// Vector expected to be integral has fractional entries.
    NonIntegral(String),
    /// Brauer pairing only implemented for B-fields of order at most 2.
    UnsupportedOrder(u64),
    /// Torsion classes (rank zero) have no slope or spherical completion.
    ZeroRank,
    /// Stability parameter must be strictly positive.
    NonPositiveParameter,
    /// The two classes are proportional: their charges align for every parameter.
    Proportional,
    /// Charges are aligned identically in the parameter although the classes differ.
    AlignedEverywhere,
    /// Phase requested for a value outside the closed upper half plane or for zero.
    NotInUpperHalfPlane,
    ZeroCharge,
    /// Parameter does not exceed the local-finiteness bound.
    BelowEpsilon,
    /// A scenario invariant failed; the message names it.
    Invariant(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RadicandMismatch { left, right } => {
                write!(f, "radicand mismatch: sqrt({left}) vs sqrt({right})")
            }
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::RadicandTooLarge => f.write_str("radicand too large to factor"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ZeroSpan => f.write_str("generators span the zero lattice"),
            Error::NotSquare => f.write_str("matrix is not square"),
            Error::NotSymmetric => f.write_str("matrix is not symmetric"),
            Error::Degenerate => f.write_str("degenerate lattice"),
            Error::NotBinary => f.write_str("binary form expected (rank 2)"),
            Error::NonIntegral(what) => write!(f, "non-integral {what}"),
            Error::UnsupportedOrder(d) => {
                write!(
                    f,
                    "Brauer class of order {d} not supported (order must be 1 or 2)"
                )
            }
            Error::ZeroRank => f.write_str("rank-zero class"),
            Error::NonPositiveParameter => f.write_str("stability parameter m must be > 0"),
            Error::Proportional => f.write_str("proportional classes"),
            Error::AlignedEverywhere => f.write_str("charges aligned for every m"),
            Error::NotInUpperHalfPlane => f.write_str("value not in the closed upper half plane"),
            Error::ZeroCharge => f.write_str("class with zero central charge"),
            Error::BelowEpsilon => f.write_str("m must exceed the epsilon bound"),
            Error::Invariant(msg) => write!(f, "invariant violated: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

impl core::error::Error for Error {}
