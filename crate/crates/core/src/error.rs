use alloc::string::String;
use core::fmt;

/// Failures reported by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    RegistryMismatch,
    UnknownIndeterminate(String),
    /// A denominator vanished at an evaluation point.
    ZeroDenominator,
    /// A determinant that was required to be nonzero is identically zero.
    DegenerateMetric,
    Parse(String),
    UnknownEntry(String),
    /// A polynomial image left the space it was supposed to preserve.
    InvarianceViolation(String),
    Inconsistent(String),
    OutOfRange(String),
    NotAnEigenvector(String),
    /// An operator differentiates off a locus it was asked to restrict to.
    NotTangent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RegistryMismatch => write!(f, "operands live on different registries"),
            Error::UnknownIndeterminate(n) => write!(f, "unknown indeterminate `{}`", n),
            Error::ZeroDenominator => write!(f, "denominator vanishes at the evaluation point"),
            Error::DegenerateMetric => write!(f, "metric determinant is identically zero"),
            Error::Parse(m) => write!(f, "parse error: {}", m),
            Error::UnknownEntry(n) => write!(f, "unknown catalog entry `{}`", n),
            Error::InvarianceViolation(m) => write!(f, "invariance violated: {}", m),
            Error::Inconsistent(m) => write!(f, "inconsistent linear system: {}", m),
            Error::OutOfRange(m) => write!(f, "out of range: {}", m),
            Error::NotAnEigenvector(m) => write!(f, "not an adjoint eigenvector: {}", m),
            Error::NotTangent(v) => write!(f, "operator moves `{}` off the locus", v),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
