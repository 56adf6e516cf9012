use alloc::string::String;
use core::fmt;

/// Errors raised by bound evaluation, witness construction and the oracles.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Interval distances are negative, zero where positivity is required, or not numbers.
    InvalidInterval(String),
    /// A second moment (or variance) that must be positive is not.
    InvalidMoment(String),
    /// A solver parameter is outside its domain.
    InvalidParameter(String),
    /// The inequality has no sharp closed form for this (u, v) in the requested class.
    OutOfTheoremRange(String),
    /// The class cannot answer this kind of query (e.g. a two-sided query on the
    /// concave half-line class).
    InvalidClassQuery(String),
    /// The supremum is approached but not attained, so there is no extremal distribution.
    NoWitness(String),
    /// Mixture components are malformed or the masses do not sum to one.
    InvalidMixture(String),
    /// An oracle grid contained no feasible point.
    OracleInconclusive(String),
    /// A sample count of zero where at least one draw is required.
    InvalidCount(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInterval(m) => write!(f, "invalid interval: {m}"),
            Error::InvalidMoment(m) => write!(f, "invalid moment: {m}"),
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            Error::OutOfTheoremRange(m) => write!(f, "out of range: {m}"),
            Error::InvalidClassQuery(m) => write!(f, "invalid class query: {m}"),
            Error::NoWitness(m) => write!(f, "no extremal distribution: {m}"),
            Error::InvalidMixture(m) => write!(f, "invalid mixture: {m}"),
            Error::OracleInconclusive(m) => write!(f, "oracle inconclusive: {m}"),
            Error::InvalidCount(m) => write!(f, "invalid count: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
