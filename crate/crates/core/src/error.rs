use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("cannot parse potential: {0}")]
    Parse(String),
    #[error("exponent matrix is singular")]
    Singular,
    #[error("not a sum of atomic potentials: {0}")]
    NotAtomicSum(String),
    #[error("not of the form x^2 - f(y,z,w): {0}")]
    NotK3Shape(String),
    #[error("genus formula gives {0}, not a non-negative integer")]
    NonIntegralGenus(String),
    #[error("weight system {0:?} is not well-formed")]
    NotWellFormed(Vec<i64>),
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    TooLarge { order: String, bound: u64 },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("degenerate lattice")]
    Degenerate,
    #[error("discriminant group {0:?} is not 2-elementary")]
    NotTwoElementary(Vec<String>),
    #[error("extension is not an even integral overlattice: {0}")]
    NotIntegralOverlattice(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("delta is not determined: {0}")]
    DeltaAmbiguous(String),
    #[error("mirror hypothesis fails for {0:?}")]
    MirrorHypothesisFails((i64, i64, u8)),
    #[error("mirror failure: {0}")]
    MirrorFailure(String),
    #[error("unsupported fixed stratum: {0}")]
    UnsupportedStratum(String),
    #[error("unsupported local action: {0}")]
    UnsupportedLocalAction(String),
    #[error("inconsistent ramification: {0}")]
    InconsistentRamification(String),
    #[error("basis does not span the Picard group: {0}")]
    BasisNotSpanning(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("data file: {0}")]
    Data(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
