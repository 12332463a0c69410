use thiserror::Error;

use crate::cone::FacetId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ground set size {0} outside 1..=16")]
    GroundSetSize(usize),
    #[error("subset outside ground set (mask {mask:#b}, n = {n})")]
    SubsetOutOfRange { mask: u32, n: usize },
    #[error("element {element} outside ground set 1..={n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("expected {expected} values, found {found}")]
    Length { expected: usize, found: usize },
    #[error("value at the empty set must be 0")]
    NonZeroAtEmpty,
    #[error("ground set sizes differ ({0} vs {1})")]
    GroundSetMismatch(usize, usize),
    #[error("not a polymatroid: {0} violated")]
    NotPolymatroid(FacetId),
    #[error("not a matroid: {0}")]
    NotMatroid(String),
    #[error("circuit axioms violated: {0}")]
    CircuitAxioms(String),
    #[error("invalid uniform matroid: {0}")]
    InvalidUniform(String),
    #[error("zero vector is not on an extreme ray")]
    ZeroVector,
    #[error("{0} does not lie on an extreme ray")]
    NotExtreme(&'static str),
    #[error("the two rank vectors are proportional")]
    Proportional,
    #[error("matroids must be distinct")]
    NotDistinct,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("no construction available for {0}")]
    NoConstruction(String),
    #[error("v = {0} not certified in the characteristic set")]
    NotCertified(u64),
    #[error("a = {a} out of range: {reason}")]
    AOutOfRange { a: f64, reason: String },
    #[error("construction residual {0:e} exceeds tolerance")]
    Residual(f64),
    #[error("rank vectors are linearly dependent")]
    Dependent,
    #[error("not on the face: worst subset {subset} deviates by {residual:e}")]
    NotOnFace { subset: String, residual: f64 },
    #[error("invalid restricted pair (m = {m}, t = {t})")]
    InvalidPair { m: usize, t: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors caused by malformed input rather than by a mathematical outcome.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::GroundSetSize(_)
                | Error::SubsetOutOfRange { .. }
                | Error::ElementOutOfRange { .. }
                | Error::Length { .. }
                | Error::NonZeroAtEmpty
                | Error::GroundSetMismatch(..)
                | Error::InvalidDistribution(_)
                | Error::Invalid(_)
                | Error::Parse(_)
        )
    }
}
