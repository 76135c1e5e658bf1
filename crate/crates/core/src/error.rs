//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge id {0} out of range or duplicated")]
    BadEdgeId(usize),
    #[error("vertex id {0} out of range")]
    BadVertexId(usize),
    #[error("edge length must be positive: edge {0}")]
    NonPositiveLength(usize),
    #[error("total edge length is zero")]
    ZeroTotalLength,
    #[error("graph has genus zero")]
    GenusZero,
    #[error("cannot contract a loop (edge {0})")]
    LoopContraction(usize),
    #[error("graph has a separating edge (bridge): edge {0}")]
    BridgePresent(usize),
    #[error("coefficient vector has length {got}, expected one entry per edge ({want})")]
    ChainSize { got: usize, want: usize },
    #[error("not a cycle: boundary is nonzero at vertex {0}")]
    NotACycle(usize),
    #[error("not a one-form: balancing fails at vertex {0}")]
    NotAOneForm(usize),
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("integer matrix is not unimodular (|det| = {0})")]
    NotUnimodular(String),
    #[error("enumeration bound overflow: search space of ~{0} vectors exceeds desk scale")]
    EnumerationOverflow(u128),
    #[error("empty or degenerate input: {0}")]
    Degenerate(String),
    #[error("eps out of range: need 0 < eps < 1/(6n), got {0}")]
    EpsOutOfRange(f64),
    #[error("point lies on a missing face: cycle through edge set {0:?} has zero length")]
    MissingFace(Vec<usize>),
    #[error("point is not interior: coordinate {0} is not positive")]
    BoundaryPoint(usize),
    #[error("coordinates do not lie on the simplex: sum = {0}")]
    NotOnSimplex(f64),
    #[error("points live on different marked simplices: {0}")]
    SimplexMismatch(String),
    #[error("no connecting path found within search budget {0}")]
    NoRoute(usize),
    #[error("quadrature did not converge within depth {depth}; last values {last:?}")]
    NonConvergence { depth: usize, last: Vec<f64> },
    #[error("integral diverges towards a singular boundary; partial sums {0:?}")]
    Divergent(Vec<f64>),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures of numeric processes (as opposed to invalid inputs).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::Divergent(_) | Error::EnumerationOverflow(_)
        )
    }
}
