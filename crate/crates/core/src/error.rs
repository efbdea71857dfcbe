use thiserror::Error;

/// Errors raised by the geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    /// The norm specification does not describe a symmetric convex gauge.
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    /// A NaN or infinite value reached an operation.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    /// Collinear, duplicated or otherwise degenerate input.
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// An operation was called outside its contract.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Root finding or minimization could not produce an answer.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// The two rays of a Busemann bisector point in opposite directions.
    #[error("undefined bisector: rays are opposite")]
    UndefinedBisector,
}

pub type Result<T> = std::result::Result<T, GeomError>;
