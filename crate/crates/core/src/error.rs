use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),

    #[error("vertex set extends beyond the vertex range")]
    SetOutOfRange,

    #[error("digraph is not a tournament")]
    NotTournament,

    #[error("family is not a decycling family of the digraph")]
    NotDecycling,

    #[error("family is not a complementing system of the graph")]
    NotComplementingSystem,

    #[error("matrix does not agree with the graph off the diagonal")]
    MatrixNotInPattern,

    #[error("staircase precondition violated: {0}")]
    StaircasePrecondition(String),

    /// None of the three staircase conclusions held. Raised so that a
    /// falsifying instance is loud instead of silently ignored.
    #[error("no staircase conclusion holds for this block matrix")]
    StaircaseConclusionViolated,

    #[error("size limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
