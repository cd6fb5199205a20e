use thiserror::Error;

/// Errors raised by the module operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid atomic space: {0}")]
    InvalidSpace(String),

    #[error("operands live on different atomic spaces")]
    SpaceMismatch,

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("unknown atom identifier `{0}`")]
    UnknownAtom(String),

    #[error("operation requires real-valued operands")]
    NotReal,

    #[error("operation requires a nonempty collection")]
    EmptyCollection,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no exact basis representation on atom {atom} (residual {residual:e})")]
    Inconsistent { atom: usize, residual: f64 },

    #[error("body is not absorbent on atom {atom}: the origin is not an interior point")]
    NotAbsorbent { atom: usize },

    #[error("body has empty interior on atom {atom}")]
    EmptyInterior { atom: usize },

    #[error("bodies intersect on every atom; the disjointness set has measure zero")]
    NoSeparation,

    #[error("functional lies in the unit ball of the random conjugate space")]
    InsideUnitBall,

    #[error("targets are not realizable inside the unit ball; violated on {} atom(s)", .violations.len())]
    NotInUnitBidualBall { violations: Vec<usize> },

    #[error("dual certificate failed numerical verification on atom {atom}")]
    CertificateUnverified { atom: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
