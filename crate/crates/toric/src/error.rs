use thiserror::Error;

use crate::linalg::LatticeVector;

/// Errors shared across the crate.
///
/// Variants are split along the contract boundaries the callers care about:
/// bad caller input (`NonSquare`, `ZeroVector`, `Schema`, ...), structural
/// guards (`RankGuard`, `SizeGuard`), and oracle data that fails one of the
/// verified properties (`InvalidUpsilon`, which always carries a witness).
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero vector rejected")]
    ZeroVector,

    #[error("zero cone rejected")]
    ZeroCone,

    #[error("ambient rank {0} exceeds the duality guard (8)")]
    RankGuard(usize),

    #[error("cone is not strongly convex (contains the line through {0})")]
    NotPointed(LatticeVector),

    #[error("polyhedron is empty")]
    EmptyPolyhedron,

    #[error("region is unbounded in direction {0}")]
    Unbounded(LatticeVector),

    #[error("cone is not strongly convex")]
    NotStronglyConvex,

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("{0} is not a root of the given datum")]
    NotARoot(LatticeVector),

    #[error("query {0} lies outside the declared table")]
    OutsideTable(LatticeVector),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("retry budget exhausted after {0} draws")]
    RetryBudget(usize),

    #[error("invalid root-data bijection at stage {stage}: {detail}")]
    InvalidUpsilon { stage: &'static str, detail: String },

    #[error("internal contract violation: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid_upsilon(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidUpsilon {
            stage,
            detail: detail.into(),
        }
    }

    /// Exit code the CLI maps this error to: 2 for data that fails
    /// verification, 3 for malformed input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidUpsilon { .. } => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
