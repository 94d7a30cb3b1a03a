use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid party index {party} for {parties} parties")]
    InvalidParty { party: usize, parties: usize },
    #[error("matrix is not hermitian (max deviation {dev:.3e})")]
    NotHermitian { dev: f64 },
    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("did not converge: {0}")]
    NotConverged(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
