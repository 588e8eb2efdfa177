use thiserror::Error;

/// Failure modes surfaced by the library.
///
/// Construction errors (dimension, normalization, physicality, ...) are
/// reported before any dynamics runs; runtime errors (stiffness, integrity,
/// convergence) come out of the integrator and steady-state drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("normalization error: {0}")]
    Normalization(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("site index error: {0}")]
    Site(String),

    #[error("permutation error: {0}")]
    Permutation(String),

    #[error("subset error: {0}")]
    Subset(String),

    #[error("physicality error: {0}")]
    Physicality(String),

    #[error("singular input: {0}")]
    Singularity(String),

    #[error("step size underflow: {0}")]
    Stiffness(String),

    #[error("numerical integrity violated: {0}")]
    Integrity(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("coefficient extraction failed: {0}")]
    Extraction(String),

    #[error("not an eigenstate: {0}")]
    Eigenstate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("linear algebra backend error: {0}")]
    Linalg(String),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
