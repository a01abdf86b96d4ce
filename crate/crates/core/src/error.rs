use thiserror::Error;

/// Errors raised by the algebra, assembly and search layers.
///
/// Solver outcomes (infeasible, inaccurate, failed) are not errors; they are
/// reported through [`crate::sdp::SdpStatus`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    Degree { expected: u32, found: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid candidate shape: {0}")]
    Shape(String),

    #[error("vector field is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("homogeneous vector field of even degree {0} is not asymptotically stable")]
    EvenDegree(u32),

    #[error("size mismatch: expected {expected}x{expected} matrix, found {found}x{found}")]
    MatrixSize { expected: usize, found: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
