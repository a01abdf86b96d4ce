//! Stability certificates for homogeneous polynomial vector fields.

pub mod cli;
pub mod error;
pub mod hierarchy;
pub mod linalg;
pub mod dynamics;
pub mod polyalg;
pub mod sdp;
pub mod sosgram;
pub mod verify;

pub use error::{Error, Result};

// Links the system OpenBLAS/LAPACK used by the PSD cone.
use openblas_src as _;
