//! Error type shared by every module in the crate.

use thiserror::Error;

/// Everything that can go wrong when validating or transforming states.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("trace is {trace:.15}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("dimension mismatch: {0}")]
    BadDims(String),

    #[error("state vector is not normalized (norm {norm:.15})")]
    NotNormalized { norm: f64 },

    #[error("rank exceeds 2: third eigenvalue {eigenvalue:.3e} is at or above tolerance {tol:.3e}")]
    RankExceeded { eigenvalue: f64, tol: f64 },

    #[error("Bloch vector outside the unit ball (|r|^2 = {norm_sq:.15})")]
    OutsideBall { norm_sq: f64 },

    #[error("operator not supported on the rank-2 eigenbasis (residual {residual:.3e})")]
    OutsideSupport { residual: f64 },

    #[error("argument {value} outside [0, 1]")]
    OutOfRange { value: f64 },

    #[error("entry expected real but has imaginary residue {residue:.3e}")]
    NotReal { residue: f64 },

    #[error("invalid subspace pair: {0}")]
    BadSubspace(String),
}

pub type Result<T> = std::result::Result<T, Error>;
