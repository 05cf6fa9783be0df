//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input values (non-finite entries, broken symmetry,
    /// normalization failures).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Dimensions that do not fit together.
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// Out-of-range parameters (e.g. a p-norm exponent below 1).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The matrix fails the positive-semidefiniteness gate; carries the
    /// offending minimum eigenvalue.
    #[error("not positive semidefinite (not a state): min eigenvalue {min_eig:e}")]
    NotPsd { min_eig: f64 },

    /// A matrix handed to a projector-only operation is not idempotent.
    #[error("not an orthogonal projector: ||P^2 - P||_2 = {defect:e}")]
    NotProjector { defect: f64 },

    /// Numerical failure: non-convergence or a residual above tolerance.
    #[error("numeric failure: {0}")]
    Numeric(String),
}
