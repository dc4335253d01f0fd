use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("matrix is not Hermitian (max |A - A^H| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("Kraus family is not complete (max |sum K^H K - I| = {residual:e})")]
    NotComplete { residual: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error(
        "instrument is not efficient (operation {operation} keeps {kraus_count} non-collinear \
         Kraus operators); use the direct entropy reduction instead"
    )]
    NotEfficient {
        operation: usize,
        kraus_count: usize,
    },

    #[error("structural and sampled classification disagree: {0}")]
    InconsistentClassification(String),
}
