use thiserror::Error;

/// Errors shared across the simulation, coefficient and estimation layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model specification violates its invariants.
    #[error("invalid model spec: {0}")]
    Spec(String),

    /// Numerical failure (factorization, underflow, non-finite intermediate).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The Schlather spectral series hit the point cap before the stopping
    /// rule fired; `achieved_bound` is the relative bound reached.
    #[error("truncation budget exhausted (achieved bound {achieved_bound:.3e})")]
    Truncation { achieved_bound: f64 },

    /// Estimation could not produce a value; the message carries diagnostics.
    #[error("estimation error: {0}")]
    Estimation(String),

    /// Model/context combination outside the implemented closed forms.
    #[error("unsupported model or context: {0}")]
    Unsupported(String),

    /// Values lost too much precision to be trusted.
    #[error("precision loss: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
