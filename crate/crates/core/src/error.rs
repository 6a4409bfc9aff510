use thiserror::Error;

/// Errors raised by the matrix-calculus operators, the divergence routines
/// and the numerical oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: max |M - M^T| = {max_asymmetry:e} exceeds tolerance {tolerance:e}")]
    NotSymmetric { max_asymmetry: f64, tolerance: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("dimension mismatch for {field}: expected {expected}, got {actual}")]
    DimensionMismatch {
        field: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{which} is not positive definite ({})", pivot_detail(*.min_pivot, *.threshold))]
    NotPositiveDefinite {
        which: &'static str,
        /// `None` when the factorization broke down before completing.
        min_pivot: Option<f64>,
        threshold: f64,
    },

    #[error("{which} is singular")]
    SingularMatrix { which: &'static str },

    #[error("non-finite entry in {field}")]
    NonFinite { field: &'static str },

    #[error("finite-difference stencil failed at coordinate {index}: {reason}")]
    StencilFailure { index: usize, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn pivot_detail(min_pivot: Option<f64>, threshold: f64) -> String {
    match min_pivot {
        Some(p) => format!("smallest pivot {p:e}, threshold {threshold:e}"),
        None => "Cholesky factorization broke down".into(),
    }
}
