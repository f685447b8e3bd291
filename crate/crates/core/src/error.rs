use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix has a negative eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix has eigenvalue {min_eigenvalue:.3e} at or below cutoff {cutoff:.3e}")]
    SingularBelowCutoff { min_eigenvalue: f64, cutoff: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid dimension {0}; need at least 2")]
    InvalidDimension(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("zero denominator: {0}")]
    ZeroDenominator(&'static str),

    #[error("measurement tuple is not balanced (|sum t_mu a_mu| = {residual:.3e})")]
    NotBalanced { residual: f64 },

    #[error("state does not have full local rank (min reduced eigenvalue {min_eigenvalue:.3e})")]
    NotFullLocalRank { min_eigenvalue: f64 },

    #[error("normal form did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
