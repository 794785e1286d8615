use thiserror::Error;

/// Errors raised by the numerical kernel, the quantum model and the leakage engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("trace of a Born probability has imaginary part {0:.3e}")]
    ImaginaryLeak(f64),

    #[error("Born probability {0} lies outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("POVM is invalid: {0}")]
    InvalidPovm(String),

    #[error("channel is not trace preserving (deviation {0:.3e})")]
    InvalidChannel(f64),

    #[error("probability parameter {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("{0} qubits requested; at most 6 are supported (4^k Kraus operators)")]
    DimensionOverflow(usize),

    #[error("random POVM draw is rank deficient after {0} attempts")]
    DegenerateDraw(usize),

    #[error("dimension {0} is unsupported by this routine")]
    UnsupportedDimension(usize),

    #[error("symbol '{label}': {reason}")]
    InvalidSymbol { label: String, reason: String },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
