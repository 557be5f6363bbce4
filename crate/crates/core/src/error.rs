use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("eigensolver failed: {0}")]
    Solver(String),

    #[error("eigenpair {mode} has residual {residual:.3e} above bound {bound:.3e}")]
    ResidualExceeded {
        mode: usize,
        residual: f64,
        bound: f64,
    },

    #[error("degenerate denominator in {0}")]
    DegenerateDenominator(&'static str),

    #[error("base point lies on the curve (distance {distance:.3e})")]
    BaseOnCurve { distance: f64 },

    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("branch tracking ambiguous at k-index {k_index} (overlap {overlap:.3})")]
    BranchTracking { k_index: usize, overlap: f64 },

    #[error("no sign change in bracket [{lo}, {hi}]: f(lo) = {f_lo:.4e}, f(hi) = {f_hi:.4e}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("state extinguished at step {step} (norm {norm:.3e})")]
    StateExtinguished { step: usize, norm: f64 },

    #[error("state has zero norm")]
    ZeroNorm,
}

pub type Result<T> = std::result::Result<T, Error>;
