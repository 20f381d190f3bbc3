use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("pole of the Gamma function at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("hypergeometric lower parameter c = {re} + {im}i is a non-positive integer")]
    ParameterPole { re: f64, im: f64 },

    #[error("series did not converge within {terms} terms (last relative term {last:e})")]
    NonConvergence { terms: usize, last: f64 },

    #[error("grid is not symmetric about the origin (node {index}: {node} vs {mirror})")]
    GridAsymmetry { index: usize, node: f64, mirror: f64 },

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch { expected: (usize, usize), got: (usize, usize) },

    #[error("translation constant calibration failed: held-out residual {residual:.3e} exceeds {limit:.3e}")]
    CalibrationFailure { residual: f64, limit: f64 },

    #[error("calibration point x0 = 0 carries no information about the kernel constant")]
    DegenerateCalibrationPoint,

    #[error("clamped negative mass {fraction:.3e} of the window spectrum exceeds {limit:.3e}")]
    ExcessNegativity { fraction: f64, limit: f64 },

    #[error("Gram matrix deviates from identity by {deviation:.3e}")]
    GramFailure { deviation: f64 },

    #[error("density is not normalized: total mass {mass}")]
    NotNormalized { mass: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
