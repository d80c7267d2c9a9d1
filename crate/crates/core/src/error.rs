use thiserror::Error;

/// Every failure the engines can report. Messages are shown verbatim by the
/// command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("series centers differ")]
    MismatchedCenters,
    #[error("compose requires an inner series with zero constant term")]
    ComposeConstantTerm,
    #[error("division by a series whose leading coefficient vanishes beyond the dividend's")]
    ZeroDivisor,
    #[error("outside the convergence disc: {0}")]
    OutsideRadius(String),
    #[error("operator symbol has a pole at {0}")]
    Pole(String),
    #[error("no antiderivative in the atom class for {0}")]
    NoAntiderivative(String),
    #[error("antiderivative of a constant kernel with zero rate")]
    ZeroRate,
    #[error("divergent: {0}")]
    Divergent(String),
    #[error("non-cancelling integration constant / pole prescription required")]
    NonCancellingConstant,
    #[error("integrand outside the supported class: {0}")]
    ClassViolation(String),
    #[error("tail bound unavailable at requested tolerance: {0}")]
    NoBound(String),
    #[error("spread across epsilon {spread:e} exceeds tolerance {tol:e}")]
    SpreadExceeded { spread: f64, tol: f64 },
    #[error("operator order exceeds target order (empty overlap)")]
    EmptyOverlap,
    #[error("validity window too small: {0}")]
    WindowTooSmall(String),
    #[error("rational function is not proper")]
    Improper,
    #[error("pole order {order} exceeds cap {cap}")]
    PoleOrderCap { order: u32, cap: u32 },
    #[error("outside region of convergence: {0}")]
    OutsideRegion(String),
    #[error("parameter must be positive: {0}")]
    Nonpositive(String),
    #[error("root finding failed: {0}")]
    RootFinding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
