use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the evaluators.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parameter range violated: alpha = {alpha} is below -1 + delta = {bound}")]
    Range { alpha: f64, bound: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pole at z = 0")]
    PoleAtZero,

    #[error("turning point singularity near z = {0}")]
    TurningPoint(Complex64),

    #[error("closed-form xi and quadrature disagree by {diff:e} at z = {z}")]
    BranchInconsistency { z: Complex64, diff: f64 },

    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("converged to the wrong sheet: {0}")]
    WrongSheet(String),

    #[error("secular term at order {order}: zero-frequency coefficient does not vanish")]
    SecularTerm { order: usize },

    #[error("path error: {0}")]
    Path(String),

    #[error("Re xi is not monotone along the path: {0}")]
    Monotonicity(String),

    #[error("step collapse near the pole at z = {0}")]
    StepCollapse(Complex64),

    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),

    #[error("unavailable: {0}")]
    Unavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
