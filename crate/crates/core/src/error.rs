use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {0} is degenerate: complex-root machinery needs d >= 2")]
    DegenerateDegree(usize),

    #[error("index {index} out of range (allowed 0..={max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid index tuple: {0}")]
    InvalidIndices(String),

    #[error("point {x} + {y}i lies on the real axis; use the real-axis routines")]
    RealAxis { x: f64, y: f64 },

    #[error("operation requires the {expected} basis, got {got}")]
    BasisMismatch { expected: &'static str, got: &'static str },

    #[error("constraint error: {0}")]
    Constraint(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("root finder did not converge after {iterations} iterations (worst residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("sampler rejected more than {0} candidates")]
    RejectionOverflow(u64),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
