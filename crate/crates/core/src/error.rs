use thiserror::Error;

/// Every failure the analysis chain can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("under-resolved: {what} = {got}, need at least {min}")]
    UnderResolution {
        what: &'static str,
        got: usize,
        min: usize,
    },

    #[error("geometry collision: {0}")]
    GeometryCollision(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("eigen solver did not converge after {iterations} iterations (worst relative change {worst_change:.3e}, worst residual {worst_residual:.3e})")]
    SolverFailure {
        iterations: usize,
        worst_change: f64,
        worst_residual: f64,
    },

    #[error("mode {mode} has zero displacement")]
    ZeroDisplacement { mode: usize },

    #[error("mode polarization: expected {expected} fundamental, found {found}")]
    ModePolarization {
        expected: &'static str,
        found: &'static str,
    },

    #[error("contact with bottom electrode at theta = {theta:.4} rad")]
    Contact { theta: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("initial guess failed: {0}")]
    GuessFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
