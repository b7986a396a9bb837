use serde::Serialize;
use spiralmech::Error;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_FIT: i32 = 4;

/// A terminal error, reported as one JSON object on stderr.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub error: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            error: "config",
            message: message.into(),
            exit_code: EXIT_CONFIG,
        }
    }

    pub fn fit(message: impl Into<String>) -> Self {
        Self {
            error: "fit",
            message: message.into(),
            exit_code: EXIT_FIT,
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Self::config(format!("{}: {e}", path.display()))
    }

    /// Errors from the analysis chain.
    pub fn analysis(e: Error) -> Self {
        let (error, exit_code) = match &e {
            Error::InvalidSpec(_) | Error::UnderResolution { .. } | Error::InvalidInput(_) | Error::Io(_) => {
                ("config", EXIT_CONFIG)
            }
            Error::GeometryCollision(_) => ("geometry_collision", EXIT_SOLVER),
            Error::InvalidSystem(_) => ("invalid_system", EXIT_SOLVER),
            Error::SolverFailure { .. } => ("solver_failure", EXIT_SOLVER),
            Error::ZeroDisplacement { .. } => ("zero_displacement", EXIT_SOLVER),
            Error::ModePolarization { .. } => ("mode_polarization", EXIT_SOLVER),
            Error::Contact { .. } => ("contact", EXIT_SOLVER),
            Error::Parse { .. } => ("parse", EXIT_FIT),
            Error::Format(_) => ("format", EXIT_FIT),
            Error::GuessFailure(_) => ("guess_failure", EXIT_FIT),
        };
        Self {
            error,
            message: e.to_string(),
            exit_code,
        }
    }

    /// Errors while loading or fitting a spectrum all exit with the fit code.
    pub fn spectrum(e: Error) -> Self {
        let mut f = Self::analysis(e);
        f.exit_code = EXIT_FIT;
        f
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", self.error))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::analysis(e)
    }
}
