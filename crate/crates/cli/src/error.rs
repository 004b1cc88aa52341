use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes. Every failure path maps to exactly one of these.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// Analysis succeeded; the candidate is not in the attraction domain.
    pub const NON_MEMBER: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const DEFECTIVE: i32 = 4;
    pub const NUMERICAL: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON at line {line}, column {column}: {message}")]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
    #[error("steady state check failed: residual {residual:.3e} exceeds {tol:.1e}")]
    NotSteady { residual: f64, tol: f64 },
    #[error(transparent)]
    Core(#[from] doa_core::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn json(path: impl Into<PathBuf>, err: &serde_json::Error) -> Self {
        Self::Json {
            path: path.into(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        use doa_core::Error as E;
        match self {
            Self::Io { .. } | Self::Json { .. } | Self::Format(_) | Self::Usage(_) => exit::USAGE,
            Self::NotSteady { .. } => exit::VALIDATION,
            Self::Csv(_) => exit::USAGE,
            Self::Core(e) => match e {
                E::DimensionMismatch { .. }
                | E::NotSquare { .. }
                | E::NotSquareLength(_)
                | E::NonFinite
                | E::InvalidDimension(_)
                | E::SiteOutOfRange { .. }
                | E::HamiltonianNotHermitian { .. }
                | E::Density(_)
                | E::NotSteady { .. }
                | E::InvalidPauli(_)
                | E::IndexOutOfRange { .. }
                | E::InvalidTolerance { .. } => exit::VALIDATION,
                E::DefectivePeripheral { .. } => exit::DEFECTIVE,
                E::InvalidTimes | E::InvalidGap(_) => exit::USAGE,
                _ => exit::NUMERICAL,
            },
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
