use chemtrotter::bounds::BoundError;
use chemtrotter::coalescing::CoalescingError;
use chemtrotter::ingest::{EnsembleError, FcidumpError, SerializeError};
use chemtrotter::oracle::OracleError;
use chemtrotter::sos::SosError;
use chemtrotter::HamiltonianError;
use serde::Serialize;

/// Failure classes with their process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    Input,
    Numerical,
    Internal,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Input => 2,
            Self::Numerical => 3,
            Self::Internal => 4,
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Input,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Numerical,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Internal,
            message: message.into(),
        }
    }

    pub fn record(&self) -> serde_json::Value {
        serde_json::json!({
            "error": self.kind,
            "exit_code": self.kind.exit_code(),
            "message": self.message,
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<SosError> for CliError {
    fn from(e: SosError) -> Self {
        match e {
            SosError::NoSamples => Self::input(e.to_string()),
            _ => Self::internal(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::DimensionCap { max, .. } => Self::input(format!(
                "{e}; dense experiments need at most {max} spin orbitals, pick a smaller --ensemble or input"
            )),
            OracleError::InvalidSector { .. }
            | OracleError::ModeMismatch { .. }
            | OracleError::NoSamples => Self::input(e.to_string()),
            OracleError::BranchAmbiguity { .. } | OracleError::NonConvergence { .. } => {
                Self::numerical(e.to_string())
            }
            OracleError::NonHermitian { .. } => Self::internal(e.to_string()),
        }
    }
}

impl From<CoalescingError> for CliError {
    fn from(e: CoalescingError) -> Self {
        match e {
            CoalescingError::Format(_) => Self::input(e.to_string()),
            _ => Self::internal(e.to_string()),
        }
    }
}

impl From<FcidumpError> for CliError {
    fn from(e: FcidumpError) -> Self {
        Self::input(format!("FCIDUMP: {e}"))
    }
}

impl From<SerializeError> for CliError {
    fn from(e: SerializeError) -> Self {
        Self::input(format!("Hamiltonian JSON: {e}"))
    }
}

impl From<EnsembleError> for CliError {
    fn from(e: EnsembleError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<HamiltonianError> for CliError {
    fn from(e: HamiltonianError) -> Self {
        Self::input(e.to_string())
    }
}
