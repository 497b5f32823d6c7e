//! CLI error taxonomy and exit-code mapping.
//!
//! Every failure funnels into one of three buckets with a stable process
//! exit code, so scripts can branch on the class of failure:
//!
//! | code | bucket      | meaning                                         |
//! |------|-------------|-------------------------------------------------|
//! | 1    | validation  | bad flags, config values, or file contents      |
//! | 2    | numerical   | integration blow-up or a failed verification    |
//! | 3    | i/o         | unreadable config or unwritable output path     |
//!
//! Exit code 0 is reserved for full success.

use std::fmt;
use std::io;

use lvflow::critical_points::CriticalPointError;
use lvflow::dynamics::DynamicsError;
use lvflow::lotka_volterra::LotkaVolterraError;
use lvflow::special::SpecialError;
use lvflow::wigner_flow::WignerFlowError;

/// A classified CLI failure; the payload is the message shown on stderr.
#[derive(Debug)]
pub enum CliError {
    /// Rejected configuration: no computation was started and no output
    /// file was created.
    Validation(String),
    /// The computation itself failed (divergent integration, failed
    /// verification checks); claimed output slots are withdrawn.
    Numerical(String),
    /// Filesystem trouble reading a config or writing an output.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            CliError::Io(msg) => write!(f, "i/o failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<LotkaVolterraError> for CliError {
    fn from(e: LotkaVolterraError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<WignerFlowError> for CliError {
    fn from(e: WignerFlowError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SpecialError> for CliError {
    fn from(e: SpecialError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<CriticalPointError> for CliError {
    fn from(e: CriticalPointError) -> Self {
        match e {
            CriticalPointError::InvalidConfig { .. } | CriticalPointError::InvalidAlpha { .. } => {
                CliError::Validation(e.to_string())
            }
            // Winding-loop pathologies arise mid-computation.
            CriticalPointError::LoopThroughZero { .. }
            | CriticalPointError::UndersampledLoop { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::InvalidConfig { .. } | DynamicsError::MissingEnsemble => {
                CliError::Validation(e.to_string())
            }
            DynamicsError::StepSizeUnderflow { .. }
            | DynamicsError::NonFiniteField { .. }
            | DynamicsError::InsufficientPeaks { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_match_contract() {
        assert_eq!(CliError::Validation(String::new()).exit_code(), 1);
        assert_eq!(CliError::Numerical(String::new()).exit_code(), 2);
        assert_eq!(CliError::Io(String::new()).exit_code(), 3);
    }

    #[test]
    fn library_errors_classify_by_phase() {
        let v: CliError = LotkaVolterraError::NonPositiveCoupling { a: -1.0 }.into();
        assert_eq!(v.exit_code(), 1);

        let n: CliError = DynamicsError::NonFiniteField {
            t: 1.0,
            point: lvflow::lotka_volterra::PhasePoint::new(0.0, 0.0),
        }
        .into();
        assert_eq!(n.exit_code(), 2);

        let io: CliError = io::Error::new(io::ErrorKind::PermissionDenied, "nope").into();
        assert_eq!(io.exit_code(), 3);
    }
}
