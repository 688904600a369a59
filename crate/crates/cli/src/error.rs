//! Exit-status mapping for every error the commands can surface.

use kv_core::{HarnessError, JournalError, LifecycleError, PricingError};

pub const STATUS_FAILURES: u8 = 1;
pub const STATUS_USAGE: u8 = 2;
pub const STATUS_TRANSITION: u8 = 3;
pub const STATUS_INTERNAL: u8 = 4;

/// An error carrying its exit status.
#[derive(Debug)]
pub struct CliError {
    pub status: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError {
            status: STATUS_USAGE,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> CliError {
        CliError {
            status: STATUS_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<PricingError> for CliError {
    fn from(e: PricingError) -> CliError {
        let message = match &e {
            PricingError::DegenerateInput { .. } => {
                format!("{e}; rerun as `kv price --intrinsic` for the expiry/zero-volatility limit")
            }
            _ => e.to_string(),
        };
        CliError {
            status: STATUS_USAGE,
            message,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> CliError {
        CliError {
            status: STATUS_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<LifecycleError> for CliError {
    fn from(e: LifecycleError) -> CliError {
        let status = if e.is_invalid_transition() {
            STATUS_TRANSITION
        } else {
            STATUS_USAGE
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}

impl From<JournalError> for CliError {
    fn from(e: JournalError) -> CliError {
        match e {
            // The user addressed a project that does not (or already does)
            // exist: an input problem, not an engine fault.
            JournalError::NotFound(_) | JournalError::AlreadyExists(_) => CliError {
                status: STATUS_USAGE,
                message: e.to_string(),
            },
            // The engine refused the requested operation.
            JournalError::Rejected(inner) => inner.into(),
            // Bad stored state or environment trouble.
            JournalError::Io { .. }
            | JournalError::Corrupt { .. }
            | JournalError::Locked(_)
            | JournalError::Replay(_) => CliError {
                status: STATUS_INTERNAL,
                message: e.to_string(),
            },
        }
    }
}
