use std::fmt;

use serde_json::{json, Value};
use stabform_core::Error;

/// A failed run: usage problems exit with 2, everything else with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain {
        kind: &'static str,
        message: String,
        /// The property that did not hold, when there is one.
        invariant: Option<String>,
        line: Option<usize>,
    },
}

impl CliError {
    pub fn domain(kind: &'static str, message: impl Into<String>) -> Self {
        CliError::Domain {
            kind,
            message: message.into(),
            invariant: None,
            line: None,
        }
    }

    pub fn invariant(invariant: &str, message: impl Into<String>) -> Self {
        CliError::Domain {
            kind: "invariant_violated",
            message: message.into(),
            invariant: Some(invariant.to_owned()),
            line: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let body = match self {
            CliError::Usage(message) => json!({ "kind": "usage", "message": message }),
            CliError::Domain {
                kind,
                message,
                invariant,
                line,
            } => {
                let mut body = json!({ "kind": kind, "message": message });
                if let Some(inv) = invariant {
                    body["invariant"] = json!(inv);
                }
                if let Some(line) = line {
                    body["line"] = json!(line);
                }
                body
            }
        };
        json!({ "error": body })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Domain { message, .. } => f.write_str(message),
        }
    }
}

/// The property a library error says was violated.
fn violated(e: &Error) -> Option<String> {
    match e {
        Error::NotSymplectic => Some("A^T Λ A = Λ".into()),
        Error::NotStabilizer => Some("A Λ A^T = 0".into()),
        Error::Membership(what) => Some((*what).into()),
        Error::InvalidProfile(what) | Error::InvalidTransitiveSet(what) => Some((*what).into()),
        _ => None,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::InvalidMove(_) => "invalid_move",
            Error::OddDimension(_) => "odd_dimension",
            Error::NotSymplectic => "not_symplectic",
            Error::NotStabilizer => "not_stabilizer",
            Error::InvalidProfile(_) => "invalid_profile",
            Error::Membership(_) => "membership",
            Error::InvalidTransitiveSet(_) => "invalid_transitive_set",
            Error::InvalidTable(_) => "invalid_table",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Parse { .. } => "parse",
        };
        let line = match &e {
            Error::Parse { line, .. } => Some(*line),
            _ => None,
        };
        CliError::Domain {
            kind,
            message: e.to_string(),
            invariant: violated(&e),
            line,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::domain("io", e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Domain {
            kind: "json",
            message: e.to_string(),
            invariant: None,
            line: Some(e.line()).filter(|&l| l > 0),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
