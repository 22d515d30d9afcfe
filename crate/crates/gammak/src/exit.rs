//! Exit codes and the machine-readable failure record behind every nonzero exit.

use gammak_core::Error;
use serde_json::{json, Value};

pub const PASS: u8 = 0;
/// Internal errors, and input files that do not parse.
pub const INTERNAL: u8 = 1;
pub const INVALID_INPUT: u8 = 2;
pub const CAP_EXHAUSTED: u8 = 3;
pub const CHECK_FAILED: u8 = 4;

#[derive(Debug, Clone)]
pub struct Failure {
    pub code: u8,
    pub reason: String,
    pub message: String,
    /// Witnesses or partial results.
    pub details: Option<Value>,
}

impl Failure {
    pub fn new(code: u8, reason: impl Into<String>, message: impl Into<String>) -> Self {
        Failure {
            code,
            reason: reason.into(),
            message: message.into(),
            details: None,
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Failure::new(INTERNAL, "parse-error", message)
    }

    pub fn invalid(reason: &str, message: impl Into<String>) -> Self {
        Failure::new(INVALID_INPUT, reason, message)
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "status": "error",
            "exit_code": self.code,
            "reason": self.reason,
            "message": self.message,
        });
        if let Some(d) = &self.details {
            v["details"] = d.clone();
        }
        v
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match &e {
            Error::CapExceeded { what, limit, actual } => Failure::new(CAP_EXHAUSTED, "cap-exceeded", message)
                .with_details(json!({ "cap": what, "limit": limit, "actual": actual, "partial": false })),
            Error::BudgetExhausted { what, limit, found } => Failure::new(CAP_EXHAUSTED, "budget-exhausted", message)
                .with_details(json!({ "search": what, "limit": limit, "found_before_cutoff": found, "partial": true })),
            Error::Undecided(_) => Failure::new(CAP_EXHAUSTED, "iso-undecided", message),
            Error::Unclassified(_) => Failure::new(CAP_EXHAUSTED, "unclassified", message),
            Error::NotStabilizable(_) => Failure::new(CAP_EXHAUSTED, "not-stabilizable", message),
            Error::NotAGroup(_) => Failure::new(INTERNAL, "internal", message),
            Error::NotInvertible(_) => Failure::invalid("not-invertible", message),
            Error::NotAutomorphism(_) => Failure::invalid("not-automorphism", message),
            Error::InvalidComplex(_) => Failure::invalid("invalid-complex", message),
            Error::Structure(_)
            | Error::ArityMismatch(..)
            | Error::NotBinary(_)
            | Error::MissingUnit(_)
            | Error::Mismatch(_)
            | Error::NotTriangular(_) => Failure::invalid("invalid-input", message),
        }
    }
}
