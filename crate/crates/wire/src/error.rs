use std::fmt;

use serde::{Deserialize, Serialize};

/// Machine-readable error codes carried in `{code, message}` bodies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    MalformedBody,
    InvalidCampaign,
    InvalidRun,
    InvalidPairing,
    PolicyViolation,
    NotFound,
    RunPending,
    AlreadyRun,
}

impl ErrorCode {
    pub fn status(self) -> u16 {
        match self {
            ErrorCode::MalformedBody | ErrorCode::InvalidCampaign | ErrorCode::InvalidRun | ErrorCode::InvalidPairing => 400,
            ErrorCode::NotFound => 404,
            ErrorCode::RunPending | ErrorCode::AlreadyRun => 409,
            ErrorCode::PolicyViolation => 422,
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(code_name(*self))
    }
}

fn code_name(code: ErrorCode) -> &'static str {
    match code {
        ErrorCode::MalformedBody => "malformed_body",
        ErrorCode::InvalidCampaign => "invalid_campaign",
        ErrorCode::InvalidRun => "invalid_run",
        ErrorCode::InvalidPairing => "invalid_pairing",
        ErrorCode::PolicyViolation => "policy_violation",
        ErrorCode::NotFound => "not_found",
        ErrorCode::RunPending => "run_pending",
        ErrorCode::AlreadyRun => "already_run",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ApiError {
    #[error("HTTP {status} {}: {}", body.code, body.message)]
    Status { status: u16, body: ErrorBody },
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("undecodable response: {0}")]
    Decode(String),
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError::Status { status: code.status(), body: ErrorBody { code, message: message.into() } }
    }

    pub fn code(&self) -> Option<ErrorCode> {
        match self {
            ApiError::Status { body, .. } => Some(body.code),
            _ => None,
        }
    }

    pub fn status(&self) -> Option<u16> {
        match self {
            ApiError::Status { status, .. } => Some(*status),
            _ => None,
        }
    }

    pub fn is_transport(&self) -> bool {
        matches!(self, ApiError::Transport(_))
    }
}
