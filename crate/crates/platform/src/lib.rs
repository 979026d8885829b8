//! A mock marketing API backed by the delivery simulator.
//!
//! [`Platform`] is the service: it owns a synthetic world (the voter roll and
//! the subset of voters holding accounts), accepts audience uploads and
//! campaigns, executes paired runs and shapes delivery reports through a
//! [`PlatformProfile`] that decides which breakdowns exist and what gets
//! suppressed. [`server`] exposes the same service over HTTP/JSON.

mod config;
mod profile;
mod report;
pub mod server;
mod service;
mod world;

pub use config::{ProfileSelection, ServiceConfig};
pub use profile::{AudienceRounding, PlatformProfile, ProfileName};
pub use report::shape_report;
pub use service::{GroundTruth, Platform};
pub use world::{World, WorldConfig};

#[derive(Debug, thiserror::Error)]
pub enum PlatformError {
    #[error(transparent)]
    Audience(#[from] adaudit_audience::AudienceError),
    #[error(transparent)]
    Sim(#[from] adaudit_sim::SimError),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("configuration: {0}")]
    Config(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PlatformError>;
