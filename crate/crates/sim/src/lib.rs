//! Ground-truth simulator of an ad platform's delivery pipeline.
//!
//! A run takes two campaigns that target the same audience and replays one
//! shared stream of user sessions. Every session triggers an auction between
//! the two campaigns and a pool of background advertisers; the winner's
//! impression is logged with its price and click outcome. How users are
//! scored, what the objective optimizes and how budgets are paced are all
//! knobs on [`PlatformConfig`], so audits can be validated against known
//! mechanisms.

mod campaign;
mod config;
mod engine;
mod pacing;
mod population;
mod scenario;
mod scoring;

pub use campaign::{Campaign, Impression, ImpressionLog, Window};
pub use config::{AutoBid, BidDistribution, Competition, OptimizationTarget, PlatformConfig};
pub use engine::{run_campaign_pair, PairRun, Session, SessionTrace};
pub use pacing::{pace_budget, BudgetPacer, Pacing};
pub use population::{AffinitySpec, CategorySpec, PerGender, PopulationSpec, SimUser, UserId};
pub use scenario::{PopulationShape, SimScenario};
pub use scoring::{objective_target, score_ad, GenderBias, ScoringModel, ScoringVariant};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("invalid campaign {id}: {reason}")]
    InvalidCampaign { id: String, reason: String },
    #[error("invalid platform configuration: {0}")]
    InvalidConfig(String),
    #[error("user {user} has no qualification for category {category:?}")]
    MissingQualification { user: u32, category: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
