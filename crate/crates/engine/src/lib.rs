//! Paired-ad audits driven purely through a [`MarketingApi`].
//!
//! The engine only sees what an advertiser sees: upload acknowledgements,
//! campaign ids and aggregate delivery reports. Recipient gender comes from
//! the report's gender breakdown when there is one and from the county split
//! of the audience partition otherwise.
//!
//! [`MarketingApi`]: adaudit_wire::MarketingApi

mod http;
mod jobs;
mod suite;
mod trial;

pub use http::HttpApi;
pub use jobs::{JobPairSpec, JobPosting};
pub use suite::{mean_gap, ObjectiveComparison, SuiteOutcome, VerdictCounts};
pub use trial::{
    AuditOptions, AuditPartition, Auditor, GenderSource, PairedExperiment, RunRecord, TrialOutcome, UnreportedPolicy,
    Verdict,
};

use adaudit_wire::ApiError;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Api(#[from] ApiError),
    #[error("invalid job pair: {0}")]
    InvalidSpec(String),
    #[error("invalid suite: {0}")]
    InvalidSuite(String),
    #[error("report for {0} has neither a gender nor a county breakdown")]
    UnsupportedReport(String),
    #[error(transparent)]
    Inference(#[from] adaudit_audience::AudienceError),
    #[error(transparent)]
    Stats(#[from] adaudit_stats::StatsError),
}

pub type Result<T> = std::result::Result<T, EngineError>;
