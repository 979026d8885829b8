//! Audience construction for county-proxy gender audits.
//!
//! Counties are split into two halves. A partition targets only men from one
//! half and only women from the other, so a report that breaks impressions
//! down by county also reveals, by proxy, their gender split. Flipping the
//! assignment yields a second audience over the same split that shares no
//! members with the first.

mod inference;
mod matching;
mod partition;
mod roll;
mod split;

pub use inference::{infer_gender_counts, InferredCounts};
pub use matching::{account_draw, simulate_matching, MatchedAudience};
pub use partition::{
    build_partition, build_partition_excluding, plan_partitions, upload_rows, AudiencePartition, GenderTargets,
    PartitionPlan, PlannedPartition, MAX_IMBALANCE,
};
pub use roll::{generate_synthetic_roll, read_roll_csv, write_roll_csv, CountyWeights, RollConfig, VoterRecord};
pub use split::{CountySplit, SplitRule};

use adaudit_wire::{CountyId, Gender};

#[derive(Debug, thiserror::Error)]
pub enum AudienceError {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("not enough {gender} voters in county half {half}: need {needed}, have {available}")]
    InsufficientPopulation { gender: Gender, half: char, needed: usize, available: usize },
    #[error("unbalanced partition: {male} men vs {female} women")]
    Unbalanced { male: usize, female: usize },
    #[error("invalid county split: {0}")]
    InvalidSplit(String),
    #[error("match rate {0} is outside [0, 1]")]
    InvalidRate(f64),
    #[error("report for {0} has no county breakdown")]
    UnsupportedReport(String),
    #[error("county {0} is in neither half of the split")]
    UnknownCounty(CountyId),
    #[error("voter roll line {line}: {reason}")]
    InvalidRecord { line: u64, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, AudienceError>;
