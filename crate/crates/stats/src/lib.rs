//! Statistics for paired-ad delivery audits.
//!
//! The core of this crate is [`skew_test`], the pooled two-proportion Z-test
//! comparing the female fraction of the recipients of two concurrently run
//! ads. Around it sit normal-approximation intervals, a power calculator for
//! sizing campaigns, and [`sweep`], the seed-sweep driver used by every Monte
//! Carlo harness in the workspace.

mod interval;
mod power;
mod skew;
pub mod sweep;
mod tally;

pub use interval::{critical_z, proportion_ci, CiMethod, Interval};
pub use power::{required_sample_size, simulate_power};
pub use skew::{one_sample_test, skew_test, Direction, OneSampleResult, SkewTestResult, Tail};
pub use tally::GenderTally;

/// Critical value used throughout the audit (95% confidence).
pub const DEFAULT_Z_ALPHA: f64 = 1.96;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("pooled female fraction is {pooled}; the Z statistic is undefined")]
    DegenerateSample { pooled: f64 },
    #[error("effect size must be non-zero; the required sample is infinite")]
    ZeroEffect,
    #[error("invalid parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

pub type Result<T> = std::result::Result<T, StatsError>;
