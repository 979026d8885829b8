use std::collections::BTreeMap;

use adaudit_wire::{Gender, Objective};
use serde::{Deserialize, Serialize};

use crate::{Pacing, PerGender, Result, ScoringModel, SimError};

/// What the auction optimizes for an objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizationTarget {
    /// Rank by bid × relevance × predicted click.
    PredictedClick,
    /// Rank by bid × relevance; engagement is ignored.
    ImpressionCount,
}

/// Log-normal bid distribution given by its median and log-scale spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BidDistribution {
    pub median: f64,
    pub sigma: f64,
}

/// Background advertisers bidding on every session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Competition {
    pub competitors: u32,
    pub bids: PerGender<BidDistribution>,
}

impl Competition {
    pub fn bids_for(&self, g: Gender) -> BidDistribution {
        self.bids.get(g)
    }
}

impl Default for Competition {
    fn default() -> Self {
        Self { competitors: 3, bids: PerGender::same(BidDistribution { median: 0.035, sigma: 0.5 }) }
    }
}

/// Platform-side automated bidding on the advertiser's behalf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutoBid {
    /// Median bid per impression.
    pub base_bid: f64,
    /// Log-scale spread of per-auction bid noise.
    pub noise_sigma: f64,
    /// Click rate at which predicted-click ranking equals reach ranking.
    pub reference_click: f64,
    /// Price floor when no other bidder is eligible.
    pub reserve_price: f64,
}

impl Default for AutoBid {
    fn default() -> Self {
        Self { base_bid: 0.06, noise_sigma: 0.5, reference_click: 0.05, reserve_price: 0.01 }
    }
}

fn default_semantics() -> BTreeMap<Objective, OptimizationTarget> {
    BTreeMap::from([
        (Objective::Conversion, OptimizationTarget::PredictedClick),
        (Objective::Reach, OptimizationTarget::ImpressionCount),
    ])
}

fn default_session_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatformConfig {
    #[serde(default)]
    pub scoring_model: ScoringModel,
    #[serde(default)]
    pub competition: Competition,
    #[serde(default)]
    pub autobid: AutoBid,
    /// Multiplier on every user's expected sessions.
    #[serde(default = "default_session_scale")]
    pub session_scale: f64,
    #[serde(default)]
    pub pacing: Pacing,
    #[serde(default = "default_semantics")]
    pub objective_semantics: BTreeMap<Objective, OptimizationTarget>,
}

impl Default for PlatformConfig {
    fn default() -> Self {
        Self {
            scoring_model: ScoringModel::default(),
            competition: Competition::default(),
            autobid: AutoBid::default(),
            session_scale: default_session_scale(),
            pacing: Pacing::default(),
            objective_semantics: default_semantics(),
        }
    }
}

impl PlatformConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(SimError::InvalidConfig(s.into()));
        for o in [Objective::Conversion, Objective::Reach] {
            if !self.objective_semantics.contains_key(&o) {
                return bad("objective semantics must cover conversion and reach");
            }
        }
        let a = &self.autobid;
        if !(a.base_bid > 0.0 && a.noise_sigma >= 0.0 && a.reference_click > 0.0 && a.reserve_price >= 0.0) {
            return bad("autobid parameters out of range");
        }
        for g in Gender::ALL {
            let d = self.competition.bids_for(g);
            if !(d.median > 0.0 && d.sigma >= 0.0) {
                return bad("competitor bid distribution out of range");
            }
        }
        if !(self.session_scale >= 0.0) {
            return bad("session scale must be non-negative");
        }
        self.scoring_model.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_total() {
        let c = PlatformConfig::default();
        c.validate().unwrap();
        let parsed: PlatformConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(parsed, c);
        let mut partial = c.clone();
        partial.objective_semantics.remove(&Objective::Reach);
        assert!(partial.validate().is_err());
    }
}
