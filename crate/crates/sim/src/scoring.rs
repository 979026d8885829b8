use adaudit_wire::Gender;
use serde::{Deserialize, Serialize};

use crate::{Campaign, OptimizationTarget, PlatformConfig, Result, SimError, SimUser};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoringVariant {
    #[default]
    Neutral,
    QualificationOnly,
    GenderEngagement,
    Composite,
}

/// Learned association between an advertiser and one gender.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenderBias {
    pub company_label: String,
    pub gender: Gender,
    pub factor: f64,
}

/// Relevance model applied on top of bids.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoringModel {
    pub variant: ScoringVariant,
    #[serde(default)]
    pub gender_bias: Vec<GenderBias>,
    #[serde(default)]
    pub qualification_weight: f64,
}

impl ScoringModel {
    pub fn neutral() -> Self {
        Self::default()
    }

    pub fn qualification_only() -> Self {
        Self { variant: ScoringVariant::QualificationOnly, ..Self::default() }
    }

    /// `factor` for `company_label` × `gender`, 1 for every other pair.
    pub fn bias_factor(&self, company_label: &str, gender: Gender) -> f64 {
        self.gender_bias
            .iter()
            .filter(|b| b.company_label == company_label && b.gender == gender)
            .map(|b| b.factor)
            .product()
    }

    pub fn validate(&self) -> Result<()> {
        if self.gender_bias.iter().any(|b| !(b.factor >= 0.0 && b.factor.is_finite())) {
            return Err(SimError::InvalidConfig("gender bias factors must be finite and ≥ 0".into()));
        }
        if !(0.0..=1.0).contains(&self.qualification_weight) {
            return Err(SimError::InvalidConfig("qualification weight must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Relevance of `campaign` for `user`; always ≥ 0.
///
/// A missing qualification entry scores as 0; runs reject such populations
/// up front.
pub fn score_ad(user: &SimUser, campaign: &Campaign, model: &ScoringModel) -> f64 {
    let qualification = || user.qualification.get(&campaign.job_category).copied().unwrap_or(0.0);
    let bias = || model.bias_factor(&campaign.company_label, user.gender);
    match model.variant {
        ScoringVariant::Neutral => 1.0,
        ScoringVariant::QualificationOnly => qualification(),
        ScoringVariant::GenderEngagement => bias(),
        ScoringVariant::Composite => {
            let w = model.qualification_weight;
            bias() * (1.0 - w + w * qualification())
        }
    }
}

pub fn objective_target(campaign: &Campaign, platform: &PlatformConfig) -> OptimizationTarget {
    platform
        .objective_semantics
        .get(&campaign.objective)
        .copied()
        .expect("validated configs cover every objective")
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use adaudit_wire::{CountyId, Objective};

    use super::*;
    use crate::{UserId, Window};

    fn user(gender: Gender, q: f64) -> SimUser {
        SimUser {
            id: UserId(1),
            gender,
            county: CountyId(1),
            qualification: BTreeMap::from([("driver".to_string(), q)]),
            engagement: BTreeMap::new(),
            online_rate: 1.0,
        }
    }

    fn campaign(label: &str, objective: Objective) -> Campaign {
        Campaign {
            id: "c1".into(),
            job_category: "driver".into(),
            company_label: label.into(),
            creative: Default::default(),
            objective,
            total_budget: 50.0,
            audience: "a".into(),
            declared_job_ad: true,
            window: Window::default(),
        }
    }

    #[test]
    fn neutral_is_constant() {
        let c = campaign("A", Objective::Conversion);
        let m = ScoringModel::neutral();
        assert_eq!(score_ad(&user(Gender::Male, 0.9), &c, &m), score_ad(&user(Gender::Female, 0.1), &c, &m));
    }

    #[test]
    fn qualification_only_is_monotone() {
        let c = campaign("A", Objective::Conversion);
        let m = ScoringModel::qualification_only();
        assert!(score_ad(&user(Gender::Male, 0.9), &c, &m) > score_ad(&user(Gender::Male, 0.2), &c, &m));
        assert_eq!(score_ad(&user(Gender::Male, 0.4), &c, &m), score_ad(&user(Gender::Female, 0.4), &c, &m));
    }

    #[test]
    fn gender_engagement_multiplies() {
        let c = campaign("A", Objective::Conversion);
        let m = ScoringModel {
            variant: ScoringVariant::GenderEngagement,
            gender_bias: vec![GenderBias { company_label: "A".into(), gender: Gender::Male, factor: 2.0 }],
            qualification_weight: 0.0,
        };
        assert_eq!(score_ad(&user(Gender::Male, 0.5), &c, &m), 2.0 * score_ad(&user(Gender::Female, 0.5), &c, &m));
        assert_eq!(score_ad(&user(Gender::Male, 0.5), &campaign("B", Objective::Reach), &m), 1.0);
    }

    #[test]
    fn composite_blends() {
        let c = campaign("A", Objective::Conversion);
        let m = ScoringModel {
            variant: ScoringVariant::Composite,
            gender_bias: vec![GenderBias { company_label: "A".into(), gender: Gender::Female, factor: 1.5 }],
            qualification_weight: 0.5,
        };
        let s = score_ad(&user(Gender::Female, 0.2), &c, &m);
        assert!((s - 1.5 * 0.6).abs() < 1e-15);
    }

    #[test]
    fn objective_semantics_lookup() {
        let p = PlatformConfig::default();
        assert_eq!(objective_target(&campaign("A", Objective::Reach), &p), OptimizationTarget::ImpressionCount);
        assert_eq!(objective_target(&campaign("A", Objective::Conversion), &p), OptimizationTarget::PredictedClick);
    }
}
