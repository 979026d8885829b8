use std::path::Path;

use adaudit_audience::PartitionPlan;
use adaudit_engine::{AuditOptions, JobPairSpec};
use adaudit_platform::{ProfileSelection, ServiceConfig, WorldConfig};
use adaudit_sim::{PlatformConfig, ScoringVariant};
use adaudit_wire::Objective;
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::InputError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePlan {
    #[serde(default = "conversion_only")]
    pub objectives: Vec<Objective>,
    #[serde(default = "default_budget")]
    pub budget: f64,
    /// Seed of the first trial; trial `i` uses `seed + i`.
    #[serde(default)]
    pub seed: u64,
}

fn conversion_only() -> Vec<Objective> {
    vec![Objective::Conversion]
}

pub fn default_budget() -> f64 {
    50.0
}

impl Default for ObjectivePlan {
    fn default() -> Self {
        Self { objectives: conversion_only(), budget: default_budget(), seed: 0 }
    }
}

/// A complete audit scenario: the simulated platform, its users, the job
/// pairs to test and how to lay out the trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioBundle {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub platform_profile: ProfileSelection,
    #[serde(default)]
    pub platform_config: PlatformConfig,
    pub world: WorldConfig,
    pub job_pairs: Vec<JobPairSpec>,
    pub partition_plan: PartitionPlan,
    #[serde(default)]
    pub objective_plan: ObjectivePlan,
    #[serde(default)]
    pub audit: AuditOptions,
}

const PRESETS: [(&str, &str); 4] = [
    ("delivery-driver", include_str!("../scenarios/delivery-driver.json")),
    ("software-engineer", include_str!("../scenarios/software-engineer.json")),
    ("sales-associate", include_str!("../scenarios/sales-associate.json")),
    ("neutral", include_str!("../scenarios/neutral.json")),
];

impl ScenarioBundle {
    pub fn preset_names() -> impl Iterator<Item = &'static str> {
        PRESETS.iter().map(|(n, _)| *n)
    }

    pub fn preset(name: &str) -> Option<Self> {
        PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| serde_json::from_str(text).expect("shipped presets parse"))
    }

    /// A path to a bundle file, or the name of a shipped preset when no such
    /// file exists.
    pub fn load(arg: &Path) -> Result<Self> {
        if !arg.exists() {
            if let Some(b) = arg.to_str().and_then(Self::preset) {
                return Ok(b);
            }
        }
        Self::from_path(arg)
    }

    /// Loads and validates a bundle. Every failure is an [`InputError`].
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError(format!("cannot read scenario {}: {e}", path.display())))?;
        let bundle: ScenarioBundle = serde_json::from_str(&text)
            .map_err(|e| InputError(format!("scenario {} is not a valid bundle: {e}", path.display())))?;
        bundle.validate().map_err(|e| InputError(format!("scenario {}: {e:#}", path.display())))?;
        Ok(bundle)
    }

    pub fn validate(&self) -> Result<()> {
        if self.job_pairs.is_empty() {
            bail!("no job pairs");
        }
        for pair in &self.job_pairs {
            pair.validate()?;
        }
        let plan = &self.objective_plan;
        if plan.objectives.is_empty() {
            bail!("objective plan is empty");
        }
        if plan.objectives.iter().enumerate().any(|(i, o)| plan.objectives[..i].contains(o)) {
            bail!("objective plan repeats an objective");
        }
        if !(plan.budget > 0.0 && plan.budget.is_finite()) {
            bail!("budget must be positive");
        }
        if self.partition_plan.count == 0 {
            bail!("partition plan must produce at least one partition");
        }
        self.platform_profile.resolve().validate()?;
        self.platform_config.validate().context("platform config")?;
        self.world.population.validate().context("population")?;
        let model = &self.platform_config.scoring_model;
        let uses_qualification = model.variant == ScoringVariant::QualificationOnly
            || (model.variant == ScoringVariant::Composite && model.qualification_weight > 0.0);
        if uses_qualification {
            for pair in &self.job_pairs {
                if !self.world.population.categories.iter().any(|c| c.name == pair.category) {
                    bail!("scoring uses qualifications but the population has none for {:?}", pair.category);
                }
            }
        }
        Ok(())
    }

    pub fn service_config(&self) -> ServiceConfig {
        ServiceConfig {
            profile: self.platform_profile.clone(),
            platform: self.platform_config.clone(),
            world: self.world.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_falls_back_to_presets() {
        let b = ScenarioBundle::load(Path::new("neutral")).unwrap();
        assert_eq!(Some(b), ScenarioBundle::preset("neutral"));
        let err = ScenarioBundle::load(Path::new("astronaut")).unwrap_err();
        assert!(err.downcast_ref::<InputError>().is_some());
    }

    #[test]
    fn presets_parse_and_validate() {
        for name in ScenarioBundle::preset_names() {
            let b = ScenarioBundle::preset(name).unwrap();
            assert_eq!(b.name, name);
            b.validate().unwrap();
        }
        assert!(ScenarioBundle::preset("astronaut").is_none());
    }

    #[test]
    fn validation_catches_missing_categories() {
        let mut b = ScenarioBundle::preset("delivery-driver").unwrap();
        b.world.population.categories.clear();
        assert!(b.validate().is_err());
        let mut b = ScenarioBundle::preset("neutral").unwrap();
        b.objective_plan.objectives = vec![Objective::Reach, Objective::Reach];
        assert!(b.validate().is_err());
    }
}
