use std::path::Path;

use adaudit_wire::{CountyId, Gender};
use serde::{Deserialize, Serialize};

use crate::{run_campaign_pair, Campaign, PairRun, PlatformConfig, PopulationSpec, Result, SimUser, UserId};

/// Size and composition of a directly simulated population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationShape {
    pub users: u32,
    #[serde(default = "half")]
    pub female_share: f64,
    #[serde(default = "one_county")]
    pub counties: u32,
}

fn half() -> f64 {
    0.5
}
fn one_county() -> u32 {
    1
}

/// A self-contained simulation: population, platform and one campaign pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimScenario {
    pub shape: PopulationShape,
    #[serde(default)]
    pub population: PopulationSpec,
    #[serde(default)]
    pub platform: PlatformConfig,
    pub campaigns: [Campaign; 2],
    #[serde(default)]
    pub population_seed: u64,
}

impl SimScenario {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Users `0..n`; the first `round(n × female_share)` are women and
    /// counties are assigned round-robin.
    pub fn build_population(&self) -> Result<Vec<SimUser>> {
        self.population.validate()?;
        let n = self.shape.users;
        let women = (f64::from(n) * self.shape.female_share).round() as u32;
        let counties = self.shape.counties.max(1);
        Ok((0..n)
            .map(|i| {
                let gender = if i < women { Gender::Female } else { Gender::Male };
                self.population.draw_user(UserId(i), gender, CountyId(1 + i % counties), self.population_seed)
            })
            .collect())
    }

    pub fn run(&self, seed: u64) -> Result<PairRun> {
        let population = self.build_population()?;
        let [c1, c2] = &self.campaigns;
        run_campaign_pair(c1, c2, &self.platform, &population, seed)
    }
}
