use std::collections::BTreeMap;

use adaudit_wire::{CountyId, Gender};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UserId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerGender<T> {
    pub male: T,
    pub female: T,
}

impl<T: Copy> PerGender<T> {
    pub fn same(v: T) -> Self {
        Self { male: v, female: v }
    }

    pub fn get(&self, g: Gender) -> T {
        match g {
            Gender::Male => self.male,
            Gender::Female => self.female,
        }
    }
}

/// A platform user as the simulator sees it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimUser {
    pub id: UserId,
    pub gender: Gender,
    pub county: CountyId,
    /// Job category → qualification score in `[0, 1]`.
    pub qualification: BTreeMap<String, f64>,
    /// Creative affinity key (the advertiser label) → click probability.
    /// Keys absent here click at the platform's reference rate.
    pub engagement: BTreeMap<String, f64>,
    /// Expected sessions per campaign window.
    pub online_rate: f64,
}

impl SimUser {
    pub fn click_probability(&self, affinity_key: &str, default_click: f64) -> f64 {
        self.engagement.get(affinity_key).copied().unwrap_or(default_click)
    }
}

/// Qualification for one job category, drawn per user from a Beta
/// distribution with a gender-specific mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategorySpec {
    pub name: String,
    pub mean: PerGender<f64>,
    #[serde(default = "default_concentration")]
    pub concentration: f64,
}

fn default_concentration() -> f64 {
    10.0
}

/// Click propensity toward one advertiser's creative, by gender.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinitySpec {
    pub affinity_key: String,
    pub click: PerGender<f64>,
}

/// Recipe for drawing per-user attributes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationSpec {
    #[serde(default)]
    pub categories: Vec<CategorySpec>,
    #[serde(default)]
    pub affinities: Vec<AffinitySpec>,
    /// Log-scale spread of individual click propensities around the gender mean.
    #[serde(default = "default_click_spread")]
    pub click_spread: f64,
    #[serde(default = "default_online_rate")]
    pub online_rate: PerGender<f64>,
}

fn default_click_spread() -> f64 {
    0.25
}
fn default_online_rate() -> PerGender<f64> {
    PerGender::same(2.0)
}

impl Default for PopulationSpec {
    fn default() -> Self {
        Self {
            categories: Vec::new(),
            affinities: Vec::new(),
            click_spread: default_click_spread(),
            online_rate: default_online_rate(),
        }
    }
}

impl PopulationSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(SimError::InvalidConfig(what));
        for c in &self.categories {
            for m in [c.mean.male, c.mean.female] {
                if !(0.0..=1.0).contains(&m) {
                    return bad(format!("qualification mean {m} for {:?}", c.name));
                }
            }
            if !(c.concentration > 0.0) {
                return bad(format!("concentration {} for {:?}", c.concentration, c.name));
            }
        }
        for a in &self.affinities {
            for p in [a.click.male, a.click.female] {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("click probability {p} for {:?}", a.affinity_key));
                }
            }
        }
        if !(self.click_spread >= 0.0) {
            return bad("click spread must be non-negative".into());
        }
        if !(self.online_rate.male >= 0.0 && self.online_rate.female >= 0.0) {
            return bad("negative online rate".into());
        }
        Ok(())
    }

    /// Draws one user. Attributes depend only on `(seed, id)`, so the same
    /// person looks the same whichever audience they are part of.
    pub fn draw_user(&self, id: UserId, gender: Gender, county: CountyId, seed: u64) -> SimUser {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(id.0));
        let qualification = self
            .categories
            .iter()
            .map(|c| {
                let mean = c.mean.get(gender);
                let q = if mean <= 0.0 || mean >= 1.0 {
                    mean
                } else {
                    Beta::new(mean * c.concentration, (1.0 - mean) * c.concentration)
                        .expect("validated beta parameters")
                        .sample(&mut rng)
                };
                (c.name.clone(), q)
            })
            .collect();
        let engagement = self
            .affinities
            .iter()
            .map(|a| {
                let z: f64 = StandardNormal.sample(&mut rng);
                let jitter = (self.click_spread * z - self.click_spread * self.click_spread / 2.0).exp();
                (a.affinity_key.clone(), (a.click.get(gender) * jitter).clamp(0.0, 1.0))
            })
            .collect();
        SimUser { id, gender, county, qualification, engagement, online_rate: self.online_rate.get(gender) }
    }
}
