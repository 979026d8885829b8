use std::collections::HashMap;
use std::sync::Arc;

use adaudit_audience::{account_draw, generate_synthetic_roll, RollConfig, VoterRecord};
use adaudit_sim::{PopulationSpec, SimUser, UserId};
use serde::{Deserialize, Serialize};

use crate::Result;

/// Everything needed to rebuild a platform's user base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldConfig {
    pub roll: RollConfig,
    #[serde(default)]
    pub population: PopulationSpec,
    /// Seeds account ownership and per-user attributes.
    #[serde(default)]
    pub seed: u64,
}

/// The people who exist (the roll) and the subset who hold accounts.
///
/// A voter holds an account iff `account_draw(seed, index) < match_rate`, so
/// matching an upload is deterministic and agrees with
/// [`adaudit_audience::simulate_matching`] under the same seed and rate.
#[derive(Debug)]
pub struct World {
    roll: Vec<VoterRecord>,
    directory: HashMap<String, u32>,
    users: HashMap<u32, SimUser>,
    seed: u64,
    match_rate: f64,
}

fn contact_key(first: &str, last: &str, zip: &str) -> String {
    let mut k = String::with_capacity(first.len() + last.len() + zip.len() + 2);
    k.push_str(&first.to_ascii_uppercase());
    k.push('\u{1f}');
    k.push_str(&last.to_ascii_uppercase());
    k.push('\u{1f}');
    k.push_str(zip.trim());
    k
}

impl World {
    pub fn generate(config: &WorldConfig, match_rate: f64) -> Result<Arc<World>> {
        let roll = generate_synthetic_roll(&config.roll)?;
        World::from_roll(roll, &config.population, match_rate, config.seed)
    }

    pub fn from_roll(roll: Vec<VoterRecord>, population: &PopulationSpec, match_rate: f64, seed: u64) -> Result<Arc<World>> {
        population.validate()?;
        let mut directory = HashMap::new();
        let mut users = HashMap::new();
        for (idx, r) in roll.iter().enumerate() {
            let idx = idx as u32;
            if account_draw(seed, idx) >= match_rate {
                continue;
            }
            directory.insert(contact_key(&r.first_name, &r.last_name, &r.zip), idx);
            users.insert(idx, population.draw_user(UserId(idx), r.gender, r.county, seed));
        }
        Ok(Arc::new(World { roll, directory, users, seed, match_rate }))
    }

    pub fn roll(&self) -> &[VoterRecord] {
        &self.roll
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn match_rate(&self) -> f64 {
        self.match_rate
    }

    pub fn account_count(&self) -> usize {
        self.users.len()
    }

    /// Roll index of the account holder with this contact, if any.
    /// Names compare case-insensitively.
    pub fn lookup(&self, first: &str, last: &str, zip: &str) -> Option<u32> {
        self.directory.get(&contact_key(first, last, zip)).copied()
    }

    pub fn user(&self, id: u32) -> Option<&SimUser> {
        self.users.get(&id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn account_holders_match_the_draw() {
        let world = World::generate(
            &WorldConfig { roll: RollConfig::new(10, 5_000, 3), population: PopulationSpec::default(), seed: 8 },
            0.2,
        )
        .unwrap();
        for (i, r) in world.roll().iter().enumerate() {
            let holder = account_draw(8, i as u32) < 0.2;
            assert_eq!(world.lookup(&r.first_name, &r.last_name, &r.zip).is_some(), holder);
            assert_eq!(world.user(i as u32).is_some(), holder);
        }
        let share = world.account_count() as f64 / 5_000.0;
        assert!((share - 0.2).abs() < 0.02, "{share}");
        let r = &world.roll()[world.users.keys().copied().min().unwrap() as usize];
        assert!(world.lookup(&r.first_name.to_lowercase(), &r.last_name, &r.zip).is_some());
    }
}
