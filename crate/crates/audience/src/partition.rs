use adaudit_wire::{Gender, UploadRow};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{AudienceError, CountySplit, Result, SplitRule, VoterRecord};

/// Largest tolerated `|men − women| / max(men, women)` in a partition.
pub const MAX_IMBALANCE: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenderTargets {
    pub male: usize,
    pub female: usize,
}

impl GenderTargets {
    pub fn equal(per_gender: usize) -> Self {
        Self { male: per_gender, female: per_gender }
    }

    fn get(&self, g: Gender) -> usize {
        match g {
            Gender::Male => self.male,
            Gender::Female => self.female,
        }
    }
}

/// A gender-by-county-half targeting list. `members` index into the roll
/// the partition was built from and are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AudiencePartition {
    pub id: String,
    pub members: Vec<u32>,
    pub male_count: usize,
    pub female_count: usize,
    pub flipped: bool,
}

impl AudiencePartition {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }
}

pub fn build_partition(
    roll: &[VoterRecord],
    split: &CountySplit,
    targets: GenderTargets,
    flipped: bool,
) -> Result<AudiencePartition> {
    build_partition_excluding(roll, split, targets, flipped, &[])
}

/// Samples a partition without replacement, skipping roll indices marked in
/// `excluded` (an empty slice excludes nothing).
///
/// Each gender draws from its own RNG stream keyed by the split seed, so a
/// flipped build over a split equals the unflipped build over the mirrored
/// split.
pub fn build_partition_excluding(
    roll: &[VoterRecord],
    split: &CountySplit,
    targets: GenderTargets,
    flipped: bool,
    excluded: &[bool],
) -> Result<AudiencePartition> {
    if roll.is_empty() {
        return Err(AudienceError::InvalidConfiguration("voter roll is empty".into()));
    }
    let (m, f) = (targets.male, targets.female);
    if m.max(f) > 0 && m.abs_diff(f) as f64 / m.max(f) as f64 > MAX_IMBALANCE {
        return Err(AudienceError::Unbalanced { male: m, female: f });
    }
    let mut members = Vec::with_capacity(m + f);
    for (stream, gender) in [(1, Gender::Male), (2, Gender::Female)] {
        let (half_name, half) = split.half_for(gender, flipped);
        let candidates: Vec<u32> = roll
            .iter()
            .enumerate()
            .filter(|(i, r)| {
                r.gender == gender && half.contains(&r.county) && !excluded.get(*i).copied().unwrap_or(false)
            })
            .map(|(i, _)| i as u32)
            .collect();
        let needed = targets.get(gender);
        if needed > candidates.len() {
            return Err(AudienceError::InsufficientPopulation {
                gender,
                half: half_name,
                needed,
                available: candidates.len(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(split.seed);
        rng.set_stream(stream);
        members.extend(index::sample(&mut rng, candidates.len(), needed).into_iter().map(|i| candidates[i]));
    }
    members.sort_unstable();
    Ok(AudiencePartition {
        id: format!("Aud#s{}{}", split.seed, if flipped { "f" } else { "" }),
        members,
        male_count: m,
        female_count: f,
        flipped,
    })
}

/// Recipe for a set of pairwise-disjoint partitions.
///
/// Partitions come in pairs over one split: `Aud#1`, `Aud#1f`, `Aud#2`, ...
/// Each pair uses a fresh split seeded with `seed + pair index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionPlan {
    pub count: usize,
    pub targets: GenderTargets,
    #[serde(default)]
    pub split_rule: SplitRule,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannedPartition {
    pub split: CountySplit,
    pub partition: AudiencePartition,
}

pub fn plan_partitions(roll: &[VoterRecord], plan: &PartitionPlan) -> Result<Vec<PlannedPartition>> {
    let mut used = vec![false; roll.len()];
    let mut out = Vec::with_capacity(plan.count);
    for k in 0..plan.count {
        let pair = k / 2;
        let flipped = k % 2 == 1;
        let split = CountySplit::from_roll(roll, plan.split_rule, plan.seed.wrapping_add(pair as u64))?;
        let partition = build_partition_excluding(roll, &split, plan.targets, flipped, &used)?
            .with_id(format!("Aud#{}{}", pair + 1, if flipped { "f" } else { "" }));
        for &i in &partition.members {
            used[i as usize] = true;
        }
        out.push(PlannedPartition { split, partition });
    }
    Ok(out)
}

/// Contact rows for uploading `members` as a custom audience.
pub fn upload_rows(roll: &[VoterRecord], members: &[u32]) -> Vec<UploadRow> {
    members
        .iter()
        .map(|&i| {
            let r = &roll[i as usize];
            UploadRow { first_name: r.first_name.to_string(), last_name: r.last_name.to_string(), zip: r.zip.to_string() }
        })
        .collect()
}
