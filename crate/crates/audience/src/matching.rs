use serde::{Deserialize, Serialize};

use crate::{AudiencePartition, AudienceError, Result};

/// The subset of an uploaded partition that matched platform accounts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedAudience {
    pub partition_id: String,
    pub matched_member_ids: Vec<u32>,
    pub match_rate: f64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Uniform `[0, 1)` draw attached to one roll row under `seed`.
///
/// A row has an account at rate `r` iff its draw is below `r`, so matched
/// sets grow monotonically with the rate for a fixed seed.
pub fn account_draw(seed: u64, roll_index: u32) -> f64 {
    let bits = splitmix64(splitmix64(seed) ^ u64::from(roll_index));
    (bits >> 11) as f64 / (1u64 << 53) as f64
}

/// Keeps each member independently with probability `rate`.
pub fn simulate_matching(partition: &AudiencePartition, rate: f64, seed: u64) -> Result<MatchedAudience> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(AudienceError::InvalidRate(rate));
    }
    let matched: Vec<u32> = partition.members.iter().copied().filter(|&i| account_draw(seed, i) < rate).collect();
    let match_rate = if partition.is_empty() { 0.0 } else { matched.len() as f64 / partition.len() as f64 };
    Ok(MatchedAudience { partition_id: partition.id.clone(), matched_member_ids: matched, match_rate })
}
