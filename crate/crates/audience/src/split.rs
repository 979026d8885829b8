use std::collections::{BTreeMap, BTreeSet};

use adaudit_wire::{CountyId, Gender};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{AudienceError, Result, VoterRecord};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRule {
    /// Seeded shuffle, then an even split.
    #[default]
    Random,
    /// Counties sorted by voter count and dealt in pairs, one to each half,
    /// so both halves have near-identical size distributions.
    SizeBalanced,
}

/// Two disjoint halves covering every county.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountySplit {
    pub half_a: BTreeSet<CountyId>,
    pub half_b: BTreeSet<CountyId>,
    pub seed: u64,
}

impl CountySplit {
    pub fn new(half_a: BTreeSet<CountyId>, half_b: BTreeSet<CountyId>, seed: u64) -> Result<Self> {
        if half_a.is_empty() || half_b.is_empty() {
            return Err(AudienceError::InvalidSplit("both halves must be non-empty".into()));
        }
        if let Some(c) = half_a.intersection(&half_b).next() {
            return Err(AudienceError::InvalidSplit(format!("county {c} is in both halves")));
        }
        Ok(Self { half_a, half_b, seed })
    }

    /// Splits the counties present in `roll` according to `rule`.
    pub fn from_roll(roll: &[VoterRecord], rule: SplitRule, seed: u64) -> Result<Self> {
        let mut sizes: BTreeMap<CountyId, usize> = BTreeMap::new();
        for r in roll {
            *sizes.entry(r.county).or_default() += 1;
        }
        match rule {
            SplitRule::Random => Self::random(sizes.into_keys(), seed),
            SplitRule::SizeBalanced => Self::size_balanced(&sizes, seed),
        }
    }

    pub fn random(universe: impl IntoIterator<Item = CountyId>, seed: u64) -> Result<Self> {
        let mut counties: Vec<CountyId> = universe.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if counties.len() < 2 {
            return Err(AudienceError::InvalidSplit("need at least two counties".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        counties.shuffle(&mut rng);
        let b = counties.split_off(counties.len() / 2);
        Self::new(counties.into_iter().collect(), b.into_iter().collect(), seed)
    }

    fn size_balanced(sizes: &BTreeMap<CountyId, usize>, seed: u64) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(AudienceError::InvalidSplit("need at least two counties".into()));
        }
        let mut order: Vec<(CountyId, usize)> = sizes.iter().map(|(c, n)| (*c, *n)).collect();
        order.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut a, mut b) = (BTreeSet::new(), BTreeSet::new());
        for pair in order.chunks(2) {
            let swap = rng.random_bool(0.5);
            for (i, (c, _)) in pair.iter().enumerate() {
                if (i == 0) != swap {
                    a.insert(*c);
                } else {
                    b.insert(*c);
                }
            }
        }
        Self::new(a, b, seed)
    }

    /// The same split with the halves exchanged.
    pub fn mirrored(&self) -> Self {
        Self { half_a: self.half_b.clone(), half_b: self.half_a.clone(), seed: self.seed }
    }

    /// Which half supplies `gender`. Unflipped partitions take men from
    /// half A and women from half B.
    pub fn half_for(&self, gender: Gender, flipped: bool) -> (char, &BTreeSet<CountyId>) {
        match (gender, flipped) {
            (Gender::Male, false) | (Gender::Female, true) => ('a', &self.half_a),
            (Gender::Female, false) | (Gender::Male, true) => ('b', &self.half_b),
        }
    }

    /// Gender implied by an impression in `county`.
    pub fn gender_of(&self, county: CountyId, flipped: bool) -> Option<Gender> {
        let in_a = self.half_a.contains(&county);
        let in_b = self.half_b.contains(&county);
        match (in_a, in_b, flipped) {
            (true, _, false) | (_, true, true) => Some(Gender::Male),
            (_, true, false) | (true, _, true) => Some(Gender::Female),
            _ => None,
        }
    }

    pub fn covers(&self, universe: &BTreeSet<CountyId>) -> bool {
        self.half_a.union(&self.half_b).cloned().collect::<BTreeSet<_>>() == *universe
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: u32) -> BTreeSet<CountyId> {
        (1..=n).map(CountyId).collect()
    }

    #[test]
    fn random_split_partitions_universe() {
        let s = CountySplit::random(ids(100), 9).unwrap();
        assert_eq!(s.half_a.len(), 50);
        assert_eq!(s.half_b.len(), 50);
        assert!(s.half_a.is_disjoint(&s.half_b));
        assert!(s.covers(&ids(100)));
        assert_eq!(s, CountySplit::random(ids(100), 9).unwrap());
        assert_ne!(s, CountySplit::random(ids(100), 10).unwrap());
    }

    #[test]
    fn invalid_splits() {
        assert!(CountySplit::new(ids(2), BTreeSet::new(), 0).is_err());
        assert!(CountySplit::new(ids(2), ids(1), 0).is_err());
        assert!(CountySplit::random(ids(1), 0).is_err());
    }

    #[test]
    fn gender_lookup_follows_flip() {
        let s = CountySplit::new([CountyId(1)].into(), [CountyId(2)].into(), 0).unwrap();
        assert_eq!(s.gender_of(CountyId(1), false), Some(Gender::Male));
        assert_eq!(s.gender_of(CountyId(1), true), Some(Gender::Female));
        assert_eq!(s.gender_of(CountyId(2), false), Some(Gender::Female));
        assert_eq!(s.gender_of(CountyId(3), false), None);
        assert_eq!(s.half_for(Gender::Male, true).0, 'b');
    }

    #[test]
    fn size_balanced_halves_have_matching_mass() {
        let sizes: BTreeMap<CountyId, usize> = (1..=40).map(|k| (CountyId(k), 1000 / k as usize)).collect();
        let s = CountySplit::size_balanced(&sizes, 4).unwrap();
        let mass = |h: &BTreeSet<CountyId>| h.iter().map(|c| sizes[c]).sum::<usize>() as f64;
        let (a, b) = (mass(&s.half_a), mass(&s.half_b));
        assert_eq!(s.half_a.len(), 20);
        // The largest county alone differs from its partner by 500.
        assert!((a - b).abs() <= 600.0, "{a} vs {b}");
    }
}
