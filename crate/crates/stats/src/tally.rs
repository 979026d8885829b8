use serde::{Deserialize, Serialize};

/// Recipient counts of one ad, split by gender.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenderTally {
    pub female: u64,
    pub male: u64,
}

impl GenderTally {
    pub fn new(female: u64, male: u64) -> Self {
        Self { female, male }
    }

    pub fn n(&self) -> u64 {
        self.female + self.male
    }

    /// Female fraction, `None` for an empty tally.
    pub fn female_fraction(&self) -> Option<f64> {
        match self.n() {
            0 => None,
            n => Some(self.female as f64 / n as f64),
        }
    }

    pub fn scaled(&self, k: u64) -> Self {
        Self::new(self.female * k, self.male * k)
    }
}
