use std::collections::{BTreeSet, HashSet};

use adaudit_wire::{MarketingApi, Objective};
use serde::{Deserialize, Serialize};

use crate::{AuditPartition, Auditor, EngineError, JobPairSpec, PairedExperiment, Result, TrialOutcome, Verdict};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub skew_matching_de_facto: usize,
    pub skew_opposing_de_facto: usize,
    pub no_skew: usize,
    pub degenerate: usize,
}

impl VerdictCounts {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::SkewMatchingDeFacto => self.skew_matching_de_facto += 1,
            Verdict::SkewOpposingDeFacto => self.skew_opposing_de_facto += 1,
            Verdict::NoSkew => self.no_skew += 1,
            Verdict::Degenerate => self.degenerate += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.skew_matching_de_facto + self.skew_opposing_de_facto + self.no_skew + self.degenerate
    }

    pub fn significant(&self) -> usize {
        self.skew_matching_de_facto + self.skew_opposing_de_facto
    }
}

impl FromIterator<Verdict> for VerdictCounts {
    fn from_iter<I: IntoIterator<Item = Verdict>>(iter: I) -> Self {
        let mut c = VerdictCounts::default();
        iter.into_iter().for_each(|v| c.add(v));
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub outcomes: Vec<TrialOutcome>,
    pub counts: VerdictCounts,
}

/// Mean `|s_a,f − s_b,f|` over trials where both ads reached someone.
pub fn mean_gap(outcomes: &[TrialOutcome]) -> Option<f64> {
    let gaps: Vec<f64> = outcomes.iter().filter_map(TrialOutcome::gap).collect();
    (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveComparison {
    pub conversion: SuiteOutcome,
    pub reach: SuiteOutcome,
    /// Mean gap under Conversion minus mean gap under Reach.
    pub gap_delta: f64,
}

fn check_partitions(partitions: &[AuditPartition]) -> Result<()> {
    if partitions.is_empty() {
        return Err(EngineError::InvalidSuite("no partitions".into()));
    }
    let mut ids = BTreeSet::new();
    for p in partitions {
        if !ids.insert(p.id.as_str()) {
            return Err(EngineError::InvalidSuite(format!("partition {:?} appears twice", p.id)));
        }
    }
    let mut seen = HashSet::new();
    for p in partitions {
        if let Some(row) = p.rows.iter().find(|r| !seen.insert(*r)) {
            return Err(EngineError::InvalidSuite(format!(
                "partition {:?} overlaps another ({} {} {})",
                p.id, row.first_name, row.last_name, row.zip
            )));
        }
    }
    Ok(())
}

impl<A: MarketingApi> Auditor<A> {
    /// One trial per partition, run one after another. Trial `i` uses seed
    /// `seed + i`.
    pub fn run_category_suite(
        &self,
        spec: &JobPairSpec,
        partitions: &[AuditPartition],
        objective: Objective,
        budget: f64,
        seed: u64,
    ) -> Result<SuiteOutcome> {
        spec.validate()?;
        check_partitions(partitions)?;
        let mut outcomes = Vec::with_capacity(partitions.len());
        for (i, p) in partitions.iter().enumerate() {
            let exp = PairedExperiment {
                spec: spec.clone(),
                partition_id: p.id.clone(),
                objective,
                budget,
                seed: seed.wrapping_add(i as u64),
                trial_index: i,
            };
            outcomes.push(self.run_trial(&exp, p)?);
        }
        let counts = outcomes.iter().map(|o| o.verdict).collect();
        Ok(SuiteOutcome { outcomes, counts })
    }

    /// A Conversion suite followed by a Reach suite on the partitions
    /// rotated by one, so no trial pair reuses an audience across objectives.
    pub fn compare_objectives(
        &self,
        spec: &JobPairSpec,
        partitions: &[AuditPartition],
        budget: f64,
        seed: u64,
    ) -> Result<ObjectiveComparison> {
        let conversion = self.run_category_suite(spec, partitions, Objective::Conversion, budget, seed)?;
        let mut rotated = partitions.to_vec();
        rotated.rotate_left(1);
        let reach = self.run_category_suite(spec, &rotated, Objective::Reach, budget, seed)?;
        let gap_delta = mean_gap(&conversion.outcomes).unwrap_or(0.0) - mean_gap(&reach.outcomes).unwrap_or(0.0);
        Ok(ObjectiveComparison { conversion, reach, gap_delta })
    }
}
