//! Many independent trials of one experiment, for calibration and power
//! studies.
//!
//! Each seed gets its own platform instance over a shared world, so trials
//! never see each other's audiences or campaigns and results do not depend on
//! execution order.

use std::ops::Range;
use std::sync::Arc;

use adaudit_engine::{AuditOptions, AuditPartition, Auditor, JobPairSpec, PairedExperiment, TrialOutcome};
use adaudit_platform::{Platform, PlatformProfile, World};
use adaudit_sim::PlatformConfig;
use adaudit_stats::sweep;
use adaudit_wire::Objective;
use anyhow::Result;

pub struct TrialBench {
    pub world: Arc<World>,
    pub profile: PlatformProfile,
    pub config: PlatformConfig,
    pub partitions: Vec<AuditPartition>,
    pub spec: JobPairSpec,
    pub objective: Objective,
    pub budget: f64,
    pub options: AuditOptions,
}

impl TrialBench {
    /// One trial on a fresh platform; the seed also picks the partition.
    pub fn trial(&self, seed: u64) -> Result<TrialOutcome> {
        let platform = Platform::new(self.profile.clone(), self.config.clone(), Arc::clone(&self.world))?;
        let partition = &self.partitions[(seed % self.partitions.len() as u64) as usize];
        let exp = PairedExperiment {
            spec: self.spec.clone(),
            partition_id: partition.id.clone(),
            objective: self.objective,
            budget: self.budget,
            seed,
            trial_index: seed as usize,
        };
        Ok(Auditor::new(&platform, self.options).run_trial(&exp, partition)?)
    }

    /// Runs on the rayon pool when the `parallel` feature is on.
    pub fn sweep(&self, seeds: Range<u64>) -> Result<Vec<TrialOutcome>> {
        sweep::map_seeds(seeds, |s| self.trial(s)).into_iter().collect()
    }

    pub fn sweep_sequential(&self, seeds: Range<u64>) -> Result<Vec<TrialOutcome>> {
        sweep::sequential(seeds, |s| self.trial(s)).into_iter().collect()
    }
}
