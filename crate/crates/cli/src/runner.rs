use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use adaudit_audience::{generate_synthetic_roll, plan_partitions, VoterRecord};
use adaudit_engine::{AuditPartition, Auditor, HttpApi, TrialOutcome};
use adaudit_platform::server::BackgroundServer;
use adaudit_platform::Platform;
use adaudit_wire::{MarketingApi, Objective};
use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::{render, ScenarioBundle, Summary};

/// Where the platform lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// Call the platform directly.
    InProcess,
    /// Start the HTTP service on a loopback port and audit over the wire.
    LocalHttp,
    /// An already running service at this base URL, configured with the
    /// same world as the bundle.
    Remote(String),
}

impl Target {
    fn label(&self) -> String {
        match self {
            Target::InProcess => "in-process".into(),
            Target::LocalHttp => "local-http".into(),
            Target::Remote(url) => format!("remote {url}"),
        }
    }
}

/// Parameters of a run, stored next to its trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    pub profile: String,
    pub seeds: usize,
    pub base_seed: u64,
    pub budget: f64,
    pub objectives: Vec<Objective>,
    pub partitions: Vec<String>,
    pub target: String,
}

pub fn build_partitions(bundle: &ScenarioBundle, roll: &[VoterRecord]) -> Result<Vec<AuditPartition>> {
    let planned = plan_partitions(roll, &bundle.partition_plan).context("building audience partitions")?;
    Ok(planned.iter().map(|p| AuditPartition::from_planned(p, roll)).collect())
}

/// Runs `seeds` trials for every job pair and objective, one after another.
///
/// Trials cycle through the partitions in suites that use each partition at
/// most once; objective `k` starts from the partition list rotated by `k`.
/// Trial `i` of every suite sequence runs with seed `base + i`.
pub fn run_scenario(bundle: &ScenarioBundle, seeds: usize, target: &Target) -> Result<(RunManifest, Vec<TrialOutcome>)> {
    bundle.validate()?;
    let service = bundle.service_config();
    let (partitions, outcomes) = match target {
        Target::InProcess => {
            let platform = Platform::from_config(&service)?;
            let parts = build_partitions(bundle, platform.world().roll())?;
            let outcomes = drive(&Auditor::new(&platform, bundle.audit), bundle, &parts, seeds)?;
            (parts, outcomes)
        }
        Target::LocalHttp => {
            let platform = Arc::new(Platform::from_config(&service)?);
            let parts = build_partitions(bundle, platform.world().roll())?;
            let server = BackgroundServer::start(platform, "127.0.0.1:0")?;
            let outcomes = drive(&Auditor::new(HttpApi::new(server.url()), bundle.audit), bundle, &parts, seeds)?;
            (parts, outcomes)
        }
        Target::Remote(url) => {
            let roll = generate_synthetic_roll(&bundle.world.roll)?;
            let parts = build_partitions(bundle, &roll)?;
            let outcomes = drive(&Auditor::new(HttpApi::new(url.clone()), bundle.audit), bundle, &parts, seeds)?;
            (parts, outcomes)
        }
    };
    let manifest = RunManifest {
        scenario: bundle.name.clone(),
        profile: bundle.platform_profile.resolve().name,
        seeds,
        base_seed: bundle.objective_plan.seed,
        budget: bundle.objective_plan.budget,
        objectives: bundle.objective_plan.objectives.clone(),
        partitions: partitions.iter().map(|p| p.id.clone()).collect(),
        target: target.label(),
    };
    Ok((manifest, outcomes))
}

fn drive<A: MarketingApi>(
    auditor: &Auditor<A>,
    bundle: &ScenarioBundle,
    partitions: &[AuditPartition],
    seeds: usize,
) -> Result<Vec<TrialOutcome>> {
    let plan = &bundle.objective_plan;
    let mut outcomes = Vec::new();
    for pair in &bundle.job_pairs {
        for (k, &objective) in plan.objectives.iter().enumerate() {
            let mut rotated = partitions.to_vec();
            rotated.rotate_left(k % partitions.len());
            let mut done = 0;
            while done < seeds {
                let chunk = (seeds - done).min(rotated.len());
                let suite = auditor
                    .run_category_suite(pair, &rotated[..chunk], objective, plan.budget, plan.seed + done as u64)
                    .with_context(|| format!("{} / {objective:?}", pair.category))?;
                for (j, mut o) in suite.outcomes.into_iter().enumerate() {
                    o.experiment.trial_index = done + j;
                    outcomes.push(o);
                }
                done += chunk;
            }
        }
    }
    Ok(outcomes)
}

pub const TRIALS_FILE: &str = "trials.jsonl";
pub const MANIFEST_FILE: &str = "run.json";
pub const SUMMARY_JSON: &str = "summary.json";
pub const SUMMARY_TXT: &str = "summary.txt";

/// Writes `run.json`, `trials.jsonl`, `summary.json` and `summary.txt`.
pub fn write_artifacts(dir: &Path, manifest: &RunManifest, outcomes: &[TrialOutcome]) -> Result<Summary> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(manifest)? + "\n")?;
    let mut trials = BufWriter::new(fs::File::create(dir.join(TRIALS_FILE))?);
    for o in outcomes {
        serde_json::to_writer(&mut trials, o)?;
        trials.write_all(b"\n")?;
    }
    trials.flush()?;
    let summary = Summary::from_outcomes(manifest, outcomes);
    fs::write(dir.join(SUMMARY_JSON), serde_json::to_string_pretty(&summary)? + "\n")?;
    fs::write(dir.join(SUMMARY_TXT), render(&summary))?;
    Ok(summary)
}

/// Reads back a run directory.
pub fn load_run(dir: &Path) -> Result<(RunManifest, Vec<TrialOutcome>)> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest: RunManifest = serde_json::from_str(
        &fs::read_to_string(&manifest_path).with_context(|| format!("reading {}", manifest_path.display()))?,
    )
    .with_context(|| format!("parsing {}", manifest_path.display()))?;
    let trials_path = dir.join(TRIALS_FILE);
    let file = fs::File::open(&trials_path).with_context(|| format!("reading {}", trials_path.display()))?;
    let mut outcomes = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        outcomes.push(serde_json::from_str(&line).with_context(|| format!("{} line {}", trials_path.display(), i + 1))?);
    }
    Ok((manifest, outcomes))
}
