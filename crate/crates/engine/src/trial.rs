use adaudit_audience::{infer_gender_counts, upload_rows, CountySplit, PlannedPartition, VoterRecord};
use adaudit_stats::{skew_test, Direction, GenderTally, SkewTestResult, StatsError, Tail, DEFAULT_Z_ALPHA};
use adaudit_wire::{
    ApiError, CampaignSpec, Creative, DeliveryReport, MarketingApi, Objective, RunRequest, UploadRow,
};
use serde::{Deserialize, Serialize};

use crate::{EngineError, JobPairSpec, JobPosting, Result};

/// What the auditor knows about one audience partition: the contacts to
/// upload and the county split that encodes gender.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditPartition {
    pub id: String,
    pub rows: Vec<UploadRow>,
    pub split: CountySplit,
    pub flipped: bool,
}

impl AuditPartition {
    pub fn from_planned(planned: &PlannedPartition, roll: &[VoterRecord]) -> Self {
        Self {
            id: planned.partition.id.clone(),
            rows: upload_rows(roll, &planned.partition.members),
            split: planned.split.clone(),
            flipped: planned.partition.flipped,
        }
    }
}

/// How impressions missing from a suppressed county breakdown are handled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnreportedPolicy {
    /// Tally only what the breakdown shows.
    #[default]
    Exclude,
    /// Scale the inferred counts up to the reported total, assuming the
    /// missing impressions have the same gender mix.
    Proportional,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    pub z_alpha: f64,
    #[serde(default)]
    pub tail: Tail,
    #[serde(default)]
    pub unreported: UnreportedPolicy,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self { z_alpha: DEFAULT_Z_ALPHA, tail: Tail::TwoSided, unreported: UnreportedPolicy::Exclude }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedExperiment {
    pub spec: JobPairSpec,
    pub partition_id: String,
    pub objective: Objective,
    pub budget: f64,
    pub seed: u64,
    pub trial_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    SkewMatchingDeFacto,
    SkewOpposingDeFacto,
    NoSkew,
    Degenerate,
}

impl Verdict {
    pub fn from_test(test: Option<&SkewTestResult>, de_facto: Direction) -> Self {
        match test {
            None => Verdict::Degenerate,
            Some(t) if !t.significant => Verdict::NoSkew,
            Some(t) if t.direction == de_facto => Verdict::SkewMatchingDeFacto,
            Some(_) => Verdict::SkewOpposingDeFacto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenderSource {
    Reported,
    CountyProxy,
}

/// Everything exchanged with the platform during one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub audience_id: String,
    pub size_estimate: Option<u64>,
    pub run_id: String,
    pub campaign_ids: [String; 2],
    pub campaigns: [CampaignSpec; 2],
    pub reports: [DeliveryReport; 2],
}

impl RunRecord {
    /// Both campaigns share audience, budget and objective.
    pub fn pairing_intact(&self) -> bool {
        let [a, b] = &self.campaigns;
        a.audience_id == self.audience_id
            && b.audience_id == self.audience_id
            && a.total_budget == b.total_budget
            && a.objective == b.objective
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub experiment: PairedExperiment,
    pub gender_source: GenderSource,
    pub tally_a: GenderTally,
    pub tally_b: GenderTally,
    pub unreported_a: u64,
    pub unreported_b: u64,
    pub tail: Tail,
    pub test: Option<SkewTestResult>,
    pub verdict: Verdict,
    pub record: RunRecord,
}

fn run_test(a: GenderTally, b: GenderTally, z_alpha: f64, tail: Tail) -> Result<Option<SkewTestResult>> {
    match skew_test(a, b, z_alpha, tail) {
        Ok(t) => Ok(Some(t)),
        Err(StatsError::EmptySample | StatsError::DegenerateSample { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

impl TrialOutcome {
    /// Re-derives the verdict from the stored tallies.
    pub fn recomputed_verdict(&self) -> Result<Verdict> {
        let z_alpha = self.test.as_ref().map_or(DEFAULT_Z_ALPHA, |t| t.z_alpha);
        let test = run_test(self.tally_a, self.tally_b, z_alpha, self.tail)?;
        Ok(Verdict::from_test(test.as_ref(), self.experiment.spec.de_facto_direction()))
    }

    /// `|s_a,f − s_b,f|`, if both ads reached anyone.
    pub fn gap(&self) -> Option<f64> {
        Some((self.tally_a.female_fraction()? - self.tally_b.female_fraction()?).abs())
    }
}

/// Runs paired audits against one platform.
///
/// Every API call that fails at the transport level is retried once; a
/// second failure aborts the trial.
#[derive(Debug)]
pub struct Auditor<A> {
    api: A,
    options: AuditOptions,
}

impl<A: MarketingApi> Auditor<A> {
    pub fn new(api: A, options: AuditOptions) -> Self {
        Self { api, options }
    }

    pub fn api(&self) -> &A {
        &self.api
    }

    pub fn options(&self) -> &AuditOptions {
        &self.options
    }

    fn call<T>(&self, f: impl Fn(&A) -> std::result::Result<T, ApiError>) -> Result<T> {
        match f(&self.api) {
            Err(e) if e.is_transport() => Ok(f(&self.api)?),
            r => Ok(r?),
        }
    }

    fn campaign(spec: &JobPairSpec, job: &JobPosting, audience_id: &str, exp: &PairedExperiment) -> CampaignSpec {
        CampaignSpec {
            audience_id: audience_id.to_string(),
            job_category: spec.category.clone(),
            company_label: job.company_label.clone(),
            creative: Creative {
                headline: format!("{} wanted", spec.category),
                body: format!("{} is hiring in {}", job.company_label, spec.location_label),
                image_tag: spec.category.replace(' ', "-"),
            },
            objective: exp.objective,
            total_budget: exp.budget,
            declared_job_ad: true,
            targeting: None,
        }
    }

    fn tally(&self, report: &DeliveryReport, partition: &AuditPartition) -> Result<(GenderSource, GenderTally, u64)> {
        if let Some(g) = report.by_gender {
            return Ok((GenderSource::Reported, GenderTally::new(g.female, g.male), 0));
        }
        if report.by_county.is_none() {
            return Err(EngineError::UnsupportedReport(report.campaign_id.clone()));
        }
        let inferred = infer_gender_counts(report, &partition.split, partition.flipped)?;
        let mut tally = GenderTally::new(inferred.female, inferred.male);
        if self.options.unreported == UnreportedPolicy::Proportional && tally.n() > 0 {
            let total = report.total_impressions;
            let female = (tally.female as f64 * total as f64 / tally.n() as f64).round() as u64;
            tally = GenderTally::new(female, total - female);
        }
        Ok((GenderSource::CountyProxy, tally, inferred.unreported))
    }

    /// One paired trial: upload the partition, launch both job ads as one
    /// run, fetch the reports and test for a difference in delivery.
    pub fn run_trial(&self, exp: &PairedExperiment, partition: &AuditPartition) -> Result<TrialOutcome> {
        exp.spec.validate()?;
        if exp.partition_id != partition.id {
            return Err(EngineError::InvalidSuite(format!(
                "experiment names partition {:?} but {:?} was supplied",
                exp.partition_id, partition.id
            )));
        }
        let audience = self.call(|api| api.upload_audience(&partition.rows))?;
        let campaigns = [
            Self::campaign(&exp.spec, &exp.spec.job_a, &audience.audience_id, exp),
            Self::campaign(&exp.spec, &exp.spec.job_b, &audience.audience_id, exp),
        ];
        let id_a = self.call(|api| api.create_campaign(&campaigns[0]))?.campaign_id;
        let id_b = self.call(|api| api.create_campaign(&campaigns[1]))?.campaign_id;
        let request = RunRequest { campaign_ids: vec![id_a.clone(), id_b.clone()], seed: exp.seed };
        let run = self.call(|api| api.start_run(&request))?;
        let report_a = self.call(|api| api.fetch_report(&id_a))?;
        let report_b = self.call(|api| api.fetch_report(&id_b))?;

        let (source, tally_a, unreported_a) = self.tally(&report_a, partition)?;
        let (_, tally_b, unreported_b) = self.tally(&report_b, partition)?;
        let test = run_test(tally_a, tally_b, self.options.z_alpha, self.options.tail)?;
        let verdict = Verdict::from_test(test.as_ref(), exp.spec.de_facto_direction());
        Ok(TrialOutcome {
            experiment: exp.clone(),
            gender_source: source,
            tally_a,
            tally_b,
            unreported_a,
            unreported_b,
            tail: self.options.tail,
            test,
            verdict,
            record: RunRecord {
                audience_id: audience.audience_id,
                size_estimate: audience.size_estimate,
                run_id: run.run_id,
                campaign_ids: [id_a, id_b],
                campaigns,
                reports: [report_a, report_b],
            },
        })
    }
}
