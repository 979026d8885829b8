use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, MutexGuard};

use adaudit_sim::{run_campaign_pair, Campaign, ImpressionLog, PlatformConfig, SimUser, Window};
use adaudit_wire::{
    ApiError, AudienceCreated, CampaignCreated, CampaignSpec, DeliveryReport, ErrorCode, Gender, MarketingApi, RunCreated,
    RunRequest, UploadRow,
};

use crate::{shape_report, PlatformProfile, Result, ServiceConfig, World};

/// What actually happened in a run, hidden from advertisers.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub run_id: String,
    pub log: ImpressionLog,
    pub male: u64,
    pub female: u64,
}

#[derive(Debug)]
struct CampaignRecord {
    spec: CampaignSpec,
    run: Option<String>,
}

#[derive(Debug, Default)]
struct State {
    audiences: BTreeMap<String, Vec<u32>>,
    campaigns: BTreeMap<String, CampaignRecord>,
    results: BTreeMap<String, GroundTruth>,
    next_audience: u64,
    next_campaign: u64,
    next_run: u64,
}

/// The mock marketing API.
///
/// Identifiers are allocated sequentially (`aud-1`, `cmp-1`, `run-1`, ...),
/// so the same sequence of calls yields the same ids and, given the run
/// seeds, the same reports. Runs execute synchronously inside `start_run`
/// and are serialized.
#[derive(Debug)]
pub struct Platform {
    profile: PlatformProfile,
    config: PlatformConfig,
    world: Arc<World>,
    state: Mutex<State>,
    runs: Mutex<()>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl Platform {
    pub fn new(profile: PlatformProfile, config: PlatformConfig, world: Arc<World>) -> Result<Self> {
        profile.validate()?;
        config.validate()?;
        Ok(Self { profile, config, world, state: Mutex::new(State::default()), runs: Mutex::new(()) })
    }

    pub fn from_config(config: &ServiceConfig) -> Result<Self> {
        let profile = config.profile.resolve();
        profile.validate()?;
        let world = World::generate(&config.world, profile.match_rate)?;
        Platform::new(profile, config.platform.clone(), world)
    }

    pub fn profile(&self) -> &PlatformProfile {
        &self.profile
    }

    pub fn config(&self) -> &PlatformConfig {
        &self.config
    }

    pub fn world(&self) -> &Arc<World> {
        &self.world
    }

    /// Matched member roll indices of an uploaded audience.
    pub fn audience_members(&self, audience_id: &str) -> Option<Vec<u32>> {
        lock(&self.state).audiences.get(audience_id).cloned()
    }

    pub fn ground_truth(&self, campaign_id: &str) -> Option<GroundTruth> {
        lock(&self.state).results.get(campaign_id).cloned()
    }

    fn campaign(id: &str, spec: &CampaignSpec) -> Campaign {
        Campaign {
            id: id.to_string(),
            job_category: spec.job_category.clone(),
            company_label: spec.company_label.clone(),
            creative: spec.creative.clone(),
            objective: spec.objective,
            total_budget: spec.total_budget,
            audience: spec.audience_id.clone(),
            declared_job_ad: spec.declared_job_ad,
            window: Window::default(),
        }
    }

    fn truth(&self, run_id: &str, log: ImpressionLog) -> GroundTruth {
        let mut t = GroundTruth { run_id: run_id.to_string(), log, male: 0, female: 0 };
        for e in &t.log.events {
            match self.world.user(e.user_id.0).map(|u| u.gender) {
                Some(Gender::Female) => t.female += 1,
                _ => t.male += 1,
            }
        }
        t
    }
}

fn err(code: ErrorCode, msg: impl Into<String>) -> ApiError {
    ApiError::new(code, msg)
}

impl MarketingApi for Platform {
    fn upload_audience(&self, rows: &[UploadRow]) -> std::result::Result<AudienceCreated, ApiError> {
        if let Some(i) = rows.iter().position(|r| r.first_name.is_empty() || r.last_name.is_empty() || r.zip.is_empty()) {
            return Err(err(ErrorCode::MalformedBody, format!("row {i} has an empty field")));
        }
        let mut members: Vec<u32> =
            rows.iter().filter_map(|r| self.world.lookup(&r.first_name, &r.last_name, &r.zip)).collect();
        members.sort_unstable();
        members.dedup();
        let size_estimate = self.profile.size_estimate(members.len() as u64);
        let mut st = lock(&self.state);
        st.next_audience += 1;
        let audience_id = format!("aud-{}", st.next_audience);
        st.audiences.insert(audience_id.clone(), members);
        Ok(AudienceCreated { audience_id, size_estimate })
    }

    fn create_campaign(&self, spec: &CampaignSpec) -> std::result::Result<CampaignCreated, ApiError> {
        if !(spec.total_budget > 0.0 && spec.total_budget.is_finite()) {
            return Err(err(ErrorCode::InvalidCampaign, "total_budget must be positive"));
        }
        if spec.job_category.is_empty() {
            return Err(err(ErrorCode::InvalidCampaign, "job_category is required"));
        }
        let mut st = lock(&self.state);
        if !st.audiences.contains_key(&spec.audience_id) {
            return Err(err(ErrorCode::NotFound, format!("no audience {:?}", spec.audience_id)));
        }
        if spec.declared_job_ad && spec.targeting.as_ref().is_some_and(|t| t.is_demographic()) {
            return Err(err(ErrorCode::PolicyViolation, "gender and age targeting are not allowed on employment ads"));
        }
        st.next_campaign += 1;
        let campaign_id = format!("cmp-{}", st.next_campaign);
        st.campaigns.insert(campaign_id.clone(), CampaignRecord { spec: spec.clone(), run: None });
        Ok(CampaignCreated { campaign_id })
    }

    fn start_run(&self, request: &RunRequest) -> std::result::Result<RunCreated, ApiError> {
        let _serial = lock(&self.runs);
        let [a, b] = request.campaign_ids.as_slice() else {
            return Err(err(ErrorCode::InvalidRun, "a run takes exactly two campaign ids"));
        };
        if a == b {
            return Err(err(ErrorCode::InvalidRun, "the two campaign ids must differ"));
        }
        let (c1, c2, population) = {
            let st = lock(&self.state);
            let mut specs = Vec::with_capacity(2);
            for id in [a, b] {
                let Some(rec) = st.campaigns.get(id) else {
                    return Err(err(ErrorCode::NotFound, format!("no campaign {id:?}")));
                };
                if rec.run.is_some() {
                    return Err(err(ErrorCode::AlreadyRun, format!("campaign {id:?} has already run")));
                }
                specs.push(rec.spec.clone());
            }
            if specs[0].audience_id != specs[1].audience_id {
                return Err(err(ErrorCode::InvalidPairing, "paired campaigns must target the same audience"));
            }
            let members = &st.audiences[&specs[0].audience_id];
            if members.is_empty() {
                return Err(err(ErrorCode::InvalidRun, "the audience has no matched users"));
            }
            let population: Vec<SimUser> =
                members.iter().map(|&m| self.world.user(m).expect("members hold accounts").clone()).collect();
            (Self::campaign(a, &specs[0]), Self::campaign(b, &specs[1]), population)
        };
        let pair = run_campaign_pair(&c1, &c2, &self.config, &population, request.seed)
            .map_err(|e| err(ErrorCode::InvalidRun, e.to_string()))?;
        let mut st = lock(&self.state);
        st.next_run += 1;
        let run_id = format!("run-{}", st.next_run);
        for (id, log) in [(a, pair.first), (b, pair.second)] {
            let truth = self.truth(&run_id, log);
            st.results.insert(id.clone(), truth);
            st.campaigns.get_mut(id).expect("checked above").run = Some(run_id.clone());
        }
        Ok(RunCreated { run_id })
    }

    fn fetch_report(&self, campaign_id: &str) -> std::result::Result<DeliveryReport, ApiError> {
        let st = lock(&self.state);
        if !st.campaigns.contains_key(campaign_id) {
            return Err(err(ErrorCode::NotFound, format!("no campaign {campaign_id:?}")));
        }
        let Some(truth) = st.results.get(campaign_id) else {
            return Err(err(ErrorCode::RunPending, format!("campaign {campaign_id:?} has not run yet")));
        };
        Ok(shape_report(&self.profile, &truth.log, |u| {
            let user = self.world.user(u).expect("delivered users hold accounts");
            (user.gender, user.county)
        }))
    }
}
