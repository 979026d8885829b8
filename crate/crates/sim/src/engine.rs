use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::{
    objective_target, score_ad, BudgetPacer, Campaign, Impression, ImpressionLog, OptimizationTarget, PlatformConfig,
    Result, ScoringVariant, SimError, SimUser, UserId,
};

const SESSION_STREAM: u64 = 0;
const AUCTION_STREAM: u64 = 1;
const CLICK_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub t: f64,
    pub user: UserId,
}

/// Every session in the window, ordered by time then user id.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SessionTrace {
    pub sessions: Vec<Session>,
}

impl SessionTrace {
    /// Users with at least one session.
    pub fn online_users(&self) -> BTreeSet<UserId> {
        self.sessions.iter().map(|s| s.user).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRun {
    pub first: ImpressionLog,
    pub second: ImpressionLog,
    pub trace: SessionTrace,
}

fn check_pair(c1: &Campaign, c2: &Campaign) -> Result<()> {
    c1.validate()?;
    c2.validate()?;
    if c1.id == c2.id {
        return Err(SimError::InvalidPairing(format!("both campaigns are {:?}", c1.id)));
    }
    if c1.audience != c2.audience {
        return Err(SimError::InvalidPairing(format!(
            "audiences differ: {:?} vs {:?}",
            c1.audience, c2.audience
        )));
    }
    if c1.window != c2.window {
        return Err(SimError::InvalidPairing("campaign windows differ".into()));
    }
    Ok(())
}

fn check_qualifications(campaigns: [&Campaign; 2], platform: &PlatformConfig, population: &[SimUser]) -> Result<()> {
    let model = &platform.scoring_model;
    let uses_qualification = match model.variant {
        ScoringVariant::QualificationOnly => true,
        ScoringVariant::Composite => model.qualification_weight > 0.0,
        _ => false,
    };
    if !uses_qualification {
        return Ok(());
    }
    for c in campaigns {
        if let Some(u) = population.iter().find(|u| !u.qualification.contains_key(&c.job_category)) {
            return Err(SimError::MissingQualification { user: u.id.0, category: c.job_category.clone() });
        }
    }
    Ok(())
}

fn draw_sessions(population: &[SimUser], platform: &PlatformConfig, c: &Campaign, rng: &mut ChaCha8Rng) -> Vec<(f64, usize)> {
    let mut sessions = Vec::new();
    for (idx, user) in population.iter().enumerate() {
        let rate = user.online_rate * platform.session_scale;
        if rate <= 0.0 {
            continue;
        }
        let k: f64 = Poisson::new(rate).expect("positive rate").sample(rng);
        for _ in 0..k as u64 {
            sessions.push((c.window.start + rng.random::<f64>() * c.window.length(), idx));
        }
    }
    sessions.sort_by(|a, b| a.0.total_cmp(&b.0).then(population[a.1].id.cmp(&population[b.1].id)));
    sessions
}

fn lognormal(median: f64, sigma: f64, rng: &mut ChaCha8Rng) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    median * (sigma * z).exp()
}

/// Ranking multiplier and click probability of one campaign for every user.
fn campaign_terms(c: &Campaign, platform: &PlatformConfig, population: &[SimUser]) -> (Vec<f64>, Vec<f64>) {
    let target = objective_target(c, platform);
    let reference = platform.autobid.reference_click;
    let default_click = reference;
    population
        .iter()
        .map(|u| {
            let click = u.click_probability(&c.company_label, default_click);
            let objective_factor = match target {
                OptimizationTarget::PredictedClick => click / reference,
                OptimizationTarget::ImpressionCount => 1.0,
            };
            (score_ad(u, c, &platform.scoring_model) * objective_factor, click)
        })
        .unzip()
}

/// Replays one shared session stream for a pair of campaigns.
///
/// Each session holds a second-price auction over effective bids
/// (bid × relevance × objective factor) between the eligible campaigns and
/// the background competitors. A campaign is eligible when its pacer leaves
/// room and its bid fits the remaining budget; the winner pays the runner-up's
/// effective bid (or the reserve) divided by its own multiplier, capped at its
/// bid. Exact ties go to the lexicographically smaller campaign id, and our
/// campaigns sort before competitors.
///
/// The random streams for sessions, bids and clicks are separate and consume
/// a fixed number of draws per session, so changing scoring or objectives
/// leaves the session stream and bid noise untouched for a given seed.
pub fn run_campaign_pair(
    c1: &Campaign,
    c2: &Campaign,
    platform: &PlatformConfig,
    population: &[SimUser],
    seed: u64,
) -> Result<PairRun> {
    check_pair(c1, c2)?;
    platform.validate()?;
    check_qualifications([c1, c2], platform, population)?;

    let stream = |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s);
        rng
    };
    let (mut session_rng, mut auction_rng, mut click_rng) = (stream(SESSION_STREAM), stream(AUCTION_STREAM), stream(CLICK_STREAM));

    let sessions = draw_sessions(population, platform, c1, &mut session_rng);
    let campaigns = [c1, c2];
    let terms = [campaign_terms(c1, platform, population), campaign_terms(c2, platform, population)];
    // Tie-break rank of our campaigns by id.
    let rank = if c1.id <= c2.id { [0usize, 1] } else { [1, 0] };
    let mut pacers = campaigns.map(|c| BudgetPacer::new(c.total_budget, platform.pacing));
    let mut logs = campaigns.map(|c| ImpressionLog::new(c.id.clone()));
    let autobid = platform.autobid;

    for &(t, idx) in &sessions {
        let user = &population[idx];
        let elapsed = c1.window.elapsed_fraction(t);
        let bids = [0, 1].map(|_| lognormal(autobid.base_bid, autobid.noise_sigma, &mut auction_rng));

        // (effective bid, tie rank, bidder); bidder < 2 is one of ours.
        let mut best: Option<(f64, usize, usize)> = None;
        let mut second = 0.0f64;
        let mut offer = |eff: f64, tie: usize, who: usize| match best {
            Some((b, bt, _)) if eff < b || (eff == b && tie > bt) => second = second.max(eff),
            Some((b, _, _)) => {
                second = second.max(b);
                best = Some((eff, tie, who));
            }
            None => best = Some((eff, tie, who)),
        };
        for c in 0..2 {
            let mult = terms[c].0[idx];
            if mult > 0.0 && pacers[c].can_bid(bids[c], elapsed) {
                offer(bids[c] * mult, rank[c], c);
            }
        }
        let dist = platform.competition.bids_for(user.gender);
        for k in 0..platform.competition.competitors as usize {
            offer(lognormal(dist.median, dist.sigma, &mut auction_rng), 2 + k, 2 + k);
        }

        let Some((_, _, winner)) = best else { continue };
        if winner >= 2 {
            continue;
        }
        let mult = terms[winner].0[idx];
        let price = (second.max(autobid.reserve_price) / mult).min(bids[winner]);
        pacers[winner].charge(price);
        let clicked = click_rng.random_bool(terms[winner].1[idx].clamp(0.0, 1.0));
        logs[winner].events.push(Impression { user_id: user.id, t, price, clicked });
    }

    let [first, second] = logs;
    let trace = SessionTrace {
        sessions: sessions.iter().map(|&(t, idx)| Session { t, user: population[idx].id }).collect(),
    };
    Ok(PairRun { first, second, trace })
}
