use std::fmt::Write;

use adaudit_engine::{mean_gap, GenderSource, TrialOutcome, Verdict, VerdictCounts};
use adaudit_stats::Interval;
use adaudit_wire::Objective;
use serde::{Deserialize, Serialize};

use crate::RunManifest;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub category: String,
    pub objective: Objective,
    pub trial_index: usize,
    pub partition_id: String,
    pub seed: u64,
    pub gender_source: GenderSource,
    pub n_a: u64,
    pub n_b: u64,
    pub unreported_a: u64,
    pub unreported_b: u64,
    pub s_a_f: Option<f64>,
    pub s_b_f: Option<f64>,
    pub ci_a: Option<Interval>,
    pub ci_b: Option<Interval>,
    pub z: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub category: String,
    pub objective: Objective,
    pub counts: VerdictCounts,
    pub mean_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: String,
    pub profile: String,
    pub seeds: usize,
    pub base_seed: u64,
    pub trials: Vec<TrialRow>,
    pub aggregates: Vec<Aggregate>,
    pub totals: VerdictCounts,
}

impl Summary {
    /// Everything here is recomputed from the trial records.
    pub fn from_outcomes(manifest: &RunManifest, outcomes: &[TrialOutcome]) -> Self {
        let trials = outcomes
            .iter()
            .map(|o| TrialRow {
                category: o.experiment.spec.category.clone(),
                objective: o.experiment.objective,
                trial_index: o.experiment.trial_index,
                partition_id: o.experiment.partition_id.clone(),
                seed: o.experiment.seed,
                gender_source: o.gender_source,
                n_a: o.tally_a.n(),
                n_b: o.tally_b.n(),
                unreported_a: o.unreported_a,
                unreported_b: o.unreported_b,
                s_a_f: o.tally_a.female_fraction(),
                s_b_f: o.tally_b.female_fraction(),
                ci_a: o.test.as_ref().map(|t| t.ci1),
                ci_b: o.test.as_ref().map(|t| t.ci2),
                z: o.test.as_ref().map(|t| t.z),
                verdict: o.verdict,
            })
            .collect();
        let mut groups: Vec<(String, Objective, Vec<TrialOutcome>)> = Vec::new();
        for o in outcomes {
            let key = (&o.experiment.spec.category, o.experiment.objective);
            match groups.iter_mut().find(|(c, obj, _)| (c, *obj) == key) {
                Some((_, _, v)) => v.push(o.clone()),
                None => groups.push((key.0.clone(), key.1, vec![o.clone()])),
            }
        }
        let aggregates = groups
            .into_iter()
            .map(|(category, objective, os)| Aggregate {
                category,
                objective,
                counts: os.iter().map(|o| o.verdict).collect(),
                mean_gap: mean_gap(&os),
            })
            .collect();
        Summary {
            scenario: manifest.scenario.clone(),
            profile: manifest.profile.clone(),
            seeds: manifest.seeds,
            base_seed: manifest.base_seed,
            trials,
            aggregates,
            totals: outcomes.iter().map(|o| o.verdict).collect(),
        }
    }
}

fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::Conversion => "conversion",
        Objective::Reach => "reach",
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::SkewMatchingDeFacto => "skew (de facto direction)",
        Verdict::SkewOpposingDeFacto => "skew (opposite direction)",
        Verdict::NoSkew => "no skew",
        Verdict::Degenerate => "degenerate",
    }
}

fn fraction(s: Option<f64>, ci: Option<Interval>) -> String {
    match (s, ci) {
        (Some(s), Some(ci)) => format!("{s:.3} [{:.3}, {:.3}]", ci.lo, ci.hi),
        (Some(s), None) => format!("{s:.3}"),
        _ => "-".into(),
    }
}

/// Plain-text tables: one row per trial, then verdict counts per category
/// and objective. Gender fractions carry 95% confidence bounds.
pub fn render(s: &Summary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {}  profile {}  seeds {}  base seed {}", s.scenario, s.profile, s.seeds, s.base_seed);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<20} {:<10} {:>5} {:<9} {:>6} {:>6} {:>6} {:<22} {:<22} {:>8}  verdict",
        "category", "objective", "trial", "partition", "seed", "n_a", "n_b", "s_a,f [95% CI]", "s_b,f [95% CI]", "Z"
    );
    for t in &s.trials {
        let z = t.z.map_or("-".to_string(), |z| format!("{z:.3}"));
        let _ = writeln!(
            out,
            "{:<20} {:<10} {:>5} {:<9} {:>6} {:>6} {:>6} {:<22} {:<22} {:>8}  {}",
            t.category,
            objective_name(t.objective),
            t.trial_index,
            t.partition_id,
            t.seed,
            t.n_a,
            t.n_b,
            fraction(t.s_a_f, t.ci_a),
            fraction(t.s_b_f, t.ci_b),
            z,
            verdict_name(t.verdict)
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<20} {:<10} {:>6} {:>9} {:>9} {:>8} {:>10} {:>9}",
        "category", "objective", "trials", "de facto", "opposite", "no skew", "degenerate", "mean gap"
    );
    for a in &s.aggregates {
        let gap = a.mean_gap.map_or("-".to_string(), |g| format!("{g:.4}"));
        let c = a.counts;
        let _ = writeln!(
            out,
            "{:<20} {:<10} {:>6} {:>9} {:>9} {:>8} {:>10} {:>9}",
            a.category,
            objective_name(a.objective),
            c.total(),
            c.skew_matching_de_facto,
            c.skew_opposing_de_facto,
            c.no_skew,
            c.degenerate,
            gap
        );
    }
    let t = s.totals;
    let _ = writeln!(
        out,
        "\ntotal: {} trials, {} significant ({} in the de facto direction)",
        t.total(),
        t.significant(),
        t.skew_matching_de_facto
    );
    out
}
