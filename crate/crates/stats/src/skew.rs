use serde::{Deserialize, Serialize};

use crate::interval::{proportion_ci_with_z, CiMethod, Interval};
use crate::{GenderTally, Result, StatsError};

/// Which rejection region the test uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// Reject when `|Z| > z_alpha`.
    #[default]
    TwoSided,
    /// Reject only when `Z > z_alpha`, i.e. the first ad reached relatively more women.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Ad1MoreFemale,
    Ad2MoreFemale,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewTestResult {
    pub s1_f: f64,
    pub s2_f: f64,
    pub pooled_s_f: f64,
    pub n1: u64,
    pub n2: u64,
    pub z: f64,
    pub z_alpha: f64,
    pub significant: bool,
    pub direction: Direction,
    pub ci1: Interval,
    pub ci2: Interval,
}

/// Pooled two-proportion Z-test on the female fractions of two recipient sets.
///
/// The null hypothesis is that both ads reached the same gender mix. A pooled
/// fraction of exactly 0 or 1 (all recipients of both ads share one gender)
/// leaves Z undefined and is reported as [`StatsError::DegenerateSample`].
pub fn skew_test(t1: GenderTally, t2: GenderTally, z_alpha: f64, tail: Tail) -> Result<SkewTestResult> {
    if !(z_alpha.is_finite() && z_alpha > 0.0) {
        return Err(StatsError::InvalidParameter { name: "z_alpha", value: z_alpha });
    }
    let (n1, n2) = (t1.n(), t2.n());
    if n1 == 0 || n2 == 0 {
        return Err(StatsError::EmptySample);
    }
    let s1_f = t1.female as f64 / n1 as f64;
    let s2_f = t2.female as f64 / n2 as f64;
    let pooled_s_f = (t1.female + t2.female) as f64 / (n1 + n2) as f64;
    if pooled_s_f <= 0.0 || pooled_s_f >= 1.0 {
        return Err(StatsError::DegenerateSample { pooled: pooled_s_f });
    }
    let se = (pooled_s_f * (1.0 - pooled_s_f) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    let z = (s1_f - s2_f) / se;
    let significant = match tail {
        Tail::TwoSided => z.abs() > z_alpha,
        Tail::Upper => z > z_alpha,
    };
    let direction = match (significant, z > 0.0) {
        (false, _) => Direction::None,
        (true, true) => Direction::Ad1MoreFemale,
        (true, false) => Direction::Ad2MoreFemale,
    };
    Ok(SkewTestResult {
        s1_f,
        s2_f,
        pooled_s_f,
        n1,
        n2,
        z,
        z_alpha,
        significant,
        direction,
        ci1: proportion_ci_with_z(t1, z_alpha, CiMethod::Normal)?,
        ci2: proportion_ci_with_z(t2, z_alpha, CiMethod::Normal)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneSampleResult {
    pub s_f: f64,
    pub expected_f: f64,
    pub n: u64,
    pub z: f64,
    pub significant: bool,
}

/// Single-ad test of `s_f` against a fixed expected fraction.
///
/// This is the naive comparison against the targeted gender mix. It cannot
/// separate platform choices from who happened to be online or qualified, and
/// exists as the baseline the paired design is measured against.
pub fn one_sample_test(t: GenderTally, expected_f: f64, z_alpha: f64) -> Result<OneSampleResult> {
    if !(expected_f > 0.0 && expected_f < 1.0) {
        return Err(StatsError::InvalidParameter { name: "expected_f", value: expected_f });
    }
    let n = t.n();
    if n == 0 {
        return Err(StatsError::EmptySample);
    }
    let s_f = t.female as f64 / n as f64;
    let z = (s_f - expected_f) / (expected_f * (1.0 - expected_f) / n as f64).sqrt();
    Ok(OneSampleResult { s_f, expected_f, n, z, significant: z.abs() > z_alpha })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_Z_ALPHA;

    #[test]
    fn worked_example_matches_precomputed_oracle() {
        // 4.494665749754947241... from a 40-digit recomputation.
        let r = skew_test(GenderTally::new(600, 400), GenderTally::new(500, 500), 1.96, Tail::TwoSided).unwrap();
        assert!((r.pooled_s_f - 0.55).abs() < 1e-15);
        assert!((r.z - 4.494_665_749_754_947).abs() < 1e-12, "{}", r.z);
        assert!(r.significant);
        assert_eq!(r.direction, Direction::Ad1MoreFemale);
    }

    #[test]
    fn identical_tallies_give_zero() {
        let t = GenderTally::new(300, 300);
        let r = skew_test(t, t, DEFAULT_Z_ALPHA, Tail::TwoSided).unwrap();
        assert_eq!(r.z, 0.0);
        assert!(!r.significant);
        assert_eq!(r.direction, Direction::None);
    }

    #[test]
    fn degenerate_and_empty_samples_are_errors() {
        let all_male = GenderTally::new(0, 10);
        assert!(matches!(
            skew_test(all_male, all_male, 1.96, Tail::TwoSided),
            Err(StatsError::DegenerateSample { pooled }) if pooled == 0.0
        ));
        let all_female = GenderTally::new(7, 0);
        assert!(matches!(
            skew_test(all_female, all_female, 1.96, Tail::TwoSided),
            Err(StatsError::DegenerateSample { pooled }) if pooled == 1.0
        ));
        assert_eq!(
            skew_test(GenderTally::default(), all_male, 1.96, Tail::TwoSided),
            Err(StatsError::EmptySample)
        );
    }

    #[test]
    fn upper_tail_ignores_opposite_skew() {
        let (a, b) = (GenderTally::new(400, 600), GenderTally::new(500, 500));
        let two = skew_test(a, b, 1.96, Tail::TwoSided).unwrap();
        let upper = skew_test(a, b, 1.96, Tail::Upper).unwrap();
        assert!(two.significant);
        assert_eq!(two.direction, Direction::Ad2MoreFemale);
        assert!(!upper.significant);
    }

    #[test]
    fn opposite_direction_near_threshold_counts_as_significant() {
        // A Z of about -2.15 must be flagged under the two-sided reading.
        let r = skew_test(GenderTally::new(166, 192), GenderTally::new(196, 145), 1.96, Tail::TwoSided).unwrap();
        assert!(r.z < -1.96 && r.z > -3.0, "{}", r.z);
        assert!(r.significant);
    }

    #[test]
    fn one_sample_baseline() {
        let r = one_sample_test(GenderTally::new(450, 550), 0.5, 1.96).unwrap();
        assert!((r.z - (-0.05 / (0.25f64 / 1000.0).sqrt())).abs() < 1e-12);
        assert!(r.significant);
        assert!(one_sample_test(GenderTally::default(), 0.5, 1.96).is_err());
    }
}
