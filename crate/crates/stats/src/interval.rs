use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::{GenderTally, Result, StatsError, DEFAULT_Z_ALPHA};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn half_width(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    #[default]
    Normal,
    Wilson,
}

/// Two-sided critical value for a confidence level.
///
/// 95% maps to the tabulated 1.96 used by the audit; other levels use the
/// exact normal quantile.
pub fn critical_z(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(StatsError::InvalidParameter { name: "confidence", value: confidence });
    }
    if (confidence - 0.95).abs() < 1e-12 {
        return Ok(DEFAULT_Z_ALPHA);
    }
    Ok(standard_normal().inverse_cdf(0.5 + confidence / 2.0))
}

pub(crate) fn standard_normal() -> Normal {
    Normal::standard()
}

/// Interval for the female fraction of one tally, clamped to `[0, 1]`.
pub fn proportion_ci(t: GenderTally, confidence: f64, method: CiMethod) -> Result<Interval> {
    proportion_ci_with_z(t, critical_z(confidence)?, method)
}

pub(crate) fn proportion_ci_with_z(t: GenderTally, z: f64, method: CiMethod) -> Result<Interval> {
    let n = t.n();
    if n == 0 {
        return Err(StatsError::EmptySample);
    }
    let n = n as f64;
    let p = t.female as f64 / n;
    let (lo, hi) = match method {
        CiMethod::Normal => {
            let half = z * (p * (1.0 - p) / n).sqrt();
            (p - half, p + half)
        }
        CiMethod::Wilson => {
            let z2 = z * z;
            let denom = 1.0 + z2 / n;
            let centre = (p + z2 / (2.0 * n)) / denom;
            let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
            (centre - half, centre + half)
        }
    };
    Ok(Interval { lo: lo.clamp(0.0, 1.0), hi: hi.clamp(0.0, 1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_hundred() {
        let ci = proportion_ci(GenderTally::new(50, 50), 0.95, CiMethod::Normal).unwrap();
        assert!((ci.lo - 0.402).abs() < 1e-12);
        assert!((ci.hi - 0.598).abs() < 1e-12);
        assert!((ci.half_width() - 0.098).abs() < 1e-12);
    }

    #[test]
    fn boundary_has_zero_width_under_normal_approximation() {
        let ci = proportion_ci(GenderTally::new(0, 100), 0.95, CiMethod::Normal).unwrap();
        assert_eq!(ci, Interval { lo: 0.0, hi: 0.0 });
        let wilson = proportion_ci(GenderTally::new(0, 100), 0.95, CiMethod::Wilson).unwrap();
        assert_eq!(wilson.lo, 0.0);
        assert!(wilson.hi > 0.0 && wilson.hi < 0.05);
    }

    #[test]
    fn critical_values() {
        assert_eq!(critical_z(0.95).unwrap(), 1.96);
        assert!((critical_z(0.99).unwrap() - 2.575_829_3).abs() < 1e-6);
        assert!(critical_z(1.0).is_err());
        assert_eq!(
            proportion_ci(GenderTally::default(), 0.95, CiMethod::Normal),
            Err(StatsError::EmptySample)
        );
    }
}
