use adaudit_wire::{DeliveryReport, Gender};
use serde::{Deserialize, Serialize};

use crate::{AudienceError, CountySplit, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InferredCounts {
    pub male: u64,
    pub female: u64,
    /// Impressions missing from the county breakdown.
    pub unreported: u64,
}

impl InferredCounts {
    pub fn unreported_fraction(&self) -> f64 {
        let total = self.male + self.female + self.unreported;
        if total == 0 { 0.0 } else { self.unreported as f64 / total as f64 }
    }
}

/// Recovers recipient gender from a per-county breakdown.
///
/// Impressions in a county are attributed to the gender that half supplied
/// to the partition; whatever the breakdown does not account for is
/// returned as `unreported`.
pub fn infer_gender_counts(report: &DeliveryReport, split: &CountySplit, flipped: bool) -> Result<InferredCounts> {
    let by_county = report.by_county.as_ref().ok_or_else(|| AudienceError::UnsupportedReport(report.campaign_id.clone()))?;
    let mut out = InferredCounts::default();
    for (&county, &count) in by_county {
        match split.gender_of(county, flipped).ok_or(AudienceError::UnknownCounty(county))? {
            Gender::Male => out.male += count,
            Gender::Female => out.female += count,
        }
    }
    out.unreported = report.total_impressions.saturating_sub(out.male + out.female);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use adaudit_wire::CountyId;

    use super::*;

    fn split() -> CountySplit {
        CountySplit::new([CountyId(1), CountyId(2)].into(), [CountyId(3), CountyId(4)].into(), 0).unwrap()
    }

    fn report(total: u64, counties: &[(u32, u64)]) -> DeliveryReport {
        DeliveryReport {
            campaign_id: "c".into(),
            total_impressions: total,
            by_gender: None,
            by_county: Some(counties.iter().map(|&(c, n)| (CountyId(c), n)).collect::<BTreeMap<_, _>>()),
            clicks: 0,
        }
    }

    #[test]
    fn suppressed_mass_is_unreported() {
        // 806 impressions with 241 / 233 attributable leaves 332 (41.19%).
        let r = report(806, &[(1, 200), (2, 41), (3, 133), (4, 100)]);
        let c = infer_gender_counts(&r, &split(), false).unwrap();
        assert_eq!(c, InferredCounts { male: 241, female: 233, unreported: 332 });
        assert!((c.unreported_fraction() * 100.0 - 41.19).abs() < 0.005);
    }

    #[test]
    fn flipping_swaps_attribution() {
        let r = report(10, &[(1, 6), (3, 4)]);
        let c = infer_gender_counts(&r, &split(), true).unwrap();
        assert_eq!((c.male, c.female, c.unreported), (4, 6, 0));
    }

    #[test]
    fn empty_and_unsupported_reports() {
        assert_eq!(infer_gender_counts(&report(0, &[]), &split(), false).unwrap(), InferredCounts::default());
        let mut r = report(5, &[]);
        r.by_county = None;
        assert!(matches!(infer_gender_counts(&r, &split(), false), Err(AudienceError::UnsupportedReport(_))));
        let stray = report(5, &[(9, 5)]);
        assert!(matches!(infer_gender_counts(&stray, &split(), false), Err(AudienceError::UnknownCounty(_))));
    }
}
