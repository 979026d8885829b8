use std::collections::BTreeMap;

use adaudit_sim::ImpressionLog;
use adaudit_wire::{CountyId, DeliveryReport, Gender, GenderBreakdown};

use crate::PlatformProfile;

/// Aggregates a ground-truth log into what `profile` lets advertisers see.
///
/// `locate` maps a logged user id to gender and county. Counties under the
/// suppression threshold are dropped from `by_county` entirely; the total
/// always counts every impression.
pub fn shape_report<F>(profile: &PlatformProfile, log: &ImpressionLog, locate: F) -> DeliveryReport
where
    F: Fn(u32) -> (Gender, CountyId),
{
    let mut genders = GenderBreakdown::default();
    let mut counties: BTreeMap<CountyId, u64> = BTreeMap::new();
    for e in &log.events {
        let (gender, county) = locate(e.user_id.0);
        match gender {
            Gender::Male => genders.male += 1,
            Gender::Female => genders.female += 1,
        }
        *counties.entry(county).or_default() += 1;
    }
    counties.retain(|_, n| *n >= profile.county_suppression_threshold);
    DeliveryReport {
        campaign_id: log.campaign_id.clone(),
        total_impressions: log.len() as u64,
        by_gender: profile.gender_breakdown_available.then_some(genders),
        by_county: profile.county_breakdown_available.then_some(counties),
        clicks: log.clicks() as u64,
    }
}

#[cfg(test)]
mod tests {
    use adaudit_sim::{Impression, UserId};

    use super::*;

    fn log(users: &[u32]) -> ImpressionLog {
        ImpressionLog {
            campaign_id: "c".into(),
            events: users
                .iter()
                .map(|&u| Impression { user_id: UserId(u), t: 0.0, price: 0.01, clicked: u == 0 })
                .collect(),
        }
    }

    // users 0..=4 live in county 1, 5..=6 in county 2, 7 in county 3; odd ids are women
    fn locate(u: u32) -> (Gender, CountyId) {
        let g = if u % 2 == 1 { Gender::Female } else { Gender::Male };
        let c = match u {
            0..=4 => 1,
            5..=6 => 2,
            _ => 3,
        };
        (g, CountyId(c))
    }

    #[test]
    fn linkedin_like_hides_small_counties_and_gender() {
        let r = shape_report(&PlatformProfile::linkedin_like(), &log(&[0, 1, 2, 3, 5, 6, 7]), locate);
        assert_eq!(r.total_impressions, 7);
        assert_eq!(r.by_gender, None);
        assert_eq!(r.by_county, Some(BTreeMap::from([(CountyId(1), 4)])));
        assert_eq!(r.clicks, 1);
        assert!(r.is_consistent());
    }

    #[test]
    fn facebook_like_reports_gender() {
        let r = shape_report(&PlatformProfile::facebook_like(), &log(&[0, 1, 2, 3, 5, 6, 7]), locate);
        assert_eq!(r.by_gender, Some(GenderBreakdown { male: 3, female: 4 }));
        assert_eq!(r.county_sum(), Some(7));
    }

    #[test]
    fn transparent_counties_sum_to_total() {
        let r = shape_report(&PlatformProfile::transparent(), &log(&[0, 5, 7, 7]), locate);
        assert_eq!(r.county_sum(), Some(r.total_impressions));
    }
}
