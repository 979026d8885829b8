use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{PlatformError, Result};

/// How audience size estimates are coarsened before they are shown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AudienceRounding {
    Exact,
    /// Round down to `granularity`.
    Fixed { granularity: u64 },
    /// Round down to `small` below `cutoff` and to `large` at or above it.
    Tiered { cutoff: u64, small: u64, large: u64 },
}

impl Default for AudienceRounding {
    fn default() -> Self {
        AudienceRounding::Tiered { cutoff: 1_000, small: 10, large: 100 }
    }
}

impl AudienceRounding {
    pub fn apply(self, size: u64) -> u64 {
        let g = match self {
            AudienceRounding::Exact => 1,
            AudienceRounding::Fixed { granularity } => granularity,
            AudienceRounding::Tiered { cutoff, small, large } => {
                if size < cutoff {
                    small
                } else {
                    large
                }
            }
        };
        size / g.max(1) * g.max(1)
    }
}

/// Reporting behaviour of one platform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatformProfile {
    pub name: String,
    pub gender_breakdown_available: bool,
    pub county_breakdown_available: bool,
    /// Counties with fewer impressions than this are left out of reports.
    pub county_suppression_threshold: u64,
    /// Audience estimates below this are withheld.
    pub audience_size_floor: u64,
    #[serde(default)]
    pub audience_size_rounding: AudienceRounding,
    /// Whether audience size estimates are ever shown.
    #[serde(default = "yes")]
    pub audience_size_reported: bool,
    /// Fraction of uploaded contacts that hold an account.
    pub match_rate: f64,
}

fn yes() -> bool {
    true
}

impl PlatformProfile {
    /// Gender breakdown on every report, no match rates, no location suppression.
    pub fn facebook_like() -> Self {
        Self {
            name: ProfileName::FacebookLike.to_string(),
            gender_breakdown_available: true,
            county_breakdown_available: true,
            county_suppression_threshold: 0,
            audience_size_floor: 0,
            audience_size_rounding: AudienceRounding::default(),
            audience_size_reported: false,
            match_rate: 0.12,
        }
    }

    /// No gender breakdown; counties under 3 impressions and audiences
    /// under 300 members are hidden.
    pub fn linkedin_like() -> Self {
        Self {
            name: ProfileName::LinkedinLike.to_string(),
            gender_breakdown_available: false,
            county_breakdown_available: true,
            county_suppression_threshold: 3,
            audience_size_floor: 300,
            audience_size_rounding: AudienceRounding::default(),
            audience_size_reported: true,
            match_rate: 0.12,
        }
    }

    /// Every breakdown, nothing suppressed, exact sizes.
    pub fn transparent() -> Self {
        Self {
            name: ProfileName::Transparent.to_string(),
            gender_breakdown_available: true,
            county_breakdown_available: true,
            county_suppression_threshold: 0,
            audience_size_floor: 0,
            audience_size_rounding: AudienceRounding::Exact,
            audience_size_reported: true,
            match_rate: 0.12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gender_breakdown_available && !self.county_breakdown_available {
            return Err(PlatformError::InvalidProfile(format!("{}: no breakdown axis available", self.name)));
        }
        if !(0.0..=1.0).contains(&self.match_rate) {
            return Err(PlatformError::InvalidProfile(format!("{}: match rate {}", self.name, self.match_rate)));
        }
        Ok(())
    }

    pub fn size_estimate(&self, matched: u64) -> Option<u64> {
        if !self.audience_size_reported || matched == 0 || matched < self.audience_size_floor {
            return None;
        }
        Some(self.audience_size_rounding.apply(matched))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileName {
    FacebookLike,
    LinkedinLike,
    Transparent,
}

impl ProfileName {
    pub fn profile(self) -> PlatformProfile {
        match self {
            ProfileName::FacebookLike => PlatformProfile::facebook_like(),
            ProfileName::LinkedinLike => PlatformProfile::linkedin_like(),
            ProfileName::Transparent => PlatformProfile::transparent(),
        }
    }
}

impl fmt::Display for ProfileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileName::FacebookLike => "facebook-like",
            ProfileName::LinkedinLike => "linkedin-like",
            ProfileName::Transparent => "transparent",
        })
    }
}

impl FromStr for ProfileName {
    type Err = PlatformError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "facebook-like" => Ok(ProfileName::FacebookLike),
            "linkedin-like" => Ok(ProfileName::LinkedinLike),
            "transparent" => Ok(ProfileName::Transparent),
            other => Err(PlatformError::InvalidProfile(format!("unknown profile {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_estimates() {
        let li = PlatformProfile::linkedin_like();
        assert_eq!(li.size_estimate(250), None);
        assert_eq!(li.size_estimate(0), None);
        assert_eq!(li.size_estimate(300), Some(300));
        assert_eq!(li.size_estimate(106_512), Some(106_500));
        assert_eq!(li.size_estimate(457), Some(450));
        assert_eq!(PlatformProfile::facebook_like().size_estimate(106_512), None);
        assert_eq!(PlatformProfile::transparent().size_estimate(106_512), Some(106_512));
        assert_eq!(AudienceRounding::Fixed { granularity: 100 }.apply(106_512), 106_500);
    }

    #[test]
    fn named_profiles_round_trip() {
        for name in [ProfileName::FacebookLike, ProfileName::LinkedinLike, ProfileName::Transparent] {
            assert_eq!(name.to_string().parse::<ProfileName>().unwrap(), name);
            assert_eq!(name.profile().name, name.to_string());
            name.profile().validate().unwrap();
        }
        assert!("myspace".parse::<ProfileName>().is_err());
        let mut blind = PlatformProfile::transparent();
        blind.gender_breakdown_available = false;
        blind.county_breakdown_available = false;
        assert!(blind.validate().is_err());
    }
}
