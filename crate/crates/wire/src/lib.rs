//! Shared vocabulary of the mock marketing API.
//!
//! Everything an auditor can learn about a platform passes through the types
//! in this crate: audience uploads, campaign specs, run requests and delivery
//! reports. Nothing here carries per-user data.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

mod error;

pub use error::{ApiError, ErrorBody, ErrorCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub const ALL: [Gender; 2] = [Gender::Male, Gender::Female];

    pub fn other(self) -> Self {
        match self {
            Gender::Male => Gender::Female,
            Gender::Female => Gender::Male,
        }
    }

    /// One-letter code used in voter-roll files.
    pub fn code(self) -> &'static str {
        match self {
            Gender::Male => "M",
            Gender::Female => "F",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "M" | "m" => Some(Gender::Male),
            "F" | "f" => Some(Gender::Female),
            _ => None,
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gender::Male => "male",
            Gender::Female => "female",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CountyId(pub u32);

impl fmt::Display for CountyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    Conversion,
    Reach,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Conversion => "conversion",
            Objective::Reach => "reach",
        })
    }
}

/// One contact in an audience upload.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UploadRow {
    pub first_name: String,
    pub last_name: String,
    pub zip: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AudienceCreated {
    pub audience_id: String,
    pub size_estimate: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Creative {
    pub headline: String,
    pub body: String,
    pub image_tag: String,
}

/// Demographic targeting. Platforms refuse it on declared job ads.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Targeting {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gender: Option<Gender>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age_min: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age_max: Option<u32>,
}

impl Targeting {
    pub fn is_demographic(&self) -> bool {
        self.gender.is_some() || self.age_min.is_some() || self.age_max.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub audience_id: String,
    pub job_category: String,
    pub company_label: String,
    #[serde(default)]
    pub creative: Creative,
    pub objective: Objective,
    pub total_budget: f64,
    pub declared_job_ad: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targeting: Option<Targeting>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignCreated {
    pub campaign_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRequest {
    pub campaign_ids: Vec<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunCreated {
    pub run_id: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenderBreakdown {
    pub male: u64,
    pub female: u64,
}

impl GenderBreakdown {
    pub fn total(&self) -> u64 {
        self.male + self.female
    }

    pub fn get(&self, g: Gender) -> u64 {
        match g {
            Gender::Male => self.male,
            Gender::Female => self.female,
        }
    }
}

/// Aggregate delivery of one campaign as the platform reports it.
///
/// `by_county` omits counties whose impression count fell under the
/// platform's suppression threshold, so its sum may be below
/// `total_impressions`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeliveryReport {
    pub campaign_id: String,
    pub total_impressions: u64,
    pub by_gender: Option<GenderBreakdown>,
    pub by_county: Option<BTreeMap<CountyId, u64>>,
    pub clicks: u64,
}

impl DeliveryReport {
    pub fn county_sum(&self) -> Option<u64> {
        self.by_county.as_ref().map(|m| m.values().sum())
    }

    /// Checks the report's internal consistency.
    pub fn is_consistent(&self) -> bool {
        let gender_ok = self.by_gender.is_none_or(|g| g.total() == self.total_impressions);
        let county_ok = self.county_sum().is_none_or(|s| s <= self.total_impressions);
        gender_ok && county_ok
    }
}

/// Advertiser-facing operations of a marketing API.
///
/// Implemented by the in-process platform and by the HTTP client, so the
/// same audit code drives either.
pub trait MarketingApi {
    fn upload_audience(&self, rows: &[UploadRow]) -> Result<AudienceCreated, ApiError>;
    fn create_campaign(&self, spec: &CampaignSpec) -> Result<CampaignCreated, ApiError>;
    fn start_run(&self, request: &RunRequest) -> Result<RunCreated, ApiError>;
    fn fetch_report(&self, campaign_id: &str) -> Result<DeliveryReport, ApiError>;
}

impl<T: MarketingApi + ?Sized> MarketingApi for &T {
    fn upload_audience(&self, rows: &[UploadRow]) -> Result<AudienceCreated, ApiError> {
        (**self).upload_audience(rows)
    }
    fn create_campaign(&self, spec: &CampaignSpec) -> Result<CampaignCreated, ApiError> {
        (**self).create_campaign(spec)
    }
    fn start_run(&self, request: &RunRequest) -> Result<RunCreated, ApiError> {
        (**self).start_run(request)
    }
    fn fetch_report(&self, campaign_id: &str) -> Result<DeliveryReport, ApiError> {
        (**self).fetch_report(campaign_id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json_shape() {
        let report = DeliveryReport {
            campaign_id: "cmp-1".into(),
            total_impressions: 10,
            by_gender: None,
            by_county: Some(BTreeMap::from([(CountyId(4), 3), (CountyId(12), 5)])),
            clicks: 1,
        };
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"campaign_id":"cmp-1","total_impressions":10,"by_gender":null,"by_county":{"4":3,"12":5},"clicks":1}"#
        );
        let back: DeliveryReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert!(report.is_consistent());
    }

    #[test]
    fn inconsistent_gender_sum_is_detected() {
        let report = DeliveryReport {
            campaign_id: "x".into(),
            total_impressions: 10,
            by_gender: Some(GenderBreakdown { male: 3, female: 3 }),
            by_county: None,
            clicks: 0,
        };
        assert!(!report.is_consistent());
    }

    #[test]
    fn gender_codes() {
        assert_eq!(Gender::from_code("F"), Some(Gender::Female));
        assert_eq!(Gender::from_code("x"), None);
        assert_eq!(Gender::Male.other(), Gender::Female);
        assert_eq!(serde_json::to_string(&Objective::Reach).unwrap(), "\"reach\"");
    }
}
