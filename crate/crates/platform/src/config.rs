use std::path::Path;

use adaudit_sim::PlatformConfig;
use serde::{Deserialize, Serialize};

use crate::{PlatformProfile, ProfileName, Result, WorldConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSelection {
    Named(ProfileName),
    Custom(PlatformProfile),
}

impl ProfileSelection {
    pub fn resolve(&self) -> PlatformProfile {
        match self {
            ProfileSelection::Named(n) => n.profile(),
            ProfileSelection::Custom(p) => p.clone(),
        }
    }
}

/// Complete description of a mock platform instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceConfig {
    pub profile: ProfileSelection,
    #[serde(default)]
    pub platform: PlatformConfig,
    pub world: WorldConfig,
}

impl ServiceConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_and_inline_profiles() {
        let named: ServiceConfig =
            serde_json::from_str(r#"{"profile":"linkedin-like","world":{"roll":{"county_count":4,"rows":100,"seed":1}}}"#)
                .unwrap();
        assert_eq!(named.profile.resolve(), PlatformProfile::linkedin_like());
        assert_eq!(named.platform, PlatformConfig::default());
        let inline = serde_json::to_string(&ServiceConfig {
            profile: ProfileSelection::Custom(PlatformProfile::transparent()),
            ..named
        })
        .unwrap();
        let back: ServiceConfig = serde_json::from_str(&inline).unwrap();
        assert_eq!(back.profile.resolve(), PlatformProfile::transparent());
    }
}
