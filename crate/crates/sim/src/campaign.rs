use std::io::Write;

use adaudit_wire::{Creative, Objective};
use serde::{Deserialize, Serialize};

use crate::{Result, SimError, UserId};

/// Campaign schedule in hours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

impl Default for Window {
    fn default() -> Self {
        Self { start: 0.0, end: 24.0 }
    }
}

impl Window {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn elapsed_fraction(&self, t: f64) -> f64 {
        ((t - self.start) / self.length()).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Campaign {
    pub id: String,
    pub job_category: String,
    pub company_label: String,
    #[serde(default)]
    pub creative: Creative,
    pub objective: Objective,
    pub total_budget: f64,
    /// Audience identifier; both campaigns of a pair must share it.
    pub audience: String,
    #[serde(default)]
    pub declared_job_ad: bool,
    #[serde(default)]
    pub window: Window,
}

impl Campaign {
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| Err(SimError::InvalidCampaign { id: self.id.clone(), reason: reason.into() });
        if !(self.total_budget > 0.0 && self.total_budget.is_finite()) {
            return invalid("total budget must be positive");
        }
        if !(self.window.length() > 0.0) {
            return invalid("window must have positive length");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Impression {
    pub user_id: UserId,
    /// Hours since the start of the window.
    pub t: f64,
    pub price: f64,
    pub clicked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpressionLog {
    pub campaign_id: String,
    pub events: Vec<Impression>,
}

#[derive(Serialize)]
struct EventLine<'a> {
    campaign_id: &'a str,
    user_id: UserId,
    t: f64,
    price: f64,
    clicked: bool,
}

impl ImpressionLog {
    pub fn new(campaign_id: impl Into<String>) -> Self {
        Self { campaign_id: campaign_id.into(), events: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn spend(&self) -> f64 {
        self.events.iter().map(|e| e.price).sum()
    }

    pub fn clicks(&self) -> usize {
        self.events.iter().filter(|e| e.clicked).count()
    }

    /// One `{campaign_id, user_id, t, price, clicked}` object per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for e in &self.events {
            let line = EventLine { campaign_id: &self.campaign_id, user_id: e.user_id, t: e.t, price: e.price, clicked: e.clicked };
            serde_json::to_writer(&mut out, &line)?;
            out.write_all(b"\n").map_err(SimError::from)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_layout() {
        let log = ImpressionLog {
            campaign_id: "c1".into(),
            events: vec![
                Impression { user_id: UserId(3), t: 1.5, price: 0.04, clicked: false },
                Impression { user_id: UserId(8), t: 2.0, price: 0.05, clicked: true },
            ],
        };
        let mut buf = Vec::new();
        log.write_jsonl(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"campaign_id\":\"c1\",\"user_id\":3,\"t\":1.5,\"price\":0.04,\"clicked\":false}\n\
             {\"campaign_id\":\"c1\",\"user_id\":8,\"t\":2.0,\"price\":0.05,\"clicked\":true}\n"
        );
        assert_eq!(log.clicks(), 1);
    }
}
