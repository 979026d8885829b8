use adaudit_stats::Direction;
use serde::{Deserialize, Serialize};

use crate::{EngineError, Result};

/// One side of a job pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobPosting {
    pub company_label: String,
    /// Share of women among the company's (or industry's) current employees.
    pub de_facto_female_fraction: f64,
    #[serde(default)]
    pub posting_url: String,
    /// Where the de facto fraction comes from.
    #[serde(default)]
    pub source_note: String,
}

/// Two jobs in one category with similar requirements but opposite
/// real-world gender make-up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobPairSpec {
    pub category: String,
    pub job_a: JobPosting,
    pub job_b: JobPosting,
    /// Asserts both jobs ask for the same qualifications. Pairs that do not
    /// are not admissible.
    pub equal_qualification: bool,
    #[serde(default)]
    pub location_label: String,
}

impl JobPairSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(EngineError::InvalidSpec(format!("{}: {m}", self.category)));
        if self.category.is_empty() {
            return bad("category is empty".into());
        }
        if !self.equal_qualification {
            return bad("jobs must have equal qualification requirements".into());
        }
        for j in [&self.job_a, &self.job_b] {
            if !(0.0..=1.0).contains(&j.de_facto_female_fraction) {
                return bad(format!("{} de facto fraction {}", j.company_label, j.de_facto_female_fraction));
            }
        }
        if self.job_a.company_label == self.job_b.company_label {
            return bad("both jobs have the same company label".into());
        }
        if self.de_facto_gap() == 0.0 {
            return bad("de facto fractions are equal".into());
        }
        Ok(())
    }

    /// `a − b` of the de facto female fractions.
    pub fn de_facto_gap(&self) -> f64 {
        self.job_a.de_facto_female_fraction - self.job_b.de_facto_female_fraction
    }

    /// Which ad a skew "in the de facto direction" would favour for women.
    pub fn de_facto_direction(&self) -> Direction {
        match self.de_facto_gap() {
            g if g > 0.0 => Direction::Ad1MoreFemale,
            g if g < 0.0 => Direction::Ad2MoreFemale,
            _ => Direction::None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drivers() -> JobPairSpec {
        let job = |label: &str, f| JobPosting {
            company_label: label.into(),
            de_facto_female_fraction: f,
            posting_url: String::new(),
            source_note: String::new(),
        };
        JobPairSpec {
            category: "delivery driver".into(),
            job_a: job("Domino's", 0.02),
            job_b: job("Instacart", 0.50),
            equal_qualification: true,
            location_label: "NC".into(),
        }
    }

    #[test]
    fn admission_rules() {
        let ok = drivers();
        ok.validate().unwrap();
        assert_eq!(ok.de_facto_direction(), Direction::Ad2MoreFemale);
        let mut unequal = ok.clone();
        unequal.equal_qualification = false;
        assert!(unequal.validate().is_err());
        let mut flat = ok.clone();
        flat.job_b.de_facto_female_fraction = 0.02;
        assert!(flat.validate().is_err());
        let mut out_of_range = ok;
        out_of_range.job_a.de_facto_female_fraction = 1.2;
        assert!(out_of_range.validate().is_err());
    }
}
