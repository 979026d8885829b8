use serde::{Deserialize, Serialize};

use crate::Campaign;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pacing {
    /// Spend no faster than a straight line from 0 to the budget.
    #[default]
    Uniform,
    AsapUntilExhausted,
}

/// Remaining spend allowance at `elapsed_fraction` of the window.
///
/// # Panics
///
/// If `spent` exceeds the budget; the auction never lets that happen.
pub fn pace_budget(campaign: &Campaign, pacing: Pacing, spent: f64, elapsed_fraction: f64) -> f64 {
    BudgetPacer { budget: campaign.total_budget, spent, pacing }.allowance(elapsed_fraction)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetPacer {
    pub budget: f64,
    pub spent: f64,
    pub pacing: Pacing,
}

impl BudgetPacer {
    pub fn new(budget: f64, pacing: Pacing) -> Self {
        Self { budget, spent: 0.0, pacing }
    }

    pub fn allowance(&self, elapsed_fraction: f64) -> f64 {
        assert!(self.spent <= self.budget, "overspend: {} > {}", self.spent, self.budget);
        let elapsed = elapsed_fraction.clamp(0.0, 1.0);
        match self.pacing {
            Pacing::Uniform => self.budget * elapsed - self.spent,
            Pacing::AsapUntilExhausted => self.budget - self.spent,
        }
    }

    /// Whether a bid may enter an auction: pacing leaves room and the bid
    /// (an upper bound on the price) fits the remaining budget.
    pub fn can_bid(&self, bid: f64, elapsed_fraction: f64) -> bool {
        self.allowance(elapsed_fraction) > 0.0 && self.spent + bid <= self.budget
    }

    pub fn charge(&mut self, price: f64) {
        self.spent += price;
        assert!(self.spent <= self.budget, "overspend: {} > {}", self.spent, self.budget);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_halfway() {
        let p = BudgetPacer { budget: 50.0, spent: 25.0, pacing: Pacing::Uniform };
        assert_eq!(p.allowance(0.5), 0.0);
        assert_eq!(p.allowance(1.0), 25.0);
    }

    #[test]
    fn asap_ignores_time() {
        let p = BudgetPacer { budget: 50.0, spent: 10.0, pacing: Pacing::AsapUntilExhausted };
        assert_eq!(p.allowance(0.0), 40.0);
        assert_eq!(p.allowance(1.0), 40.0);
    }

    #[test]
    fn bid_must_fit_remaining_budget() {
        let p = BudgetPacer { budget: 1.0, spent: 0.95, pacing: Pacing::AsapUntilExhausted };
        assert!(p.can_bid(0.05, 0.5));
        assert!(!p.can_bid(0.06, 0.5));
    }

    #[test]
    #[should_panic(expected = "overspend")]
    fn overspend_is_an_invariant_violation() {
        BudgetPacer { budget: 50.0, spent: 50.5, pacing: Pacing::Uniform }.allowance(1.0);
    }
}
