use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use statrs::distribution::ContinuousCDF;

use crate::interval::standard_normal;
use crate::{skew_test, sweep, GenderTally, Result, StatsError, Tail};

/// Recipients needed per ad to detect a female-fraction gap of `effect`
/// centred on `baseline` with a two-sided test at level `alpha`.
///
/// Uses the pooled-variance normal approximation
/// `n = (z_{1-α/2}·√(2p̄q̄) + z_{power}·√(p₁q₁ + p₂q₂))² / δ²`, rounded up.
pub fn required_sample_size(baseline: f64, effect: f64, alpha: f64, power: f64) -> Result<u64> {
    if effect == 0.0 {
        return Err(StatsError::ZeroEffect);
    }
    if !(effect > 0.0 && effect < 1.0) {
        return Err(StatsError::InvalidParameter { name: "effect", value: effect });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::InvalidParameter { name: "alpha", value: alpha });
    }
    if !(power > 0.0 && power < 1.0) {
        return Err(StatsError::InvalidParameter { name: "power", value: power });
    }
    let (p1, p2) = (baseline - effect / 2.0, baseline + effect / 2.0);
    if p1 <= 0.0 || p2 >= 1.0 {
        return Err(StatsError::InvalidParameter { name: "baseline", value: baseline });
    }
    let normal = standard_normal();
    let z_a = normal.inverse_cdf(1.0 - alpha / 2.0);
    let z_b = normal.inverse_cdf(power);
    let pbar = (p1 + p2) / 2.0;
    let root = z_a * (2.0 * pbar * (1.0 - pbar)).sqrt() + z_b * (p1 * (1.0 - p1) + p2 * (1.0 - p2)).sqrt();
    let n = (root * root / (effect * effect)).ceil();
    Ok(n.max(1.0) as u64)
}

/// Monte Carlo rejection rate of the two-sided skew test when the two ads'
/// true female fractions are `p1` and `p2` with `n` recipients each.
///
/// Degenerate draws count as non-rejections.
pub fn simulate_power(p1: f64, p2: f64, n: u64, z_alpha: f64, trials: u64, seed: u64) -> Result<f64> {
    for (name, p) in [("p1", p1), ("p2", p2)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(StatsError::InvalidParameter { name, value: p });
        }
    }
    if n == 0 || trials == 0 {
        return Err(StatsError::EmptySample);
    }
    let b1 = Binomial::new(n, p1).expect("validated probability");
    let b2 = Binomial::new(n, p2).expect("validated probability");
    let hits = sweep::map_seeds(0..trials, |trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let f1 = b1.sample(&mut rng);
        let f2 = b2.sample(&mut rng);
        skew_test(GenderTally::new(f1, n - f1), GenderTally::new(f2, n - f2), z_alpha, Tail::TwoSided)
            .map(|r| r.significant)
            .unwrap_or(false)
    });
    Ok(hits.iter().filter(|&&h| h).count() as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_point_gap_at_conventional_settings() {
        // (1.95996·√0.5 + 0.84162·√0.495)² / 0.01 = 391.26
        assert_eq!(required_sample_size(0.5, 0.1, 0.05, 0.8).unwrap(), 392);
    }

    #[test]
    fn lower_power_needs_fewer() {
        let hi = required_sample_size(0.5, 0.1, 0.05, 0.8).unwrap();
        let lo = required_sample_size(0.5, 0.1, 0.05, 0.5).unwrap();
        assert!(lo < hi);
        assert_eq!(lo, 193);
    }

    #[test]
    fn zero_effect_is_infinite() {
        assert_eq!(required_sample_size(0.5, 0.0, 0.05, 0.8), Err(StatsError::ZeroEffect));
        assert!(required_sample_size(0.5, 1.2, 0.05, 0.8).is_err());
        assert!(required_sample_size(0.95, 0.2, 0.05, 0.8).is_err());
    }

    #[test]
    fn simulated_power_is_deterministic() {
        let a = simulate_power(0.45, 0.55, 100, 1.96, 200, 9).unwrap();
        let b = simulate_power(0.45, 0.55, 100, 1.96, 200, 9).unwrap();
        assert_eq!(a, b);
    }
}
