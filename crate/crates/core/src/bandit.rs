//! UCB policy over a finite set of penalty rates.
//!
//! Rewards are daily revenues divided by `reward_scale` and clipped into
//! `[0, 1]`; raw totals are kept for reporting. Regret bounds are therefore
//! in normalized units too.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::{self, SimConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BanditState {
    /// Candidate penalty rates.
    pub arms: Vec<f64>,
    /// Raw revenue collected per arm.
    pub totals: Vec<f64>,
    /// Normalized, clipped reward collected per arm.
    pub normalized_totals: Vec<f64>,
    pub counts: Vec<u64>,
    /// Days played so far.
    pub t: u64,
    pub reward_scale: f64,
    /// Number of rewards that exceeded `reward_scale`.
    #[serde(default)]
    pub clipped: u64,
}

impl BanditState {
    pub fn new(arms: Vec<f64>, reward_scale: f64) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::config("bandit needs at least one arm"));
        }
        if !(reward_scale > 0.0 && reward_scale.is_finite()) {
            return Err(Error::config(format!("reward_scale must be positive, got {reward_scale}")));
        }
        let k = arms.len();
        Ok(Self {
            arms,
            totals: vec![0.0; k],
            normalized_totals: vec![0.0; k],
            counts: vec![0; k],
            t: 0,
            reward_scale,
            clipped: 0,
        })
    }

    /// Per-day revenue ceiling: every spot charging or overstaying all day at
    /// the steepest rates.
    pub fn default_reward_scale(n_spots: usize, horizon: f64, max_charge_slope: f64, max_penalty_slope: f64) -> f64 {
        n_spots as f64 * horizon * (max_charge_slope + max_penalty_slope)
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    /// Mean raw revenue per arm (`None` before the first pull).
    pub fn estimates(&self) -> Vec<Option<f64>> {
        self.totals
            .iter()
            .zip(&self.counts)
            .map(|(r, &k)| (k > 0).then(|| r / k as f64))
            .collect()
    }

    /// `R̂_i + sqrt(2 ln t / K_i)` on normalized rewards; infinite for unpulled arms.
    pub fn ucb_indices(&self) -> Vec<f64> {
        let ln_t = (self.t.max(1) as f64).ln();
        self.normalized_totals
            .iter()
            .zip(&self.counts)
            .map(|(r, &k)| {
                if k == 0 {
                    f64::INFINITY
                } else {
                    let k = k as f64;
                    r / k + (2.0 * ln_t / k).sqrt()
                }
            })
            .collect()
    }

    pub fn select_arm(&self) -> Result<usize> {
        if self.arms.is_empty() {
            return Err(Error::config("bandit needs at least one arm"));
        }
        if let Some(i) = self.counts.iter().position(|&k| k == 0) {
            return Ok(i);
        }
        let idx = self.ucb_indices();
        let mut best = 0;
        for (i, v) in idx.iter().enumerate() {
            if *v > idx[best] {
                best = i;
            }
        }
        Ok(best)
    }

    pub fn update(&mut self, arm: usize, revenue: f64) -> Result<()> {
        if arm >= self.arms.len() {
            return Err(Error::domain(format!("arm {arm} out of range")));
        }
        if !(revenue >= 0.0 && revenue.is_finite()) {
            return Err(Error::domain(format!("revenue must be finite and nonnegative, got {revenue}")));
        }
        let normalized = revenue / self.reward_scale;
        if normalized > 1.0 {
            self.clipped += 1;
        }
        self.totals[arm] += revenue;
        self.normalized_totals[arm] += normalized.min(1.0);
        self.counts[arm] += 1;
        self.t += 1;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let k = s.arms.len();
        if k == 0 || s.totals.len() != k || s.normalized_totals.len() != k || s.counts.len() != k {
            return Err(Error::Format("checkpoint arrays do not match the arm count".into()));
        }
        if s.counts.iter().sum::<u64>() != s.t {
            return Err(Error::Format("checkpoint counts do not add up to t".into()));
        }
        Ok(s)
    }
}

/// True mean rewards per arm and the pulls made so far.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretLedger {
    pub true_means: Vec<f64>,
    pub counts: Vec<u64>,
    pub cumulative: f64,
}

impl RegretLedger {
    pub fn new(true_means: Vec<f64>) -> Self {
        let k = true_means.len();
        Self {
            true_means,
            counts: vec![0; k],
            cumulative: 0.0,
        }
    }

    pub fn best(&self) -> f64 {
        self.true_means.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn gaps(&self) -> Vec<f64> {
        let best = self.best();
        self.true_means.iter().map(|m| best - m).collect()
    }

    pub fn record(&mut self, arm: usize) {
        self.counts[arm] += 1;
        self.cumulative += self.best() - self.true_means[arm];
    }
}

/// `Σ K_i (best - mean_i)`.
pub fn regret(true_means: &[f64], counts: &[u64]) -> f64 {
    let best = true_means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    true_means
        .iter()
        .zip(counts)
        .map(|(m, &k)| k as f64 * (best - m))
        .sum()
}

/// Expected-regret bound after `k_days` days for the given suboptimality gaps
/// (zero gaps contribute nothing).
pub fn regret_bound(gaps: &[f64], k_days: u64) -> f64 {
    let ln_k = (k_days.max(1) as f64).ln();
    gaps.iter()
        .filter(|d| **d > 0.0)
        .map(|d| ((8.0 * ln_k / (d * d)).ceil() + 1.0 + PI * PI / 3.0) * d)
        .sum()
}

/// One simulated day of online learning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnStep {
    pub day: u64,
    pub arm: usize,
    pub alpha_o: f64,
    pub revenue: f64,
    /// Expected revenue lost so far against the best arm, in currency.
    pub cumulative_regret: f64,
    /// Same in normalized reward units.
    pub cumulative_regret_normalized: f64,
    /// Expected-regret bound at this day, in normalized reward units.
    pub regret_bound: f64,
}

// keeps the pre-pass days disjoint from the learning days
const PREPASS_SEED_MIX: u64 = 0x9e37_79b9_7f4a_7c15;

/// Mean daily revenue of each arm over `days` simulated days.
pub fn true_arm_means(cfg: &SimConfig, arms: &[f64], days: usize) -> Result<Vec<f64>> {
    let mut prepass = cfg.clone();
    prepass.seed = cfg.seed ^ PREPASS_SEED_MIX;
    arms.iter()
        .map(|&a| {
            let tariff = cfg.tariff.with_penalty_rate(a)?;
            let outcomes = simulator::run_horizon(&prepass, days, std::slice::from_ref(&tariff))?;
            Ok(outcomes.iter().map(|d| d.revenue).sum::<f64>() / days as f64)
        })
        .collect()
}

/// Runs the policy for `days` days, each day's revenue coming from the
/// simulator under the chosen penalty rate.
pub fn simulate_learning(
    cfg: &SimConfig,
    state: &mut BanditState,
    days: u64,
    true_means: &[f64],
) -> Result<Vec<LearnStep>> {
    if true_means.len() != state.len() {
        return Err(Error::config("one true mean per arm is required"));
    }
    let tariffs = state
        .arms
        .iter()
        .map(|&a| cfg.tariff.with_penalty_rate(a))
        .collect::<Result<Vec<_>>>()?;
    let scale = state.reward_scale;
    let mut ledger = RegretLedger::new(true_means.to_vec());
    let gaps: Vec<f64> = ledger.gaps().iter().map(|g| g / scale).collect();
    let mut steps = Vec::with_capacity(days as usize);
    for _ in 0..days {
        let day = state.t;
        let arm = state.select_arm()?;
        let revenue = simulator::run_day_indexed(cfg, day, Some(&tariffs[arm])).revenue;
        state.update(arm, revenue)?;
        ledger.record(arm);
        steps.push(LearnStep {
            day: state.t,
            arm,
            alpha_o: state.arms[arm],
            revenue,
            cumulative_regret: ledger.cumulative,
            cumulative_regret_normalized: ledger.cumulative / scale,
            regret_bound: regret_bound(&gaps, state.t),
        });
    }
    Ok(steps)
}
