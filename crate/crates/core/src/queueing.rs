//! Erlang loss analysis of the lot and the derived performance measures.

use serde::{Deserialize, Serialize};

use crate::analytic::{self, QuadratureSettings};
use crate::behavior::UserModel;
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::tariff::Tariff;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueueParams {
    pub n_spots: usize,
    pub arrival_rate: f64,
}

impl QueueParams {
    pub fn new(n_spots: usize, arrival_rate: f64) -> Result<Self> {
        let q = Self { n_spots, arrival_rate };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spots == 0 {
            return Err(Error::config("n_spots must be at least 1"));
        }
        if !(self.arrival_rate >= 0.0 && self.arrival_rate.is_finite()) {
            return Err(Error::config(format!("arrival_rate must be finite and >= 0, got {}", self.arrival_rate)));
        }
        Ok(())
    }
}

/// Steady-state measures of the lot. Times in hours, money in currency units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceReport {
    pub qbar: f64,
    pub e_tpc: f64,
    pub e_to: f64,
    pub e_revenue: f64,
    /// Offered load in erlangs.
    pub rho: f64,
    /// Mean number of occupied spots.
    pub e_npc: f64,
    pub blocking: f64,
    /// Served vehicles per hour.
    pub throughput: f64,
    pub overstay_frac: f64,
    pub utilization: f64,
    /// Currency per hour.
    pub revenue_rate: f64,
}

/// `P(N_pc = i)`, `i = 0..=n`, for an Erlang loss system with load `rho`.
pub fn erlang_stationary(rho: f64, n: usize) -> Vec<f64> {
    if rho == 0.0 {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        return v;
    }
    // log(rho^i / i!) by cumulative sums
    let ln_rho = rho.ln();
    let mut logs = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    logs.push(0.0);
    for i in 1..=n {
        acc += ln_rho - (i as f64).ln();
        logs.push(acc);
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Erlang B blocking probability by the standard recurrence.
pub fn erlang_b(rho: f64, n: usize) -> f64 {
    let mut b = 1.0;
    for k in 1..=n {
        b = rho * b / (k as f64 + rho * b);
    }
    b
}

pub fn mean_occupancy(rho: f64, n: usize) -> f64 {
    rho * (1.0 - erlang_b(rho, n))
}

pub fn performance(queue: &QueueParams, qbar: f64, e_tpc: f64, e_to: f64, e_revenue: f64) -> Result<PerformanceReport> {
    queue.validate()?;
    if !(0.0..=1.0).contains(&qbar) {
        return Err(Error::domain(format!("qbar must lie in [0, 1], got {qbar}")));
    }
    if !(e_tpc > 0.0 && e_tpc.is_finite()) {
        return Err(Error::Degenerate(format!("mean parking time must be positive, got {e_tpc}")));
    }
    if !(e_to >= 0.0 && e_to <= e_tpc * (1.0 + 1e-12)) {
        return Err(Error::domain(format!("mean overstay {e_to} outside [0, {e_tpc}]")));
    }
    let n = queue.n_spots;
    let rho = queue.arrival_rate * qbar * e_tpc;
    let blocking = erlang_b(rho, n);
    let e_npc = rho * (1.0 - blocking);
    let busy = e_npc / n as f64;
    let over_share = (e_to / e_tpc).min(1.0);
    Ok(PerformanceReport {
        qbar,
        e_tpc,
        e_to,
        e_revenue,
        rho,
        e_npc,
        blocking,
        throughput: e_npc / e_tpc,
        overstay_frac: busy * over_share,
        utilization: busy * (1.0 - over_share),
        revenue_rate: e_npc * e_revenue / e_tpc,
    })
}

/// Measures for users who never overstay and always enter.
pub fn ideal_benchmark(model: &UserModel, tariff: &Tariff, queue: &QueueParams) -> Result<PerformanceReport> {
    ideal_benchmark_with(model, tariff, queue, &QuadratureSettings::default())
}

pub fn ideal_benchmark_with(
    model: &UserModel,
    tariff: &Tariff,
    queue: &QueueParams,
    settings: &QuadratureSettings,
) -> Result<PerformanceReport> {
    let linear_charge = tariff.charge.as_linear();
    let (e_tpc, e_revenue) = match (&model.charge, &model.appointment, linear_charge) {
        (
            DistributionSpec::Exponential { rate_per_hour: mu_c },
            DistributionSpec::Exponential { rate_per_hour: mu_a },
            Some(alpha_c),
        ) => {
            let e = 1.0 / (mu_a + mu_c);
            (e, alpha_c * e)
        }
        _ => analytic::ideal_means(model, tariff, settings)?,
    };
    performance(queue, 1.0, e_tpc, 0.0, e_revenue)
}

/// Measures for the behavior model under `tariff`.
pub fn analyze(
    model: &UserModel,
    tariff: &Tariff,
    queue: &QueueParams,
    settings: &QuadratureSettings,
) -> Result<PerformanceReport> {
    let m = analytic::accepted_means(model, tariff, settings)?;
    performance(queue, m.qbar, m.e_tpc, m.e_to, m.e_revenue)
}
