//! Grid search over linear penalty rates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::QuadratureSettings;
use crate::behavior::UserModel;
use crate::closedform::{self, ExpCaseParams};
use crate::error::{Error, Result};
use crate::queueing::{self, PerformanceReport, QueueParams};
use crate::simulator::{self, DayAverages, SimConfig};
use crate::tariff::Tariff;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Analytic,
    Simulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Utilization,
    /// Revenue per hour.
    Revenue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSettings {
    pub days: usize,
    pub horizon: f64,
    pub seed: u64,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        Self {
            days: 100,
            horizon: 6.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowOutcome {
    Analytic(PerformanceReport),
    Simulated { days: usize, horizon: f64, mean: DayAverages },
    Failed { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha_o: f64,
    pub outcome: RowOutcome,
}

impl SweepRow {
    pub fn metric(&self, metric: Metric) -> Option<f64> {
        match (&self.outcome, metric) {
            (RowOutcome::Analytic(r), Metric::Utilization) => Some(r.utilization),
            (RowOutcome::Analytic(r), Metric::Revenue) => Some(r.revenue_rate),
            (RowOutcome::Simulated { mean, .. }, Metric::Utilization) => Some(mean.utilization),
            (RowOutcome::Simulated { mean, horizon, .. }, Metric::Revenue) => Some(mean.revenue / horizon),
            (RowOutcome::Failed { .. }, _) => None,
        }
    }
}

/// `min, min + step, ...` up to `max` (inclusive within rounding).
pub fn grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min >= 0.0 && max >= min && min.is_finite() && max.is_finite()) {
        return Err(Error::config(format!("invalid grid range [{min}, {max}]")));
    }
    if max == min {
        return Ok(vec![min]);
    }
    if !(step > 0.0) {
        return Err(Error::config(format!("grid step must be positive, got {step}")));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    // snap to the step's decimal resolution so 0.05 + 232 * 0.01 prints as 2.37
    Ok((0..=n).map(|i| round_to_step(min + i as f64 * step, step)).collect())
}

fn round_to_step(x: f64, step: f64) -> f64 {
    let digits = (-step.log10()).ceil().max(0.0) as i32 + 3;
    let f = 10f64.powi(digits);
    (x * f).round() / f
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::config("penalty grid is empty"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("penalty grid must be strictly increasing"));
    }
    if grid.iter().any(|a| !(*a >= 0.0 && a.is_finite())) {
        return Err(Error::config("penalty rates must be finite and nonnegative"));
    }
    Ok(())
}

/// Analytic measures at one penalty rate, using the closed forms when the
/// model allows it.
pub fn evaluate_analytic(
    model: &UserModel,
    tariff: &Tariff,
    queue: &QueueParams,
    settings: &QuadratureSettings,
) -> Result<PerformanceReport> {
    match ExpCaseParams::from_model(model, tariff) {
        Some(p) => queueing::performance(
            queue,
            closedform::qbar_exp(&p),
            closedform::mean_tpc_exp(&p),
            closedform::mean_to_exp(&p),
            closedform::mean_revenue_exp(&p),
        ),
        None => queueing::analyze(model, tariff, queue, settings),
    }
}

pub fn sweep(
    model: &UserModel,
    template: &Tariff,
    queue: &QueueParams,
    grid: &[f64],
    mode: Mode,
    quadrature: &QuadratureSettings,
    sim: &SimulationSettings,
) -> Result<Vec<SweepRow>> {
    check_grid(grid)?;
    let rows = grid
        .par_iter()
        .map(|&alpha_o| {
            let outcome = template.with_penalty_rate(alpha_o).and_then(|tariff| match mode {
                Mode::Analytic => evaluate_analytic(model, &tariff, queue, quadrature).map(RowOutcome::Analytic),
                Mode::Simulation => {
                    let mut cfg = SimConfig::new(*queue, model.clone(), tariff, sim.seed);
                    cfg.horizon = sim.horizon;
                    simulator::run_horizon(&cfg, sim.days, &[]).map(|days| RowOutcome::Simulated {
                        days: sim.days,
                        horizon: sim.horizon,
                        mean: simulator::average(&days),
                    })
                }
            });
            SweepRow {
                alpha_o,
                outcome: outcome.unwrap_or_else(|e| RowOutcome::Failed { message: e.to_string() }),
            }
        })
        .collect();
    Ok(rows)
}

/// Grid point with the largest metric; ties go to the smaller rate.
pub fn argmax_penalty(rows: &[SweepRow], metric: Metric) -> Result<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for row in rows {
        if let Some(v) = row.metric(metric) {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((row.alpha_o, v));
            }
        }
    }
    best.ok_or_else(|| Error::Optimization("every row of the sweep failed".into()))
}
