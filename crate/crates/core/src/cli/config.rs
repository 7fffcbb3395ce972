use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analytic::QuadratureSettings;
use crate::bandit::BanditState;
use crate::behavior::UserModel;
use crate::error::{Error, Result};
use crate::optimizer::{Metric, Mode, SimulationSettings};
use crate::queueing::QueueParams;
use crate::simulator::SimConfig;
use crate::tariff::Tariff;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSettings {
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_step: f64,
    pub metric: Metric,
    pub mode: Mode,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            grid_min: 0.05,
            grid_max: 10.0,
            grid_step: 0.01,
            metric: Metric::Revenue,
            mode: Mode::Analytic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BanditSettings {
    pub arms: Vec<f64>,
    /// Defaults to the per-day revenue ceiling of the lot.
    pub reward_scale: Option<f64>,
    /// Days simulated per arm to estimate the true means.
    pub prepass_days: usize,
    /// Resume from / write to this checkpoint.
    pub checkpoint: Option<PathBuf>,
}

impl Default for BanditSettings {
    fn default() -> Self {
        Self {
            arms: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            reward_scale: None,
            prepass_days: 2000,
            checkpoint: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IngestSettings {
    pub events: PathBuf,
    #[serde(default)]
    pub charger_type: Option<String>,
    #[serde(default)]
    pub min_park_min: Option<f64>,
    #[serde(default)]
    pub max_park_min: Option<f64>,
    /// Histogram bin width in minutes.
    #[serde(default = "default_bin_width")]
    pub bin_width_min: f64,
}

fn default_bin_width() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSettings {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: UserModel,
    pub tariff: Tariff,
    pub queue: QueueParams,
    #[serde(default)]
    pub simulation: SimulationSettings,
    #[serde(default)]
    pub bandit: BanditSettings,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
    #[serde(default)]
    pub quadrature: QuadratureSettings,
    #[serde(default)]
    pub ingest: Option<IngestSettings>,
    #[serde(default)]
    pub output: OutputSettings,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let as_config = |e: Error| match e {
            Error::Config(_) => e,
            other => Error::config(other.to_string()),
        };
        self.model.validate().map_err(as_config)?;
        self.queue.validate()?;
        self.quadrature.validate()?;
        let s = &self.simulation;
        if s.days == 0 || !(s.horizon > 0.0 && s.horizon.is_finite()) {
            return Err(Error::config("simulation needs days >= 1 and a positive horizon"));
        }
        let b = &self.bandit;
        if b.arms.is_empty() || b.arms.iter().any(|a| !(*a >= 0.0 && a.is_finite())) {
            return Err(Error::config("bandit arms must be a nonempty list of nonnegative rates"));
        }
        if b.reward_scale.is_some_and(|r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::config("bandit reward_scale must be positive"));
        }
        if b.prepass_days == 0 {
            return Err(Error::config("bandit prepass_days must be at least 1"));
        }
        let o = &self.optimizer;
        crate::optimizer::grid(o.grid_min, o.grid_max, o.grid_step)?;
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form, ignoring where output goes.
    pub fn digest(&self) -> String {
        let mut canonical = self.clone();
        canonical.output.path = None;
        hex::encode(Sha256::digest(canonical.to_json().as_bytes()))
    }

    pub fn sim_config(&self) -> SimConfig {
        let mut cfg = SimConfig::new(self.queue, self.model.clone(), self.tariff.clone(), self.simulation.seed);
        cfg.horizon = self.simulation.horizon;
        cfg
    }

    pub fn reward_scale(&self) -> f64 {
        self.bandit.reward_scale.unwrap_or_else(|| {
            let max_arm = self.bandit.arms.iter().copied().fold(0.0, f64::max);
            BanditState::default_reward_scale(
                self.queue.n_spots,
                self.simulation.horizon,
                self.tariff.charge.max_slope(),
                max_arm.max(self.tariff.penalty.max_slope()),
            )
        })
    }
}
