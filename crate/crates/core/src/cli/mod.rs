//! Command-line front end: `analyze`, `sweep`, `simulate`, `learn`,
//! `ingest` and `validate`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric failure (including
//! failed validation checks), 4 data-format error.

pub mod config;
pub mod ingest;
mod output;
pub mod validate;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sha2::Digest;

use crate::bandit::{self, BanditState};
use crate::error::{Error, Result};
use crate::optimizer::{self, Metric, Mode};
use crate::queueing;
use crate::simulator;

pub use config::{Format, RunConfig};
use output::Sink;

#[derive(Debug, Parser)]
#[command(name = "parkcharge", version, about = "Overstay penalty analysis for EV park-and-charge lots")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub days: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub grid_min: Option<f64>,
    #[arg(long)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long, value_enum)]
    pub metric: Option<Metric>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Performance measures at the configured tariff, plus the ideal benchmark.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Measures over a grid of linear penalty rates.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Per-day outcomes of the discrete-event simulation.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Online learning of the penalty rate with the UCB policy.
    Learn {
        #[command(flatten)]
        common: Common,
    },
    /// Filter a charging-event CSV and summarize it.
    Ingest {
        #[command(flatten)]
        common: Common,
        /// Events CSV (overrides the config's ingest section).
        #[arg(long)]
        events: Option<PathBuf>,
        #[arg(long)]
        charger_type: Option<String>,
        #[arg(long)]
        min_park_min: Option<f64>,
        #[arg(long)]
        max_park_min: Option<f64>,
        /// Write the empirical durations as a model fragment to this path.
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Cross-check the analytic, closed-form and simulated pipelines.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Numeric { .. } | Error::Degenerate(_) | Error::Optimization(_) | Error::Domain(_) => 3,
            Error::Format(_) | Error::Filter(_) | Error::Csv(_) | Error::Json(_) | Error::Io(_) => 4,
        }
    }
}

fn load(common: &Common) -> Result<RunConfig> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::config("--config <path> is required for this command"))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(seed) = common.seed {
        cfg.simulation.seed = seed;
    }
    if let Some(days) = common.days {
        cfg.simulation.days = days;
    }
    if let Some(out) = &common.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(f) = common.format {
        cfg.output.format = f;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Analyze { common } => analyze(&load(&common)?),
        Command::Sweep { common, grid } => {
            let mut cfg = load(&common)?;
            let o = &mut cfg.optimizer;
            o.grid_min = grid.grid_min.unwrap_or(o.grid_min);
            o.grid_max = grid.grid_max.unwrap_or(o.grid_max);
            o.grid_step = grid.grid_step.unwrap_or(o.grid_step);
            o.metric = grid.metric.unwrap_or(o.metric);
            o.mode = grid.mode.unwrap_or(o.mode);
            cfg.validate()?;
            sweep(&cfg)
        }
        Command::Simulate { common } => simulate(&load(&common)?),
        Command::Learn { common } => learn(&load(&common)?),
        Command::Ingest {
            common,
            events,
            charger_type,
            min_park_min,
            max_park_min,
            model_out,
        } => {
            let mut settings = match &common.config {
                Some(_) => load(&common)?.ingest,
                None => None,
            };
            if let Some(events) = events {
                let s = settings.get_or_insert(config::IngestSettings {
                    events: events.clone(),
                    charger_type: None,
                    min_park_min: None,
                    max_park_min: None,
                    bin_width_min: 10.0,
                });
                s.events = events;
            }
            let mut s = settings.ok_or_else(|| Error::config("ingest needs --events or an `ingest` config section"))?;
            s.charger_type = charger_type.or(s.charger_type);
            s.min_park_min = min_park_min.or(s.min_park_min);
            s.max_park_min = max_park_min.or(s.max_park_min);
            let format = common.format.unwrap_or_default();
            run_ingest(&s, common.out.as_deref(), format, model_out.as_deref())
        }
        Command::Validate { common } => {
            let cfg = match &common.config {
                Some(_) => Some(load(&common)?),
                None => None,
            };
            let report = validate::run_suite(cfg.as_ref())?;
            for check in &report {
                println!("{} {}: {}", if check.passed { "PASS" } else { "FAIL" }, check.name, check.detail);
            }
            if report.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Error::Numeric {
                    message: "validation checks failed".into(),
                    estimate: report.iter().filter(|c| !c.passed).count() as f64,
                    achieved_error: f64::NAN,
                })
            }
        }
    }
}

const REPORT_COLUMNS: [&str; 11] = [
    "qbar",
    "e_tpc_hours",
    "e_to_hours",
    "e_revenue",
    "rho",
    "e_npc",
    "blocking",
    "throughput_per_hour",
    "overstay_frac",
    "utilization",
    "revenue_rate",
];

fn report_values(r: &queueing::PerformanceReport) -> [f64; 11] {
    [
        r.qbar,
        r.e_tpc,
        r.e_to,
        r.e_revenue,
        r.rho,
        r.e_npc,
        r.blocking,
        r.throughput,
        r.overstay_frac,
        r.utilization,
        r.revenue_rate,
    ]
}

fn analyze(cfg: &RunConfig) -> Result<()> {
    let report = optimizer::evaluate_analytic(&cfg.model, &cfg.tariff, &cfg.queue, &cfg.quadrature)?;
    let ideal = queueing::ideal_benchmark_with(&cfg.model, &cfg.tariff, &cfg.queue, &cfg.quadrature)?;
    let mut sink = Sink::new(cfg, "analyze")?;
    match cfg.output.format {
        Format::Json => sink.json(&serde_json::json!({ "posted": report, "ideal": ideal }))?,
        Format::Csv => {
            let mut header = vec!["scenario"];
            header.extend(REPORT_COLUMNS);
            let rows = [("posted", report), ("ideal", ideal)].map(|(name, r)| {
                let mut row = vec![name.to_string()];
                row.extend(report_values(&r).iter().map(|v| v.to_string()));
                row
            });
            sink.csv(&header, rows)?;
        }
    }
    sink.finish()
}

fn sweep(cfg: &RunConfig) -> Result<()> {
    let o = &cfg.optimizer;
    let grid = optimizer::grid(o.grid_min, o.grid_max, o.grid_step)?;
    let rows = optimizer::sweep(
        &cfg.model,
        &cfg.tariff,
        &cfg.queue,
        &grid,
        o.mode,
        &cfg.quadrature,
        &cfg.simulation,
    )?;
    let best = optimizer::argmax_penalty(&rows, o.metric);
    let mut sink = Sink::new(cfg, "sweep")?;
    if let Ok((a, v)) = best {
        sink.comment(&format!("best alpha_o for {:?}: {a} ({v})", o.metric).to_lowercase());
    }
    match cfg.output.format {
        Format::Json => sink.json(&serde_json::json!({ "rows": rows, "best": best.ok() }))?,
        Format::Csv if o.mode == Mode::Analytic => {
            let mut header = vec!["alpha_o", "qbar", "e_tpc_hours", "e_to_hours", "rho", "e_npc", "blocking"];
            header.extend(["throughput_per_hour", "overstay_frac", "utilization", "revenue_rate", "error"]);
            let body = rows.iter().map(|row| {
                let mut out = vec![row.alpha_o.to_string()];
                match &row.outcome {
                    optimizer::RowOutcome::Analytic(r) => {
                        let v = report_values(r);
                        // e_revenue is not part of the sweep schema
                        out.extend(v.iter().enumerate().filter(|(i, _)| *i != 3).map(|(_, x)| x.to_string()));
                        out.push(String::new());
                    }
                    other => {
                        out.extend(std::iter::repeat_n(String::new(), 10));
                        out.push(failure_text(other));
                    }
                }
                out
            });
            sink.csv(&header, body)?;
        }
        Format::Csv => {
            let header = [
                "alpha_o",
                "days",
                "revenue_per_day",
                "revenue_rate",
                "utilization",
                "overstay_frac",
                "arrivals",
                "accepted",
                "blocked",
                "served",
                "error",
            ];
            let body = rows.iter().map(|row| {
                let mut out = vec![row.alpha_o.to_string()];
                match &row.outcome {
                    optimizer::RowOutcome::Simulated { days, horizon, mean } => {
                        out.push(days.to_string());
                        for v in [
                            mean.revenue,
                            mean.revenue / horizon,
                            mean.utilization,
                            mean.overstay_frac,
                            mean.arrivals,
                            mean.accepted,
                            mean.blocked,
                            mean.served,
                        ] {
                            out.push(v.to_string());
                        }
                        out.push(String::new());
                    }
                    other => {
                        out.extend(std::iter::repeat_n(String::new(), 9));
                        out.push(failure_text(other));
                    }
                }
                out
            });
            sink.csv(&header, body)?;
        }
    }
    sink.finish()
}

fn failure_text(outcome: &optimizer::RowOutcome) -> String {
    match outcome {
        optimizer::RowOutcome::Failed { message } => message.clone(),
        _ => String::new(),
    }
}

fn simulate(cfg: &RunConfig) -> Result<()> {
    let days = simulator::run_horizon(&cfg.sim_config(), cfg.simulation.days, &[])?;
    let mut sink = Sink::new(cfg, "simulate")?;
    match cfg.output.format {
        Format::Json => sink.json(&serde_json::json!({ "days": days, "mean": simulator::average(&days) }))?,
        Format::Csv => {
            let header = [
                "day",
                "revenue",
                "charging_hours",
                "overstay_hours",
                "arrivals",
                "accepted",
                "blocked",
                "served",
                "utilization",
                "overstay_frac",
            ];
            let body = days.iter().enumerate().map(|(i, d)| {
                vec![
                    i.to_string(),
                    d.revenue.to_string(),
                    d.charging_hours.to_string(),
                    d.overstay_hours.to_string(),
                    d.arrivals.to_string(),
                    d.accepted.to_string(),
                    d.blocked.to_string(),
                    d.served.to_string(),
                    d.utilization.to_string(),
                    d.overstay_frac.to_string(),
                ]
            });
            sink.csv(&header, body)?;
        }
    }
    sink.finish()
}

fn learn(cfg: &RunConfig) -> Result<()> {
    let sim = cfg.sim_config();
    let b = &cfg.bandit;
    let mut state = match &b.checkpoint {
        Some(path) if path.exists() => {
            let s = BanditState::load(path)?;
            if s.arms != b.arms {
                return Err(Error::config("checkpoint arms differ from the configured arms"));
            }
            s
        }
        _ => BanditState::new(b.arms.clone(), cfg.reward_scale())?,
    };
    let means = bandit::true_arm_means(&sim, &b.arms, b.prepass_days)?;
    let steps = bandit::simulate_learning(&sim, &mut state, cfg.simulation.days as u64, &means)?;
    if let Some(path) = &b.checkpoint {
        state.save(path)?;
    }
    let mut sink = Sink::new(cfg, "learn")?;
    sink.comment(&format!(
        "reward_scale={} true_means={:?} clipped={}",
        state.reward_scale, means, state.clipped
    ));
    match cfg.output.format {
        Format::Json => sink.json(&serde_json::json!({ "true_means": means, "steps": steps, "state": state }))?,
        Format::Csv => {
            let header = [
                "day",
                "arm",
                "alpha_o",
                "revenue",
                "cumulative_regret",
                "cumulative_regret_normalized",
                "regret_bound_normalized",
            ];
            let body = steps.iter().map(|s| {
                vec![
                    s.day.to_string(),
                    s.arm.to_string(),
                    s.alpha_o.to_string(),
                    s.revenue.to_string(),
                    s.cumulative_regret.to_string(),
                    s.cumulative_regret_normalized.to_string(),
                    s.regret_bound.to_string(),
                ]
            });
            sink.csv(&header, body)?;
        }
    }
    sink.finish()
}

fn run_ingest(
    s: &config::IngestSettings,
    out: Option<&std::path::Path>,
    format: Format,
    model_out: Option<&std::path::Path>,
) -> Result<()> {
    let filter = ingest::EventFilter {
        charger_type: s.charger_type.clone(),
        min_park_min: s.min_park_min,
        max_park_min: s.max_park_min,
    };
    let result = ingest::ingest_events(&s.events, &filter, s.bin_width_min)?;
    if let Some(path) = model_out {
        let fragment = serde_json::json!({ "charge": result.charge, "appointment": result.appointment });
        std::fs::write(path, serde_json::to_string_pretty(&fragment)?)?;
    }
    let sum = &result.summary;
    let mut sink = Sink::raw(out, format)?;
    // ingest has no randomness; the digest covers the effective filter settings
    let digest = hex::encode(sha2::Sha256::digest(serde_json::to_string_pretty(s)?.as_bytes()));
    sink.comment(&format!("parkcharge ingest seed=none config_sha256={digest}"));
    sink.comment(&format!(
        "rows={} kept={} filtered_out={} rejected={} charge_exceeds_park={}",
        sum.rows, sum.kept, sum.filtered_out, sum.rejected, sum.charge_exceeds_park
    ));
    match format {
        Format::Json => sink.json(sum)?,
        Format::Csv => {
            let header = ["bin_lo_min", "bin_hi_min", "park_count", "charge_count"];
            let body = sum.histogram.iter().map(|b| {
                vec![
                    b.lo_min.to_string(),
                    b.hi_min.to_string(),
                    b.park_count.to_string(),
                    b.charge_count.to_string(),
                ]
            });
            sink.csv(&header, body)?;
        }
    }
    sink.finish()
}
