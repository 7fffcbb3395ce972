//! Seeded discrete-event simulation of operating days.
//!
//! Every day draws from its own random substreams (one per purpose) derived
//! from the master seed, so two runs that differ only in the posted tariff
//! see the same arrivals, charge durations, thresholds, acceptance uniforms
//! and appointment lengths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behavior::{acceptance_prob, realize_ideal_stay, realize_stay, UserDraw, UserModel};
use crate::error::{Error, Result};
use crate::queueing::QueueParams;
use crate::tariff::Tariff;

fn default_horizon() -> f64 {
    6.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub queue: QueueParams,
    pub model: UserModel,
    pub tariff: Tariff,
    /// Hours per day.
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    pub seed: u64,
    /// Users always enter and leave when charging completes.
    #[serde(default)]
    pub ideal: bool,
}

impl SimConfig {
    pub fn new(queue: QueueParams, model: UserModel, tariff: Tariff, seed: u64) -> Self {
        Self {
            queue,
            model,
            tariff,
            horizon: default_horizon(),
            seed,
            ideal: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.queue.validate()?;
        self.model.validate()?;
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::config(format!("horizon must be positive, got {}", self.horizon)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DayOutcome {
    pub revenue: f64,
    pub charging_hours: f64,
    pub overstay_hours: f64,
    pub arrivals: u64,
    pub accepted: u64,
    pub blocked: u64,
    pub served: u64,
    pub utilization: f64,
    pub overstay_frac: f64,
}

/// One arriving user with everything needed to replay the day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrival {
    pub time: f64,
    pub draw: UserDraw,
    /// Uniform compared against the acceptance probability.
    pub accept_u: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DayTrace {
    pub outcome: DayOutcome,
    /// Arrival times of users who accepted the tariff, blocked or not.
    pub accepted_times: Vec<f64>,
    pub max_occupancy: usize,
}

#[derive(Clone, Copy)]
enum Stream {
    Arrivals = 0,
    Charge = 1,
    Threshold = 2,
    Acceptance = 3,
    Appointment = 4,
}

const STREAMS_PER_DAY: u64 = 8;

fn substream(seed: u64, day: u64, purpose: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(day * STREAMS_PER_DAY + purpose as u64);
    rng
}

/// Arrivals of day `day` under the configured model.
pub fn draw_arrivals(cfg: &SimConfig, day: u64) -> Vec<Arrival> {
    let lambda = cfg.queue.arrival_rate;
    if lambda == 0.0 {
        return Vec::new();
    }
    let gaps = Exp::new(lambda).expect("positive rate");
    let mut arrivals_rng = substream(cfg.seed, day, Stream::Arrivals);
    let mut charge_rng = substream(cfg.seed, day, Stream::Charge);
    let mut threshold_rng = substream(cfg.seed, day, Stream::Threshold);
    let mut accept_rng = substream(cfg.seed, day, Stream::Acceptance);
    let mut appointment_rng = substream(cfg.seed, day, Stream::Appointment);
    let mut out = Vec::new();
    let mut now = 0.0;
    loop {
        now += gaps.sample(&mut arrivals_rng);
        if now >= cfg.horizon {
            return out;
        }
        let draw = UserDraw {
            t_c: cfg.model.charge.sample(&mut charge_rng),
            c_max: cfg.model.threshold.sample(&mut threshold_rng),
            // drawn for every arrival to keep streams aligned across tariffs,
            // but only looked at once the user has accepted
            t_a: cfg.model.appointment.sample(&mut appointment_rng),
        };
        out.push(Arrival {
            time: now,
            draw,
            accept_u: accept_rng.random::<f64>(),
        });
    }
}

#[derive(PartialEq)]
struct Departure(f64);

impl Eq for Departure {}

impl PartialOrd for Departure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Departure {
    // reversed: earliest departure on top
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0)
    }
}

/// Runs one day over a given arrival list (sorted by time).
pub fn replay(n_spots: usize, horizon: f64, tariff: &Tariff, model: &UserModel, ideal: bool, arrivals: &[Arrival]) -> DayTrace {
    let mut out = DayOutcome {
        arrivals: arrivals.len() as u64,
        ..Default::default()
    };
    let mut parked: BinaryHeap<Departure> = BinaryHeap::new();
    let mut accepted_times = Vec::new();
    let mut max_occupancy = 0;
    for a in arrivals {
        while parked.peek().is_some_and(|d| d.0 <= a.time) {
            parked.pop();
        }
        let q = if ideal {
            1.0
        } else {
            acceptance_prob(a.draw.t_c, a.draw.c_max, tariff, &model.appointment)
        };
        if a.accept_u >= q {
            continue;
        }
        out.accepted += 1;
        accepted_times.push(a.time);
        if parked.len() >= n_spots {
            out.blocked += 1;
            continue;
        }
        out.served += 1;
        let stay = if ideal {
            realize_ideal_stay(&a.draw, tariff)
        } else {
            realize_stay(&a.draw, tariff)
        };
        let charge_end = a.time + (stay.t_pc - stay.t_o);
        let leave = a.time + stay.t_pc;
        out.revenue += stay.revenue;
        out.charging_hours += charge_end.min(horizon) - a.time;
        out.overstay_hours += (leave.min(horizon) - charge_end.min(horizon)).max(0.0);
        parked.push(Departure(leave));
        max_occupancy = max_occupancy.max(parked.len());
    }
    let capacity = n_spots as f64 * horizon;
    out.utilization = out.charging_hours / capacity;
    out.overstay_frac = out.overstay_hours / capacity;
    DayTrace {
        outcome: out,
        accepted_times,
        max_occupancy,
    }
}

/// Day `day` of the replication, with an optional tariff replacing the
/// configured one.
pub fn run_day_indexed(cfg: &SimConfig, day: u64, tariff: Option<&Tariff>) -> DayOutcome {
    run_day_traced(cfg, day, tariff).outcome
}

pub fn run_day_traced(cfg: &SimConfig, day: u64, tariff: Option<&Tariff>) -> DayTrace {
    let arrivals = draw_arrivals(cfg, day);
    let tariff = tariff.unwrap_or(&cfg.tariff);
    replay(cfg.queue.n_spots, cfg.horizon, tariff, &cfg.model, cfg.ideal, &arrivals)
}

/// First day of the replication.
pub fn run_day(cfg: &SimConfig, tariff: Option<&Tariff>) -> DayOutcome {
    run_day_indexed(cfg, 0, tariff)
}

/// `days` independent days, in parallel. `tariffs` holds one tariff per day
/// or a single shared one; an empty slice means the configured tariff.
pub fn run_horizon(cfg: &SimConfig, days: usize, tariffs: &[Tariff]) -> Result<Vec<DayOutcome>> {
    cfg.validate()?;
    if days == 0 {
        return Err(Error::config("days must be at least 1"));
    }
    if !(tariffs.len() <= 1 || tariffs.len() == days) {
        return Err(Error::config(format!("expected 1 or {days} tariffs, got {}", tariffs.len())));
    }
    Ok((0..days)
        .into_par_iter()
        .map(|d| {
            let t = match tariffs.len() {
                0 => None,
                1 => Some(&tariffs[0]),
                _ => Some(&tariffs[d]),
            };
            run_day_indexed(cfg, d as u64, t)
        })
        .collect())
}

/// Field-wise mean of day outcomes (counts averaged as reals).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DayAverages {
    pub revenue: f64,
    pub charging_hours: f64,
    pub overstay_hours: f64,
    pub arrivals: f64,
    pub accepted: f64,
    pub blocked: f64,
    pub served: f64,
    pub utilization: f64,
    pub overstay_frac: f64,
}

pub fn average(days: &[DayOutcome]) -> DayAverages {
    let n = days.len().max(1) as f64;
    let mut m = DayAverages::default();
    for d in days {
        m.revenue += d.revenue;
        m.charging_hours += d.charging_hours;
        m.overstay_hours += d.overstay_hours;
        m.arrivals += d.arrivals as f64;
        m.accepted += d.accepted as f64;
        m.blocked += d.blocked as f64;
        m.served += d.served as f64;
        m.utilization += d.utilization;
        m.overstay_frac += d.overstay_frac;
    }
    for v in [
        &mut m.revenue,
        &mut m.charging_hours,
        &mut m.overstay_hours,
        &mut m.arrivals,
        &mut m.accepted,
        &mut m.blocked,
        &mut m.served,
        &mut m.utilization,
        &mut m.overstay_frac,
    ] {
        *v /= n;
    }
    m
}
