//! Per-user acceptance decision and the resulting stay.

use serde::{Deserialize, Serialize};

use crate::analytic::{self, QuadratureSettings};
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::tariff::Tariff;

/// Realized charge duration, appointment length and penalty threshold of one
/// user, in hours and currency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserDraw {
    pub t_c: f64,
    pub t_a: f64,
    pub c_max: f64,
}

impl UserDraw {
    pub fn new(t_c: f64, t_a: f64, c_max: f64) -> Result<Self> {
        for (name, v) in [("t_c", t_c), ("t_a", t_a), ("c_max", c_max)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be finite and nonnegative, got {v}")));
            }
        }
        Ok(Self { t_c, t_a, c_max })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StayOutcome {
    /// Time parked at a charger.
    pub t_pc: f64,
    /// Part of `t_pc` spent after charging completed.
    pub t_o: f64,
    pub revenue: f64,
}

/// Laws of the charge duration, appointment length and penalty threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserModel {
    pub charge: DistributionSpec,
    pub appointment: DistributionSpec,
    pub threshold: DistributionSpec,
}

impl UserModel {
    pub fn validate(&self) -> Result<()> {
        self.charge.validate()?;
        self.appointment.validate()?;
        self.threshold.validate()
    }
}

/// Probability that a user with charge duration `t_c` and threshold `c_max`
/// enters: `F_a(t_c + p_o^{-1}(c_max))`.
pub fn acceptance_prob(t_c: f64, c_max: f64, tariff: &Tariff, appointment: &DistributionSpec) -> f64 {
    let allowance = tariff.allowance(c_max);
    if allowance.is_infinite() {
        1.0
    } else {
        appointment.cdf(t_c + allowance)
    }
}

/// Population mean of [`acceptance_prob`].
pub fn mean_acceptance(model: &UserModel, tariff: &Tariff) -> Result<f64> {
    mean_acceptance_with(model, tariff, &QuadratureSettings::default())
}

pub fn mean_acceptance_with(model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    analytic::qbar(model, tariff, settings)
}

pub fn realize_stay(draw: &UserDraw, tariff: &Tariff) -> StayOutcome {
    let t_pc = (draw.t_c + tariff.allowance(draw.c_max)).min(draw.t_a);
    let t_o = (t_pc - draw.t_c).max(0.0);
    let revenue = tariff.charge.eval(t_pc - t_o) + tariff.penalty.eval(t_o);
    StayOutcome { t_pc, t_o, revenue }
}

/// Stay of a user who leaves as soon as charging completes.
pub fn realize_ideal_stay(draw: &UserDraw, tariff: &Tariff) -> StayOutcome {
    let t_pc = draw.t_c.min(draw.t_a);
    StayOutcome {
        t_pc,
        t_o: 0.0,
        revenue: tariff.charge.eval(t_pc),
    }
}
