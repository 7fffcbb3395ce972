//! Exact means for linear tariffs, exponential durations and a constant
//! threshold.

use serde::{Deserialize, Serialize};

use crate::behavior::UserModel;
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::tariff::Tariff;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpCaseParams {
    pub mu_c: f64,
    pub mu_a: f64,
    pub c_max: f64,
    pub alpha_c: f64,
    pub alpha_o: f64,
}

impl ExpCaseParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.mu_c > 0.0
            && self.mu_a > 0.0
            && self.alpha_c > 0.0
            && self.c_max >= 0.0
            && self.alpha_o >= 0.0
            && [self.mu_c, self.mu_a, self.c_max, self.alpha_c, self.alpha_o]
                .iter()
                .all(|x| x.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid exponential-case parameters {self:?}")))
        }
    }

    /// Recognizes the special case in a general model and tariff.
    pub fn from_model(model: &UserModel, tariff: &Tariff) -> Option<Self> {
        let mu_c = match model.charge {
            DistributionSpec::Exponential { rate_per_hour } => rate_per_hour,
            _ => return None,
        };
        let mu_a = match model.appointment {
            DistributionSpec::Exponential { rate_per_hour } => rate_per_hour,
            _ => return None,
        };
        let c_max = match &model.threshold {
            DistributionSpec::Degenerate { value } => *value,
            DistributionSpec::Discrete { atoms } if atoms.len() == 1 => atoms[0].value,
            _ => return None,
        };
        let p = Self {
            mu_c,
            mu_a,
            c_max,
            alpha_c: tariff.charge.as_linear()?,
            alpha_o: tariff.penalty.as_linear()?,
        };
        p.validate().ok().map(|_| p)
    }

    pub fn with_alpha_o(self, alpha_o: f64) -> Self {
        Self { alpha_o, ..self }
    }
}

/// `e^{-mu_a c_max / alpha_o}`, extended by continuity to `alpha_o = 0`
/// (0) and `c_max = 0` (1).
pub fn beta(p: &ExpCaseParams) -> f64 {
    if p.c_max == 0.0 {
        return if p.alpha_o > 0.0 { 1.0 } else { 0.0 };
    }
    if p.alpha_o == 0.0 {
        return 0.0;
    }
    (-p.mu_a * p.c_max / p.alpha_o).exp()
}

pub fn qbar_exp(p: &ExpCaseParams) -> f64 {
    1.0 - beta(p) * p.mu_c / (p.mu_a + p.mu_c)
}

fn bracket(p: &ExpCaseParams, b: f64) -> f64 {
    (p.mu_a + p.mu_c) / p.mu_a - p.mu_a / (p.mu_a + (1.0 - b) * p.mu_c)
}

pub fn mean_tpc_exp(p: &ExpCaseParams) -> f64 {
    let b = beta(p);
    1.0 / p.mu_a - b / (2.0 * p.mu_a + p.mu_c) * bracket(p, b)
}

pub fn mean_to_exp(p: &ExpCaseParams) -> f64 {
    let b = beta(p);
    (1.0 - b) / (2.0 * p.mu_a + p.mu_c) * bracket(p, b)
}

pub fn mean_revenue_exp(p: &ExpCaseParams) -> f64 {
    let b = beta(p);
    let charging = p.alpha_c / (2.0 * p.mu_a + p.mu_c) * (1.0 + p.mu_a / (p.mu_a + (1.0 - b) * p.mu_c));
    charging + p.alpha_o * mean_to_exp(p)
}
