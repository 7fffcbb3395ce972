//! Cross-oracle consistency checks behind the `validate` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::RunConfig;
use crate::analytic::{self, ConditionalWeight, QuadratureSettings};
use crate::behavior::{acceptance_prob, realize_stay, UserDraw, UserModel};
use crate::closedform::{self, ExpCaseParams};
use crate::distributions::DistributionSpec;
use crate::error::Result;
use crate::queueing;
use crate::tariff::{PiecewiseLinear, Tariff};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run_suite(cfg: Option<&RunConfig>) -> Result<Vec<Check>> {
    let settings = cfg.map_or_else(QuadratureSettings::default, |c| c.quadrature);
    let mut out = vec![closed_form_vs_quadrature(&settings)?, erlang_identities(), stay_properties()];
    if let Some(cfg) = cfg {
        out.push(bayes_normalization(cfg)?);
        out.push(analytic_vs_monte_carlo(cfg)?);
    }
    Ok(out)
}

fn closed_form_vs_quadrature(settings: &QuadratureSettings) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for mu_c in [0.75, 4.0 / 3.0, 3.0] {
        for mu_a in [0.4, 4.0 / 7.0, 2.0] {
            for alpha_o in [0.5, 2.37, 6.0] {
                let p = ExpCaseParams {
                    mu_c,
                    mu_a,
                    c_max: 4.0,
                    alpha_c: 2.0,
                    alpha_o,
                };
                let model = UserModel {
                    charge: DistributionSpec::exponential(mu_c)?,
                    appointment: DistributionSpec::exponential(mu_a)?,
                    threshold: DistributionSpec::degenerate(4.0)?,
                };
                let m = analytic::accepted_means(&model, &Tariff::linear(2.0, alpha_o)?, settings)?;
                for (got, want) in [
                    (m.e_tpc, closedform::mean_tpc_exp(&p)),
                    (m.e_to, closedform::mean_to_exp(&p)),
                    (m.e_revenue, closedform::mean_revenue_exp(&p)),
                ] {
                    worst = worst.max((got - want).abs() / want);
                }
            }
        }
    }
    Ok(check(
        "closed form vs quadrature",
        worst < 1e-5,
        format!("max relative difference {worst:.2e}"),
    ))
}

fn erlang_identities() -> Check {
    let mut worst_sum: f64 = 0.0;
    let mut worst_balance: f64 = 0.0;
    let mut worst_blocking: f64 = 0.0;
    for n in [1usize, 10, 100, 1000] {
        for rho in [0.5, n as f64 * 0.8, n as f64 * 1.5] {
            let p = queueing::erlang_stationary(rho, n);
            worst_sum = worst_sum.max((p.iter().sum::<f64>() - 1.0).abs());
            for i in 0..n {
                worst_balance = worst_balance.max((rho * p[i] - (i + 1) as f64 * p[i + 1]).abs());
            }
            worst_blocking = worst_blocking.max((queueing::erlang_b(rho, n) - p[n]).abs());
        }
    }
    check(
        "erlang identities",
        worst_sum < 1e-12 && worst_balance < 1e-10 && worst_blocking < 1e-12,
        format!("sum {worst_sum:.1e}, balance {worst_balance:.1e}, blocking {worst_blocking:.1e}"),
    )
}

fn stay_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = 0;
    for _ in 0..10_000 {
        let tariff = if rng.random::<bool>() {
            Tariff::linear(rng.random_range(0.0..5.0), rng.random_range(0.0..10.0))
        } else {
            PiecewiseLinear::with_grace(rng.random_range(0.01..2.0), rng.random_range(0.1..10.0))
                .and_then(|p| Ok(Tariff::new(PiecewiseLinear::linear(rng.random_range(0.0..5.0))?, p)))
        }
        .expect("valid random tariff");
        let d = UserDraw {
            t_c: rng.random_range(0.0..10.0),
            t_a: rng.random_range(0.0..10.0),
            c_max: rng.random_range(0.0..30.0),
        };
        let o = realize_stay(&d, &tariff);
        let ok = tariff.penalty.eval(o.t_o) <= d.c_max + 1e-9
            && o.t_pc <= d.t_a
            && (d.t_a > d.t_c || o.t_o == 0.0)
            && o.revenue == tariff.charge.eval(o.t_pc - o.t_o) + tariff.penalty.eval(o.t_o);
        if !ok {
            failures += 1;
        }
    }
    check("stay invariants", failures == 0, format!("{failures} of 10000 draws violate"))
}

fn bayes_normalization(cfg: &RunConfig) -> Result<Check> {
    let w = ConditionalWeight::new(&cfg.model, &cfg.tariff, &cfg.quadrature)?;
    let mass = w.total_mass(&cfg.quadrature)?;
    Ok(check(
        "conditional density normalization",
        (mass - 1.0).abs() < 1e-5,
        format!("total mass {mass}"),
    ))
}

fn analytic_vs_monte_carlo(cfg: &RunConfig) -> Result<Check> {
    let means = analytic::accepted_means(&cfg.model, &cfg.tariff, &cfg.quadrature)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.simulation.seed);
    let n = 200_000;
    let mut sums = [[0.0; 2]; 3];
    let mut accepted = 0;
    while accepted < n {
        let t_c = cfg.model.charge.sample(&mut rng);
        let c_max = cfg.model.threshold.sample(&mut rng);
        let t_a = cfg.model.appointment.sample(&mut rng);
        if rng.random::<f64>() >= acceptance_prob(t_c, c_max, &cfg.tariff, &cfg.model.appointment) {
            continue;
        }
        accepted += 1;
        let o = realize_stay(&UserDraw { t_c, t_a, c_max }, &cfg.tariff);
        for (k, v) in [o.t_pc, o.t_o, o.revenue].into_iter().enumerate() {
            sums[k][0] += v;
            sums[k][1] += v * v;
        }
    }
    let mut worst_z: f64 = 0.0;
    for (k, want) in [means.e_tpc, means.e_to, means.e_revenue].into_iter().enumerate() {
        let m = sums[k][0] / n as f64;
        let se = ((sums[k][1] / n as f64 - m * m) / n as f64).sqrt();
        let z = if se > 0.0 { (m - want).abs() / se } else { (m - want).abs() * 1e12 };
        worst_z = worst_z.max(z);
    }
    Ok(check(
        "quadrature vs monte carlo (configured model)",
        worst_z < 4.0,
        format!("largest |z| = {worst_z:.2} over E[T_pc], E[T_o], E[R]"),
    ))
}
