//! Expectations under general laws and tariffs by numerical quadrature.
//!
//! Integration runs with the threshold `C_max` outermost, the charge duration
//! `T_c` in the middle and the appointment length `T_a` innermost. The inner
//! `T_a` integrals are all expressed through the CDF of `T_a` and its
//! antiderivative, which every [`DistributionSpec`] provides in closed form,
//! so at most two quadrature levels remain (three for the tail integrals of
//! `T_pc` and `T_o`). Discrete laws are summed exactly.
//!
//! Durations are treated as `max(X, 0)`, matching how the simulator clamps
//! draws.

pub mod quadrature;

use crate::behavior::UserModel;
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::tariff::{PiecewiseLinear, Tariff};

pub use quadrature::{integrate, integrate_fallible, Integral, QuadratureSettings};

/// Conditional means of the accepted population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptedMeans {
    pub qbar: f64,
    pub e_tpc: f64,
    pub e_to: f64,
    pub e_revenue: f64,
}

/// `E[g(X⁺) ; X⁺ > lo]` with `X⁺ = max(X, 0)`.
pub(crate) fn expect_above<F>(
    law: &DistributionSpec,
    lo: f64,
    mut g: F,
    breaks: &[f64],
    settings: &QuadratureSettings,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if let Some(atoms) = law.point_masses() {
        let mut acc = 0.0;
        for atom in atoms.iter().filter(|a| a.prob > 0.0 && a.value > lo) {
            acc += atom.prob * g(atom.value)?;
        }
        return Ok(acc);
    }
    let mut acc = 0.0;
    let clamped_mass = law.cdf(0.0);
    if clamped_mass > 0.0 && 0.0 > lo {
        acc += clamped_mass * g(0.0)?;
    }
    let support_lo = law.kinks().first().copied().unwrap_or(0.0).max(0.0);
    let start = lo.max(support_lo);
    let end = law.upper_truncation(settings.tail_mass_cutoff);
    if end > start {
        let mut cuts: Vec<f64> = law.kinks();
        cuts.extend_from_slice(breaks);
        let r = integrate_fallible(
            |x| {
                let density = law.pdf(x).unwrap_or(0.0);
                if density == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(g(x)? * density)
                }
            },
            start,
            end,
            &cuts,
            settings,
        )?;
        acc += r.value;
    }
    Ok(acc)
}

/// `q(t_c, c) = F_a(t_c + p_o^{-1}(c))`, 1 for an unbounded allowance.
fn acceptance(appointment: &DistributionSpec, t_c: f64, allowance: f64) -> f64 {
    if allowance.is_infinite() {
        1.0
    } else {
        appointment.cdf(t_c + allowance)
    }
}

fn shifted(points: &[f64], by: f64) -> Vec<f64> {
    points.iter().map(|p| p - by).collect()
}

/// Mean acceptance probability (population average of `q`).
pub fn qbar(model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    let a_kinks = model.appointment.kinks();
    let q = expect_above(
        &model.threshold,
        f64::NEG_INFINITY,
        |c| {
            let allowance = tariff.allowance(c);
            if allowance.is_infinite() {
                return Ok(1.0);
            }
            expect_above(
                &model.charge,
                f64::NEG_INFINITY,
                |t_c| Ok(acceptance(&model.appointment, t_c, allowance)),
                &shifted(&a_kinks, allowance),
                settings,
            )
        },
        &[],
        settings,
    )?;
    Ok(q.clamp(0.0, 1.0))
}

fn require_acceptance(qbar: f64) -> Result<()> {
    if qbar <= 0.0 {
        return Err(Error::Degenerate("no user accepts the posted tariff (mean acceptance is 0)".into()));
    }
    Ok(())
}

/// Joint density of `(T_c, C_max)` given acceptance, expressed as the
/// Bayes factor `q / qbar` against the unconditional law.
pub struct ConditionalWeight<'a> {
    model: &'a UserModel,
    tariff: &'a Tariff,
    qbar: f64,
}

impl<'a> ConditionalWeight<'a> {
    pub fn new(model: &'a UserModel, tariff: &'a Tariff, settings: &QuadratureSettings) -> Result<Self> {
        let qbar = qbar(model, tariff, settings)?;
        require_acceptance(qbar)?;
        Ok(Self { model, tariff, qbar })
    }

    pub fn qbar(&self) -> f64 {
        self.qbar
    }

    /// `q(t_c, c) / qbar`.
    pub fn factor(&self, t_c: f64, c_max: f64) -> f64 {
        acceptance(&self.model.appointment, t_c, self.tariff.allowance(c_max)) / self.qbar
    }

    /// `f_{c,max|E}(t_c, c)` when both laws have densities.
    pub fn density(&self, t_c: f64, c_max: f64) -> Option<f64> {
        let fc = self.model.charge.pdf(t_c)?;
        let fm = self.model.threshold.pdf(c_max)?;
        Some(self.factor(t_c, c_max) * fc * fm)
    }

    /// Total conditional mass, by direct integration of the density (or
    /// summation over atoms). Equals 1 up to quadrature error.
    pub fn total_mass(&self, settings: &QuadratureSettings) -> Result<f64> {
        let cutoff = settings.tail_mass_cutoff;
        let over_charge = |c: f64| -> Result<f64> {
            let charge = &self.model.charge;
            if let Some(atoms) = charge.point_masses() {
                return Ok(atoms.iter().map(|a| a.prob * self.factor(a.value, c)).sum());
            }
            let hi = charge.upper_truncation(cutoff);
            let lo = charge.quantile(0.0)?.max(0.0);
            let atom0 = charge.cdf(0.0) * self.factor(0.0, c);
            let r = integrate_fallible(
                |t| Ok(self.factor(t, c) * charge.pdf(t).unwrap_or(0.0)),
                lo,
                hi,
                &[],
                settings,
            )?;
            Ok(atom0 + r.value)
        };
        let threshold = &self.model.threshold;
        if let Some(atoms) = threshold.point_masses() {
            let mut acc = 0.0;
            for a in atoms.iter() {
                acc += a.prob * over_charge(a.value)?;
            }
            return Ok(acc);
        }
        let hi = threshold.upper_truncation(cutoff);
        let lo = threshold.quantile(0.0)?.max(0.0);
        let r = integrate_fallible(
            |c| Ok(over_charge(c)? * threshold.pdf(c).unwrap_or(0.0)),
            lo,
            hi,
            &[],
            settings,
        )?;
        Ok(r.value)
    }
}

/// Breakpoints in `t` where the conditional tails of `T_pc` / `T_o` have
/// kinks or jumps.
fn tail_breaks(model: &UserModel, tariff: &Tariff) -> Vec<f64> {
    let mut out = model.appointment.kinks();
    out.extend(tariff.penalty.breakpoints());
    if let Some(atoms) = model.threshold.point_masses() {
        let c_kinks = model.charge.kinks();
        for atom in atoms.iter() {
            let allowance = tariff.allowance(atom.value);
            if allowance.is_finite() {
                out.push(allowance);
                out.extend(c_kinks.iter().map(|k| k.max(0.0) + allowance));
            }
        }
    }
    out.retain(|x| x.is_finite() && *x > 0.0);
    out
}

/// `P(T_pc > t | accepted)`.
pub fn ccdf_tpc(t: f64, model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    let qbar = qbar(model, tariff, settings)?;
    require_acceptance(qbar)?;
    ccdf_tpc_given(t, qbar, model, tariff, settings)
}

fn ccdf_tpc_given(t: f64, qbar: f64, model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    if t < 0.0 {
        return Ok(1.0);
    }
    let survival_a = 1.0 - model.appointment.cdf(t);
    if survival_a == 0.0 {
        return Ok(0.0);
    }
    let a_kinks = model.appointment.kinks();
    // E_C E_Tc [ q(T_c, C) ; T_c + allowance(C) > t ]
    let inner = expect_above(
        &model.threshold,
        f64::NEG_INFINITY,
        |c| {
            let allowance = tariff.allowance(c);
            let lo = t - allowance;
            let mut cuts = shifted(&a_kinks, allowance);
            cuts.push(lo);
            expect_above(
                &model.charge,
                lo,
                |t_c| Ok(acceptance(&model.appointment, t_c, allowance)),
                &cuts,
                settings,
            )
        },
        &[],
        settings,
    )?;
    Ok((survival_a * inner / qbar).clamp(0.0, 1.0))
}

/// `P(T_o > t | accepted)`.
pub fn ccdf_to(t: f64, model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    let qbar = qbar(model, tariff, settings)?;
    require_acceptance(qbar)?;
    ccdf_to_given(t, qbar, model, tariff, settings)
}

fn ccdf_to_given(t: f64, qbar: f64, model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    if t < 0.0 {
        return Ok(1.0);
    }
    let a_kinks = model.appointment.kinks();
    let level = tariff.penalty.eval(t);
    // E_C [ 1{p_o^{-1}(C) > t} E_Tc [ (1 - F_a(T_c + t)) q(T_c, C) ] ]
    let v = expect_above(
        &model.threshold,
        f64::NEG_INFINITY,
        |c| {
            let allowance = tariff.allowance(c);
            if allowance <= t {
                return Ok(0.0);
            }
            let mut cuts = shifted(&a_kinks, t);
            if allowance.is_finite() {
                cuts.extend(shifted(&a_kinks, allowance));
            }
            expect_above(
                &model.charge,
                f64::NEG_INFINITY,
                |t_c| {
                    let over = 1.0 - model.appointment.cdf(t_c + t);
                    Ok(over * acceptance(&model.appointment, t_c, allowance))
                },
                &cuts,
                settings,
            )
        },
        &[level],
        settings,
    )?;
    Ok((v / qbar).clamp(0.0, 1.0))
}

fn tail_upper(model: &UserModel, settings: &QuadratureSettings) -> f64 {
    model.appointment.upper_truncation(settings.tail_mass_cutoff)
}

/// `E[T_pc | accepted] = ∫ P(T_pc > t) dt`.
pub fn mean_tpc(model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    let qbar = qbar(model, tariff, settings)?;
    require_acceptance(qbar)?;
    mean_tpc_given(qbar, model, tariff, settings)
}

fn mean_tpc_given(qbar: f64, model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    let breaks = tail_breaks(model, tariff);
    let r = integrate_fallible(
        |t| ccdf_tpc_given(t, qbar, model, tariff, settings),
        0.0,
        tail_upper(model, settings),
        &breaks,
        settings,
    )?;
    Ok(r.value)
}

/// `E[T_o | accepted] = ∫ P(T_o > t) dt`.
pub fn mean_to(model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    let qbar = qbar(model, tariff, settings)?;
    require_acceptance(qbar)?;
    mean_to_given(qbar, model, tariff, settings)
}

fn mean_to_given(qbar: f64, model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    let mut upper = tail_upper(model, settings);
    // no overstay can outlast the allowance of the largest threshold
    let max_allowance = tariff.allowance(model.threshold.support_max());
    upper = upper.min(max_allowance);
    let breaks = tail_breaks(model, tariff);
    let r = integrate_fallible(
        |t| ccdf_to_given(t, qbar, model, tariff, settings),
        0.0,
        upper,
        &breaks,
        settings,
    )?;
    Ok(r.value)
}

/// `Σ_k slope_k ∫_{piece_k ∩ [0, len]} F(offset + y) dy`.
fn slope_weighted_cdf_integral(curve: &PiecewiseLinear, law: &DistributionSpec, offset: f64, len: f64) -> f64 {
    curve
        .pieces()
        .take_while(|(start, _, _)| *start < len)
        .filter(|(_, _, slope)| *slope > 0.0)
        .map(|(start, end, slope)| slope * law.cdf_integral(offset + start, offset + end.min(len)))
        .sum()
}

/// Same with the survival function `1 - F`.
fn slope_weighted_survival_integral(curve: &PiecewiseLinear, law: &DistributionSpec, offset: f64, len: f64) -> f64 {
    curve
        .pieces()
        .take_while(|(start, _, _)| *start < len)
        .filter(|(_, _, slope)| *slope > 0.0)
        .map(|(start, end, slope)| slope * law.survival_integral(offset + start, offset + end.min(len)))
        .sum()
}

/// Revenue given `(T_c, C_max)`, averaged over `T_a`, as the four terms:
/// charging only (`T_a < T_c`), full charge, penalty below the threshold and
/// penalty capped at the threshold.
fn revenue_terms(appointment: &DistributionSpec, tariff: &Tariff, t_c: f64, c_max: f64) -> [f64; 4] {
    let fa_tc = appointment.cdf(t_c);
    let pc_tc = tariff.charge.eval(t_c);
    // ∫_0^{t_c} p_c dF_a, by parts
    let charging_only = pc_tc * fa_tc - slope_weighted_cdf_integral(&tariff.charge, appointment, 0.0, t_c);
    let full_charge = pc_tc * (1.0 - fa_tc);
    let allowance = tariff.allowance(c_max);
    if allowance.is_infinite() {
        let partial = slope_weighted_survival_integral(&tariff.penalty, appointment, t_c, f64::INFINITY);
        return [charging_only, full_charge, partial, 0.0];
    }
    let fa_end = appointment.cdf(t_c + allowance);
    // ∫_{t_c}^{t_c + A} p_o(x - t_c) dF_a(x), by parts; p_o(A) = c_max
    let partial = tariff.penalty.eval(allowance) * fa_end
        - slope_weighted_cdf_integral(&tariff.penalty, appointment, t_c, allowance);
    let capped = c_max * (1.0 - fa_end);
    [charging_only, full_charge, partial, capped]
}

/// `E[R | accepted]`.
pub fn mean_revenue(model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    let qbar = qbar(model, tariff, settings)?;
    require_acceptance(qbar)?;
    mean_revenue_given(qbar, model, tariff, settings)
}

fn mean_revenue_given(qbar: f64, model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<f64> {
    let a_kinks = model.appointment.kinks();
    let v = expect_above(
        &model.threshold,
        f64::NEG_INFINITY,
        |c| {
            let allowance = tariff.allowance(c);
            let mut cuts = a_kinks.clone();
            cuts.extend(tariff.charge.breakpoints());
            if allowance.is_finite() {
                cuts.extend(shifted(&a_kinks, allowance));
            }
            expect_above(
                &model.charge,
                f64::NEG_INFINITY,
                |t_c| {
                    let q = acceptance(&model.appointment, t_c, allowance);
                    let terms = revenue_terms(&model.appointment, tariff, t_c, c);
                    Ok(q * terms.iter().sum::<f64>())
                },
                &cuts,
                settings,
            )
        },
        &[],
        settings,
    )?;
    Ok((v / qbar).max(0.0))
}

/// `q̄`, `E[T_pc]`, `E[T_o]` and `E[R]` for the accepted population.
pub fn accepted_means(model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<AcceptedMeans> {
    let qbar = qbar(model, tariff, settings)?;
    require_acceptance(qbar)?;
    Ok(AcceptedMeans {
        qbar,
        e_tpc: mean_tpc_given(qbar, model, tariff, settings)?,
        e_to: mean_to_given(qbar, model, tariff, settings)?,
        e_revenue: mean_revenue_given(qbar, model, tariff, settings)?,
    })
}

/// `E[min(T_c, T_a)]` and `E[p_c(min(T_c, T_a))]` for users who never
/// overstay.
pub fn ideal_means(model: &UserModel, tariff: &Tariff, settings: &QuadratureSettings) -> Result<(f64, f64)> {
    let a = &model.appointment;
    let mut cuts = a.kinks();
    cuts.extend(tariff.charge.breakpoints());
    let e_tpc = expect_above(
        &model.charge,
        f64::NEG_INFINITY,
        |t_c| Ok(a.survival_integral(0.0, t_c)),
        &cuts,
        settings,
    )?;
    let e_rev = expect_above(
        &model.charge,
        f64::NEG_INFINITY,
        |t_c| Ok(slope_weighted_survival_integral(&tariff.charge, a, 0.0, t_c)),
        &cuts,
        settings,
    )?;
    Ok((e_tpc, e_rev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::{realize_stay, UserDraw};
    use crate::closedform::{self, ExpCaseParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exp_model(mu_c: f64, mu_a: f64, c_max: f64) -> UserModel {
        UserModel {
            charge: DistributionSpec::exponential(mu_c).unwrap(),
            appointment: DistributionSpec::exponential(mu_a).unwrap(),
            threshold: DistributionSpec::degenerate(c_max).unwrap(),
        }
    }

    fn section3(alpha_o: f64) -> (UserModel, Tariff, ExpCaseParams) {
        let (mu_c, mu_a) = (60.0 / 45.0, 60.0 / 105.0);
        let p = ExpCaseParams {
            mu_c,
            mu_a,
            c_max: 4.0,
            alpha_c: 2.0,
            alpha_o,
        };
        (exp_model(mu_c, mu_a, 4.0), Tariff::linear(2.0, alpha_o).unwrap(), p)
    }

    fn london_model() -> UserModel {
        UserModel {
            charge: DistributionSpec::generalized_gamma(-1.35188, 33.7831, 1.44212, 1.19403).unwrap(),
            appointment: DistributionSpec::uniform(0.5, 3.0).unwrap(),
            threshold: DistributionSpec::discrete(&[(4.0, 0.4), (8.0, 0.3), (10.0, 0.2), (20.0, 0.1)]).unwrap(),
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn ccdf_tpc_is_one_at_zero_and_matches_first_branch() {
        let s = QuadratureSettings::default();
        let (m, t, p) = section3(2.37);
        assert!((ccdf_tpc(0.0, &m, &t, &s).unwrap() - 1.0).abs() < 1e-9);
        let cap = p.c_max / p.alpha_o;
        for x in [0.1, 0.5, 1.0, cap] {
            let want = (-p.mu_a * x).exp();
            assert!((ccdf_tpc(x, &m, &t, &s).unwrap() - want).abs() < 1e-8, "t = {x}");
        }
    }

    #[test]
    fn ccdf_tpc_second_branch_matches_closed_form() {
        let s = QuadratureSettings::default();
        let (m, t, p) = section3(2.37);
        let beta = closedform::beta(&p);
        let qbar = closedform::qbar_exp(&p);
        let cap = p.c_max / p.alpha_o;
        for x in [cap + 0.01, 2.5, 4.0, 7.0] {
            let want = (-p.mu_a * x).exp() / qbar
                * (-p.mu_c * (x - cap)).exp()
                * (1.0 - p.mu_c / (p.mu_a + p.mu_c) * (-p.mu_a * x).exp() * (p.mu_a * cap).exp() * beta);
            let got = ccdf_tpc(x, &m, &t, &s).unwrap();
            assert!((got - want).abs() < 1e-6, "t = {x}: {got} vs {want}");
        }
    }

    #[test]
    fn means_match_closed_form_at_reference_rates() {
        let s = QuadratureSettings::default();
        for alpha_o in [2.37, 3.07] {
            let (m, t, p) = section3(alpha_o);
            let got = accepted_means(&m, &t, &s).unwrap();
            assert!(rel(got.qbar, closedform::qbar_exp(&p)) < 1e-7);
            assert!(rel(got.e_tpc, closedform::mean_tpc_exp(&p)) < 1e-5);
            assert!(rel(got.e_to, closedform::mean_to_exp(&p)) < 1e-5);
            assert!(rel(got.e_revenue, closedform::mean_revenue_exp(&p)) < 1e-5);
        }
    }

    #[test]
    fn no_penalty_limits() {
        let s = QuadratureSettings::default();
        let m = exp_model(1.5, 0.8, 4.0);
        let t = Tariff::linear(2.0, 0.0).unwrap();
        let got = accepted_means(&m, &t, &s).unwrap();
        assert_eq!(got.qbar, 1.0);
        assert!(rel(got.e_tpc, 1.0 / 0.8) < 1e-6);
        // E[(T_a - T_c)^+] = P(T_a > T_c) / μ_a
        let oracle = 1.5 / (0.8 * (0.8 + 1.5));
        assert!(rel(got.e_to, oracle) < 1e-6);
    }

    #[test]
    fn huge_penalty_leaves_no_overstay() {
        let s = QuadratureSettings::default();
        let m = exp_model(1.5, 0.8, 4.0);
        let t = Tariff::linear(2.0, 1e12).unwrap();
        assert!(mean_to(&m, &t, &s).unwrap() < 1e-9);
    }

    #[test]
    fn zero_prices_give_zero_revenue() {
        let s = QuadratureSettings::default();
        let m = exp_model(1.5, 0.8, 4.0);
        let t = Tariff::linear(0.0, 0.0).unwrap();
        assert_eq!(mean_revenue(&m, &t, &s).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_charge_with_zero_allowance() {
        // T_c = 1h, no allowance: only users with T_a <= 1 would accept... under
        // F_a(1) acceptance the accepted stay is min(1, T_a)
        let s = QuadratureSettings::default();
        let m = UserModel {
            charge: DistributionSpec::degenerate(1.0).unwrap(),
            appointment: DistributionSpec::uniform(0.0, 2.0).unwrap(),
            threshold: DistributionSpec::degenerate(0.0).unwrap(),
        };
        let t = Tariff::linear(2.0, 5.0).unwrap();
        // brute-force conditional expectation with acceptance filtering
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (mut acc, mut sum) = (0usize, 0.0);
        for _ in 0..400_000 {
            let q = m.appointment.cdf(1.0);
            if rand::Rng::random::<f64>(&mut rng) < q {
                let ta = m.appointment.sample(&mut rng);
                acc += 1;
                sum += ta.min(1.0);
            }
        }
        let mc = sum / acc as f64;
        let got = mean_tpc(&m, &t, &s).unwrap();
        assert!((got - 0.75).abs() < 1e-6, "{got}");
        assert!((mc - 0.75).abs() < 5e-3);
    }

    #[test]
    fn linear_revenue_identity_for_general_laws() {
        let s = QuadratureSettings::default();
        let m = london_model();
        for alpha_o in [1.0, 3.0, 6.0] {
            let t = Tariff::linear(2.0, alpha_o).unwrap();
            let r = accepted_means(&m, &t, &s).unwrap();
            let identity = 2.0 * (r.e_tpc - r.e_to) + alpha_o * r.e_to;
            assert!((r.e_revenue - identity).abs() < 1e-6, "α_o = {alpha_o}: {} vs {identity}", r.e_revenue);
            assert!(r.e_to <= r.e_tpc);
            assert!(r.e_revenue >= 2.0 * (r.e_tpc - r.e_to) - 1e-9);
        }
    }

    #[test]
    fn conditional_weight_normalizes() {
        let s = QuadratureSettings::default();
        let (m, t, _) = section3(2.37);
        let w = ConditionalWeight::new(&m, &t, &s).unwrap();
        assert!((w.total_mass(&s).unwrap() - 1.0).abs() < 1e-6);
        let lm = london_model();
        let lt = Tariff::linear(2.0, 4.0).unwrap();
        let w = ConditionalWeight::new(&lm, &lt, &s).unwrap();
        assert!((w.total_mass(&s).unwrap() - 1.0).abs() < 1e-6);
        let cont = UserModel {
            charge: DistributionSpec::exponential(1.2).unwrap(),
            appointment: DistributionSpec::uniform(0.5, 3.0).unwrap(),
            threshold: DistributionSpec::exponential(0.2).unwrap(),
        };
        let w = ConditionalWeight::new(&cont, &lt, &s).unwrap();
        assert!((w.total_mass(&s).unwrap() - 1.0).abs() < 1e-6);
        assert!(w.density(0.5, 3.0).unwrap() > 0.0);
    }

    #[test]
    fn tails_are_monotone_and_overstay_ends_at_largest_allowance() {
        let s = QuadratureSettings::default();
        let m = london_model();
        let t = Tariff::linear(2.0, 4.0).unwrap();
        let mut prev_pc = 1.0;
        let mut prev_o = 1.0;
        for k in 0..40 {
            let x = 0.1 * k as f64;
            let pc = ccdf_tpc(x, &m, &t, &s).unwrap();
            let o = ccdf_to(x, &m, &t, &s).unwrap();
            assert!((0.0..=1.0).contains(&pc) && (0.0..=1.0).contains(&o));
            assert!(pc <= prev_pc + 1e-9 && o <= prev_o + 1e-9);
            prev_pc = pc;
            prev_o = o;
        }
        // largest threshold 20 at rate 4 allows 5h
        for x in [5.0, 5.5, 8.0] {
            assert_eq!(ccdf_to(x, &m, &t, &s).unwrap(), 0.0);
        }
    }

    #[test]
    fn general_means_match_monte_carlo() {
        let s = QuadratureSettings::default();
        let m = london_model();
        let t = Tariff::new(
            crate::tariff::PiecewiseLinear::linear(2.0).unwrap(),
            crate::tariff::PiecewiseLinear::with_grace(0.25, 4.0).unwrap(),
        );
        let r = accepted_means(&m, &t, &s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let mut sums = [[0.0; 2]; 3];
        let mut accepted = 0;
        while accepted < n {
            let t_c = m.charge.sample(&mut rng);
            let c = m.threshold.sample(&mut rng);
            let q = crate::behavior::acceptance_prob(t_c, c, &t, &m.appointment);
            let ta = m.appointment.sample(&mut rng);
            if rand::Rng::random::<f64>(&mut rng) >= q {
                continue;
            }
            accepted += 1;
            let o = realize_stay(&UserDraw { t_c, t_a: ta, c_max: c }, &t);
            for (k, v) in [o.t_pc, o.t_o, o.revenue].into_iter().enumerate() {
                sums[k][0] += v;
                sums[k][1] += v * v;
            }
        }
        for (k, want) in [r.e_tpc, r.e_to, r.e_revenue].into_iter().enumerate() {
            let mean = sums[k][0] / n as f64;
            let se = ((sums[k][1] / n as f64 - mean * mean) / n as f64).sqrt();
            assert!((mean - want).abs() < 3.0 * se, "quantity {k}: mc {mean} vs {want} (se {se})");
        }
    }

    #[test]
    fn ideal_means_for_exponentials() {
        let s = QuadratureSettings::default();
        let m = exp_model(4.0 / 3.0, 4.0 / 7.0, 4.0);
        let t = Tariff::linear(2.0, 1.0).unwrap();
        let (e_tpc, e_rev) = ideal_means(&m, &t, &s).unwrap();
        assert!(rel(e_tpc, 0.525) < 1e-7);
        assert!(rel(e_rev, 2.0 * 0.525) < 1e-7);
    }
}
