//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any initial interval.
    pub max_depth: u32,
    /// Probability mass discarded when a semi-infinite range is cut at a
    /// high quantile.
    pub tail_mass_cutoff: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 1e-6,
            max_depth: 50,
            tail_mass_cutoff: 1e-9,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.max_depth >= 1
            && self.tail_mass_cutoff > 0.0
            && self.tail_mass_cutoff < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::config("quadrature tolerances must be positive, max_depth >= 1, tail mass in (0, 1)"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 5_000;

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).abs();
    if !value.is_finite() {
        return Err(Error::Numeric {
            message: format!("non-finite integrand on [{a}, {b}]"),
            estimate: value,
            achieved_error: f64::INFINITY,
        });
    }
    Ok((value, error))
}

/// Integrates `f` over `[a, b]`; `b` may be `+inf`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, settings: &QuadratureSettings) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    integrate_fallible(|x| Ok(f(x)), a, b, &[], settings)
}

/// Integrates a fallible integrand, splitting first at the given interior
/// breakpoints. An infinite upper limit is mapped onto `[0, 1)` by
/// `x = a + t / (1 - t)`.
pub fn integrate_fallible<F>(mut f: F, a: f64, b: f64, breaks: &[f64], settings: &QuadratureSettings) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a.is_nan() || b.is_nan() || a.is_infinite() {
        return Err(Error::domain(format!("invalid integration range [{a}, {b}]")));
    }
    if b <= a {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    if b.is_infinite() {
        let mapped: Vec<f64> = breaks
            .iter()
            .filter(|x| **x > a && x.is_finite())
            .map(|x| {
                let d = x - a;
                d / (1.0 + d)
            })
            .collect();
        let g = |t: f64| -> Result<f64> {
            let one_minus = 1.0 - t;
            let x = a + t / one_minus;
            Ok(f(x)? / (one_minus * one_minus))
        };
        return adaptive(g, 0.0, 1.0, &mapped, settings);
    }
    adaptive(f, a, b, breaks, settings)
}

fn adaptive<F>(mut f: F, a: f64, b: f64, breaks: &[f64], settings: &QuadratureSettings) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|x| *x > a && *x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Piece> = Vec::new();
    let mut evaluations = 0usize;
    let mut lo = a;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        if hi > lo {
            let (value, error) = kronrod(&mut f, lo, hi)?;
            evaluations += 15;
            heap.push(Piece {
                a: lo,
                b: hi,
                value,
                error,
                depth: 0,
            });
        }
        lo = hi;
    }

    let mut value: f64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        let tol = settings.abs_tol.max(settings.rel_tol * value.abs());
        if error <= tol {
            let value = heap.iter().chain(frozen.iter()).map(|p| p.value).sum();
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        let pieces = heap.len() + frozen.len();
        let worst = match heap.pop() {
            Some(p) if pieces < MAX_INTERVALS => p,
            _ => {
                return Err(Error::Numeric {
                    message: format!("adaptive quadrature on [{a}, {b}] did not converge"),
                    estimate: value,
                    achieved_error: error,
                })
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= settings.max_depth || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        value -= worst.value;
        error -= worst.error;
        for (x0, x1) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e) = kronrod(&mut f, x0, x1)?;
            evaluations += 15;
            value += v;
            error += e;
            heap.push(Piece {
                a: x0,
                b: x1,
                value: v,
                error: e,
                depth: worst.depth + 1,
            });
        }
        error = error.max(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    #[test]
    fn constant_on_unit_interval() {
        let r = integrate(|_| 1.0, 0.0, 1.0, &QuadratureSettings::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn semi_infinite_exponential() {
        let s = QuadratureSettings::default();
        let r = integrate(|t| (-t).exp(), 0.0, f64::INFINITY, &s).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
        let r = integrate(|t| t * (-t).exp(), 0.0, f64::INFINITY, &s).unwrap();
        assert!((r.value - gamma(2.0)).abs() < 1e-6);
        let r = integrate(|t| t.powf(1.5) * (-t).exp(), 0.0, f64::INFINITY, &s).unwrap();
        assert!((r.value - gamma(2.5)).abs() < 1e-6);
    }

    #[test]
    fn step_discontinuity_converges_with_or_without_breakpoint() {
        let s = QuadratureSettings::default();
        let step = |x: f64| if x < 0.3 { 1.0 } else { 2.0 };
        let free = integrate(step, 0.0, 1.0, &s).unwrap();
        assert!((free.value - 1.7).abs() < 1e-5);
        let split = integrate_fallible(|x| Ok(step(x)), 0.0, 1.0, &[0.3], &s).unwrap();
        assert!((split.value - 1.7).abs() < 1e-14);
        assert!(split.evaluations < free.evaluations);
    }

    #[test]
    fn depth_limit_reports_best_estimate() {
        let s = QuadratureSettings {
            max_depth: 1,
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            ..Default::default()
        };
        let err = integrate(|x| (1.0 / x).sin(), 1e-3, 1.0, &s).unwrap_err();
        match err {
            Error::Numeric { estimate, achieved_error, .. } => {
                assert!(estimate.is_finite());
                assert!(achieved_error > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn integrand_errors_propagate() {
        let s = QuadratureSettings::default();
        let r = integrate_fallible(|_| Err(Error::domain("nope")), 0.0, 1.0, &[], &s);
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
