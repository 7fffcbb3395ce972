//! Charging price and overstay penalty curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One piece of a curve: constant `rate_per_hour` until `until_hours`
/// (`None` for the final, unbounded piece).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub until_hours: Option<f64>,
    pub rate_per_hour: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveRepr {
    segments: Vec<Segment>,
}

/// Continuous nondecreasing piecewise-linear curve through the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveRepr", into = "CurveRepr")]
pub struct PiecewiseLinear {
    segments: Vec<Segment>,
    // start time and cumulative value at the start of each segment
    starts: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<CurveRepr> for PiecewiseLinear {
    type Error = Error;

    fn try_from(repr: CurveRepr) -> Result<Self> {
        PiecewiseLinear::new(repr.segments)
    }
}

impl From<PiecewiseLinear> for CurveRepr {
    fn from(curve: PiecewiseLinear) -> Self {
        CurveRepr {
            segments: curve.segments,
        }
    }
}

impl PiecewiseLinear {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::config("curve needs at least one segment"));
        }
        let mut starts = Vec::with_capacity(segments.len());
        let mut values = Vec::with_capacity(segments.len());
        let (mut t, mut v) = (0.0, 0.0);
        for (i, seg) in segments.iter().enumerate() {
            if !(seg.rate_per_hour.is_finite() && seg.rate_per_hour >= 0.0) {
                return Err(Error::config(format!("segment {i}: rate must be finite and nonnegative")));
            }
            starts.push(t);
            values.push(v);
            let last = i + 1 == segments.len();
            match (seg.until_hours, last) {
                (None, true) => {}
                (None, false) => return Err(Error::config(format!("segment {i}: only the last segment may be unbounded"))),
                (Some(_), true) => return Err(Error::config("last segment must be unbounded (until_hours: null)")),
                (Some(end), false) => {
                    if !(end.is_finite() && end > t) {
                        return Err(Error::config(format!("segment {i}: breakpoints must be strictly increasing")));
                    }
                    v += seg.rate_per_hour * (end - t);
                    t = end;
                }
            }
        }
        Ok(Self {
            segments,
            starts,
            values,
        })
    }

    pub fn linear(rate_per_hour: f64) -> Result<Self> {
        Self::new(vec![Segment {
            until_hours: None,
            rate_per_hour,
        }])
    }

    /// Zero for `grace_hours`, then `rate_per_hour`.
    pub fn with_grace(grace_hours: f64, rate_per_hour: f64) -> Result<Self> {
        Self::new(vec![
            Segment {
                until_hours: Some(grace_hours),
                rate_per_hour: 0.0,
            },
            Segment {
                until_hours: None,
                rate_per_hour,
            },
        ])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// `(start, end, slope)` for each piece; the last end is `+inf`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.segments
            .iter()
            .zip(&self.starts)
            .map(|(seg, &start)| (start, seg.until_hours.unwrap_or(f64::INFINITY), seg.rate_per_hour))
    }

    /// Interior breakpoints.
    pub fn breakpoints(&self) -> &[f64] {
        &self.starts[1..]
    }

    pub fn max_slope(&self) -> f64 {
        self.segments.iter().map(|s| s.rate_per_hour).fold(0.0, f64::max)
    }

    /// The single slope of a one-piece curve.
    pub fn as_linear(&self) -> Option<f64> {
        match self.segments.as_slice() {
            [only] => Some(only.rate_per_hour),
            _ => None,
        }
    }

    fn piece_index(&self, t: f64) -> usize {
        self.starts.partition_point(|s| *s <= t).saturating_sub(1)
    }

    /// Curve value at `t >= 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if t.is_infinite() {
            return if self.segments.last().unwrap().rate_per_hour > 0.0 {
                f64::INFINITY
            } else {
                *self.values.last().unwrap()
            };
        }
        let i = self.piece_index(t);
        self.values[i] + self.segments[i].rate_per_hour * (t - self.starts[i])
    }

    /// `sup { t >= 0 : curve(t) = c }`, `+inf` when the curve never reaches
    /// `c` or stays at `c` forever.
    pub fn sup_inverse(&self, c: f64) -> f64 {
        // last piece whose starting value is <= c
        let i = self.values.partition_point(|v| *v <= c).saturating_sub(1);
        let slope = self.segments[i].rate_per_hour;
        if slope == 0.0 {
            // only the final piece can be selected while flat: the level is
            // either held forever or never reached
            return f64::INFINITY;
        }
        let t = self.starts[i] + (c - self.values[i]) / slope;
        match self.segments[i].until_hours {
            Some(end) if t > end => end,
            _ => t,
        }
    }
}

/// Posted charging price and overstay penalty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tariff {
    pub charge: PiecewiseLinear,
    pub penalty: PiecewiseLinear,
}

impl Tariff {
    pub fn new(charge: PiecewiseLinear, penalty: PiecewiseLinear) -> Self {
        Self { charge, penalty }
    }

    /// `p_c(t) = alpha_c t`, `p_o(t) = alpha_o t`.
    pub fn linear(alpha_c: f64, alpha_o: f64) -> Result<Self> {
        Ok(Self::new(PiecewiseLinear::linear(alpha_c)?, PiecewiseLinear::linear(alpha_o)?))
    }

    /// Same charging price with a linear penalty of rate `alpha_o`.
    pub fn with_penalty_rate(&self, alpha_o: f64) -> Result<Self> {
        Ok(Self::new(self.charge.clone(), PiecewiseLinear::linear(alpha_o)?))
    }

    pub fn price_charge(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!("charging time must be nonnegative, got {t}")));
        }
        Ok(self.charge.eval(t))
    }

    pub fn penalty(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!("overstay time must be nonnegative, got {t}")));
        }
        Ok(self.penalty.eval(t))
    }

    /// Overstay allowance `sup { t : p_o(t) = c }`, possibly `+inf`.
    pub fn penalty_inverse(&self, c: f64) -> Result<f64> {
        if !(c >= 0.0) {
            return Err(Error::domain(format!("penalty level must be nonnegative, got {c}")));
        }
        Ok(self.penalty.sup_inverse(c))
    }

    pub(crate) fn allowance(&self, c: f64) -> f64 {
        self.penalty.sup_inverse(c.max(0.0))
    }
}
