//! Charging-event logs to empirical duration laws.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};

const COLUMNS: [&str; 3] = ["charger_type", "park_duration_min", "charge_duration_min"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargingEventRecord {
    pub charger_type: String,
    pub park_duration_min: f64,
    pub charge_duration_min: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventFilter {
    pub charger_type: Option<String>,
    pub min_park_min: Option<f64>,
    pub max_park_min: Option<f64>,
}

impl EventFilter {
    pub fn accepts(&self, r: &ChargingEventRecord) -> bool {
        self.charger_type.as_ref().is_none_or(|t| t.eq_ignore_ascii_case(r.charger_type.trim()))
            && self.min_park_min.is_none_or(|lo| r.park_duration_min >= lo)
            && self.max_park_min.is_none_or(|hi| r.park_duration_min <= hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo_min: f64,
    pub hi_min: f64,
    pub park_count: u64,
    pub charge_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub rows: u64,
    pub kept: u64,
    pub filtered_out: u64,
    /// Rows with unparsable or negative durations.
    pub rejected: u64,
    /// Kept rows whose charge duration exceeds the parking duration.
    pub charge_exceeds_park: u64,
    pub histogram: Vec<HistogramBin>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestResult {
    /// Parking durations in hours.
    pub appointment: DistributionSpec,
    /// Charge durations in hours.
    pub charge: DistributionSpec,
    pub summary: IngestSummary,
}

fn parse_duration(cell: &str) -> Option<f64> {
    let v: f64 = cell.trim().parse().ok()?;
    (v >= 0.0 && v.is_finite()).then_some(v)
}

pub fn ingest_reader<R: Read>(reader: R, filter: &EventFilter, bin_width_min: f64) -> Result<IngestResult> {
    if !(bin_width_min > 0.0) {
        return Err(Error::config("histogram bin width must be positive"));
    }
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Format(e.to_string()))?.clone();
    let mut idx = [0usize; 3];
    for (slot, name) in idx.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Format(format!("missing column `{name}`")))?;
    }
    let mut summary = IngestSummary {
        rows: 0,
        kept: 0,
        filtered_out: 0,
        rejected: 0,
        charge_exceeds_park: 0,
        histogram: Vec::new(),
    };
    let mut kept = Vec::new();
    for rec in rdr.records() {
        summary.rows += 1;
        let Ok(rec) = rec else {
            summary.rejected += 1;
            continue;
        };
        let cell = |i: usize| rec.get(idx[i]);
        let parsed = match (cell(0), cell(1).and_then(parse_duration), cell(2).and_then(parse_duration)) {
            (Some(t), Some(park), Some(charge)) => ChargingEventRecord {
                charger_type: t.to_string(),
                park_duration_min: park,
                charge_duration_min: charge,
            },
            _ => {
                summary.rejected += 1;
                continue;
            }
        };
        if !filter.accepts(&parsed) {
            summary.filtered_out += 1;
            continue;
        }
        if parsed.charge_duration_min > parsed.park_duration_min {
            summary.charge_exceeds_park += 1;
        }
        kept.push(parsed);
    }
    summary.kept = kept.len() as u64;
    if kept.is_empty() {
        return Err(Error::Filter(format!(
            "no rows survive the filter ({} read, {} rejected, {} filtered out)",
            summary.rows, summary.rejected, summary.filtered_out
        )));
    }
    summary.histogram = histogram(&kept, bin_width_min);
    let hours = |f: fn(&ChargingEventRecord) -> f64| kept.iter().map(|r| f(r) / 60.0).collect::<Vec<_>>();
    Ok(IngestResult {
        appointment: DistributionSpec::empirical(hours(|r| r.park_duration_min))?,
        charge: DistributionSpec::empirical(hours(|r| r.charge_duration_min))?,
        summary,
    })
}

pub fn ingest_events(path: &Path, filter: &EventFilter, bin_width_min: f64) -> Result<IngestResult> {
    let file = std::fs::File::open(path).map_err(|e| Error::Format(format!("cannot open {}: {e}", path.display())))?;
    ingest_reader(file, filter, bin_width_min)
}

fn histogram(kept: &[ChargingEventRecord], width: f64) -> Vec<HistogramBin> {
    let top = kept
        .iter()
        .map(|r| r.park_duration_min.max(r.charge_duration_min))
        .fold(0.0, f64::max);
    let n = (top / width).floor() as usize + 1;
    let mut bins: Vec<HistogramBin> = (0..n)
        .map(|i| HistogramBin {
            lo_min: i as f64 * width,
            hi_min: (i + 1) as f64 * width,
            park_count: 0,
            charge_count: 0,
        })
        .collect();
    let slot = |x: f64| ((x / width).floor() as usize).min(n - 1);
    for r in kept {
        bins[slot(r.park_duration_min)].park_count += 1;
        bins[slot(r.charge_duration_min)].charge_count += 1;
    }
    bins
}
