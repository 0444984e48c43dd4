//! Activation detection: where a signal changes fast enough that the sensor
//! should be awake to see it.
//!
//! The rule is a running-free threshold on the forward difference: flag
//! every index whose |derivative| exceeds mean + k_sigma · std (population
//! statistics over |derivative|), collapse each run of consecutive flags to
//! its first index, and always schedule index 0 so a replay has a known
//! starting state.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{Channel, UniformSeries};

/// Forward difference `(x[i+1] - x[i]) / interval`, one entry per gap.
pub fn derivative(series: &UniformSeries) -> Vec<f64> {
    let dt = series.interval as f64;
    series.values.windows(2).map(|w| (w[1] - w[0]) / dt).collect()
}

/// Indices whose absolute derivative exceeds mean + k_sigma · std.
///
/// Runs of consecutive flagged indices collapse to their first index (one
/// wake-up per onset). Index 0 is always present. A flat derivative
/// (std = 0) flags nothing and yields just `[0]`.
pub fn detect_activations(derivative: &[f64], k_sigma: f64) -> Vec<usize> {
    debug_assert!(!derivative.is_empty(), "derivative of a valid series is non-empty");
    debug_assert!(k_sigma >= 0.0, "k_sigma must be non-negative");
    let flagged = flagged_indices(derivative, k_sigma);
    let mut out = vec![0];
    for (pos, &i) in flagged.iter().enumerate() {
        let run_start = pos == 0 || flagged[pos - 1] + 1 != i;
        if run_start && i != 0 {
            out.push(i);
        }
    }
    out
}

/// Raw threshold crossings, before run-collapsing. Unlike the collapsed
/// schedule, this set shrinks monotonically as k_sigma grows.
fn flagged_indices(derivative: &[f64], k_sigma: f64) -> Vec<usize> {
    let n = derivative.len() as f64;
    let magnitudes: Vec<f64> = derivative.iter().map(|d| d.abs()).collect();
    let mean = magnitudes.iter().sum::<f64>() / n;
    let variance = magnitudes.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / n;
    let std = variance.sqrt();
    if std == 0.0 {
        return Vec::new();
    }
    let limit = mean + k_sigma * std;
    magnitudes
        .iter()
        .enumerate()
        .filter(|&(_, &m)| m > limit)
        .map(|(i, _)| i)
        .collect()
}

/// One scheduled wake-up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Activation {
    pub index: usize,
    pub timestamp: i64,
}

/// When to wake the sensor, in grid indices and epoch seconds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActivationSchedule {
    pub channel: Channel,
    pub k_sigma: f64,
    #[serde(rename = "interval_s")]
    pub interval: i64,
    pub activations: Vec<Activation>,
}

impl ActivationSchedule {
    pub fn indices(&self) -> Vec<usize> {
        self.activations.iter().map(|a| a.index).collect()
    }

    /// Schema `{channel, k_sigma, interval_s, activations: [{index, timestamp}, ...]}`.
    pub fn to_json_string(&self) -> String {
        crate::jsonfmt::to_json_string(self)
    }
}

/// Attaches timestamps to detected indices for one series.
///
/// `indices` must be strictly increasing, begin with 0, and stay within the
/// series; [`detect_activations`] output always qualifies.
pub fn build_schedule(
    indices: &[usize],
    series: &UniformSeries,
    k_sigma: f64,
) -> Result<ActivationSchedule> {
    if indices.first() != Some(&0) {
        return Err(Error::Parameter(
            "a schedule must include baseline index 0".into(),
        ));
    }
    if !indices.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Parameter(
            "schedule indices must be strictly increasing".into(),
        ));
    }
    let last = *indices.last().expect("checked non-empty above");
    if last >= series.len() {
        return Err(Error::Parameter(format!(
            "schedule index {last} out of range for {} samples",
            series.len()
        )));
    }
    Ok(ActivationSchedule {
        channel: series.channel,
        k_sigma,
        interval: series.interval,
        activations: indices
            .iter()
            .map(|&i| Activation {
                index: i,
                timestamp: series.timestamp(i),
            })
            .collect(),
    })
}
