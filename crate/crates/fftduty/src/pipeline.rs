//! The whole reduction in one call: clean, grid, transform, select,
//! reconstruct, schedule.
//!
//! A run is a pure function of its input and [`PipelineConfig`]; serialized
//! results are byte-identical across runs and platforms. Errors carry the
//! name of the stage that produced them, so a parse problem never
//! masquerades as a selection problem.

use serde::Serialize;

use crate::activation::{self, ActivationSchedule};
use crate::error::{Error, Result};
use crate::ingest::{self, Channel, SampleRecord, UniformSeries};
use crate::selection::{self, HarmonicSelection, Metrics};
use crate::spectral::{self, Spectrum};

/// Retain half the spectral energy, the everyday reduction setting.
pub const DEFAULT_THRESHOLD: f64 = 0.5;
/// Retain 90% of the spectral energy, the high-fidelity setting.
pub const HIGH_FIDELITY_THRESHOLD: f64 = 0.9;
pub const DEFAULT_K_SIGMA: f64 = 2.0;
/// 15-minute cadence in seconds.
pub const DEFAULT_INTERVAL_S: i64 = 900;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub channel: Channel,
    /// Resampling grid spacing, seconds.
    pub interval: i64,
    /// Energy share to retain, in (0, 1].
    pub threshold: f64,
    /// Activation sensitivity: flag where |d| > mean + k_sigma · std.
    pub k_sigma: f64,
    /// Cross-check the transform against the direct-sum oracle and abort on
    /// disagreement.
    pub verify: bool,
}

impl PipelineConfig {
    pub fn new(channel: Channel) -> Self {
        PipelineConfig {
            channel,
            interval: DEFAULT_INTERVAL_S,
            threshold: DEFAULT_THRESHOLD,
            k_sigma: DEFAULT_K_SIGMA,
            verify: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.interval <= 0 {
            return Err(Error::Parameter(format!(
                "grid interval must be positive, got {}",
                self.interval
            )));
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(Error::Parameter(format!(
                "energy threshold must lie in (0, 1], got {}",
                self.threshold
            )));
        }
        if !(self.k_sigma.is_finite() && self.k_sigma >= 0.0) {
            return Err(Error::Parameter(format!(
                "k_sigma must be non-negative, got {}",
                self.k_sigma
            )));
        }
        Ok(())
    }
}

/// Everything one run produces. The activation schedule is derived from the
/// reconstruction, not the original: it flags the changes the reduced
/// representation still resolves.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineResult {
    pub series: UniformSeries,
    pub spectrum: Spectrum,
    pub selection: HarmonicSelection,
    pub reconstruction: UniformSeries,
    pub metrics: Metrics,
    pub schedule: ActivationSchedule,
}

#[derive(Serialize)]
struct SelectionJson<'a> {
    retained_bins: &'a [usize],
    energy_fraction: f64,
}

#[derive(Serialize)]
struct ResultJson<'a> {
    channel: Channel,
    n: usize,
    start: i64,
    interval_s: i64,
    threshold: f64,
    k_sigma: f64,
    selection: SelectionJson<'a>,
    metrics: &'a Metrics,
    schedule: &'a ActivationSchedule,
}

impl PipelineResult {
    /// One JSON document with the selection, metrics, and schedule. Reals
    /// carry 17 significant digits, so equal results serialize to equal
    /// bytes.
    pub fn to_json_string(&self) -> String {
        crate::jsonfmt::to_json_string(&ResultJson {
            channel: self.series.channel,
            n: self.series.len(),
            start: self.series.start,
            interval_s: self.series.interval,
            threshold: self.selection.threshold,
            k_sigma: self.schedule.k_sigma,
            selection: SelectionJson {
                retained_bins: &self.selection.retained,
                energy_fraction: self.selection.energy_fraction,
            },
            metrics: &self.metrics,
            schedule: &self.schedule,
        })
    }

    /// Plot-ready CSV with columns `timestamp,original,reconstructed`.
    pub fn reconstruction_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("timestamp,original,reconstructed\n");
        for (i, (a, b)) in self
            .series
            .values
            .iter()
            .zip(&self.reconstruction.values)
            .enumerate()
        {
            writeln!(out, "{},{},{}", self.series.timestamp(i), a, b).expect("string write");
        }
        out
    }
}

/// Runs the pipeline from raw records: clean and sort, resample onto the
/// configured grid, then everything in [`run_series`].
pub fn run_records(records: &[SampleRecord], config: &PipelineConfig) -> Result<PipelineResult> {
    config.validate()?;
    let cleaned =
        ingest::clean_sort(records, config.channel).map_err(|e| e.in_stage("clean_sort"))?;
    let series = ingest::resample_uniform(&cleaned, config.interval, config.channel)
        .map_err(|e| e.in_stage("resample_uniform"))?;
    run_series(series, config)
}

/// Runs the pipeline on an already-uniform series.
pub fn run_series(series: UniformSeries, config: &PipelineConfig) -> Result<PipelineResult> {
    config.validate()?;
    let spectrum = spectral::forward_dft(&series);
    if config.verify {
        verify_against_oracle(&series, &spectrum).map_err(|e| e.in_stage("verify"))?;
    }
    let selection = selection::select_by_energy(&spectrum, config.threshold)
        .map_err(|e| e.in_stage("select_by_energy"))?;
    let reconstruction = selection::reconstruct(&spectrum, &selection, series.channel)
        .map_err(|e| e.in_stage("reconstruct"))?;
    let metrics = selection::selection_metrics(&series, &reconstruction, &selection)
        .map_err(|e| e.in_stage("selection_metrics"))?;
    let deriv = activation::derivative(&reconstruction);
    let indices = activation::detect_activations(&deriv, config.k_sigma);
    let schedule = activation::build_schedule(&indices, &reconstruction, config.k_sigma)
        .map_err(|e| e.in_stage("build_schedule"))?;
    Ok(PipelineResult {
        series,
        spectrum,
        selection,
        reconstruction,
        metrics,
        schedule,
    })
}

/// Measured distance between the fast transform and the direct sum, with
/// the tolerance that applies to this input.
#[derive(Debug, Clone, Copy)]
pub struct OracleCheck {
    pub deviation: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

/// Recomputes the spectrum with [`spectral::naive_dft`] and measures the
/// worst coefficient disagreement. Tolerance scales with input mass:
/// 1e-9 · (1 + Σ|x|).
pub fn oracle_check(series: &UniformSeries, spectrum: &Spectrum) -> OracleCheck {
    let oracle = spectral::naive_dft(&series.values);
    let deviation = oracle
        .iter()
        .zip(&spectrum.coefficients)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let mass: f64 = series.values.iter().map(|v| v.abs()).sum();
    OracleCheck {
        deviation,
        tolerance: 1e-9 * (1.0 + mass),
    }
}

/// Errors when the fast transform disagrees with the direct-sum oracle.
pub fn verify_against_oracle(series: &UniformSeries, spectrum: &Spectrum) -> Result<()> {
    let check = oracle_check(series, spectrum);
    if check.passed() {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "transform deviates from the direct sum by {:.3e} (tolerance {:.3e})",
            check.deviation, check.tolerance
        )))
    }
}
