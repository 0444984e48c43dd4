//! Deterministic indoor-CO2-style test signals.
//!
//! The model is a constant baseline, one sinusoidal diurnal cycle with its
//! trough at t = 0, zero or more raised-cosine occupancy pulses, and white
//! Gaussian noise. Everything downstream from the seed is reproducible to
//! the bit, so generated fixtures can be compared byte-for-byte across runs
//! and machines.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};
use crate::ingest::{Channel, UniformSeries};

const SECONDS_PER_DAY: f64 = 86_400.0;

/// One occupancy event: a raised-cosine bump spanning
/// `[start_hour, start_hour + duration_hours)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancyPulse {
    pub start_hour: f64,
    pub duration_hours: f64,
    pub magnitude: f64,
}

impl OccupancyPulse {
    pub fn new(start_hour: f64, duration_hours: f64, magnitude: f64) -> Self {
        Self { start_hour, duration_hours, magnitude }
    }
}

/// Parameters of the synthetic signal. `Default` is a plausible office day:
/// 24 hours at 15-minute cadence, 420 ppm baseline, 80 ppm diurnal swing,
/// a morning and an afternoon occupancy pulse, 5 ppm noise.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub hours: f64,
    pub interval_min: f64,
    pub baseline: f64,
    pub diurnal_amplitude: f64,
    pub pulses: Vec<OccupancyPulse>,
    pub noise_std: f64,
    pub seed: u64,
    pub channel: Channel,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            hours: 24.0,
            interval_min: 15.0,
            baseline: 420.0,
            diurnal_amplitude: 80.0,
            pulses: vec![
                OccupancyPulse::new(8.0, 2.0, 300.0),
                OccupancyPulse::new(17.0, 3.0, 220.0),
            ],
            noise_std: 5.0,
            seed: 1,
            channel: Channel::Co2,
        }
    }
}

impl SynthConfig {
    /// Samples on the closed span: `floor(hours * 60 / interval_min) + 1`.
    pub fn sample_count(&self) -> usize {
        (self.hours * 60.0 / self.interval_min).floor() as usize + 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hours.is_finite() && self.hours > 0.0) {
            return Err(Error::Parameter(format!(
                "duration must be positive, got {} hours",
                self.hours
            )));
        }
        if !(self.interval_min.is_finite() && self.interval_min > 0.0) {
            return Err(Error::Parameter(format!(
                "sample interval must be positive, got {} minutes",
                self.interval_min
            )));
        }
        let interval_s = self.interval_min * 60.0;
        if interval_s.fract() != 0.0 {
            return Err(Error::Parameter(format!(
                "sample interval must be a whole number of seconds, got {interval_s}s"
            )));
        }
        if self.sample_count() < 2 {
            return Err(Error::Parameter(
                "duration must cover at least two samples".into(),
            ));
        }
        if !self.baseline.is_finite() || !self.diurnal_amplitude.is_finite() {
            return Err(Error::Parameter("baseline and amplitude must be finite".into()));
        }
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return Err(Error::Parameter(format!(
                "noise level must be non-negative, got {}",
                self.noise_std
            )));
        }
        for pulse in &self.pulses {
            if !(pulse.duration_hours.is_finite() && pulse.duration_hours > 0.0) {
                return Err(Error::Parameter(format!(
                    "pulse duration must be positive, got {} hours",
                    pulse.duration_hours
                )));
            }
            if !pulse.start_hour.is_finite() || !pulse.magnitude.is_finite() {
                return Err(Error::Parameter("pulse start and magnitude must be finite".into()));
            }
        }
        Ok(())
    }
}

/// Generates the series at t = 0, 1·interval, 2·interval, ... with epoch
/// start 0. One Gaussian draw per sample, in sample order, so the output is
/// a pure function of the config.
pub fn generate(config: &SynthConfig) -> Result<UniformSeries> {
    config.validate()?;
    let interval = (config.interval_min * 60.0) as i64;
    let mut rng = SplitMix64::new(config.seed);
    let values = (0..config.sample_count())
        .map(|i| {
            let t = (i as i64 * interval) as f64;
            model_value(config, t) + config.noise_std * rng.next_gaussian()
        })
        .collect();
    UniformSeries::new(0, interval, values, config.channel)
}

/// The noise-free model at time `t_seconds`.
fn model_value(config: &SynthConfig, t_seconds: f64) -> f64 {
    let diurnal = config.diurnal_amplitude * (TAU * t_seconds / SECONDS_PER_DAY - FRAC_PI_2).sin();
    let mut value = config.baseline + diurnal;
    let t_hours = t_seconds / 3600.0;
    for pulse in &config.pulses {
        let phase = (t_hours - pulse.start_hour) / pulse.duration_hours;
        if (0.0..1.0).contains(&phase) {
            value += pulse.magnitude * 0.5 * (1.0 - (TAU * phase).cos());
        }
    }
    value
}

/// SplitMix64 with the standard constants; 2^64 period, passes BigCrush.
///
/// State advances by the golden-gamma increment 0x9E3779B97F4A7C15 and the
/// output function is two xor-shift-multiply rounds. Every implementation
/// with these constants produces identical streams, which is the point:
/// fixtures stay stable forever.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of mantissa.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller, one uniform pair per draw.
    /// `1 - u1` keeps the log argument in (0, 1].
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (TAU * u2).cos()
    }
}
