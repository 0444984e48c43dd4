//! Harmonic ranking and energy-threshold truncation.
//!
//! The bins of a real signal's spectrum group into *selection units* that
//! are kept or dropped together: the DC bin, conjugate pairs {k, N-k}, and
//! (for even N) the Nyquist bin. Keeping pairs whole is what keeps
//! reconstructions real. Units are ranked by energy, ties to the lower bin,
//! and retained greedily until the requested share of total energy is
//! reached.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{Channel, UniformSeries};
use crate::spectral::{self, AmplitudeSpectrum, Spectrum};

/// A group of bins retained or dropped as one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionUnit {
    Dc,
    /// Conjugate pair {k, N-k}, named by its low index (1 ≤ k < N/2).
    Pair(usize),
    /// Bin N/2 of an even-length spectrum, its own conjugate.
    Nyquist(usize),
}

impl SelectionUnit {
    /// Lowest member bin; the tie-break key when unit energies are equal.
    pub fn lowest_bin(self) -> usize {
        match self {
            SelectionUnit::Dc => 0,
            SelectionUnit::Pair(k) => k,
            SelectionUnit::Nyquist(b) => b,
        }
    }

    /// Member bins within a spectrum of `n` coefficients.
    pub fn bins(self, n: usize) -> Vec<usize> {
        match self {
            SelectionUnit::Dc => vec![0],
            SelectionUnit::Pair(k) => vec![k, n - k],
            SelectionUnit::Nyquist(b) => vec![b],
        }
    }

    /// Reals needed to store the unit: DC and Nyquist are real-valued bins,
    /// a pair is one complex coefficient (its mirror is implied).
    pub fn stored_reals(self) -> usize {
        match self {
            SelectionUnit::Dc | SelectionUnit::Nyquist(_) => 1,
            SelectionUnit::Pair(_) => 2,
        }
    }

    fn energy(self, amps: &AmplitudeSpectrum) -> f64 {
        self.bins(amps.n())
            .into_iter()
            .map(|b| amps.amplitudes[b].powi(2))
            .sum()
    }
}

/// The whole-spectrum unit partition for n bins: DC, pairs {k, n-k} for
/// 1 ≤ k < n/2, and Nyquist when n is even. Every bin lands in exactly one
/// unit.
fn units_for(n: usize) -> Vec<SelectionUnit> {
    let mut units = vec![SelectionUnit::Dc];
    let mut k = 1;
    while 2 * k < n {
        units.push(SelectionUnit::Pair(k));
        k += 1;
    }
    if n >= 2 && n.is_multiple_of(2) {
        units.push(SelectionUnit::Nyquist(n / 2));
    }
    units
}

/// Ranks the units of an amplitude spectrum by energy, descending; equal
/// energies order by lowest member bin.
pub fn rank_harmonics(amplitudes: &AmplitudeSpectrum) -> Vec<SelectionUnit> {
    let mut ranked: Vec<(f64, SelectionUnit)> = units_for(amplitudes.n())
        .into_iter()
        .map(|u| (u.energy(amplitudes), u))
        .collect();
    ranked.sort_by(|(ea, a), (eb, b)| {
        eb.partial_cmp(ea)
            .expect("amplitudes are finite")
            .then(a.lowest_bin().cmp(&b.lowest_bin()))
    });
    ranked.into_iter().map(|(_, u)| u).collect()
}

/// Bins retained by an energy-threshold selection, with the achieved share.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSelection {
    /// Retained bin indices, ascending.
    pub retained: Vec<usize>,
    /// Retained units in rank order.
    pub units: Vec<SelectionUnit>,
    pub threshold: f64,
    /// Share of total spectral energy the retained units carry.
    pub energy_fraction: f64,
}

/// Takes the shortest prefix of the energy ranking whose cumulative energy
/// reaches `threshold` × total.
///
/// An all-zero spectrum has no energy to apportion: the DC unit alone is
/// returned and the fraction reported as 1.
pub fn select_by_energy(spectrum: &Spectrum, threshold: f64) -> Result<HarmonicSelection> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::Parameter(format!(
            "energy threshold must lie in (0, 1], got {threshold}"
        )));
    }
    let amps = spectral::amplitude_spectrum(spectrum);
    let ranked = rank_harmonics(&amps);
    // Total energy is summed in rank order, the same order the cumulative
    // sum below adds in: the full prefix then reproduces the total bit for
    // bit and threshold = 1.0 cannot strand the final units on rounding.
    let total: f64 = ranked.iter().map(|u| u.energy(&amps)).sum();
    if total == 0.0 {
        return Ok(HarmonicSelection {
            retained: vec![0],
            units: vec![SelectionUnit::Dc],
            threshold,
            energy_fraction: 1.0,
        });
    }
    let mut units = Vec::new();
    let mut cumulative = 0.0;
    for unit in ranked {
        cumulative += unit.energy(&amps);
        units.push(unit);
        if cumulative >= threshold * total {
            break;
        }
    }
    let mut retained: Vec<usize> = units.iter().flat_map(|u| u.bins(amps.n())).collect();
    retained.sort_unstable();
    Ok(HarmonicSelection {
        retained,
        units,
        threshold,
        energy_fraction: cumulative / total,
    })
}

/// Zeroes every coefficient outside the selection.
pub fn truncate_spectrum(spectrum: &Spectrum, selection: &HarmonicSelection) -> Result<Spectrum> {
    let n = spectrum.n();
    let mut coefficients = vec![Complex64::new(0.0, 0.0); n];
    for &bin in &selection.retained {
        if bin >= n {
            return Err(Error::Selection(format!(
                "retained bin {bin} out of range for {n} coefficients"
            )));
        }
        coefficients[bin] = spectrum.coefficients[bin];
    }
    Ok(Spectrum {
        coefficients,
        start: spectrum.start,
        interval: spectrum.interval,
    })
}

/// Inverse-transforms the truncated spectrum back onto the original grid.
pub fn reconstruct(
    spectrum: &Spectrum,
    selection: &HarmonicSelection,
    channel: Channel,
) -> Result<UniformSeries> {
    let truncated = truncate_spectrum(spectrum, selection)?;
    let values = spectral::inverse_dft(&truncated);
    UniformSeries::new(truncated.start, truncated.interval, values, channel)
}

/// Reduction quality and size numbers for one selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub rmse: f64,
    pub energy_fraction: f64,
    /// stored_reals / N. Start and interval are a fixed-size header and are
    /// not counted.
    pub compression_ratio: f64,
    pub retained_bin_count: usize,
    pub retained_unit_count: usize,
}

/// Root-mean-square error between a series and its reconstruction, plus the
/// storage ratio of the selection that produced it.
pub fn selection_metrics(
    original: &UniformSeries,
    reconstructed: &UniformSeries,
    selection: &HarmonicSelection,
) -> Result<Metrics> {
    if original.len() != reconstructed.len() {
        return Err(Error::Parameter(format!(
            "series lengths differ: {} vs {}",
            original.len(),
            reconstructed.len()
        )));
    }
    let n = original.len();
    let sq_sum: f64 = original
        .values
        .iter()
        .zip(&reconstructed.values)
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    let stored: usize = selection.units.iter().map(|u| u.stored_reals()).sum();
    Ok(Metrics {
        rmse: (sq_sum / n as f64).sqrt(),
        energy_fraction: selection.energy_fraction,
        compression_ratio: stored as f64 / n as f64,
        retained_bin_count: selection.retained.len(),
        retained_unit_count: selection.units.len(),
    })
}
