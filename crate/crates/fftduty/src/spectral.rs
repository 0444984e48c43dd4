//! Discrete Fourier analysis of uniform series.
//!
//! Conventions, fixed across the crate:
//!
//! ```text
//! forward, unscaled:  X[k] = Σ_n x[n] · e^{-j2πkn/N}
//! amplitude:          A[k] = |X[k]| = sqrt(Re² + Im²)
//! inverse:            x[n] = (1/N) · Σ_k X[k] · e^{+j2πkn/N}
//! ```
//!
//! [`forward_dft`] handles any length, not just powers of two: composite
//! sizes split recursively on their smallest prime factor (Cooley-Tukey),
//! prime sizes fall back to the direct sum. The desk-scale grid of 96
//! samples (2⁵·3) runs entirely on the fast path. [`naive_dft`] keeps the
//! textbook O(N²) double loop as an independent oracle; equivalence with it,
//! not any particular factorization, is what the tests pin down.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::UniformSeries;

/// Complex DFT coefficients of one uniform series, with the grid metadata
/// needed to place an inverse back onto timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub coefficients: Vec<Complex64>,
    /// Epoch seconds of the first sample of the transformed series.
    pub start: i64,
    /// Grid spacing of the transformed series, seconds.
    pub interval: i64,
}

/// `A[k] = |X[k]|` for every bin.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSpectrum {
    pub amplitudes: Vec<f64>,
}

impl AmplitudeSpectrum {
    pub fn n(&self) -> usize {
        self.amplitudes.len()
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumJson {
    n: usize,
    start: i64,
    interval_s: i64,
    coefficients: Vec<[f64; 2]>,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.coefficients.len()
    }

    /// Interchange schema `{n, start, interval_s, coefficients: [[re, im], ...]}`
    /// with reals at 17 significant digits, enough to round-trip f64 exactly.
    pub fn to_json_string(&self) -> String {
        let view = SpectrumJson {
            n: self.n(),
            start: self.start,
            interval_s: self.interval,
            coefficients: self.coefficients.iter().map(|c| [c.re, c.im]).collect(),
        };
        crate::jsonfmt::to_json_string(&view)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let view: SpectrumJson = serde_json::from_str(text)
            .map_err(|e| Error::Format(format!("spectrum json: {e}")))?;
        if view.n != view.coefficients.len() {
            return Err(Error::Format(format!(
                "spectrum json: n = {} but {} coefficients",
                view.n,
                view.coefficients.len()
            )));
        }
        if view.interval_s <= 0 {
            return Err(Error::Format(
                "spectrum json: interval_s must be positive".into(),
            ));
        }
        if view.coefficients.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Format(
                "spectrum json: non-finite coefficient".into(),
            ));
        }
        Ok(Spectrum {
            coefficients: view
                .coefficients
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
            start: view.start,
            interval: view.interval_s,
        })
    }
}

/// Forward transform of a series, unscaled.
pub fn forward_dft(series: &UniformSeries) -> Spectrum {
    let input: Vec<Complex64> = series
        .values
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    Spectrum {
        coefficients: fft(&input),
        start: series.start,
        interval: series.interval,
    }
}

/// Textbook O(N²) transform: the oracle the fast path is checked against,
/// also used by the CLI's verify mode. Every term evaluates its own
/// exponential; nothing is shared with [`fft`].
pub fn naive_dft(values: &[f64]) -> Vec<Complex64> {
    let n = values.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &x) in values.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (k as f64) * (j as f64) / (n as f64);
            acc += x * Complex64::new(angle.cos(), angle.sin());
        }
        out.push(acc);
    }
    out
}

pub fn amplitude_spectrum(spectrum: &Spectrum) -> AmplitudeSpectrum {
    AmplitudeSpectrum {
        amplitudes: spectrum.coefficients.iter().map(|c| c.norm()).collect(),
    }
}

/// Inverse transform, returning real parts.
///
/// Any spectrum of a real signal, truncated or not, is conjugate-symmetric
/// and inverts to cancelled imaginary parts; debug builds assert the residue
/// stays below 1e-9 in that case.
pub fn inverse_dft(spectrum: &Spectrum) -> Vec<f64> {
    let inv = inverse_fft(&spectrum.coefficients);
    debug_assert!(
        !is_conjugate_symmetric(&spectrum.coefficients, 1e-9)
            || inv.iter().map(|c| c.im.abs()).fold(0.0, f64::max) < 1e-9,
        "imaginary residue above 1e-9 for a conjugate-symmetric spectrum"
    );
    inv.iter().map(|c| c.re).collect()
}

/// Complex inverse with the 1/N scale, via conj ∘ forward ∘ conj.
pub(crate) fn inverse_fft(coefficients: &[Complex64]) -> Vec<Complex64> {
    let n = coefficients.len() as f64;
    let conj: Vec<Complex64> = coefficients.iter().map(|c| c.conj()).collect();
    fft(&conj).into_iter().map(|c| c.conj() / n).collect()
}

pub(crate) fn is_conjugate_symmetric(coefficients: &[Complex64], tol: f64) -> bool {
    let n = coefficients.len();
    (0..n).all(|k| {
        let mirrored = coefficients[(n - k) % n].conj();
        (coefficients[k] - mirrored).norm() <= tol * (1.0 + coefficients[k].norm())
    })
}

/// Unscaled forward transform of arbitrary length.
///
/// Decimation in time on the smallest prime factor p: the p strided
/// sub-sequences transform recursively and recombine as
/// `X[k] = Σ_r e^{-j2πrk/N} · Y_r[k mod N/p]`.
pub(crate) fn fft(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    if n <= 1 {
        return input.to_vec();
    }
    let p = smallest_prime_factor(n);
    if p == n {
        return dft_direct(input);
    }
    let m = n / p;
    let subs: Vec<Vec<Complex64>> = (0..p)
        .map(|r| {
            let decimated: Vec<Complex64> = input.iter().skip(r).step_by(p).copied().collect();
            fft(&decimated)
        })
        .collect();
    let twiddles = twiddle_table(n);
    (0..n)
        .map(|k| {
            subs.iter()
                .enumerate()
                .map(|(r, sub)| twiddles[(r * k) % n] * sub[k % m])
                .sum()
        })
        .collect()
}

/// Direct sum for prime lengths, sharing one twiddle table per call.
fn dft_direct(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    let twiddles = twiddle_table(n);
    (0..n)
        .map(|k| {
            input
                .iter()
                .enumerate()
                .map(|(j, &x)| x * twiddles[(j * k) % n])
                .sum()
        })
        .collect()
}

fn twiddle_table(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|t| {
            let angle = -2.0 * std::f64::consts::PI * (t as f64) / (n as f64);
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect()
}

fn smallest_prime_factor(n: usize) -> usize {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return f;
        }
        f += 2;
    }
    n
}
