//! Spectral data reduction and duty-cycle scheduling for environmental
//! sensor logs.
//!
//! A log of CO2, humidity, or temperature readings is cleaned and resampled
//! onto a uniform grid ([`ingest`]), transformed to the frequency domain
//! ([`spectral`]), reduced to the smallest set of harmonics that carries a
//! requested share of the signal energy ([`selection`]), and reconstructed.
//! Sharp changes in the reconstruction become the moments a duty-cycled
//! sensor should wake up and measure ([`activation`]). [`pipeline`] runs the
//! whole chain; [`synth`] generates deterministic test signals so all of it
//! is exercisable without hardware; [`cli`] exposes the lot as a command.
//!
//! The transforms are implemented in this crate for any series length, with
//! a textbook direct-sum oracle kept alongside as a runtime cross-check.
//! Every run is deterministic: equal inputs produce byte-identical
//! serialized outputs.

pub mod activation;
pub mod cli;
pub mod error;
pub mod ingest;
mod jsonfmt;
pub mod pipeline;
pub mod selection;
pub mod spectral;
pub mod synth;

pub use error::{Error, Result};
pub use ingest::{Channel, SampleRecord, SensorLog, UniformSeries};
pub use pipeline::{PipelineConfig, PipelineResult};
