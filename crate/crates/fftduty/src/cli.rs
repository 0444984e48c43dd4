//! Command-line front end: `synth`, `compress`, `schedule`, `verify`.
//!
//! stdout carries only data or the verify report; diagnostics go to stderr.
//! Exit codes are a stable contract: 0 success, 1 usage error (bad flags or
//! out-of-domain parameters), 2 data error (unreadable, malformed, or
//! insufficient input), 3 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::ingest::{self, Channel, UniformSeries};
use crate::pipeline::{self, PipelineConfig};
use crate::spectral::{self, Spectrum};
use crate::synth::{self, OccupancyPulse, SynthConfig};

#[derive(Parser)]
#[command(
    name = "fftduty",
    version,
    about = "Spectral data reduction and sensor duty-cycle scheduling for environmental logs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a deterministic synthetic sensor log as CSV
    Synth(SynthArgs),
    /// Reduce a log to its dominant harmonics; emit metrics and schedule
    Compress(CompressArgs),
    /// Emit only the activation schedule for a log
    Schedule(ScheduleArgs),
    /// Cross-check the transform numerics on the actual input
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Signal duration in hours
    #[arg(long, default_value_t = 24.0)]
    hours: f64,
    /// Sample spacing in minutes (must amount to whole seconds)
    #[arg(long, default_value_t = 15.0)]
    interval_min: f64,
    /// Noise generator seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Constant signal level
    #[arg(long, default_value_t = 420.0, allow_hyphen_values = true)]
    baseline: f64,
    /// Peak-to-midline swing of the daily cycle
    #[arg(long, default_value_t = 80.0, allow_hyphen_values = true)]
    diurnal_amplitude: f64,
    /// Gaussian noise level
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    noise_std: f64,
    /// Occupancy pulse START_HOUR,DURATION_HOURS,MAGNITUDE; repeatable,
    /// replaces the two default pulses
    #[arg(long = "pulse", value_parser = parse_pulse, allow_hyphen_values = true)]
    pulses: Vec<OccupancyPulse>,
    /// Generate without any occupancy pulses
    #[arg(long, conflicts_with = "pulses")]
    no_pulses: bool,
    /// Channel column to emit
    #[arg(long, default_value = "co2_ppm")]
    channel: Channel,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flags shared by every command that reads a log.
#[derive(Args)]
struct InputArgs {
    /// Input CSV log
    #[arg(long)]
    input: PathBuf,
    /// Channel column to process
    #[arg(long, default_value = "co2_ppm")]
    channel: Channel,
    /// Resampling grid in seconds; defaults to the median gap between
    /// cleaned records
    #[arg(long)]
    interval_s: Option<i64>,
}

#[derive(Args)]
struct CompressArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Share of spectral energy to retain, in (0, 1]
    #[arg(long, default_value_t = pipeline::DEFAULT_THRESHOLD, allow_hyphen_values = true)]
    threshold: f64,
    /// Activation sensitivity: flag where |d| > mean + K_SIGMA * std
    #[arg(long, default_value_t = pipeline::DEFAULT_K_SIGMA, allow_hyphen_values = true)]
    k_sigma: f64,
    /// Cross-check the transform against the direct-sum oracle
    #[arg(long)]
    verify: bool,
    /// Write the result JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a timestamp,original,reconstructed CSV here
    #[arg(long)]
    reconstruction: Option<PathBuf>,
    /// Also write the full spectrum JSON here (input to `verify --spectrum`)
    #[arg(long)]
    spectrum_out: Option<PathBuf>,
}

#[derive(Args)]
struct ScheduleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Share of spectral energy to retain before detecting changes
    #[arg(long, default_value_t = pipeline::DEFAULT_THRESHOLD, allow_hyphen_values = true)]
    threshold: f64,
    /// Activation sensitivity: flag where |d| > mean + K_SIGMA * std
    #[arg(long, default_value_t = pipeline::DEFAULT_K_SIGMA, allow_hyphen_values = true)]
    k_sigma: f64,
    /// Write the schedule JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Stored spectrum JSON to cross-validate against the input
    #[arg(long)]
    spectrum: Option<PathBuf>,
}

fn parse_pulse(text: &str) -> std::result::Result<OccupancyPulse, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!(
            "expected START_HOUR,DURATION_HOURS,MAGNITUDE, got {text:?}"
        ));
    }
    let mut nums = [0.0; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("{part:?} is not a number"))?;
    }
    Ok(OccupancyPulse::new(nums[0], nums[1], nums[2]))
}

/// Parses the command line, runs the command, and maps errors onto the
/// documented exit codes.
pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here too; clap marks them as
            // stdout-bound successes.
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::Compress(args) => cmd_compress(args),
        Command::Schedule(args) => cmd_schedule(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

/// Stage wrappers are unwrapped first: what decides the code is what went
/// wrong, not where.
fn exit_code_for(err: &Error) -> u8 {
    match err.root() {
        Error::Parameter(_) => 1,
        Error::Verification(_) => 3,
        _ => 2,
    }
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let defaults = SynthConfig::default();
    let pulses = if args.no_pulses {
        Vec::new()
    } else if args.pulses.is_empty() {
        defaults.pulses
    } else {
        args.pulses
    };
    let config = SynthConfig {
        hours: args.hours,
        interval_min: args.interval_min,
        baseline: args.baseline,
        diurnal_amplitude: args.diurnal_amplitude,
        pulses,
        noise_std: args.noise_std,
        seed: args.seed,
        channel: args.channel,
    };
    let series = synth::generate(&config)?;
    emit(args.out.as_deref(), &series.to_csv())
}

fn cmd_compress(args: CompressArgs) -> Result<()> {
    let series = load_series(&args.input)?;
    let config = PipelineConfig {
        channel: args.input.channel,
        interval: series.interval,
        threshold: args.threshold,
        k_sigma: args.k_sigma,
        verify: args.verify,
    };
    let result = pipeline::run_series(series, &config)?;
    if let Some(path) = &args.reconstruction {
        std::fs::write(path, result.reconstruction_csv())?;
    }
    if let Some(path) = &args.spectrum_out {
        std::fs::write(path, result.spectrum.to_json_string())?;
    }
    emit(args.out.as_deref(), &result.to_json_string())
}

fn cmd_schedule(args: ScheduleArgs) -> Result<()> {
    let series = load_series(&args.input)?;
    let config = PipelineConfig {
        channel: args.input.channel,
        interval: series.interval,
        threshold: args.threshold,
        k_sigma: args.k_sigma,
        verify: false,
    };
    let result = pipeline::run_series(series, &config)?;
    emit(args.out.as_deref(), &result.schedule.to_json_string())
}

/// Runs every numerical cross-check against the actual input and prints one
/// report line per check. Any failure exits 3 after the report.
fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let series = load_series(&args.input)?;
    let spectrum = spectral::forward_dft(&series);
    let mut failures = 0usize;

    let oracle = pipeline::oracle_check(&series, &spectrum);
    report("oracle equivalence", oracle.deviation, oracle.tolerance, &mut failures);

    let back = spectral::inverse_dft(&spectrum);
    let round_trip_dev = back
        .iter()
        .zip(&series.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let max_abs = series.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    report("round trip", round_trip_dev, 1e-9 * (1.0 + max_abs), &mut failures);

    let time_energy: f64 = series.values.iter().map(|v| v * v).sum();
    let freq_energy: f64 = spectrum
        .coefficients
        .iter()
        .map(|c| c.norm_sqr())
        .sum::<f64>()
        / series.len() as f64;
    let parseval_rel = (time_energy - freq_energy).abs() / time_energy.max(f64::MIN_POSITIVE);
    report("parseval", parseval_rel, 1e-9, &mut failures);

    if let Some(path) = &args.spectrum {
        let stored = Spectrum::from_json_str(&std::fs::read_to_string(path)?)?;
        if stored.n() != spectrum.n()
            || stored.start != spectrum.start
            || stored.interval != spectrum.interval
        {
            return Err(Error::Verification(format!(
                "stored spectrum grid (n={}, start={}, interval_s={}) does not match the input \
                 (n={}, start={}, interval_s={})",
                stored.n(),
                stored.start,
                stored.interval,
                spectrum.n(),
                spectrum.start,
                spectrum.interval
            )));
        }
        let stored_dev = stored
            .coefficients
            .iter()
            .zip(&spectrum.coefficients)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        report("stored spectrum", stored_dev, oracle.tolerance, &mut failures);
    }

    if failures == 0 {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "{failures} check(s) exceeded tolerance"
        )))
    }
}

fn report(name: &str, deviation: f64, tolerance: f64, failures: &mut usize) {
    let pass = deviation <= tolerance;
    if !pass {
        *failures += 1;
    }
    println!(
        "{name}: {} (max deviation {deviation:.3e}, tolerance {tolerance:.3e})",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Reads, parses, cleans, and grids the requested channel of a log file.
fn load_series(args: &InputArgs) -> Result<UniformSeries> {
    let text = std::fs::read_to_string(&args.input)?;
    let log = ingest::parse_log(&text)?;
    if !log.channels.contains(&args.channel) {
        return Err(Error::Format(format!(
            "column `{}` is not in the header of {}",
            args.channel,
            args.input.display()
        )));
    }
    let cleaned = ingest::clean_sort(&log.records, args.channel)?;
    let interval = match args.interval_s {
        Some(given) if given > 0 => given,
        Some(given) => {
            return Err(Error::Parameter(format!(
                "--interval-s must be positive, got {given}"
            )))
        }
        None => ingest::median_interval(&cleaned)?,
    };
    ingest::resample_uniform(&cleaned, interval, args.channel)
}

/// Data goes to the file when given, stdout otherwise. Payloads carry their
/// own trailing newline.
fn emit(path: Option<&Path>, data: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, data)?,
        None => print!("{data}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pulse_flag_syntax_round_trips() {
        let pulse = parse_pulse("8,2,300").unwrap();
        assert_eq!(pulse, OccupancyPulse::new(8.0, 2.0, 300.0));
        let spaced = parse_pulse(" 17.5 , 3 , 220.25 ").unwrap();
        assert_eq!(spaced, OccupancyPulse::new(17.5, 3.0, 220.25));
    }

    #[test]
    fn malformed_pulse_flags_are_rejected() {
        assert!(parse_pulse("8,2").is_err());
        assert!(parse_pulse("8,2,300,1").is_err());
        assert!(parse_pulse("a,2,300").is_err());
    }

    #[test]
    fn defaults_mirror_the_pipeline_constants() {
        let cli = Cli::try_parse_from(["fftduty", "compress", "--input", "x.csv"]).unwrap();
        match cli.command {
            Command::Compress(args) => {
                assert_eq!(args.threshold, pipeline::DEFAULT_THRESHOLD);
                assert_eq!(args.k_sigma, pipeline::DEFAULT_K_SIGMA);
                assert_eq!(args.input.channel, Channel::Co2);
                assert_eq!(args.input.interval_s, None);
            }
            _ => panic!("parsed the wrong command"),
        }
    }

    #[test]
    fn negative_k_sigma_parses_as_a_value_not_a_flag() {
        let cli =
            Cli::try_parse_from(["fftduty", "schedule", "--input", "x.csv", "--k-sigma", "-1"])
                .unwrap();
        match cli.command {
            Command::Schedule(args) => assert_eq!(args.k_sigma, -1.0),
            _ => panic!("parsed the wrong command"),
        }
    }

    #[test]
    fn unknown_channels_fail_at_parse_time() {
        let result =
            Cli::try_parse_from(["fftduty", "compress", "--input", "x.csv", "--channel", "co2"]);
        assert!(result.is_err());
    }

    #[test]
    fn stage_wrapped_errors_map_by_their_root() {
        let parameter = Error::Parameter("x".into()).in_stage("select_by_energy");
        assert_eq!(exit_code_for(&parameter), 1);
        let data = Error::InsufficientData("x".into()).in_stage("clean_sort");
        assert_eq!(exit_code_for(&data), 2);
        assert_eq!(exit_code_for(&Error::Verification("x".into())), 3);
        let io = Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, "x"));
        assert_eq!(exit_code_for(&io), 2);
    }
}
