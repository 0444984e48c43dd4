//! Sensor log ingestion: CSV parsing, cleaning, and resampling onto a
//! uniform grid.
//!
//! The on-disk format is plain UTF-8 CSV with header columns drawn from
//! `timestamp,co2_ppm,humidity_pct,temperature_c`. `timestamp` is mandatory
//! and holds integer epoch seconds; any subset of the value columns may be
//! present, and an empty field is a missing value. Lines end in `\n` or
//! `\r\n`.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Measurement channels a log may carry, named by their CSV columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Co2,
    Humidity,
    Temperature,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Co2, Channel::Humidity, Channel::Temperature];

    /// CSV column name for this channel.
    pub fn column(self) -> &'static str {
        match self {
            Channel::Co2 => "co2_ppm",
            Channel::Humidity => "humidity_pct",
            Channel::Temperature => "temperature_c",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Channel::ALL
            .into_iter()
            .find(|c| c.column() == s)
            .ok_or_else(|| {
                Error::Parameter(format!(
                    "unknown channel {s:?} (expected co2_ppm, humidity_pct or temperature_c)"
                ))
            })
    }
}

impl serde::Serialize for Channel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.column())
    }
}

/// One log row. Channels the row does not report are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    /// Epoch seconds, non-negative.
    pub timestamp: i64,
    pub co2: Option<f64>,
    pub humidity: Option<f64>,
    pub temperature: Option<f64>,
}

impl SampleRecord {
    pub fn new(timestamp: i64) -> Self {
        SampleRecord {
            timestamp,
            co2: None,
            humidity: None,
            temperature: None,
        }
    }

    pub fn value(&self, channel: Channel) -> Option<f64> {
        match channel {
            Channel::Co2 => self.co2,
            Channel::Humidity => self.humidity,
            Channel::Temperature => self.temperature,
        }
    }

    fn set(&mut self, channel: Channel, value: Option<f64>) {
        match channel {
            Channel::Co2 => self.co2 = value,
            Channel::Humidity => self.humidity = value,
            Channel::Temperature => self.temperature = value,
        }
    }
}

/// A parsed log: the channel columns the header declared, plus the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorLog {
    pub channels: Vec<Channel>,
    pub records: Vec<SampleRecord>,
}

/// Evenly sampled values of one channel.
///
/// `timestamp(i) = start + i · interval`. Constructed values satisfy
/// `interval > 0`, `values.len() >= 2`, and all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSeries {
    /// Epoch seconds of the first sample.
    pub start: i64,
    /// Grid spacing in seconds.
    pub interval: i64,
    pub values: Vec<f64>,
    pub channel: Channel,
}

impl UniformSeries {
    pub fn new(start: i64, interval: i64, values: Vec<f64>, channel: Channel) -> Result<Self> {
        if interval <= 0 {
            return Err(Error::Parameter(format!(
                "series interval must be positive, got {interval}"
            )));
        }
        if values.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "a series needs at least 2 samples, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("series values must be finite".into()));
        }
        Ok(UniformSeries {
            start,
            interval,
            values,
            channel,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn timestamp(&self, index: usize) -> i64 {
        self.start + index as i64 * self.interval
    }

    /// Serializes in the ingest CSV format: header plus one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = format!("timestamp,{}\n", self.channel.column());
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", self.timestamp(i), v).expect("string write");
        }
        out
    }
}

/// Parses a sensor log, header and all.
///
/// The header must name `timestamp` and at least one channel column; columns
/// with unrecognized names are ignored. Rows with an unreadable or negative
/// timestamp are errors, while an empty or unreadable channel field merely
/// leaves that value absent.
pub fn parse_log(text: &str) -> Result<SensorLog> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty document, expected a CSV header".into()))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let ts_col = columns
        .iter()
        .position(|c| *c == "timestamp")
        .ok_or_else(|| Error::Format("header has no `timestamp` column".into()))?;

    let mut channels = Vec::new();
    let mut channel_cols: Vec<(usize, Channel)> = Vec::new();
    for (i, name) in columns.iter().enumerate() {
        if let Ok(ch) = name.parse::<Channel>() {
            if channels.contains(&ch) {
                return Err(Error::Format(format!("duplicate column `{ch}`")));
            }
            channels.push(ch);
            channel_cols.push((i, ch));
        }
    }
    if channels.is_empty() {
        return Err(Error::Format(
            "header declares no channel column (co2_ppm, humidity_pct or temperature_c)".into(),
        ));
    }

    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2; // 1-based, line 1 is the header
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != columns.len() {
            return Err(Error::Row {
                line: lineno,
                message: format!("expected {} fields, found {}", columns.len(), fields.len()),
            });
        }
        let timestamp: i64 = fields[ts_col].parse().map_err(|_| Error::Row {
            line: lineno,
            message: format!("timestamp {:?} is not an integer", fields[ts_col]),
        })?;
        if timestamp < 0 {
            return Err(Error::Row {
                line: lineno,
                message: format!("timestamp {timestamp} is negative"),
            });
        }
        let mut record = SampleRecord::new(timestamp);
        for &(col, ch) in &channel_cols {
            // Unreadable numbers get the empty-field treatment: the row
            // survives with the value absent. NaN/inf never get in.
            let parsed = fields[col].parse::<f64>().ok().filter(|v| v.is_finite());
            record.set(ch, parsed);
        }
        records.push(record);
    }
    Ok(SensorLog { channels, records })
}

/// Parses a log and returns just the rows.
pub fn parse_records(text: &str) -> Result<Vec<SampleRecord>> {
    parse_log(text).map(|log| log.records)
}

/// Keeps the rows that carry `channel`, ordered by time.
///
/// Rows without a value for the channel are dropped. Survivors sort by
/// timestamp ascending; rows sharing a timestamp collapse to the one latest
/// in input order, so retransmissions win.
pub fn clean_sort(records: &[SampleRecord], channel: Channel) -> Result<Vec<SampleRecord>> {
    let mut kept: Vec<SampleRecord> = records
        .iter()
        .filter(|r| r.value(channel).is_some())
        .cloned()
        .collect();
    // Stable sort: input order survives within a timestamp, so keeping the
    // last of each equal-timestamp group implements last-seen-wins.
    kept.sort_by_key(|r| r.timestamp);
    let mut out: Vec<SampleRecord> = Vec::with_capacity(kept.len());
    for rec in kept {
        match out.last_mut() {
            Some(prev) if prev.timestamp == rec.timestamp => *prev = rec,
            _ => out.push(rec),
        }
    }
    if out.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} usable sample(s) for channel {channel}, need at least 2",
            out.len()
        )));
    }
    Ok(out)
}

/// Linearly interpolates the channel onto a uniform grid.
///
/// The grid starts at the first record's timestamp and steps by `interval`
/// seconds for as long as it stays at or before the last record's timestamp.
/// Grid points that land exactly on a record take its value verbatim; points
/// between records t0 and t1 take `v0 + (t - t0)·(v1 - v0)/(t1 - t0)`.
///
/// `records` must look like [`clean_sort`] output: strictly increasing
/// timestamps, every row carrying `channel`.
pub fn resample_uniform(
    records: &[SampleRecord],
    interval: i64,
    channel: Channel,
) -> Result<UniformSeries> {
    if interval <= 0 {
        return Err(Error::Parameter(format!(
            "resample interval must be positive, got {interval}"
        )));
    }
    if records.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} record(s), need at least 2 to resample",
            records.len()
        )));
    }
    debug_assert!(
        records.windows(2).all(|w| w[0].timestamp < w[1].timestamp),
        "resample_uniform expects clean_sort output"
    );
    let first = records[0].timestamp;
    let last = records[records.len() - 1].timestamp;
    let points = ((last - first) / interval + 1) as usize;
    if points < 2 {
        return Err(Error::InsufficientData(format!(
            "a span of {} s at {interval} s yields {points} grid point(s), need at least 2",
            last - first
        )));
    }

    let value_at = |r: &SampleRecord| r.value(channel).expect("cleaned rows carry the channel");
    let mut values = Vec::with_capacity(points);
    let mut seg = 0usize; // records[seg] ..= records[seg+1] brackets t
    for i in 0..points {
        let t = first + i as i64 * interval;
        while records[seg + 1].timestamp < t {
            seg += 1;
        }
        let (a, b) = (&records[seg], &records[seg + 1]);
        let value = if t == a.timestamp {
            value_at(a)
        } else if t == b.timestamp {
            value_at(b)
        } else {
            let (va, vb) = (value_at(a), value_at(b));
            let span = (b.timestamp - a.timestamp) as f64;
            va + (t - a.timestamp) as f64 * (vb - va) / span
        };
        values.push(value);
    }
    UniformSeries::new(first, interval, values, channel)
}

/// Median gap between consecutive cleaned records, in seconds.
///
/// This is what the CLI resamples at when no interval is given: the lower
/// middle of the sorted gaps, which reproduces the native cadence exactly for
/// regular logs and ignores outlier gaps in patchy ones.
pub fn median_interval(records: &[SampleRecord]) -> Result<i64> {
    if records.len() < 2 {
        return Err(Error::InsufficientData(
            "need at least 2 records to infer an interval".into(),
        ));
    }
    let mut gaps: Vec<i64> = records
        .windows(2)
        .map(|w| w[1].timestamp - w[0].timestamp)
        .collect();
    gaps.sort_unstable();
    Ok(gaps[(gaps.len() - 1) / 2])
}
