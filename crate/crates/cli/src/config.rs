//! Resolved run settings: flag value, else config-file value, else default.

use std::path::Path;

use clap::ValueEnum;
use puo_core::modes::PuoParams;
use puo_core::puo::{PuoStateLabel, Truncation};
use serde::Deserialize;

use crate::args::{Format, OutputArgs, StateArgs};
use crate::Failure;

pub const DEFAULT_PRECISION: usize = 12;
pub const MAX_ROWS: usize = 10_000_000;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "Omega", alias = "big_freq")]
    pub big_freq: Option<f64>,
    #[serde(rename = "omega", alias = "small_freq")]
    pub small_freq: Option<f64>,
    #[serde(rename = "J")]
    pub big_strength: Option<f64>,
    #[serde(rename = "j")]
    pub small_strength: Option<f64>,
    #[serde(rename = "Gamma0")]
    pub big_phase0: Option<f64>,
    #[serde(rename = "gamma0")]
    pub small_phase0: Option<f64>,
    pub t: Option<f64>,
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub dt: Option<f64>,
    pub truncation: Option<TruncationValue>,
    pub format: Option<String>,
    pub precision: Option<usize>,
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TruncationValue {
    Fixed(u64),
    Named(String),
}

pub fn load(path: Option<&Path>) -> Result<FileConfig, Failure> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))
}

/// Output settings shared by every table-producing command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputConfig {
    pub format: Format,
    pub precision: usize,
}

pub fn output(args: &OutputArgs, file: &FileConfig) -> Result<OutputConfig, Failure> {
    let format = match (args.format, &file.format) {
        (Some(f), _) => f,
        (None, Some(name)) => parse_enum::<Format>(name, "format")?,
        (None, None) => Format::default(),
    };
    Ok(OutputConfig {
        format,
        precision: precision(args.precision.or(file.precision))?,
    })
}

pub fn precision(value: Option<usize>) -> Result<usize, Failure> {
    let p = value.unwrap_or(DEFAULT_PRECISION);
    if !(6..=17).contains(&p) {
        return Err(Failure::Usage(format!("precision must be between 6 and 17 (got {p})")));
    }
    Ok(p)
}

pub fn parse_enum<T: ValueEnum>(name: &str, key: &str) -> Result<T, Failure> {
    T::from_str(name, true).map_err(|_| Failure::Usage(format!("unknown {key} '{name}'")))
}

/// Frequencies, labels (at `t = 0`) and cutoff.
#[derive(Debug, Clone, Copy)]
pub struct StateConfig {
    pub params: PuoParams,
    pub label: PuoStateLabel,
    pub truncation: Truncation,
}

pub fn state(args: &StateArgs, file: &FileConfig) -> Result<StateConfig, Failure> {
    let big = args.big_freq.or(file.big_freq).ok_or_else(|| missing("--Omega"))?;
    let small = args.small_freq.or(file.small_freq).ok_or_else(|| missing("--omega"))?;
    let params = PuoParams::new(big, small).map_err(|e| Failure::Usage(e.to_string()))?;
    let label = PuoStateLabel::new(
        args.big_strength.or(file.big_strength).unwrap_or(0.0),
        args.big_phase0.or(file.big_phase0).unwrap_or(0.0),
        args.small_strength.or(file.small_strength).unwrap_or(0.0),
        args.small_phase0.or(file.small_phase0).unwrap_or(0.0),
        0.0,
    )
    .map_err(|e| Failure::Usage(e.to_string()))?;
    let truncation = match (&args.truncation, &file.truncation) {
        (Some(s), _) => parse_truncation(s)?,
        (None, Some(TruncationValue::Fixed(n))) => Truncation::Fixed(*n as usize),
        (None, Some(TruncationValue::Named(s))) => parse_truncation(s)?,
        (None, None) => Truncation::Auto,
    };
    Ok(StateConfig {
        params,
        label,
        truncation,
    })
}

fn parse_truncation(s: &str) -> Result<Truncation, Failure> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Truncation::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(Truncation::Fixed(n)),
        _ => Err(Failure::Usage(format!(
            "truncation must be 'auto' or a positive integer (got '{s}')"
        ))),
    }
}

fn missing(flag: &str) -> Failure {
    Failure::Usage(format!("{flag} is required (flag or config file)"))
}

pub fn finite(value: f64, name: &str) -> Result<f64, Failure> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Failure::Usage(format!("{name} must be finite")))
    }
}

/// `t0, t0 + dt, …` up to `t1` (inclusive when `t1 − t0` is a multiple of `dt`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeRange {
    pub t0: f64,
    pub dt: f64,
    pub intervals: usize,
}

impl TimeRange {
    pub fn new(t0: f64, t1: f64, dt: f64) -> Result<Self, Failure> {
        let (t0, t1, dt) = (finite(t0, "--t0")?, finite(t1, "--t1")?, finite(dt, "--dt")?);
        if dt <= 0.0 {
            return Err(Failure::Usage(format!("--dt must be positive (got {dt})")));
        }
        if t1 <= t0 {
            return Err(Failure::Usage(format!("--t1 must exceed --t0 (got {t0} .. {t1})")));
        }
        let intervals = ((t1 - t0) / dt + 1e-9).floor();
        if intervals < 1.0 {
            return Err(Failure::Usage(format!(
                "--dt {dt} is longer than the range {t0} .. {t1}"
            )));
        }
        if intervals >= MAX_ROWS as f64 {
            return Err(Failure::Usage(format!("range needs more than {MAX_ROWS} rows")));
        }
        Ok(Self {
            t0,
            dt,
            intervals: intervals as usize,
        })
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn end(&self) -> f64 {
        self.time(self.intervals)
    }
}
