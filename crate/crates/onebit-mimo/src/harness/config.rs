//! Scenario configuration: flat `key = value` files with CLI-style overrides.

use num_complex::Complex64;
use std::path::Path;

use crate::chest::Pilot;
use crate::error::{Error, Result};
use crate::moments::Constellation;

/// Experiment kind; selects which grid in [`SimConfig`] drives the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    Snr,
    Tau,
    Alpha,
    Scatter,
    Moments,
    Regions,
}

impl Sweep {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "snr" => Ok(Self::Snr),
            "tau" => Ok(Self::Tau),
            "alpha" => Ok(Self::Alpha),
            "scatter" => Ok(Self::Scatter),
            "moments" => Ok(Self::Moments),
            "regions" => Ok(Self::Regions),
            other => Err(Error::Config(format!(
                "unknown sweep \"{other}\" (expected snr, tau, alpha, scatter, moments, or regions)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Snr => "snr",
            Self::Tau => "tau",
            Self::Alpha => "alpha",
            Self::Scatter => "scatter",
            Self::Moments => "moments",
            Self::Regions => "regions",
        }
    }
}

/// Constellation choice: a named factory or an explicit normalized list.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstellationSpec {
    Named(String),
    Explicit(Vec<Complex64>),
}

impl ConstellationSpec {
    pub fn build(&self) -> Result<Constellation> {
        match self {
            Self::Named(name) => match name.as_str() {
                "16qam" => Ok(Constellation::qam16()),
                "qpsk" => Ok(Constellation::qpsk()),
                other => Err(Error::Config(format!(
                    "unknown constellation \"{other}\" (expected 16qam, qpsk, or an explicit list)"
                ))),
            },
            Self::Explicit(symbols) => Constellation::new("custom", symbols.clone()),
        }
    }
}

/// Pilot choice: the DFT column default or an explicit unit-modulus list.
#[derive(Debug, Clone, PartialEq)]
pub enum PilotSpec {
    Dft2,
    Explicit(Vec<Complex64>),
}

impl PilotSpec {
    /// Builds the pilot at length `tau`. An explicit pilot must match `tau`.
    pub fn build(&self, tau: usize) -> Result<Pilot> {
        match self {
            Self::Dft2 => Pilot::dft(tau),
            Self::Explicit(entries) => {
                if entries.len() != tau {
                    return Err(Error::Config(format!(
                        "explicit pilot has length {}, config says tau = {tau}",
                        entries.len()
                    )));
                }
                Pilot::new(entries.clone())
            }
        }
    }
}

/// All scenario parameters for one experiment invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub m_antennas: usize,
    pub tau: usize,
    /// Transmit SNR grid in dB; single-point experiments use the sole entry.
    pub snr_db: Vec<f64>,
    pub alpha: f64,
    pub constellation: ConstellationSpec,
    pub pilot: PilotSpec,
    pub trials: u64,
    pub seed: u64,
    pub sweep: Sweep,
    pub tau_grid: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    pub threads: Option<usize>,
    pub grid_n: usize,
    pub half_extent: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            m_antennas: 128,
            tau: 32,
            snr_db: vec![10.0],
            alpha: 0.0,
            constellation: ConstellationSpec::Named("16qam".into()),
            pilot: PilotSpec::Dft2,
            trials: 100_000,
            seed: 0,
            sweep: Sweep::Snr,
            tau_grid: vec![4, 8, 16, 32],
            alpha_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            threads: None,
            grid_n: 512,
            half_extent: None,
        }
    }
}

impl SimConfig {
    /// Parses a flat config file: one `key = value` per line, `#` comments,
    /// lists comma-separated. Unknown keys are errors.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            Error::Config(format!("cannot read {}: {e}", path.as_ref().display()))
        })?;
        let mut config = Self::default();
        config.apply_str(&text)?;
        Ok(config)
    }

    /// Applies `key = value` lines on top of the current values.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value, got \"{raw}\"", number + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", number + 1)))?;
        }
        Ok(())
    }

    /// Sets a single parameter from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "m_antennas" | "m" => self.m_antennas = parse_scalar(key, value)?,
            "tau" => self.tau = parse_scalar(key, value)?,
            "snr_db" => self.snr_db = parse_list(key, value)?,
            "alpha" => self.alpha = parse_scalar(key, value)?,
            "constellation" => {
                self.constellation = if value.contains('j') || value.contains(',') {
                    ConstellationSpec::Explicit(parse_complex_list(key, value)?)
                } else {
                    ConstellationSpec::Named(value.to_string())
                }
            }
            "pilot" => {
                self.pilot = if value == "dft2" {
                    PilotSpec::Dft2
                } else {
                    PilotSpec::Explicit(parse_complex_list(key, value)?)
                }
            }
            "trials" => self.trials = parse_scalar(key, value)?,
            "seed" => self.seed = parse_scalar(key, value)?,
            "sweep" => self.sweep = Sweep::parse(value)?,
            "tau_grid" => self.tau_grid = parse_list(key, value)?,
            "alpha_grid" => self.alpha_grid = parse_list(key, value)?,
            "threads" => self.threads = Some(parse_scalar(key, value)?),
            "grid_n" => self.grid_n = parse_scalar(key, value)?,
            "half_extent" => self.half_extent = Some(parse_scalar(key, value)?),
            other => {
                return Err(Error::Config(format!("unknown config key \"{other}\"")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_antennas == 0 {
            return Err(Error::Config("m_antennas must be at least 1".into()));
        }
        if self.tau == 0 {
            return Err(Error::Config(
                "tau must be at least K = 1 (single-user pilots)".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("snr_db grid must be nonempty".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Config(format!(
                "alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        match self.sweep {
            Sweep::Tau => {
                if self.tau_grid.is_empty() {
                    return Err(Error::Config("tau_grid must be nonempty".into()));
                }
                if self.tau_grid.contains(&0) {
                    return Err(Error::Config("tau_grid entries must be at least 1".into()));
                }
            }
            Sweep::Alpha => {
                if self.alpha_grid.is_empty() {
                    return Err(Error::Config("alpha_grid must be nonempty".into()));
                }
                if self.alpha_grid.iter().any(|a| !(0.0..=1.0).contains(a)) {
                    return Err(Error::Config(
                        "alpha_grid entries must lie in [0, 1]".into(),
                    ));
                }
            }
            Sweep::Regions if self.grid_n < 2 => {
                return Err(Error::Config(
                    "grid_n must be at least 2 for region rasterization".into(),
                ));
            }
            _ => {}
        }
        Ok(())
    }

    /// The single operating SNR for non-sweep experiments.
    pub fn single_snr_db(&self) -> Result<f64> {
        if self.snr_db.len() != 1 {
            return Err(Error::Config(format!(
                "this experiment needs exactly one snr_db value, got {:?}",
                self.snr_db
            )));
        }
        Ok(self.snr_db[0])
    }
}

/// `rho_linear = 10^(rho_dB / 10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10.0f64.powf(db / 10.0)
}

fn parse_scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} value \"{value}\"")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|item| parse_scalar(key, item))
        .collect()
}

fn parse_complex_list(key: &str, value: &str) -> Result<Vec<Complex64>> {
    value
        .split(',')
        .map(|item| {
            parse_complex(item.trim())
                .ok_or_else(|| Error::Config(format!("cannot parse {key} entry \"{item}\"")))
        })
        .collect()
}

/// Parses `a`, `bj`, or `a+bj` / `a-bj` (also accepts a bare `j` imaginary
/// unit and `i` as suffix).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    let body = match t.strip_suffix('j').or_else(|| t.strip_suffix('i')) {
        Some(body) => body,
        None => return t.parse().ok().map(|re| Complex64::new(re, 0.0)),
    };
    // Split at the sign that separates real and imaginary parts, skipping
    // leading signs and exponent signs.
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
            break;
        }
    }
    let parse_signed_unit = |s: &str| -> Option<f64> {
        match s {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            other => other.parse().ok(),
        }
    };
    match split {
        Some(i) => {
            let re: f64 = body[..i].parse().ok()?;
            let im = parse_signed_unit(&body[i..])?;
            Some(Complex64::new(re, im))
        }
        None => parse_signed_unit(body).map(|im| Complex64::new(0.0, im)),
    }
}
