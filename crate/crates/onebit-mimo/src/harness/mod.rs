//! Deterministic, parallel Monte Carlo experiments: full pilot-to-detection
//! trials, SER sweeps over SNR / pilot length / detection weights, scatter
//! and region exports, and their CSV serializations.
//!
//! Trials are independent work items keyed by trial id; aggregation reduces
//! integer error counts, so every experiment produces identical output for a
//! given `(config, seed)` at any thread count.

mod config;

pub use config::{db_to_linear, parse_complex, ConstellationSpec, PilotSpec, SimConfig, Sweep};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use std::io::Write;

use crate::chest::{estimate_channel, EstimationConstants, Pilot, PilotMatrix};
use crate::detect::{detect, rasterize_regions, DetectorSpec};
use crate::error::{Error, Result};
use crate::moments::{Constellation, MomentTable};
use crate::signal::{uplink_data_rx, uplink_pilot_rx, ChannelRealization, RngStream, Substream};
use crate::util::fmt_f64;

/// Error count and SER estimate at one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SerResult {
    pub m_antennas: usize,
    pub tau: usize,
    pub snr_db: f64,
    pub alpha: f64,
    pub errors: u64,
    pub trials: u64,
}

impl SerResult {
    pub fn ser(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }

    /// Binomial standard error `sqrt(ser (1 - ser) / trials)`.
    pub fn std_err(&self) -> f64 {
        let p = self.ser();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Precomputed state for one operating point `(constellation, pilot, rho,
/// M, alpha, seed)`: pilot constants, moment table, and detector.
#[derive(Debug, Clone)]
pub struct TrialSetup {
    constellation: Constellation,
    pilots: PilotMatrix,
    constants: EstimationConstants,
    moments: MomentTable,
    detector: DetectorSpec,
    rho: f64,
    m_antennas: usize,
    seed: u64,
}

impl TrialSetup {
    pub fn new(
        constellation: Constellation,
        pilot: Pilot,
        rho: f64,
        m_antennas: usize,
        alpha: f64,
        seed: u64,
    ) -> Result<Self> {
        if rho <= 0.0 || rho.is_nan() {
            return Err(Error::InvalidParam(format!(
                "transmit SNR rho must be positive, got {rho}"
            )));
        }
        let pilots = PilotMatrix::from_pilot(&pilot);
        let constants = EstimationConstants::for_pilot(&pilot, rho)?;
        let moments = MomentTable::compute(&constellation, &pilot, rho, m_antennas)?;
        let detector = DetectorSpec::from_moments(&moments, alpha)?;
        Ok(Self {
            constellation,
            pilots,
            constants,
            moments,
            detector,
            rho,
            m_antennas,
            seed,
        })
    }

    /// Operating point taken from a config, at an explicit SNR and pilot
    /// length (the sweep drivers) and the config's remaining fields.
    pub fn from_config_at(config: &SimConfig, snr_db: f64, tau: usize, alpha: f64) -> Result<Self> {
        let constellation = config.constellation.build()?;
        let pilot = config.pilot.build(tau)?;
        Self::new(
            constellation,
            pilot,
            db_to_linear(snr_db),
            config.m_antennas,
            alpha,
            config.seed,
        )
    }

    pub fn moments(&self) -> &MomentTable {
        &self.moments
    }

    pub fn detector(&self) -> &DetectorSpec {
        &self.detector
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn m_antennas(&self) -> usize {
        self.m_antennas
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Runs the estimation half of one trial: channel draw, quantized pilot
/// phase, scaled LS estimate, quantized data phase, MRC. Returns the
/// transmitted symbol index and the soft estimate.
///
/// The transmit symbol is drawn uniformly unless `forced_symbol` pins it
/// (the symbol substream is left untouched in that case).
pub fn estimate_trial(
    setup: &TrialSetup,
    trial_id: u64,
    forced_symbol: Option<usize>,
) -> (usize, Complex64) {
    let seed = setup.seed;
    let channel = ChannelRealization::sample(
        setup.m_antennas,
        1,
        &RngStream::for_trial(seed, trial_id, Substream::Channel),
    );
    let r_pilot = uplink_pilot_rx(
        &channel,
        &setup.pilots,
        setup.rho,
        &RngStream::for_trial(seed, trial_id, Substream::PilotNoise),
    )
    .expect("pilot shapes are fixed by the setup");
    let h_hat = estimate_channel(&r_pilot, &setup.pilots, &setup.constants)
        .expect("estimator shapes are fixed by the setup");

    let symbol_count = setup.constellation.len();
    let tx = forced_symbol.unwrap_or_else(|| {
        let mut rng = RngStream::for_trial(seed, trial_id, Substream::Symbol).rng();
        rng.random_range(0..symbol_count as u64) as usize
    });
    debug_assert!(tx < symbol_count);

    let x = [setup.constellation.symbols()[tx]];
    let r_data = uplink_data_rx(
        &channel,
        &x,
        setup.rho,
        &RngStream::for_trial(seed, trial_id, Substream::DataNoise),
    )
    .expect("data shapes are fixed by the setup");
    let xhat = crate::detect::mrc_estimate(&h_hat, &r_data)
        .expect("MRC shapes are fixed by the setup")[0];
    (tx, xhat)
}

/// One full pipeline pass: [`estimate_trial`] plus detection. Returns
/// `(transmitted index, detected index)`.
pub fn run_trial(setup: &TrialSetup, trial_id: u64) -> (usize, usize) {
    let (tx, xhat) = estimate_trial(setup, trial_id, None);
    (tx, detect(xhat, &setup.detector))
}

/// [`run_trial`] with the transmit symbol pinned.
pub fn run_trial_forced(setup: &TrialSetup, trial_id: u64, symbol: usize) -> (usize, usize) {
    let (tx, xhat) = estimate_trial(setup, trial_id, Some(symbol));
    (tx, detect(xhat, &setup.detector))
}

fn count_errors(setup: &TrialSetup, trials: u64) -> u64 {
    (0..trials)
        .into_par_iter()
        .map(|trial_id| {
            let (tx, detected) = run_trial(setup, trial_id);
            u64::from(tx != detected)
        })
        .sum()
}

/// Runs `f` on a dedicated pool of `threads` workers, or inline on the
/// global pool when `threads` is `None`.
pub fn with_thread_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// SER over the configured grid: the SNR grid for [`Sweep::Snr`], the pilot
/// length grid for [`Sweep::Tau`]. Symbols are drawn uniformly per trial.
pub fn run_ser(config: &SimConfig) -> Result<Vec<SerResult>> {
    config.validate()?;
    let points: Vec<(f64, usize)> = match config.sweep {
        Sweep::Snr => config.snr_db.iter().map(|&db| (db, config.tau)).collect(),
        Sweep::Tau => {
            let db = config.single_snr_db()?;
            config.tau_grid.iter().map(|&tau| (db, tau)).collect()
        }
        other => {
            return Err(Error::Config(format!(
                "run_ser handles snr and tau sweeps, not \"{}\"",
                other.as_str()
            )))
        }
    };
    let mut results = Vec::with_capacity(points.len());
    for (snr_db, tau) in points {
        let setup = TrialSetup::from_config_at(config, snr_db, tau, config.alpha)?;
        let errors = with_thread_pool(config.threads, || count_errors(&setup, config.trials))?;
        results.push(SerResult {
            m_antennas: config.m_antennas,
            tau,
            snr_db,
            alpha: config.alpha,
            errors,
            trials: config.trials,
        });
    }
    Ok(results)
}

/// SER against the detection weight exponent `alpha`, with common random
/// numbers: trial `t` reuses identical channel, noise, and symbol draws for
/// every `alpha`, so the curve differences come from the weights alone.
pub fn run_alpha_sweep(config: &SimConfig) -> Result<Vec<SerResult>> {
    let mut config = config.clone();
    config.sweep = Sweep::Alpha;
    config.validate()?;
    let snr_db = config.single_snr_db()?;
    let base = TrialSetup::from_config_at(&config, snr_db, config.tau, 0.0)?;
    let detectors: Vec<DetectorSpec> = config
        .alpha_grid
        .iter()
        .map(|&alpha| DetectorSpec::from_moments(base.moments(), alpha))
        .collect::<Result<_>>()?;

    let per_alpha_errors = with_thread_pool(config.threads, || {
        (0..config.trials)
            .into_par_iter()
            .map(|trial_id| {
                let (tx, xhat) = estimate_trial(&base, trial_id, None);
                detectors
                    .iter()
                    .map(|spec| u64::from(detect(xhat, spec) != tx))
                    .collect::<Vec<u64>>()
            })
            .reduce(
                || vec![0u64; detectors.len()],
                |mut acc, item| {
                    for (a, b) in acc.iter_mut().zip(item) {
                        *a += b;
                    }
                    acc
                },
            )
    })?;

    Ok(config
        .alpha_grid
        .iter()
        .zip(per_alpha_errors)
        .map(|(&alpha, errors)| SerResult {
            m_antennas: config.m_antennas,
            tau: config.tau,
            snr_db,
            alpha,
            errors,
            trials: config.trials,
        })
        .collect())
}

/// Soft estimates for scatter plots: every constellation symbol transmitted
/// over `trials` independent realizations, plus the analytic centers.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterResult {
    /// `(symbol index, xhat)` in symbol-major, trial-minor order.
    pub points: Vec<(usize, Complex64)>,
    /// Closed-form expected estimate per symbol, for overlay.
    pub expected: Vec<Complex64>,
}

pub fn run_scatter(config: &SimConfig) -> Result<ScatterResult> {
    config.validate()?;
    let snr_db = config.single_snr_db()?;
    let setup = TrialSetup::from_config_at(config, snr_db, config.tau, config.alpha)?;
    let symbol_count = setup.constellation.len();
    let trials = config.trials;
    let points = with_thread_pool(config.threads, || {
        (0..symbol_count as u64 * trials)
            .into_par_iter()
            .map(|flat| {
                let symbol = (flat / trials) as usize;
                let (tx, xhat) = estimate_trial(&setup, flat, Some(symbol));
                (tx, xhat)
            })
            .collect::<Vec<_>>()
    })?;
    Ok(ScatterResult {
        points,
        expected: setup.moments.expected().to_vec(),
    })
}

/// Detection-region classification over a grid, for region visualizations.
pub fn run_regions(config: &SimConfig) -> Result<Vec<(f64, f64, usize)>> {
    config.validate()?;
    let snr_db = config.single_snr_db()?;
    let setup = TrialSetup::from_config_at(config, snr_db, config.tau, config.alpha)?;
    rasterize_regions(&setup.detector, config.grid_n, config.half_extent)
}

/// Moment table at the configured operating point.
pub fn run_moments(config: &SimConfig) -> Result<MomentTable> {
    config.validate()?;
    let snr_db = config.single_snr_db()?;
    let setup = TrialSetup::from_config_at(config, snr_db, config.tau, config.alpha)?;
    Ok(setup.moments.clone())
}

/// CSV export shared by all SER sweeps. One row per operating point.
pub fn write_ser_csv<W: Write>(results: &[SerResult], mut out: W) -> std::io::Result<()> {
    writeln!(out, "m_antennas,tau,snr_db,alpha,errors,trials,ser,std_err")?;
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.m_antennas,
            r.tau,
            fmt_f64(r.snr_db),
            fmt_f64(r.alpha),
            r.errors,
            r.trials,
            fmt_f64(r.ser()),
            fmt_f64(r.std_err()),
        )?;
    }
    Ok(())
}

/// CSV export for scatter runs: the sample block (`kind = xhat`) followed by
/// the analytic center block (`kind = expected`).
pub fn write_scatter_csv<W: Write>(scatter: &ScatterResult, mut out: W) -> std::io::Result<()> {
    writeln!(out, "kind,symbol_index,re,im")?;
    for (symbol, xhat) in &scatter.points {
        writeln!(out, "xhat,{},{},{}", symbol, fmt_f64(xhat.re), fmt_f64(xhat.im))?;
    }
    for (symbol, e) in scatter.expected.iter().enumerate() {
        writeln!(out, "expected,{},{},{}", symbol, fmt_f64(e.re), fmt_f64(e.im))?;
    }
    Ok(())
}

/// CSV export for region rasterization.
pub fn write_regions_csv<W: Write>(
    rows: &[(f64, f64, usize)],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "re,im,decided_index")?;
    for (re, im, index) in rows {
        writeln!(out, "{},{},{}", fmt_f64(*re), fmt_f64(*im), index)?;
    }
    Ok(())
}
