//! Channel/noise generation and the quantized uplink receive model for the
//! pilot and data phases.
//!
//! All randomness flows through [`RngStream`], a counter-based (seed, stream)
//! pair: trials map to disjoint stream ranges, so results are bit-identical
//! regardless of thread count or scheduling.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::chest::PilotMatrix;
use crate::error::{Error, Result};
use crate::qmath::{quantize, QuantizedMatrix};

/// Number of stream ids reserved per Monte Carlo trial.
pub const SUBSTREAM_STRIDE: u64 = 4;

/// Fixed substream offsets within one trial.
///
/// This is the offset convention that keeps the channel draw, pilot-phase
/// noise, data-phase noise, and symbol draw of a single trial on disjoint
/// RNG streams: reusing a trial id never aliases noise between phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substream {
    Channel = 0,
    PilotNoise = 1,
    DataNoise = 2,
    Symbol = 3,
}

/// A reproducible random stream, identified by `(seed, stream_id)`.
///
/// Identical pairs yield identical draw sequences; distinct stream ids yield
/// statistically independent streams (ChaCha8 supports 2^64 of them).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Stream for one substream of one trial, per the layout above.
    pub fn for_trial(seed: u64, trial_id: u64, substream: Substream) -> Self {
        Self::new(
            seed,
            trial_id
                .wrapping_mul(SUBSTREAM_STRIDE)
                .wrapping_add(substream as u64),
        )
    }

    /// Instantiates the generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

/// I.i.d. CN(0,1) matrix: real and imaginary parts are each N(0, 1/2).
///
/// Entries are drawn in row-major order, real part first, so the output is a
/// pure function of `(rows, cols, stream)`.
pub fn sample_cn01(rows: usize, cols: usize, stream: &RngStream) -> Array2<Complex64> {
    assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
    let mut rng = stream.rng();
    Array2::from_shape_simple_fn((rows, cols), || {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    })
}

/// One draw of the M x K Rayleigh-fading uplink channel with CN(0,1) entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    h: Array2<Complex64>,
}

impl ChannelRealization {
    pub fn sample(m_antennas: usize, k_users: usize, stream: &RngStream) -> Self {
        Self {
            h: sample_cn01(m_antennas, k_users, stream),
        }
    }

    pub fn from_matrix(h: Array2<Complex64>) -> Self {
        Self { h }
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.h
    }

    pub fn m_antennas(&self) -> usize {
        self.h.nrows()
    }

    pub fn k_users(&self) -> usize {
        self.h.ncols()
    }
}

/// Data-phase receive signal after the ADCs: `Q(sqrt(rho) H x + z)` with
/// fresh unit-variance AWGN drawn from `stream`.
pub fn uplink_data_rx(
    h: &ChannelRealization,
    x: &[Complex64],
    rho: f64,
    stream: &RngStream,
) -> Result<QuantizedMatrix> {
    let z = sample_cn01(h.m_antennas(), 1, stream);
    uplink_data_rx_with_noise(h, x, rho, &z)
}

/// [`uplink_data_rx`] with caller-supplied noise, so tests can force `z = 0`.
pub fn uplink_data_rx_with_noise(
    h: &ChannelRealization,
    x: &[Complex64],
    rho: f64,
    noise: &Array2<Complex64>,
) -> Result<QuantizedMatrix> {
    let (m, k) = (h.m_antennas(), h.k_users());
    if x.len() != k {
        return Err(Error::ShapeMismatch {
            context: "uplink_data_rx symbol vector",
            expected: (k, 1),
            found: (x.len(), 1),
        });
    }
    if noise.dim() != (m, 1) {
        return Err(Error::ShapeMismatch {
            context: "uplink_data_rx noise",
            expected: (m, 1),
            found: noise.dim(),
        });
    }
    let sqrt_rho = rho.sqrt();
    let hm = h.matrix();
    let mut y = Array2::zeros((m, 1));
    for row in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for (col, &xk) in x.iter().enumerate() {
            acc += hm[[row, col]] * xk;
        }
        y[[row, 0]] = sqrt_rho * acc + noise[[row, 0]];
    }
    quantize(&y, rho, k)
}

/// Pilot-phase receive signal after the ADCs: `Q(sqrt(rho) H P^H + Z_p)`
/// with fresh i.i.d. CN(0,1) noise drawn from `stream`.
pub fn uplink_pilot_rx(
    h: &ChannelRealization,
    pilots: &PilotMatrix,
    rho: f64,
    stream: &RngStream,
) -> Result<QuantizedMatrix> {
    let z = sample_cn01(h.m_antennas(), pilots.tau(), stream);
    uplink_pilot_rx_with_noise(h, pilots, rho, &z)
}

/// [`uplink_pilot_rx`] with caller-supplied noise, so tests can force `Z = 0`.
pub fn uplink_pilot_rx_with_noise(
    h: &ChannelRealization,
    pilots: &PilotMatrix,
    rho: f64,
    noise: &Array2<Complex64>,
) -> Result<QuantizedMatrix> {
    let (m, k) = (h.m_antennas(), h.k_users());
    let tau = pilots.tau();
    if pilots.k_users() != k {
        return Err(Error::ShapeMismatch {
            context: "uplink_pilot_rx pilot matrix",
            expected: (tau, k),
            found: pilots.entries().dim(),
        });
    }
    if noise.dim() != (m, tau) {
        return Err(Error::ShapeMismatch {
            context: "uplink_pilot_rx noise",
            expected: (m, tau),
            found: noise.dim(),
        });
    }
    let sqrt_rho = rho.sqrt();
    let hm = h.matrix();
    let p = pilots.entries();
    let mut y = Array2::zeros((m, tau));
    for row in 0..m {
        for u in 0..tau {
            let mut acc = Complex64::new(0.0, 0.0);
            for col in 0..k {
                acc += hm[[row, col]] * p[[u, col]].conj();
            }
            y[[row, u]] = sqrt_rho * acc + noise[[row, u]];
        }
    }
    quantize(&y, rho, k)
}
