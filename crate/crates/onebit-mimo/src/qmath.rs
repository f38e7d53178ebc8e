//! Scalar and matrix primitives of the 1-bit quantized receive model:
//! the complex sign quantizer and the arcsine law.

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::FRAC_2_PI;

use crate::error::{Error, Result};

/// Acceptance band around `[-1, 1]` for arcsine-law arguments.
///
/// The arguments fed to [`omega`] by the closed-form moment expressions are
/// bounded by 1 in exact arithmetic; the band absorbs floating-point drift.
pub const OMEGA_CLAMP_BAND: f64 = 1e-12;

/// Arcsine law `(2/pi) * asin(w)`.
///
/// Relates correlations of jointly Gaussian signals before and after 1-bit
/// quantization. Inputs within `OMEGA_CLAMP_BAND` of `[-1, 1]` are clamped;
/// anything further out (or NaN) is a domain error.
pub fn omega(w: f64) -> Result<f64> {
    if !(-1.0 - OMEGA_CLAMP_BAND..=1.0 + OMEGA_CLAMP_BAND).contains(&w) {
        return Err(Error::OmegaOutOfDomain {
            value: w,
            band: OMEGA_CLAMP_BAND,
        });
    }
    let w = w.clamp(-1.0, 1.0);
    if w == 1.0 {
        return Ok(1.0);
    }
    if w == -1.0 {
        return Ok(-1.0);
    }
    Ok((FRAC_2_PI * w.asin()).clamp(-1.0, 1.0))
}

/// Sign with the convention `sgn(0) = +1`.
///
/// Zeros occur with probability 0 for the continuous receive signal, but the
/// quantizer must be total and deterministic.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Output of the 1-bit quantizer: every entry is
/// `sqrt((rho*K + 1)/2) * (+/-1 +/- j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedMatrix {
    entries: Array2<Complex64>,
    rho: f64,
    k_users: usize,
}

impl QuantizedMatrix {
    /// Per-component magnitude `sqrt((rho*K + 1)/2)` of every entry.
    pub fn scale(&self) -> f64 {
        ((self.rho * self.k_users as f64 + 1.0) / 2.0).sqrt()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn k_users(&self) -> usize {
        self.k_users
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }
}

/// 1-bit quantization of a complex matrix: the in-phase and quadrature
/// components are each reduced to their sign and rescaled so that every
/// entry has squared magnitude `rho*K + 1`.
pub fn quantize(c: &Array2<Complex64>, rho: f64, k_users: usize) -> Result<QuantizedMatrix> {
    if rho <= 0.0 || rho.is_nan() {
        return Err(Error::InvalidParam(format!(
            "transmit SNR rho must be positive, got {rho}"
        )));
    }
    if k_users == 0 {
        return Err(Error::InvalidParam("k_users must be at least 1".into()));
    }
    let scale = ((rho * k_users as f64 + 1.0) / 2.0).sqrt();
    let entries = c.mapv(|z| Complex64::new(scale * sgn(z.re), scale * sgn(z.im)));
    Ok(QuantizedMatrix {
        entries,
        rho,
        k_users,
    })
}

/// Kahan compensated accumulator. The moment sums run over `tau` pilot terms
/// of alternating phase, and the equivariance contracts are at 1e-12.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}
