//! Closed-form expected value and variance of the MRC symbol estimates
//! under 1-bit quantization, plus their high-SNR limits.
//!
//! The expected value traces each pilot symbol through the arcsine law; the
//! variance follows from the fixed modulus of the quantizer output. Both are
//! exact for the single-user pipeline, which makes them usable as detection
//! centers without any Monte Carlo calibration.

use num_complex::Complex64;
use std::f64::consts::FRAC_2_PI;
use std::io::Write;

use crate::chest::{EstimationConstants, Pilot};
use crate::error::{Error, Result};
use crate::qmath::{omega, KahanSum};
use crate::util::fmt_f64;

/// Tolerance for the unit mean-power constellation check.
pub const CONSTELLATION_POWER_TOL: f64 = 1e-12;

/// Variance results in `(-VARIANCE_FLOOR_TOL, 0)` are floored to zero with a
/// warning; anything below is an internal-consistency error.
pub const VARIANCE_FLOOR_TOL: f64 = 1e-9;

/// Ordered set of transmit symbols with unit mean power.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    symbols: Vec<Complex64>,
    name: String,
}

impl Constellation {
    /// Validates unit mean power and pairwise distinctness; no silent
    /// renormalization.
    pub fn new(name: impl Into<String>, symbols: Vec<Complex64>) -> Result<Self> {
        let name = name.into();
        if symbols.is_empty() {
            return Err(Error::InvalidParam(format!(
                "constellation \"{name}\" must contain at least one symbol"
            )));
        }
        let mean_power =
            symbols.iter().map(|s| s.norm_sqr()).sum::<f64>() / symbols.len() as f64;
        if (mean_power - 1.0).abs() > CONSTELLATION_POWER_TOL {
            return Err(Error::ConstellationNotNormalized {
                name,
                mean_power,
                tol: CONSTELLATION_POWER_TOL,
            });
        }
        for first in 0..symbols.len() {
            for second in (first + 1)..symbols.len() {
                if symbols[first] == symbols[second] {
                    return Err(Error::DuplicateSymbol {
                        name,
                        first,
                        second,
                    });
                }
            }
        }
        Ok(Self { symbols, name })
    }

    /// Gray-labeled 16-QAM scaled by `1/sqrt(10)` for unit mean power.
    ///
    /// Symbol index `b3 b2 b1 b0` maps `(b3 b2)` to the in-phase level and
    /// `(b1 b0)` to the quadrature level through the Gray order
    /// `00, 01, 11, 10 -> -3, -1, +1, +3`.
    pub fn qam16() -> Self {
        const GRAY_LEVELS: [(u8, f64); 4] =
            [(0b00, -3.0), (0b01, -1.0), (0b11, 1.0), (0b10, 3.0)];
        let scale = 1.0 / 10.0f64.sqrt();
        let level = |bits: u8| -> f64 {
            GRAY_LEVELS
                .iter()
                .find(|(code, _)| *code == bits)
                .map(|(_, amp)| amp * scale)
                .unwrap()
        };
        let symbols = (0u8..16)
            .map(|idx| Complex64::new(level(idx >> 2), level(idx & 0b11)))
            .collect();
        Self::new("16qam", symbols).expect("16-QAM is normalized by construction")
    }

    /// Gray-labeled QPSK scaled by `1/sqrt(2)`.
    pub fn qpsk() -> Self {
        let a = 1.0 / 2.0f64.sqrt();
        let symbols = vec![
            Complex64::new(a, a),
            Complex64::new(-a, a),
            Complex64::new(-a, -a),
            Complex64::new(a, -a),
        ];
        Self::new("qpsk", symbols).expect("QPSK is normalized by construction")
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// Expected value of the MRC estimate for transmit symbol `s`.
///
/// `delta` is the pilot correction constant at the same `rho`
/// (see [`crate::chest::delta_single_user`]).
pub fn expected_symbol(
    s: Complex64,
    pilot: &Pilot,
    rho: f64,
    m_antennas: usize,
    delta: f64,
) -> Complex64 {
    let tau = pilot.tau() as f64;
    let denom = ((rho + 1.0) * (rho * s.norm_sqr() + 1.0)).sqrt();
    let lead = (FRAC_2_PI * rho).sqrt() * m_antennas as f64 * tau / (tau + delta);
    let mut re = KahanSum::default();
    let mut im = KahanSum::default();
    for &pu in pilot.entries() {
        let rotated = pu * s;
        let omega_re = omega(rho * rotated.re / denom)
            .expect("expected-symbol argument is bounded by 1 in exact arithmetic");
        let omega_im = omega(rho * rotated.im / denom)
            .expect("expected-symbol argument is bounded by 1 in exact arithmetic");
        let term = pu.conj() * Complex64::new(omega_re, omega_im);
        re.add(term.re);
        im.add(term.im);
    }
    lead * Complex64::new(re.value(), im.value())
}

/// Total variance `E[|x_hat - E|^2]` of the MRC estimate for symbol `s`.
///
/// Nonnegative in exact arithmetic; results in `(-1e-9, 0)` are floored to
/// zero with a warning, anything lower reports an internal inconsistency.
pub fn symbol_variance(
    s: Complex64,
    pilot: &Pilot,
    rho: f64,
    m_antennas: usize,
    delta: f64,
) -> Result<f64> {
    let expected = expected_symbol(s, pilot, rho, m_antennas, delta);
    let tau = pilot.tau() as f64;
    let m = m_antennas as f64;
    let value = FRAC_2_PI * rho * m * tau * tau / (tau + delta) - expected.norm_sqr() / m;
    if value >= 0.0 {
        Ok(value)
    } else if value > -VARIANCE_FLOOR_TOL {
        eprintln!(
            "warning: symbol variance {value:e} for s = {s} floored to 0 \
             (floating-point drift)"
        );
        Ok(0.0)
    } else {
        Err(Error::NegativeVariance {
            value,
            tol: VARIANCE_FLOOR_TOL,
        })
    }
}

/// High-SNR limit of the pilot correction constant.
pub fn delta_bar(pilot: &Pilot) -> f64 {
    let p = pilot.entries();
    let mut sum = KahanSum::default();
    for (u, &pu) in p.iter().enumerate() {
        for (v, &pv) in p.iter().enumerate() {
            if u == v {
                continue;
            }
            let forward = pu.conj() * pv;
            let backward = pu * pv.conj();
            let omega_re = omega(backward.re).expect("|Re[pu pv*]| <= 1 for unit-modulus pilots");
            let omega_im = omega(backward.im).expect("|Im[pu pv*]| <= 1 for unit-modulus pilots");
            sum.add(forward.re * omega_re - forward.im * omega_im);
        }
    }
    sum.value()
}

/// High-SNR limit of `E / sqrt(rho)`: depends on `s` only through `s/|s|`.
///
/// The direction is reconstructed from the phase of `s`, so symbols sharing
/// a phase produce bit-identical results even where the arcsine law is
/// ill-conditioned (its derivative is unbounded at the `+/-1` endpoints the
/// aligned pilot terms reach).
pub fn asymptotic_expected(
    s: Complex64,
    pilot: &Pilot,
    m_antennas: usize,
    delta_bar: f64,
) -> Result<Complex64> {
    if s.norm() == 0.0 {
        return Err(Error::ZeroSymbol { index: 0 });
    }
    let direction = Complex64::from_polar(1.0, s.arg());
    let tau = pilot.tau() as f64;
    let lead = FRAC_2_PI.sqrt() * m_antennas as f64 * tau / (tau + delta_bar);
    let mut re = KahanSum::default();
    let mut im = KahanSum::default();
    for &pu in pilot.entries() {
        let rotated = pu * direction;
        let omega_re = omega(rotated.re)
            .expect("asymptotic argument is bounded by 1 for unit-modulus pilots");
        let omega_im = omega(rotated.im)
            .expect("asymptotic argument is bounded by 1 for unit-modulus pilots");
        let term = pu.conj() * Complex64::new(omega_re, omega_im);
        re.add(term.re);
        im.add(term.im);
    }
    Ok(lead * Complex64::new(re.value(), im.value()))
}

/// High-SNR limits of the symbol moments: `E/sqrt(rho)` and `V/rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticMoments {
    expected_scaled: Vec<Complex64>,
    variance_scaled: Vec<f64>,
    delta_bar: f64,
}

impl AsymptoticMoments {
    pub fn compute(
        constellation: &Constellation,
        pilot: &Pilot,
        m_antennas: usize,
    ) -> Result<Self> {
        let bar = delta_bar(pilot);
        let tau = pilot.tau() as f64;
        let m = m_antennas as f64;
        let mut expected_scaled = Vec::with_capacity(constellation.len());
        let mut variance_scaled = Vec::with_capacity(constellation.len());
        for (index, &s) in constellation.symbols().iter().enumerate() {
            if s.norm() == 0.0 {
                return Err(Error::ZeroSymbol { index });
            }
            let e = asymptotic_expected(s, pilot, m_antennas, bar)?;
            variance_scaled.push(FRAC_2_PI * m * tau * tau / (tau + bar) - e.norm_sqr() / m);
            expected_scaled.push(e);
        }
        Ok(Self {
            expected_scaled,
            variance_scaled,
            delta_bar: bar,
        })
    }

    pub fn expected_scaled(&self) -> &[Complex64] {
        &self.expected_scaled
    }

    pub fn variance_scaled(&self) -> &[f64] {
        &self.variance_scaled
    }

    pub fn delta_bar(&self) -> f64 {
        self.delta_bar
    }
}

/// Per-symbol expected value and variance for one operating point, with the
/// shared pilot constants computed once.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    symbols: Vec<Complex64>,
    expected: Vec<Complex64>,
    variance: Vec<f64>,
    constants: EstimationConstants,
    rho: f64,
    m_antennas: usize,
    tau: usize,
}

impl MomentTable {
    pub fn compute(
        constellation: &Constellation,
        pilot: &Pilot,
        rho: f64,
        m_antennas: usize,
    ) -> Result<Self> {
        if m_antennas == 0 {
            return Err(Error::InvalidParam("m_antennas must be at least 1".into()));
        }
        let constants = EstimationConstants::for_pilot(pilot, rho)?;
        let delta = constants.delta();
        let tau = pilot.tau();
        let mut expected = Vec::with_capacity(constellation.len());
        let mut variance = Vec::with_capacity(constellation.len());
        for &s in constellation.symbols() {
            expected.push(expected_symbol(s, pilot, rho, m_antennas, delta));
            variance.push(symbol_variance(s, pilot, rho, m_antennas, delta)?);
        }
        let table = Self {
            symbols: constellation.symbols().to_vec(),
            expected,
            variance,
            constants,
            rho,
            m_antennas,
            tau,
        };
        table.check_second_moment_identity()?;
        Ok(table)
    }

    /// The identity `V + |E|^2 / M = (2/pi) rho M tau^2 / (tau + delta)`,
    /// which ties the mean and variance formulas together; violation
    /// indicates a bug.
    fn check_second_moment_identity(&self) -> Result<()> {
        let target = FRAC_2_PI * self.rho * self.m_antennas as f64 * (self.tau as f64).powi(2)
            / (self.tau as f64 + self.constants.delta());
        for (index, (&v, e)) in self.variance.iter().zip(&self.expected).enumerate() {
            let lhs = v + e.norm_sqr() / self.m_antennas as f64;
            if (lhs - target).abs() > 1e-9 * target.abs().max(1.0) {
                return Err(Error::InvalidParam(format!(
                    "second-moment identity violated at symbol {index}: {lhs} vs {target}"
                )));
            }
        }
        Ok(())
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn expected(&self) -> &[Complex64] {
        &self.expected
    }

    pub fn variances(&self) -> &[f64] {
        &self.variance
    }

    pub fn constants(&self) -> &EstimationConstants {
        &self.constants
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn m_antennas(&self) -> usize {
        self.m_antennas
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// CSV export: one row per symbol, floats at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "symbol_re,symbol_im,e_re,e_im,var")?;
        for ((s, e), v) in self.symbols.iter().zip(&self.expected).zip(&self.variance) {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(s.re),
                fmt_f64(s.im),
                fmt_f64(e.re),
                fmt_f64(e.im),
                fmt_f64(*v),
            )?;
        }
        Ok(())
    }
}

/// Convenience wrapper matching the one-call batch evaluation.
pub fn moment_table(
    constellation: &Constellation,
    pilot: &Pilot,
    rho: f64,
    m_antennas: usize,
) -> Result<MomentTable> {
    MomentTable::compute(constellation, pilot, rho, m_antennas)
}
