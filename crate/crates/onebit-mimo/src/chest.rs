//! Pilot construction and the scaled least-squares channel estimator for
//! 1-bit quantized pilot observations, including the pilot-dependent
//! correction constant `delta` and the MSE-minimizing scale `upsilon`.

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};
use crate::qmath::{omega, KahanSum, QuantizedMatrix};

/// Tolerance for the unit-modulus pilot entry check.
pub const PILOT_MODULUS_TOL: f64 = 1e-12;

/// Tolerance for the pilot orthogonality check `P^H P = tau I`.
pub const PILOT_ORTHOGONALITY_TOL: f64 = 1e-9;

/// Length-tau pilot sequence of a single user; every entry has unit modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct Pilot {
    entries: Vec<Complex64>,
}

impl Pilot {
    /// Validates unit modulus at construction; no silent renormalization.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParam("pilot length tau must be >= 1".into()));
        }
        for (index, p) in entries.iter().enumerate() {
            let modulus = p.norm();
            if (modulus - 1.0).abs() > PILOT_MODULUS_TOL {
                return Err(Error::PilotNotUnitModulus {
                    index,
                    modulus,
                    tol: PILOT_MODULUS_TOL,
                });
            }
        }
        Ok(Self { entries })
    }

    /// Second column of the tau-point DFT matrix:
    /// `p_u = exp(-j (u-1) 2 pi / tau)` for `u = 1..tau`.
    pub fn dft(tau: usize) -> Result<Self> {
        if tau == 0 {
            return Err(Error::InvalidParam("pilot length tau must be >= 1".into()));
        }
        let entries = (0..tau)
            .map(|u| {
                let phase = -(u as f64) * 2.0 * PI / tau as f64;
                Complex64::from_polar(1.0, phase)
            })
            .collect();
        Self::new(entries)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn tau(&self) -> usize {
        self.entries.len()
    }
}

/// tau x K pilot matrix with unit-modulus entries and orthogonal columns
/// (`P^H P = tau I`).
#[derive(Debug, Clone, PartialEq)]
pub struct PilotMatrix {
    entries: Array2<Complex64>,
}

impl PilotMatrix {
    pub fn new(entries: Array2<Complex64>) -> Result<Self> {
        let (tau, k) = entries.dim();
        if tau == 0 || k == 0 {
            return Err(Error::InvalidParam(
                "pilot matrix must have tau >= 1 and K >= 1".into(),
            ));
        }
        if tau < k {
            return Err(Error::InvalidParam(format!(
                "pilot length tau = {tau} must be at least K = {k}"
            )));
        }
        for (index, p) in entries.iter().enumerate() {
            let modulus = p.norm();
            if (modulus - 1.0).abs() > PILOT_MODULUS_TOL {
                return Err(Error::PilotNotUnitModulus {
                    index,
                    modulus,
                    tol: PILOT_MODULUS_TOL,
                });
            }
        }
        let mut deviation: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                let mut acc = Complex64::new(0.0, 0.0);
                for u in 0..tau {
                    acc += entries[[u, a]].conj() * entries[[u, b]];
                }
                let target = if a == b { tau as f64 } else { 0.0 };
                deviation = deviation.max((acc - target).norm());
            }
        }
        if deviation > PILOT_ORTHOGONALITY_TOL {
            return Err(Error::PilotNotOrthogonal { deviation });
        }
        Ok(Self { entries })
    }

    /// Single-user pilot matrix (tau x 1).
    pub fn from_pilot(pilot: &Pilot) -> Self {
        let entries =
            Array2::from_shape_vec((pilot.tau(), 1), pilot.entries().to_vec()).unwrap();
        Self { entries }
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn tau(&self) -> usize {
        self.entries.nrows()
    }

    pub fn k_users(&self) -> usize {
        self.entries.ncols()
    }

    /// Column k as a single-user pilot.
    pub fn column(&self, k: usize) -> Pilot {
        Pilot {
            entries: self.entries.column(k).to_vec(),
        }
    }
}

/// Pilot-dependent constants of the scaled LS estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationConstants {
    delta: f64,
    upsilon: f64,
}

impl EstimationConstants {
    /// Single-user constants via the specialized `delta` form.
    pub fn for_pilot(pilot: &Pilot, rho: f64) -> Result<Self> {
        let delta = delta_single_user(pilot, rho);
        let upsilon = upsilon(rho, 1, pilot.tau(), delta)?;
        Ok(Self { delta, upsilon })
    }

    /// General-K constants via the full double sum.
    pub fn for_pilot_matrix(pilots: &PilotMatrix, rho: f64) -> Result<Self> {
        let delta = delta_general(pilots, rho);
        let upsilon = upsilon(rho, pilots.k_users(), pilots.tau(), delta)?;
        Ok(Self { delta, upsilon })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn upsilon(&self) -> f64 {
        self.upsilon
    }
}

/// General-K pilot correction constant: the double sum over ordered pilot
/// index pairs `u != v`, averaged over users.
///
/// For K = 1 this agrees with [`delta_single_user`] to within summation
/// round-off; the two are kept as independent code paths.
pub fn delta_general(pilots: &PilotMatrix, rho: f64) -> f64 {
    let p = pilots.entries();
    let (tau, k) = p.dim();
    let denom = rho * k as f64 + 1.0;
    let mut sum = KahanSum::default();
    for u in 0..tau {
        for v in 0..tau {
            if u == v {
                continue;
            }
            // Cross-correlation of pilot rows u and v, summed over users.
            let mut cross = Complex64::new(0.0, 0.0);
            for i in 0..k {
                cross += p[[u, i]] * p[[v, i]].conj();
            }
            let omega_re = omega(rho * cross.re / denom)
                .expect("general delta argument is bounded by rho*K/(rho*K+1)");
            let omega_im = omega(rho * cross.im / denom)
                .expect("general delta argument is bounded by rho*K/(rho*K+1)");
            for i in 0..k {
                let pair = p[[u, i]].conj() * p[[v, i]];
                sum.add(pair.re * omega_re - pair.im * omega_im);
            }
        }
    }
    sum.value() / k as f64
}

/// Single-user pilot correction constant (the K = 1 specialization).
pub fn delta_single_user(pilot: &Pilot, rho: f64) -> f64 {
    let p = pilot.entries();
    let denom = rho + 1.0;
    let mut sum = KahanSum::default();
    for (u, &pu) in p.iter().enumerate() {
        for (v, &pv) in p.iter().enumerate() {
            if u == v {
                continue;
            }
            let forward = pu.conj() * pv;
            let backward = pu * pv.conj();
            let omega_re = omega(rho * backward.re / denom)
                .expect("single-user delta argument is bounded by rho/(rho+1)");
            let omega_im = omega(rho * backward.im / denom)
                .expect("single-user delta argument is bounded by rho/(rho+1)");
            sum.add(forward.re * omega_re - forward.im * omega_im);
        }
    }
    sum.value()
}

/// MSE-minimizing squared scale of the LS estimate:
/// `(2/pi) * rho / (rho K + 1)^2 * tau^2 / (tau + delta)^2`.
pub fn upsilon(rho: f64, k_users: usize, tau: usize, delta: f64) -> Result<f64> {
    if rho <= 0.0 || rho.is_nan() {
        return Err(Error::InvalidParam(format!(
            "transmit SNR rho must be positive, got {rho}"
        )));
    }
    if k_users == 0 || tau == 0 {
        return Err(Error::InvalidParam(
            "k_users and tau must be at least 1".into(),
        ));
    }
    let tau_f = tau as f64;
    let scaled = tau_f + delta;
    if scaled == 0.0 {
        return Err(Error::DegeneratePilot {
            tau,
            delta,
            value: scaled,
        });
    }
    let rk = rho * k_users as f64 + 1.0;
    Ok(FRAC_2_PI * rho / (rk * rk) * (tau_f / scaled) * (tau_f / scaled))
}

/// Scaled LS channel estimate from the quantized pilot observation:
/// `H_hat = sqrt(upsilon) * R_p * P` (M x K).
pub fn estimate_channel(
    r_p: &QuantizedMatrix,
    pilots: &PilotMatrix,
    constants: &EstimationConstants,
) -> Result<Array2<Complex64>> {
    let (m, tau) = (r_p.nrows(), r_p.ncols());
    if tau != pilots.tau() {
        return Err(Error::ShapeMismatch {
            context: "estimate_channel pilot observation",
            expected: (m, pilots.tau()),
            found: (m, tau),
        });
    }
    let scale = constants.upsilon().sqrt();
    let mut h_hat = r_p.entries().dot(pilots.entries());
    h_hat.mapv_inplace(|z| scale * z);
    Ok(h_hat)
}
