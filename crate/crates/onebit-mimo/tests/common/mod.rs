//! Shared helpers for the integration suites: brute-force oracles kept
//! independent of the library code paths they check, plus small statistics
//! utilities.
//!
//! Each integration test target compiles this module separately and uses a
//! different subset of it.
#![allow(dead_code)]

use num_complex::Complex64;
use onebit_mimo::moments::Constellation;

/// Scalar arcsine law for the oracles; no clamping, no shared code.
pub fn arcsine_law(w: f64) -> f64 {
    std::f64::consts::FRAC_2_PI * w.asin()
}

/// Brute-force single-user pilot correction constant: term-by-term double
/// loop with the complex products expanded into scalar arithmetic.
pub fn delta_oracle_k1(pilot: &[Complex64], rho: f64) -> f64 {
    let mut total = 0.0;
    for u in 0..pilot.len() {
        for v in 0..pilot.len() {
            if u == v {
                continue;
            }
            let (au, bu) = (pilot[u].re, pilot[u].im);
            let (av, bv) = (pilot[v].re, pilot[v].im);
            // conj(p_u) * p_v and p_u * conj(p_v), expanded
            let re_forward = au * av + bu * bv;
            let im_forward = au * bv - bu * av;
            let re_backward = au * av + bu * bv;
            let im_backward = bu * av - au * bv;
            total += re_forward * arcsine_law(rho * re_backward / (rho + 1.0))
                - im_forward * arcsine_law(rho * im_backward / (rho + 1.0));
        }
    }
    total
}

/// Brute-force estimator scale from its defining expression.
pub fn upsilon_oracle(rho: f64, k_users: usize, tau: usize, delta: f64) -> f64 {
    let tau = tau as f64;
    let rk = rho * k_users as f64 + 1.0;
    std::f64::consts::FRAC_2_PI * rho / rk.powi(2) * tau.powi(2) / (tau + delta).powi(2)
}

pub fn sample_mean(samples: &[Complex64]) -> Complex64 {
    samples.iter().sum::<Complex64>() / samples.len() as f64
}

/// Total (real + imaginary) sample variance about `center`.
pub fn sample_total_variance(samples: &[Complex64], center: Complex64) -> f64 {
    samples.iter().map(|x| (x - center).norm_sqr()).sum::<f64>() / (samples.len() - 1) as f64
}

/// Standard error of the total-variance estimate, from the empirical fourth
/// moment: `sqrt((m4 - v^2) / n)`.
pub fn variance_std_err(samples: &[Complex64], center: Complex64, variance: f64) -> f64 {
    let n = samples.len() as f64;
    let m4 = samples
        .iter()
        .map(|x| (x - center).norm_sqr().powi(2))
        .sum::<f64>()
        / n;
    ((m4 - variance * variance).max(0.0) / n).sqrt()
}

/// Index of the constellation symbol closest to `target`.
pub fn symbol_index(constellation: &Constellation, target: Complex64) -> usize {
    constellation
        .symbols()
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (*a - target)
                .norm()
                .partial_cmp(&(*b - target).norm())
                .unwrap()
        })
        .map(|(i, _)| i)
        .unwrap()
}

/// The canonical same-phase 16-QAM pair `(inner, outer)` used throughout the
/// experiments: `(1+j)/sqrt(10)` and `(3+3j)/sqrt(10)`.
pub fn diagonal_pair(constellation: &Constellation) -> (usize, usize) {
    let scale = 1.0 / 10.0f64.sqrt();
    (
        symbol_index(constellation, Complex64::new(scale, scale)),
        symbol_index(constellation, Complex64::new(3.0 * scale, 3.0 * scale)),
    )
}
