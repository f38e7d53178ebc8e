//! MRC symbol estimation and maximum-likelihood detection against the
//! closed-form expected values, with optional variance-based weights.
//!
//! Detection evaluates the argmin of `w_l * |xhat - center_l|` directly
//! rather than materializing the multiplicatively weighted Voronoi cells;
//! the cells (whose boundaries are circular arcs) are recovered implicitly
//! and can be rasterized for visualization via [`rasterize_regions`].

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moments::MomentTable;
use crate::qmath::QuantizedMatrix;

/// Detection centers and per-center weights.
///
/// `alpha = 0` corresponds to conventional MLD (all weights 1); `alpha = 1`
/// weights each center inversely to the variance of its estimated symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSpec {
    centers: Vec<Complex64>,
    weights: Vec<f64>,
    alpha: f64,
}

impl DetectorSpec {
    pub fn new(centers: Vec<Complex64>, weights: Vec<f64>, alpha: f64) -> Result<Self> {
        if centers.is_empty() || centers.len() != weights.len() {
            return Err(Error::InvalidParam(format!(
                "detector needs matching nonempty centers/weights, got {} and {}",
                centers.len(),
                weights.len()
            )));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Config(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        if weights.iter().any(|&w| w <= 0.0 || w.is_nan()) {
            return Err(Error::InvalidParam(
                "detector weights must be positive".into(),
            ));
        }
        if alpha == 0.0 && weights.iter().any(|&w| w != 1.0) {
            return Err(Error::InvalidParam(
                "alpha = 0 requires unit weights (conventional MLD)".into(),
            ));
        }
        Ok(Self {
            centers,
            weights,
            alpha,
        })
    }

    /// Detector for one operating point: centers are the expected estimated
    /// symbols, weights follow the variance heuristic at `alpha`.
    pub fn from_moments(table: &MomentTable, alpha: f64) -> Result<Self> {
        let weights = make_weights(table.variances(), alpha)?;
        Self::new(table.expected().to_vec(), weights, alpha)
    }

    pub fn centers(&self) -> &[Complex64] {
        &self.centers
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

/// Soft MRC estimate `x_hat = H_hat^H r` (one value per user).
pub fn mrc_estimate(h_hat: &Array2<Complex64>, r: &QuantizedMatrix) -> Result<Vec<Complex64>> {
    let (m, k) = h_hat.dim();
    if r.nrows() != m || r.ncols() != 1 {
        return Err(Error::ShapeMismatch {
            context: "mrc_estimate receive vector",
            expected: (m, 1),
            found: (r.nrows(), r.ncols()),
        });
    }
    let rx = r.entries();
    let mut xhat = Vec::with_capacity(k);
    for user in 0..k {
        let mut acc = Complex64::new(0.0, 0.0);
        for row in 0..m {
            acc += h_hat[[row, user]].conj() * rx[[row, 0]];
        }
        xhat.push(acc);
    }
    Ok(xhat)
}

/// Variance-weighted detection weights `w_l = 1 / (1 + alpha (V_l - 1))`.
pub fn make_weights(variances: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Config(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    variances
        .iter()
        .map(|&v| {
            let denom = 1.0 + alpha * (v - 1.0);
            if denom > 0.0 {
                Ok(1.0 / denom)
            } else {
                Err(Error::InvalidParam(format!(
                    "weight denominator 1 + alpha(V - 1) = {denom} for V = {v}"
                )))
            }
        })
        .collect()
}

/// Maps an estimated symbol to the center minimizing the weighted distance
/// `w_l * |xhat - center_l|`. Ties break to the lowest index, so the decision
/// is a pure function of its arguments.
pub fn detect(xhat: Complex64, spec: &DetectorSpec) -> usize {
    let mut best = 0usize;
    let mut best_distance = f64::INFINITY;
    for (index, (&center, &weight)) in spec.centers.iter().zip(&spec.weights).enumerate() {
        let distance = weight * (xhat - center).norm();
        if distance < best_distance {
            best_distance = distance;
            best = index;
        }
    }
    best
}

/// Classifies an `n x n` grid of the complex plane for region visualization.
///
/// The grid covers the square `[-h, h]^2` where `h` is `half_extent` or, by
/// default, 1.5x the largest center magnitude. Points are emitted in raster
/// order: imaginary axis outer (low to high), real axis inner.
pub fn rasterize_regions(
    spec: &DetectorSpec,
    grid_n: usize,
    half_extent: Option<f64>,
) -> Result<Vec<(f64, f64, usize)>> {
    if grid_n < 2 {
        return Err(Error::InvalidParam(format!(
            "region grid needs at least 2 points per axis, got {grid_n}"
        )));
    }
    let h = match half_extent {
        Some(h) if h > 0.0 => h,
        Some(h) => {
            return Err(Error::InvalidParam(format!(
                "half extent must be positive, got {h}"
            )))
        }
        None => {
            1.5 * spec
                .centers
                .iter()
                .map(|c| c.norm())
                .fold(0.0f64, f64::max)
        }
    };
    if h == 0.0 {
        return Err(Error::InvalidParam(
            "cannot infer region extent from all-zero centers".into(),
        ));
    }
    let step = 2.0 * h / (grid_n - 1) as f64;
    let mut rows = Vec::with_capacity(grid_n * grid_n);
    for iy in 0..grid_n {
        let im = -h + iy as f64 * step;
        for ix in 0..grid_n {
            let re = -h + ix as f64 * step;
            let index = detect(Complex64::new(re, im), spec);
            rows.push((re, im, index));
        }
    }
    Ok(rows)
}
