//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument to the arcsine law fell outside `[-1 - EPS, 1 + EPS]`.
    #[error("arcsine-law argument {value} outside [-1, 1] (clamp band {band})")]
    OmegaOutOfDomain { value: f64, band: f64 },

    /// Matrix/vector dimensions do not conform.
    #[error("shape mismatch in {context}: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },

    /// A scenario parameter violates its precondition.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// Pilot entry magnitude deviates from 1 beyond tolerance.
    #[error("pilot entry {index} has modulus {modulus}, expected 1 (tolerance {tol})")]
    PilotNotUnitModulus {
        index: usize,
        modulus: f64,
        tol: f64,
    },

    /// Multi-user pilot matrix columns are not orthogonal.
    #[error("pilot matrix is not orthogonal: max |P^H P - tau I| entry = {deviation}")]
    PilotNotOrthogonal { deviation: f64 },

    /// `tau + delta` vanished, so the estimator scale is undefined.
    #[error("degenerate pilot: tau + delta = {value} (tau = {tau}, delta = {delta})")]
    DegeneratePilot { tau: usize, delta: f64, value: f64 },

    /// Constellation mean symbol power deviates from 1 beyond tolerance.
    #[error("constellation \"{name}\" has mean power {mean_power}, expected 1 (tolerance {tol})")]
    ConstellationNotNormalized {
        name: String,
        mean_power: f64,
        tol: f64,
    },

    /// Two constellation symbols coincide.
    #[error("constellation \"{name}\" has duplicate symbols at indices {first} and {second}")]
    DuplicateSymbol {
        name: String,
        first: usize,
        second: usize,
    },

    /// A symbol at the origin has no defined phase direction.
    #[error("symbol {index} is at the origin; s/|s| is undefined")]
    ZeroSymbol { index: usize },

    /// A closed-form variance came out negative beyond floating-point slack.
    #[error("variance formula produced {value}, below the -{tol} internal-consistency bound")]
    NegativeVariance { value: f64, tol: f64 },

    /// Configuration file or flag error.
    #[error("config error: {0}")]
    Config(String),

    /// Underlying I/O failure while reading config or writing results.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
