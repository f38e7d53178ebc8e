//! Link-level simulation of the massive MIMO uplink with 1-bit ADCs.
//!
//! The receive chain quantizes each antenna's in-phase and quadrature
//! components to a single bit. This crate implements the resulting pipeline
//! for a single-user uplink: quantized pilot observations feed a scaled
//! least-squares channel estimate, maximum ratio combining produces soft
//! symbol estimates, and detection maps them back to the constellation.
//!
//! The distinguishing piece is analytical: the expected value and total
//! variance of each estimated symbol have closed forms built on the arcsine
//! law, so detection centers need no Monte Carlo calibration, and the
//! per-symbol variances can weight the detection regions (a multiplicatively
//! weighted Voronoi rule) to cut the error rate.
//!
//! Modules follow the pipeline:
//!
//! - [`qmath`] - the 1-bit quantizer and the arcsine law
//! - [`signal`] - reproducible channel/noise streams and the receive model
//! - [`chest`] - pilots and the scaled LS channel estimator
//! - [`moments`] - closed-form symbol statistics and their high-SNR limits
//! - [`detect`] - MRC estimation and (weighted) maximum-likelihood detection
//! - [`harness`] - deterministic parallel Monte Carlo experiments and CSV
//!   output
//!
//! The `examples/` directory holds one runnable program per experiment;
//! the `onebit-mimo` binary exposes the same experiments as subcommands.

pub mod chest;
pub mod detect;
pub mod error;
pub mod harness;
pub mod moments;
pub mod qmath;
pub mod signal;
mod util;

pub use error::{Error, Result};
