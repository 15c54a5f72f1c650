//! Optimum expected end-to-end distortion of a white Gaussian source sent
//! over an outage-free block-fading MIMO link.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: Gamma family, incomplete gamma, Kummer `Φ` and Tricomi `Ψ`
//!   confluent hypergeometric functions, plus the quadrature used as their
//!   independent oracle.
//! - [`detkit`]: small dense determinants, closed-form Gamma-structured
//!   Hankel/Toeplitz determinants, Vandermonde helpers and a Jacobi
//!   eigensolver.
//! - [`system`]: the antenna/bandwidth configuration and the spatial
//!   correlation description shared by every formula.
//! - [`exact`]: the any-SNR expected distortion for uncorrelated and
//!   correlated channels.
//! - [`asymptotic`]: distortion exponent and distortion factor in the three
//!   bandwidth-ratio regimes.
//! - [`mcsim`]: a Monte Carlo channel simulator used as an independent check
//!   of the analytic results, plus the Alamouti / spatial-multiplexing closed
//!   forms for the 2x2 link.
//! - [`curve`]: the SNR-indexed table exchanged with the command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod asymptotic;
pub mod curve;
pub mod detkit;
mod error;
pub mod exact;
pub mod mcsim;
pub mod specfun;
pub mod system;

pub use asymptotic::{AsymptoticForm, RegimeKind, ScbrRegime};
pub use curve::{CurveRow, DistortionCurve};
pub use error::{Error, Result};
pub use mcsim::McEstimate;
pub use system::{CorrelationSpec, SystemConfig};

/// Converts an SNR in dB to the linear ratio `10^(dB/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear SNR to dB.
pub fn linear_to_db(rho: f64) -> f64 {
    10.0 * rho.log10()
}
