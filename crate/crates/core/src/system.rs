//! Link configuration and spatial-correlation description.

use crate::detkit::{symmetric_eigen, EigenvalueList, RealMatrix};
use crate::{Error, Result};

/// Antenna counts, source-to-channel bandwidth ratio `η` and source power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub eta: f64,
    pub p_s: f64,
}

impl SystemConfig {
    pub fn new(n_t: usize, n_r: usize, eta: f64, p_s: f64) -> Result<Self> {
        if n_t == 0 || n_r == 0 {
            return Err(Error::InvalidConfig(format!("antenna counts must be positive, got {n_t}x{n_r}")));
        }
        if n_t.max(n_r) > 32 {
            return Err(Error::InvalidConfig(format!("antenna counts above 32 are not supported, got {n_t}x{n_r}")));
        }
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::InvalidConfig(format!("bandwidth ratio must be positive, got {eta}")));
        }
        if !(p_s.is_finite() && p_s > 0.0) {
            return Err(Error::InvalidConfig(format!("source power must be positive, got {p_s}")));
        }
        Ok(SystemConfig { n_t, n_r, eta, p_s })
    }

    pub fn n_min(&self) -> usize {
        self.n_t.min(self.n_r)
    }

    pub fn n_max(&self) -> usize {
        self.n_t.max(self.n_r)
    }

    /// `|N_t − N_r|`.
    pub fn antenna_gap(&self) -> usize {
        self.n_max() - self.n_min()
    }

    /// Exponent `2/η` applied to the channel determinant.
    pub fn det_exponent(&self) -> f64 {
        2.0 / self.eta
    }

    /// The same link with transmit and receive counts exchanged.
    pub fn swapped(&self) -> Self {
        SystemConfig { n_t: self.n_r, n_r: self.n_t, ..*self }
    }
}

/// Spatial correlation on the side of the link with fewer antennas.
#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationSpec {
    Uncorrelated,
    /// Correlation matrix given by its ascending eigenvalues (diagonal in its eigenbasis).
    Eigenvalues(EigenvalueList),
    /// `Σ_ij = r^{|i−j|}` with `0 < r < 1`.
    Exponential(f64),
}

impl CorrelationSpec {
    pub fn exponential(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidConfig(format!("exponential correlation needs 0 < r < 1, got {r}")));
        }
        Ok(CorrelationSpec::Exponential(r))
    }

    pub fn eigenvalues(values: Vec<f64>) -> Result<Self> {
        Ok(CorrelationSpec::Eigenvalues(EigenvalueList::new(values)?))
    }

    /// Checks the description against the link; eigenvalue lists must have `N_min` entries.
    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        match self {
            CorrelationSpec::Uncorrelated => Ok(()),
            CorrelationSpec::Exponential(r) => {
                if !(*r > 0.0 && *r < 1.0) {
                    return Err(Error::InvalidConfig(format!("exponential correlation needs 0 < r < 1, got {r}")));
                }
                Ok(())
            }
            CorrelationSpec::Eigenvalues(list) => {
                if list.len() != cfg.n_min() {
                    return Err(Error::InvalidConfig(format!(
                        "{} eigenvalues given for a link with {} antennas on its smaller side",
                        list.len(),
                        cfg.n_min()
                    )));
                }
                Ok(())
            }
        }
    }

    /// The `N_min × N_min` correlation matrix.
    pub fn matrix(&self, cfg: &SystemConfig) -> Result<RealMatrix> {
        self.validate(cfg)?;
        let n = cfg.n_min();
        match self {
            CorrelationSpec::Uncorrelated => RealMatrix::identity(n),
            CorrelationSpec::Exponential(r) => Ok(exponential_correlation(n, *r)?.0),
            CorrelationSpec::Eigenvalues(list) => {
                let v = list.values();
                RealMatrix::from_fn(n, n, |i, j| if i == j { v[i] } else { 0.0 })
            }
        }
    }

    /// Ascending eigenvalues of the correlation matrix; all ones when uncorrelated.
    pub fn eigenvalues_for(&self, cfg: &SystemConfig) -> Result<Vec<f64>> {
        self.validate(cfg)?;
        match self {
            CorrelationSpec::Uncorrelated => Ok(vec![1.0; cfg.n_min()]),
            CorrelationSpec::Eigenvalues(list) => Ok(list.values().to_vec()),
            CorrelationSpec::Exponential(r) => Ok(exponential_correlation(cfg.n_min(), *r)?.1),
        }
    }
}

/// Exponential correlation matrix `r^{|i−j|}` and its ascending eigenvalues.
pub fn exponential_correlation(n: usize, r: f64) -> Result<(RealMatrix, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidConfig("correlation matrix order must be positive".into()));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidConfig(format!("exponential correlation needs 0 < r < 1, got {r}")));
    }
    let m = RealMatrix::from_fn(n, n, |i, j| r.powi((i as i32 - j as i32).abs()))?;
    let vals = if n == 2 { vec![1.0 - r, 1.0 + r] } else { symmetric_eigen(&m)?.0 };
    Ok((m, vals))
}
