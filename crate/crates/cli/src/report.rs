//! Regime, exponent and distortion factor of a single link.

use mimo_distortion::asymptotic::{distortion_factor_correlated, scbr_regime, sep_distortion_exponent};
use mimo_distortion::{CorrelationSpec, SystemConfig};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub regime: String,
    /// Number of eigenvalue terms capped by the bandwidth ratio (0 high, `N_min` low).
    pub l: usize,
    pub delta: f64,
    pub mu: f64,
    pub log_power: u8,
    /// Absent when no separation bracket applies.
    pub delta_sep: Option<f64>,
}

pub fn asymptotic_report(cfg: &SystemConfig, corr: &CorrelationSpec) -> CliResult<AsymptoticReport> {
    let regime = scbr_regime(cfg);
    let form = distortion_factor_correlated(cfg, corr).map_err(CliError::Numerical)?;
    Ok(AsymptoticReport {
        regime: regime.kind.label().to_string(),
        l: regime.partition_l,
        delta: form.delta,
        mu: form.mu,
        log_power: form.log_power,
        delta_sep: sep_distortion_exponent(cfg).ok(),
    })
}

impl AsymptoticReport {
    pub fn human(&self) -> String {
        let mut s = format!("{}, l={}, Δ*={}, μ*={}, ε={}", self.regime, self.l, self.delta, self.mu, self.log_power);
        if self.log_power > 0 {
            s.push_str(&format!(" (ED ≈ μ*·(ln ρ)^{}·ρ^-Δ*)", self.log_power));
        }
        match self.delta_sep {
            Some(d) => s.push_str(&format!(", Δ*_sep={d}")),
            None => s.push_str(", Δ*_sep=undefined"),
        }
        s
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
