//! Expected distortion at any SNR, from determinants of Gamma-weighted
//! confluent hypergeometric entries.

use rayon::prelude::*;

use crate::asymptotic::{correlated_denominator, ln_normaliser, DEGENERATE_SPACING, ILL_CONDITIONED_SPACING};
use crate::curve::{CurveRow, DistortionCurve};
use crate::detkit::{signed_log_det, RealMatrix};
use crate::specfun::{ln_psi_integral, PsiArgs};
use crate::system::{CorrelationSpec, SystemConfig};
use crate::{linear_to_db, Error, Result};

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("SNR must be positive and finite, got {rho}")));
    }
    Ok(())
}

/// `ln[(ρ/N_t)^{−d} Γ(d) Ψ(d, d+1−2/η; N_t/(σρ))]`.
fn ln_entry(d: f64, cfg: &SystemConfig, sigma: f64, rho: f64) -> Result<f64> {
    let x = cfg.n_t as f64 / rho;
    let args = PsiArgs::new(d, d + 1.0 - cfg.det_exponent(), x / sigma)?;
    Ok(d * x.ln() + ln_psi_integral(args)?)
}

/// Natural log of [`u_entry`].
pub fn ln_u_entry(i: usize, j: usize, cfg: &SystemConfig, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let n = cfg.n_min();
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::Domain(format!("entry ({i},{j}) outside 1..={n}")));
    }
    let d = (i + j + cfg.antenna_gap() - 1) as f64;
    ln_entry(d, cfg, 1.0, rho)
}

/// Entry `(i, j)` (1-based) of the uncorrelated distortion matrix:
/// `(ρ/N_t)^{−d} Γ(d) Ψ(d, d+1−2/η; N_t/ρ)` with `d = i+j+|N_t−N_r|−1`.
pub fn u_entry(i: usize, j: usize, cfg: &SystemConfig, rho: f64) -> Result<f64> {
    Ok(ln_u_entry(i, j, cfg, rho)?.exp())
}

/// Natural log of [`g_entry`].
pub fn ln_g_entry(j: usize, cfg: &SystemConfig, sigma_i: f64, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if j == 0 || j > cfg.n_min() {
        return Err(Error::Domain(format!("column {j} outside 1..={}", cfg.n_min())));
    }
    if !(sigma_i > 0.0 && sigma_i.is_finite()) {
        return Err(Error::Domain(format!("correlation eigenvalue must be positive, got {sigma_i}")));
    }
    let d = (cfg.antenna_gap() + j) as f64;
    ln_entry(d, cfg, sigma_i, rho)
}

/// Column `j` (1-based) of the correlated distortion matrix for the row
/// with eigenvalue `sigma_i`:
/// `(ρ/N_t)^{−d} Γ(d) Ψ(d, d+1−2/η; N_t/(σ_i ρ))` with `d = |N_t−N_r|+j`.
pub fn g_entry(j: usize, cfg: &SystemConfig, sigma_i: f64, rho: f64) -> Result<f64> {
    Ok(ln_g_entry(j, cfg, sigma_i, rho)?.exp())
}

/// Optimum expected distortion over an uncorrelated channel.
pub fn ed_exact_uncorrelated(cfg: &SystemConfig, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let n = cfg.n_min();
    let ln_u = RealMatrix::try_from_fn(n, n, |i, j| ln_u_entry(i + 1, j + 1, cfg, rho))?;
    let ones = RealMatrix::from_fn(n, n, |_, _| 1.0)?;
    let det = signed_log_det(&ln_u, &ones)?;
    finish(cfg, det.sign, det.ln_abs - ln_normaliser(cfg)?, rho)
}

/// Optimum expected distortion over a channel correlated on its smaller side.
///
/// `Uncorrelated` falls through to [`ed_exact_uncorrelated`].
pub fn ed_exact_correlated(cfg: &SystemConfig, corr: &CorrelationSpec, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if *corr == CorrelationSpec::Uncorrelated {
        return ed_exact_uncorrelated(cfg, rho);
    }
    let sigma = corr.eigenvalues_for(cfg)?;
    let spacing = sigma.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if spacing < DEGENERATE_SPACING {
        return Err(Error::DegenerateEigenvalues(spacing));
    }
    if spacing < ILL_CONDITIONED_SPACING {
        log::warn!("correlation eigenvalues are only {spacing:e} apart; the exact formula loses accuracy");
    }
    let n = cfg.n_min();
    let ln_g = RealMatrix::try_from_fn(n, n, |i, j| ln_g_entry(j + 1, cfg, sigma[i], rho))?;
    let ones = RealMatrix::from_fn(n, n, |_, _| 1.0)?;
    let det = signed_log_det(&ln_g, &ones)?;
    let den = correlated_denominator(cfg, &sigma);
    let mut ln_norm = 0.0;
    for k in 1..=n {
        ln_norm += libm::lgamma((cfg.n_max() - k + 1) as f64);
    }
    finish(cfg, det.sign * den.sign, det.ln_abs - den.ln_abs - ln_norm, rho)
}

fn finish(cfg: &SystemConfig, sign: f64, ln_ratio: f64, rho: f64) -> Result<f64> {
    let v = sign * (cfg.p_s.ln() + ln_ratio).exp();
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Numerical(format!("expected distortion evaluated to {v} at ρ = {rho:e}")));
    }
    Ok(v)
}

/// Exact distortion over an ascending grid of linear SNRs.
///
/// Points are evaluated in parallel; the result is checked to be
/// non-increasing in SNR.
pub fn exact_curve(cfg: &SystemConfig, corr: &CorrelationSpec, snr_grid: &[f64]) -> Result<DistortionCurve> {
    if snr_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("SNR grid must be strictly ascending".into()));
    }
    let values = snr_grid
        .par_iter()
        .map(|&rho| ed_exact_correlated(cfg, corr, rho))
        .collect::<Result<Vec<f64>>>()?;
    if let Some(k) = (1..values.len()).find(|&k| values[k] > values[k - 1] * (1.0 + 1e-10)) {
        return Err(Error::Numerical(format!(
            "exact distortion increased between ρ = {:e} and ρ = {:e}",
            snr_grid[k - 1],
            snr_grid[k]
        )));
    }
    let mut curve = DistortionCurve::default();
    for (&rho, &v) in snr_grid.iter().zip(&values) {
        curve.push(CurveRow { snr_db: linear_to_db(rho), ed_exact: Some(v), ..CurveRow::default() })?;
    }
    Ok(curve)
}
