//! High-SNR behaviour: distortion exponent, distortion factor and the
//! bandwidth-ratio regimes that select their closed forms.

use std::fmt;

use log::warn;

use crate::detkit::{signed_log_det, RealMatrix};
use crate::specfun::{pochhammer, SignedLog};
use crate::system::{CorrelationSpec, SystemConfig};
use crate::{Error, Result};

/// Tolerance on `2/η` for regime boundaries and integer detection.
pub const REGIME_TOL: f64 = 1e-9;
/// Eigenvalue spacing below which the correlated formulas are refused.
pub const DEGENERATE_SPACING: f64 = 1e-8;
/// Eigenvalue spacing below which a conditioning warning is logged.
pub const ILL_CONDITIONED_SPACING: f64 = 1e-3;

/// `ED_asy = mu · (ln ρ)^log_power · ρ^{−delta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticForm {
    pub mu: f64,
    pub delta: f64,
    pub log_power: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeKind {
    /// `2/η < |N_t−N_r| + 1`
    High,
    /// `|N_t−N_r| + 1 ≤ 2/η ≤ N_t+N_r−1`
    Moderate,
    /// `2/η > N_t+N_r−1`
    Low,
}

impl RegimeKind {
    pub fn label(self) -> &'static str {
        match self {
            RegimeKind::High => "HSCBR",
            RegimeKind::Moderate => "MSCBR",
            RegimeKind::Low => "LSCBR",
        }
    }
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Regime together with the moderate-regime partition number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScbrRegime {
    pub kind: RegimeKind,
    /// 0 in the high regime, `N_min` in the low regime.
    pub partition_l: usize,
    /// Moderate regime with `2/η + 1 − |N_t−N_r|` an even integer; the factor then carries `ln ρ`.
    pub boundary_log_case: bool,
}

/// Classifies the bandwidth ratio of `cfg`.
pub fn scbr_regime(cfg: &SystemConfig) -> ScbrRegime {
    let beta = cfg.det_exponent();
    let gap = cfg.antenna_gap() as f64;
    let upper = (cfg.n_t + cfg.n_r) as f64 - 1.0;
    if beta < gap + 1.0 - REGIME_TOL {
        return ScbrRegime { kind: RegimeKind::High, partition_l: 0, boundary_log_case: false };
    }
    if beta > upper + REGIME_TOL {
        return ScbrRegime { kind: RegimeKind::Low, partition_l: cfg.n_min(), boundary_log_case: false };
    }
    let q = (beta + 1.0 - gap) / 2.0;
    let qr = q.round();
    let (l, log_case) = if (q - qr).abs() < REGIME_TOL { (qr, true) } else { (q.floor(), false) };
    let l = (l.max(1.0) as usize).min(cfg.n_min());
    ScbrRegime { kind: RegimeKind::Moderate, partition_l: l, boundary_log_case: log_case }
}

/// `Δ* = Σ_{k=1}^{N_min} min(2/η, 2k−1+|N_t−N_r|)`; the same for correlated links.
pub fn distortion_exponent(cfg: &SystemConfig) -> f64 {
    let beta = cfg.det_exponent();
    let gap = cfg.antenna_gap() as f64;
    (1..=cfg.n_min()).map(|k| beta.min(2.0 * k as f64 - 1.0 + gap)).sum()
}

/// The exponent written as `(N_t−m)(N_r−m) + 2m/η`, with `m` the number of
/// eigen-directions that saturate at the bandwidth limit.
pub fn distortion_exponent_dmt_form(cfg: &SystemConfig) -> f64 {
    let r = scbr_regime(cfg);
    let m = match r.kind {
        RegimeKind::High => cfg.n_min(),
        RegimeKind::Moderate => cfg.n_min() - r.partition_l,
        RegimeKind::Low => 0,
    };
    let mf = m as f64;
    (cfg.n_t as f64 - mf) * (cfg.n_r as f64 - mf) + mf * cfg.det_exponent()
}

fn kappa_l_signed(beta: f64, t: usize, m: usize, n: usize) -> Result<SignedLog> {
    if t == 0 {
        return Ok(SignedLog::ONE);
    }
    let (mf, nf) = (m as f64, n as f64);
    let b = beta - nf + mf;
    let mut p = SignedLog::ONE.mul_gamma(nf - mf + 1.0)?.mul_gamma(b - 1.0)?.div_gamma(beta)?;
    for k in 2..=t {
        let kf = k as f64;
        p = p
            .mul_gamma(kf)?
            .mul_gamma(nf - mf + kf)?
            .mul_gamma(b - 2.0 * kf + 2.0)?
            .mul_gamma(b - 2.0 * kf + 1.0)?
            .div_gamma(beta - kf + 1.0)?
            .div_gamma(b - kf + 1.0)?;
    }
    Ok(p)
}

fn kappa_h_signed(beta: f64, t: usize, m: usize, n: usize) -> Result<SignedLog> {
    let gap = n as f64 - m as f64;
    let mut p = SignedLog::ONE;
    for k in 1..=t {
        let kf = k as f64;
        p = p.mul_gamma(kf)?.mul_gamma(gap - beta + kf)?;
    }
    Ok(p)
}

/// Low-regime Gamma product `κ_l(β, t, m, n)`; 1 at `t = 0`.
///
/// A pole error means the inputs sit on a regime boundary.
pub fn kappa_l(beta: f64, t: usize, m: usize, n: usize) -> Result<f64> {
    Ok(kappa_l_signed(beta, t, m, n)?.value())
}

/// High-regime Gamma product `κ_h(β, t, m, n) = ∏_{k=1}^t Γ(k)Γ(n−m−β+k)`; 1 at `t = 0`.
pub fn kappa_h(beta: f64, t: usize, m: usize, n: usize) -> Result<f64> {
    Ok(kappa_h_signed(beta, t, m, n)?.value())
}

/// `ln ∏_{k=1}^{N_min} Γ(N_max−k+1)Γ(N_min−k+1)`.
pub(crate) fn ln_normaliser(cfg: &SystemConfig) -> Result<f64> {
    let mut p = SignedLog::ONE;
    for k in 1..=cfg.n_min() {
        p = p.mul_gamma((cfg.n_max() - k + 1) as f64)?.mul_gamma((cfg.n_min() - k + 1) as f64)?;
    }
    Ok(p.ln_abs)
}

/// Distortion factor and exponent over an uncorrelated channel.
pub fn distortion_factor_uncorrelated(cfg: &SystemConfig) -> Result<AsymptoticForm> {
    let beta = cfg.det_exponent();
    let (nmin, nmax) = (cfg.n_min(), cfg.n_max());
    let delta = distortion_exponent(cfg);
    let regime = scbr_regime(cfg);
    let kappa = match regime.kind {
        RegimeKind::High => kappa_h_signed(beta, nmin, nmin, nmax)?,
        RegimeKind::Low => kappa_l_signed(beta, nmin, nmin, nmax)?,
        RegimeKind::Moderate => {
            let l = regime.partition_l;
            let t = if regime.boundary_log_case { l - 1 } else { l };
            kappa_l_signed(beta, t, nmin, nmax)? * kappa_h_signed(beta - 2.0 * l as f64, nmin - l, nmin, nmax)?
        }
    };
    if kappa.sign <= 0.0 {
        return Err(Error::Numerical(format!("distortion factor came out non-positive for {cfg:?}")));
    }
    let ln_gamma_part = kappa.ln_abs - ln_normaliser(cfg)?;
    let direct = cfg.p_s * (cfg.n_t as f64).powf(delta) * ln_gamma_part.exp();
    let mu = if direct.is_normal() {
        direct
    } else {
        (cfg.p_s.ln() + delta * (cfg.n_t as f64).ln() + ln_gamma_part).exp()
    };
    Ok(AsymptoticForm { mu, delta, log_power: u8::from(regime.boundary_log_case) })
}

fn correlation_eigenvalues(cfg: &SystemConfig, corr: &CorrelationSpec) -> Result<Vec<f64>> {
    let sigma = corr.eigenvalues_for(cfg)?;
    let spacing = sigma.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if spacing < DEGENERATE_SPACING {
        return Err(Error::DegenerateEigenvalues(spacing));
    }
    if spacing < ILL_CONDITIONED_SPACING {
        warn!("correlation eigenvalues are only {spacing:e} apart; the correlated formulas lose accuracy");
    }
    Ok(sigma)
}

/// `∏ σ_k^{|N_t−N_r|+1} · ∏_{m<n} (σ_n − σ_m)` as a signed log.
pub(crate) fn correlated_denominator(cfg: &SystemConfig, sigma: &[f64]) -> SignedLog {
    let e = cfg.antenna_gap() as f64 + 1.0;
    let mut p = SignedLog::ONE;
    for (n, &s) in sigma.iter().enumerate() {
        p.ln_abs += e * s.ln();
        for &t in &sigma[..n] {
            p = p.mul_value(s - t);
        }
    }
    p
}

/// Distortion factor and exponent over a channel correlated on its smaller side.
pub fn distortion_factor_correlated(cfg: &SystemConfig, corr: &CorrelationSpec) -> Result<AsymptoticForm> {
    let unc = distortion_factor_uncorrelated(cfg)?;
    if *corr == CorrelationSpec::Uncorrelated {
        return Ok(unc);
    }
    let sigma = correlation_eigenvalues(cfg, corr)?;
    let ln_sum: f64 = sigma.iter().map(|s| s.ln()).sum();
    let beta = cfg.det_exponent();
    let regime = scbr_regime(cfg);
    let ratio = match regime.kind {
        RegimeKind::High => (-beta * ln_sum).exp(),
        RegimeKind::Low => (-(cfg.n_max() as f64) * ln_sum).exp(),
        RegimeKind::Moderate => moderate_correlation_ratio(cfg, &sigma, regime.partition_l)?,
    };
    Ok(AsymptoticForm { mu: unc.mu * ratio, ..unc })
}

/// `μ_cor/μ_unc` in the moderate regime.
///
/// A column `j > l` whose exponent `2/η − d_j` equals an integer `m < l`
/// duplicates column `m+1`, and the matching Pochhammer factor vanishes with
/// it. The limit replaces that column by `σ^{−m} ln σ` and drops the factor.
fn moderate_correlation_ratio(cfg: &SystemConfig, sigma: &[f64], l: usize) -> Result<f64> {
    let n = cfg.n_min();
    let beta = cfg.det_exponent();
    let gap = cfg.antenna_gap() as f64;

    let mut column_log = vec![None; n];
    let mut ln_abs = RealMatrix::zeros(n, n)?;
    let mut sign = RealMatrix::zeros(n, n)?;
    for j in 0..n {
        let d = gap + (j + 1) as f64;
        let p = beta - d;
        let e = (j as f64).min(p);
        let collide = if j >= l {
            let m = p.round();
            ((p - m).abs() < REGIME_TOL && m >= 0.0 && (m as usize) < l).then_some(m)
        } else {
            None
        };
        column_log[j] = collide;
        for (i, &s) in sigma.iter().enumerate() {
            let ls = s.ln();
            let (mag, sg) = match collide {
                Some(m) if ls != 0.0 => (-m * ls + ls.abs().ln(), ls.signum()),
                Some(_) => (0.0, 0.0),
                None => (-e * ls, 1.0),
            };
            ln_abs[(i, j)] = mag;
            sign[(i, j)] = sg;
        }
    }
    let v3 = signed_log_det(&ln_abs, &sign)?;

    let mut poch = SignedLog::ONE;
    for k in 1..=(n - l) {
        poch = poch.mul_value(pochhammer(k as f64, l as u32));
        let base = gap - beta + (l + k) as f64;
        match column_log[l + k - 1] {
            Some(m) => {
                for i in 0..l {
                    if i as f64 != m {
                        poch = poch / SignedLog::from_value(base + i as f64);
                    }
                }
            }
            None => poch = poch / SignedLog::from_value(pochhammer(base, l as u32)),
        }
    }

    let mut r = v3 / correlated_denominator(cfg, sigma) * poch;
    if (l * l.saturating_sub(1) / 2) % 2 == 1 {
        r.sign = -r.sign;
    }
    let v = r.value();
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Numerical(format!("correlated distortion factor ratio is {v} for σ = {sigma:?}")));
    }
    Ok(v)
}

/// Evaluates `μ (ln ρ)^ε ρ^{−Δ}`.
pub fn ed_asymptotic(form: &AsymptoticForm, rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("SNR must be positive and finite, got {rho}")));
    }
    let mut ln_v = form.mu.ln() - form.delta * rho.ln();
    if form.log_power > 0 {
        if rho <= 1.0 {
            return Err(Error::Domain(format!("logarithmic distortion factor needs ρ > 1, got {rho}")));
        }
        ln_v += form.log_power as f64 * rho.ln().ln();
    }
    Ok(ln_v.exp())
}

/// Distortion exponent achieved by separate source and channel coding.
///
/// Selects the bracket `η ∈ [2(j−1)/d(j−1), 2j/d(j))` with
/// `d(j) = (N_t−j)(N_r−j)`; the last bracket (`j = N_min`) is unbounded above.
pub fn sep_distortion_exponent(cfg: &SystemConfig) -> Result<f64> {
    let eta = cfg.eta;
    let d = |j: usize| ((cfg.n_t - j) * (cfg.n_r - j)) as f64;
    let nmin = cfg.n_min();
    for j in 1..=nmin {
        let lower = 2.0 * (j as f64 - 1.0) / d(j - 1);
        let upper = if j == nmin { f64::INFINITY } else { 2.0 * j as f64 / d(j) };
        if eta >= lower && eta < upper {
            let jf = j as f64;
            return Ok(2.0 * (jf * d(j - 1) - (jf - 1.0) * d(j)) / (2.0 + eta * (d(j - 1) - d(j))));
        }
    }
    Err(Error::Domain(format!("no separation bracket contains η = {eta}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(nt: usize, nr: usize, eta: f64) -> SystemConfig {
        SystemConfig::new(nt, nr, eta, 1.0).unwrap()
    }

    #[test]
    fn regime_examples() {
        assert_eq!(scbr_regime(&cfg(4, 2, 10.0)).kind, RegimeKind::High);
        let r = scbr_regime(&cfg(2, 2, 1.0));
        assert_eq!(r, ScbrRegime { kind: RegimeKind::Moderate, partition_l: 1, boundary_log_case: false });
        let r = scbr_regime(&cfg(1, 2, 0.99));
        assert_eq!((r.kind, r.partition_l), (RegimeKind::Low, 1));
    }

    #[test]
    fn regime_boundaries_belong_to_moderate() {
        // 2/η = |ΔN|+1 and 2/η = N_t+N_r−1 both give the log case
        let r = scbr_regime(&cfg(4, 2, 2.0 / 3.0));
        assert_eq!(r, ScbrRegime { kind: RegimeKind::Moderate, partition_l: 1, boundary_log_case: true });
        let r = scbr_regime(&cfg(4, 2, 2.0 / 5.0));
        assert_eq!(r, ScbrRegime { kind: RegimeKind::Moderate, partition_l: 2, boundary_log_case: true });
    }

    #[test]
    fn exponent_examples() {
        assert_relative_eq!(distortion_exponent(&cfg(2, 2, 1.0)), 3.0);
        assert_relative_eq!(distortion_exponent(&cfg(4, 2, 10.0)), 0.4, max_relative = 1e-15);
        assert_relative_eq!(distortion_exponent(&cfg(1, 2, 0.99)), 2.0);
        assert_relative_eq!(distortion_exponent_dmt_form(&cfg(2, 2, 1.0)), 3.0);
        assert_relative_eq!(distortion_exponent_dmt_form(&cfg(4, 2, 10.0)), 0.4, max_relative = 1e-15);
        assert_relative_eq!(distortion_exponent_dmt_form(&cfg(1, 2, 0.99)), 2.0);
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_h(3.7, 0, 2, 5).unwrap(), 1.0);
        assert_eq!(kappa_l(3.7, 0, 2, 5).unwrap(), 1.0);
        assert_relative_eq!(kappa_l(2.0, 1, 2, 2).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(kappa_h(0.0, 1, 2, 2).unwrap(), 1.0, max_relative = 1e-15);
        assert!(matches!(kappa_l(1.0, 1, 2, 2), Err(Error::Pole(_))));
    }

    #[test]
    fn factor_examples() {
        let f = distortion_factor_uncorrelated(&cfg(2, 2, 1.0)).unwrap();
        assert_relative_eq!(f.mu, 8.0, max_relative = 1e-14);
        assert_eq!((f.delta, f.log_power), (3.0, 0));
        let f = distortion_factor_uncorrelated(&cfg(1, 2, 4.0)).unwrap();
        assert_relative_eq!(f.mu, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-14);
        assert_relative_eq!(f.delta, 0.5);
        let refs = [
            ((4, 2, 10.0), 1.141834404400793, 0),
            ((1, 2, 0.99), 48.5198019801977, 0),
            ((2, 2, 2.0), 4.0, 1),
            ((2, 2, 2.0 / 3.0), 8.0, 1),
            ((1, 1, 2.0), 1.0, 1),
            ((3, 3, 0.8), 190.85175370557994, 0),
            ((3, 3, 0.5), 136.6875, 0),
        ];
        for ((nt, nr, eta), mu, eps) in refs {
            let f = distortion_factor_uncorrelated(&cfg(nt, nr, eta)).unwrap();
            assert_relative_eq!(f.mu, mu, max_relative = 1e-12);
            assert_eq!(f.log_power, eps, "({nt},{nr},{eta})");
        }
    }

    #[test]
    fn fewer_transmit_antennas_distort_less() {
        let a = distortion_factor_uncorrelated(&cfg(2, 5, 4.0)).unwrap();
        let b = distortion_factor_uncorrelated(&cfg(5, 2, 4.0)).unwrap();
        assert_eq!(a.delta, b.delta);
        assert!(a.mu < b.mu);
    }

    #[test]
    fn correlated_examples() {
        let sigma = CorrelationSpec::eigenvalues(vec![0.5, 1.5]).unwrap();
        let c = cfg(4, 2, 10.0);
        let r = distortion_factor_correlated(&c, &sigma).unwrap().mu / distortion_factor_uncorrelated(&c).unwrap().mu;
        assert_relative_eq!(r, 0.75f64.powf(-0.2), max_relative = 1e-13);
        let c = cfg(2, 2, 0.6657);
        let r = distortion_factor_correlated(&c, &sigma).unwrap().mu / distortion_factor_uncorrelated(&c).unwrap().mu;
        assert_relative_eq!(r, 0.75f64.powi(-2), max_relative = 1e-13);
        assert_relative_eq!(distortion_factor_correlated(&cfg(4, 2, 10.0), &sigma).unwrap().mu, 1.209458223671091, max_relative = 1e-12);
    }

    #[test]
    fn moderate_confluent_column() {
        // 2x2, η = 1: the second column collides with the first
        let (s1, s2) = (0.5f64, 1.5f64);
        let sigma = CorrelationSpec::eigenvalues(vec![s1, s2]).unwrap();
        let f = distortion_factor_correlated(&cfg(2, 2, 1.0), &sigma).unwrap();
        let expect = 8.0 * (s2 / s1).ln() / (s1 * s2 * (s2 - s1));
        assert_relative_eq!(f.mu, expect, max_relative = 1e-13);
        assert_relative_eq!(f.mu, 11.718531079126503, max_relative = 1e-13);
    }

    #[test]
    fn moderate_ratio_is_continuous_across_the_collision() {
        let sigma = CorrelationSpec::eigenvalues(vec![0.6, 1.1, 1.7]).unwrap();
        let at = distortion_factor_correlated(&cfg(3, 3, 1.0), &sigma).unwrap();
        let unc = distortion_factor_uncorrelated(&cfg(3, 3, 1.0)).unwrap();
        let near_c = cfg(3, 3, 2.0 / (2.0 + 1e-6));
        let near = distortion_factor_correlated(&near_c, &sigma).unwrap();
        let near_unc = distortion_factor_uncorrelated(&near_c).unwrap();
        assert_relative_eq!(at.mu / unc.mu, near.mu / near_unc.mu, max_relative = 1e-4);
    }

    #[test]
    fn degenerate_eigenvalues_are_refused() {
        let sigma = CorrelationSpec::eigenvalues(vec![1.0, 1.0 + 1e-9]).unwrap();
        assert!(matches!(distortion_factor_correlated(&cfg(2, 2, 1.0), &sigma), Err(Error::DegenerateEigenvalues(_))));
    }

    #[test]
    fn asymptotic_evaluation() {
        let f = AsymptoticForm { mu: 8.0, delta: 3.0, log_power: 0 };
        assert_relative_eq!(ed_asymptotic(&f, 10.0).unwrap(), 8e-3, max_relative = 1e-14);
        let f = AsymptoticForm { mu: 2.0 / 3.0, delta: 2.0, log_power: 0 };
        assert_relative_eq!(ed_asymptotic(&f, 100.0).unwrap(), 2.0 / 3.0 * 1e-4, max_relative = 1e-14);
        let f = AsymptoticForm { mu: 1.0, delta: 1.0, log_power: 1 };
        assert_relative_eq!(ed_asymptotic(&f, 2.0).unwrap(), 0.5 * 2f64.ln(), max_relative = 1e-14);
        assert!(ed_asymptotic(&f, 1.0).is_err());
    }

    #[test]
    fn separation_exponent() {
        assert_relative_eq!(sep_distortion_exponent(&cfg(2, 2, 2.0 / 3.0)).unwrap(), 2.0, max_relative = 1e-14);
        for eta in [0.25, 0.5, 1.0, 1.9] {
            let c = cfg(1, 1, eta);
            assert_relative_eq!(sep_distortion_exponent(&c).unwrap(), 2.0 / (2.0 + eta), max_relative = 1e-14);
            assert!(sep_distortion_exponent(&c).unwrap() <= distortion_exponent(&c));
        }
    }

    fn max_side_gamma_ratio(a: f64, m: usize, n: usize) -> f64 {
        (1..=m)
            .map(|k| {
                libm::lgamma((n - m) as f64 - a + k as f64) - libm::lgamma((n - k + 1) as f64)
            })
            .sum::<f64>()
            .exp()
    }

    #[test]
    fn max_side_gamma_ratios_decrease() {
        for a in [0.2, 0.5, 1.0, 1.7] {
            for m in 1..=4usize {
                let ns: Vec<usize> = (m..=m + 8).filter(|&n| (n - m + 1) as f64 >= a).collect();
                let f: Vec<f64> = ns.iter().map(|&n| max_side_gamma_ratio(a, m, n)).collect();
                let g: Vec<f64> = ns.iter().zip(&f).map(|(&n, v)| (n as f64).powf(a * m as f64) * v).collect();
                assert!(f.windows(2).all(|w| w[1] < w[0]), "f a={a} m={m}");
                assert!(g.windows(2).all(|w| w[1] < w[0]), "g a={a} m={m}");
            }
        }
    }

    #[test]
    fn high_regime_factor_decreases_with_larger_side() {
        for (nmin, eta) in [(1, 4.0), (2, 10.0), (3, 5.0)] {
            let mus: Vec<f64> = (nmin..=nmin + 5)
                .map(|nmax| distortion_factor_uncorrelated(&cfg(nmax, nmin, eta)).unwrap().mu)
                .collect();
            assert!(mus.windows(2).all(|w| w[1] < w[0]), "{mus:?}");
        }
    }
}
