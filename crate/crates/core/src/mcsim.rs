//! Monte Carlo estimate of the expected distortion over Rayleigh block
//! fading, and the closed forms for Alamouti and spatial multiplexing on
//! the 2x2 link.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::detkit::{symmetric_sqrt, ComplexMatrix, RealMatrix};
use crate::specfun::exp_e1;
use crate::system::{CorrelationSpec, SystemConfig};
use crate::{Error, Result};

/// Realizations drawn from one random stream.
pub const PARTITION_SIZE: usize = 1024;
/// Smallest accepted number of realizations.
pub const MIN_REALIZATIONS: usize = 100;

/// Sample mean and standard error of the distortion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_realizations: usize,
    pub seed: u64,
}

/// One `N_r × N_t` channel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: ComplexMatrix,
}

/// Draws channel matrices for a fixed link and correlation.
///
/// Correlation acts on the smaller side: `H = Σ^{1/2} H_w` when `N_r ≤ N_t`,
/// `H = H_w Σ^{1/2}` otherwise, with `H_w` i.i.d. `CN(0,1)`.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    cfg: SystemConfig,
    sqrt_sigma: Option<ComplexMatrix>,
}

impl ChannelSampler {
    pub fn new(cfg: &SystemConfig, corr: &CorrelationSpec) -> Result<Self> {
        let sqrt_sigma = match corr {
            CorrelationSpec::Uncorrelated => {
                corr.validate(cfg)?;
                None
            }
            _ => Some(symmetric_sqrt(&corr.matrix(cfg)?)?.to_complex()),
        };
        Ok(ChannelSampler { cfg: *cfg, sqrt_sigma })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelRealization {
        let (nr, nt) = (self.cfg.n_r, self.cfg.n_t);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let hw = ComplexMatrix::from_fn(nr, nt, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        })
        .expect("antenna counts are validated by SystemConfig");
        let h = match &self.sqrt_sigma {
            None => hw,
            Some(root) if nr <= nt => root.matmul(&hw).expect("shapes agree"),
            Some(root) => hw.matmul(root).expect("shapes agree"),
        };
        ChannelRealization { h }
    }
}

/// Draws one channel; see [`ChannelSampler`] for repeated draws.
pub fn sample_channel<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    corr: &CorrelationSpec,
    rng: &mut R,
) -> Result<ChannelRealization> {
    Ok(ChannelSampler::new(cfg, corr)?.sample(rng))
}

/// `P_s · |I + (ρ/N_t) H H†|^{−2/η}`, using the `N_min`-sized Gram matrix.
pub fn instantaneous_distortion(h: &ChannelRealization, cfg: &SystemConfig, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("SNR must be non-negative, got {rho}")));
    }
    if h.h.rows() != cfg.n_r || h.h.cols() != cfg.n_t {
        return Err(Error::Domain(format!(
            "channel is {}x{} but the link is {}x{}",
            h.h.rows(),
            h.h.cols(),
            cfg.n_r,
            cfg.n_t
        )));
    }
    if rho == 0.0 {
        return Ok(cfg.p_s);
    }
    let gram = if cfg.n_t < cfg.n_r { h.h.adjoint().matmul(&h.h)? } else { h.h.matmul(&h.h.adjoint())? };
    let m = gram.scale(Complex64::new(rho / cfg.n_t as f64, 0.0)).add_identity()?;
    let det = m.det()?.re;
    Ok(cfg.p_s * (-cfg.det_exponent() * det.ln()).exp())
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments { n, mean: self.mean + d * o.n / n, m2: self.m2 + o.m2 + d * d * self.n * o.n / n }
    }
}

/// Monte Carlo estimate of the expected distortion from `n` channel draws.
///
/// Realizations are split into partitions of [`PARTITION_SIZE`], each with its
/// own ChaCha stream derived from `(seed, partition)`, and the partial
/// moments are merged in partition order, so the result does not depend on
/// the thread count.
pub fn mc_expected_distortion(
    cfg: &SystemConfig,
    corr: &CorrelationSpec,
    rho: f64,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n < MIN_REALIZATIONS {
        return Err(Error::InvalidConfig(format!("need at least {MIN_REALIZATIONS} realizations, got {n}")));
    }
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("SNR must be non-negative and finite, got {rho}")));
    }
    if rho == 0.0 {
        return Ok(McEstimate { mean: cfg.p_s, std_error: 0.0, n_realizations: n, seed });
    }
    let sampler = ChannelSampler::new(cfg, corr)?;
    let parts = n.div_ceil(PARTITION_SIZE);
    let partials = (0..parts)
        .into_par_iter()
        .map(|p| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(p as u64);
            let count = PARTITION_SIZE.min(n - p * PARTITION_SIZE);
            let mut m = Moments::default();
            for _ in 0..count {
                m.push(instantaneous_distortion(&sampler.sample(&mut rng), cfg, rho)?);
            }
            Ok(m)
        })
        .collect::<Result<Vec<Moments>>>()?;
    let total = partials.into_iter().fold(Moments::default(), Moments::merge);
    let var = total.m2 / (total.n - 1.0);
    Ok(McEstimate { mean: total.mean, std_error: (var / total.n).sqrt(), n_realizations: n, seed })
}

fn check_rho(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("SNR must be positive and finite, got {rho}")));
    }
    exp_e1(2.0 / rho)
}

/// Expected distortion of the Alamouti scheme on the 2x2 link with `η = 1`, `P_s = 1`.
pub fn ed_alm(rho: f64) -> Result<f64> {
    let e = check_rho(rho)?;
    let num = rho * ((rho - 4.0) * rho - 4.0) + 4.0 * e * (3.0 * rho + 2.0);
    Ok(2.0 / 3.0 * num / rho.powi(5))
}

/// Expected distortion of spatial multiplexing on the 2x2 link with `η = 1`, `P_s = 1`.
pub fn ed_sm(rho: f64) -> Result<f64> {
    let e = check_rho(rho)?;
    let a = rho - (rho + 2.0) * e;
    let b = rho - 2.0 * e;
    let c = rho * (rho + 2.0) - 4.0 * (rho + 1.0) * e;
    Ok((-16.0 * a * a + 8.0 * b * c) / rho.powi(6))
}

/// Real symmetric correlation matrix applied by the sampler, for inspection.
pub fn correlation_root(cfg: &SystemConfig, corr: &CorrelationSpec) -> Result<RealMatrix> {
    symmetric_sqrt(&corr.matrix(cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detkit::hermitian_eigenvalues;
    use crate::exact::ed_exact_uncorrelated;
    use approx::assert_relative_eq;

    fn cfg(nt: usize, nr: usize, eta: f64) -> SystemConfig {
        SystemConfig::new(nt, nr, eta, 1.0).unwrap()
    }

    fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        // Gram–Schmidt on a complex Gaussian matrix
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        })
        .unwrap();
        let mut q = g.clone();
        for j in 0..n {
            for k in 0..j {
                let dot: Complex64 = (0..n).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
                for i in 0..n {
                    let v = q[(i, k)];
                    q[(i, j)] -= dot * v;
                }
            }
            let norm = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            for i in 0..n {
                q[(i, j)] /= norm;
            }
        }
        q
    }

    #[test]
    fn zero_channel_and_scalar_case() {
        let c = cfg(2, 3, 1.0);
        let h = ChannelRealization { h: ComplexMatrix::zeros(3, 2).unwrap() };
        assert_eq!(instantaneous_distortion(&h, &c, 10.0).unwrap(), 1.0);
        let c = cfg(1, 1, 2.0);
        let h = ChannelRealization { h: ComplexMatrix::identity(1).unwrap() };
        assert_relative_eq!(instantaneous_distortion(&h, &c, 3.0).unwrap(), 0.25, max_relative = 1e-15);
    }

    #[test]
    fn distortion_matches_eigenvalue_product_and_both_grams() {
        let c = cfg(2, 3, 0.8);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = sample_channel(&c, &CorrelationSpec::Uncorrelated, &mut rng).unwrap();
        let rho = 20.0;
        let v = instantaneous_distortion(&h, &c, rho).unwrap();
        let hh = h.h.matmul(&h.h.adjoint()).unwrap();
        let lam = hermitian_eigenvalues(&hh).unwrap();
        let prod: f64 = lam.iter().map(|l| (1.0 + rho * l.max(0.0) / 2.0).powf(-c.det_exponent())).product();
        assert_relative_eq!(v, prod, max_relative = 1e-10);
        let big = hh.scale(Complex64::new(rho / 2.0, 0.0)).add_identity().unwrap().det().unwrap().re;
        assert_relative_eq!(v, big.powf(-c.det_exponent()), max_relative = 1e-10);
    }

    #[test]
    fn unitary_invariance() {
        let c = cfg(3, 2, 1.3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = sample_channel(&c, &CorrelationSpec::Uncorrelated, &mut rng).unwrap();
        let u = random_unitary(2, &mut rng);
        let v = random_unitary(3, &mut rng);
        let rotated = ChannelRealization { h: u.matmul(&h.h).unwrap().matmul(&v).unwrap() };
        assert_relative_eq!(
            instantaneous_distortion(&h, &c, 50.0).unwrap(),
            instantaneous_distortion(&rotated, &c, 50.0).unwrap(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn unit_entry_power() {
        let c = cfg(1, 1, 1.0);
        let s = ChannelSampler::new(&c, &CorrelationSpec::Uncorrelated).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let m: f64 = (0..n).map(|_| s.sample(&mut rng).h[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        assert!((m - 1.0).abs() < 0.02);
    }

    #[test]
    fn correlated_second_moments() {
        for (nt, nr) in [(2, 2), (4, 2), (2, 4)] {
            let c = cfg(nt, nr, 1.0);
            let s = ChannelSampler::new(&c, &CorrelationSpec::exponential(0.5).unwrap()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let n = 100_000;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut diag = 0.0;
            for _ in 0..n {
                let h = s.sample(&mut rng).h;
                let g = if nr <= nt { h.matmul(&h.adjoint()).unwrap() } else { h.adjoint().matmul(&h).unwrap() };
                acc += g[(0, 1)];
                diag += g[(0, 0)].re;
            }
            let scale = (n * nt.max(nr)) as f64;
            assert!((acc.re / scale - 0.5).abs() < 0.03, "({nt},{nr}) {}", acc.re / scale);
            assert!((diag / scale - 1.0).abs() < 0.03);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let c = cfg(2, 2, 1.0);
        let a = mc_expected_distortion(&c, &CorrelationSpec::Uncorrelated, 10.0, 5000, 42).unwrap();
        let b = mc_expected_distortion(&c, &CorrelationSpec::Uncorrelated, 10.0, 5000, 42).unwrap();
        assert_eq!(a, b);
        let d = mc_expected_distortion(&c, &CorrelationSpec::Uncorrelated, 10.0, 5000, 43).unwrap();
        assert_ne!(a.mean, d.mean);
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        let s = ChannelSampler::new(&c, &CorrelationSpec::Uncorrelated).unwrap();
        for _ in 0..10 {
            assert_eq!(s.sample(&mut r1), s.sample(&mut r2));
        }
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let c = cfg(2, 2, 1.0);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_expected_distortion(&c, &CorrelationSpec::Uncorrelated, 10.0, 10_000, 1).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn zero_snr_and_input_guards() {
        let c = SystemConfig::new(2, 2, 1.0, 3.0).unwrap();
        let e = mc_expected_distortion(&c, &CorrelationSpec::Uncorrelated, 0.0, 1000, 1).unwrap();
        assert_eq!((e.mean, e.std_error), (3.0, 0.0));
        assert!(mc_expected_distortion(&c, &CorrelationSpec::Uncorrelated, 1.0, 99, 1).is_err());
    }

    #[test]
    fn agrees_with_exact_small_run() {
        let c = cfg(2, 2, 1.0);
        let e = mc_expected_distortion(&c, &CorrelationSpec::Uncorrelated, 10.0, 20_000, 2024).unwrap();
        let x = ed_exact_uncorrelated(&c, 10.0).unwrap();
        assert!((e.mean - x).abs() < 3.0 * e.std_error, "{e:?} vs {x}");
    }

    #[test]
    fn closed_forms_high_snr() {
        let r = 1e4;
        assert!((ed_alm(r).unwrap() * 1.5 * r * r - 1.0).abs() < 0.02);
        assert!((ed_sm(r).unwrap() * r.powi(3) / 8.0 - 1.0).abs() < 0.05);
        assert!(ed_alm(0.0).is_err());
    }

    #[test]
    fn alamouti_worse_than_multiplexing() {
        let mut prev = 0.0;
        for db in [20.0, 25.0, 30.0, 35.0, 40.0] {
            let rho = crate::db_to_linear(db);
            let ratio = ed_alm(rho).unwrap() / ed_sm(rho).unwrap();
            assert!(ratio > 1.0 && ratio > prev);
            prev = ratio;
        }
        for rho in [10.0, 100.0, 1e3] {
            assert!(ed_alm(rho).unwrap() >= ed_sm(rho).unwrap());
        }
    }

    #[test]
    fn multiplexing_equals_exact() {
        let c = cfg(2, 2, 1.0);
        for rho in [1.0, 10.0, 100.0, 1e3, 1e4] {
            assert_relative_eq!(ed_sm(rho).unwrap(), ed_exact_uncorrelated(&c, rho).unwrap(), max_relative = 1e-6);
        }
    }
}
