//! Confluent hypergeometric functions: Kummer `Φ(a,c;x)` and Tricomi `Ψ(a,c;x)`.

use log::warn;

use super::gamma::{digamma, ln_gamma, recip_gamma, SignedLog};
use super::quad::{exp_sinh_ln, gauss_kronrod, Tolerance};
use crate::{Error, Result};

/// `c` within this distance of an integer takes the integer branch.
pub const INTEGER_TOL: f64 = 1e-9;
/// Non-integer `c` closer than this to an integer is evaluated by quadrature.
pub const NEAR_INTEGER_TOL: f64 = 1e-4;
/// Largest `x` for which the series forms are attempted.
pub const SERIES_MAX_X: f64 = 8.0;
/// Largest tolerated ratio of summed term magnitudes to the result.
const MAX_CANCELLATION: f64 = 1e4;
const MAX_TERMS: usize = 10_000;
const QUIET_RUN: usize = 50;

/// Arguments of `Ψ(a,c;x)`, validated to `a > 0`, `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiArgs {
    pub a: f64,
    pub c: f64,
    pub x: f64,
}

impl PsiArgs {
    pub fn new(a: f64, c: f64, x: f64) -> Result<Self> {
        if !(a > 0.0) || !(x > 0.0) || !c.is_finite() || !a.is_finite() || !x.is_finite() {
            return Err(Error::Domain(format!("Ψ needs a > 0 and x > 0, got a={a}, c={c}, x={x}")));
        }
        Ok(PsiArgs { a, c, x })
    }
}

/// Leading small-`x` behaviour `coefficient · x^x_power`, times `−ln x` when `log_flag`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallXLeadingTerm {
    pub coefficient: f64,
    pub x_power: f64,
    pub log_flag: bool,
}

fn nearest_integer(c: f64) -> Option<i64> {
    let r = c.round();
    ((c - r).abs() < INTEGER_TOL).then_some(r as i64)
}

fn series_sum<T: FnMut(usize) -> f64>(mut next_term: T, what: &str) -> Result<(f64, f64)> {
    let (mut sum, mut mag) = (0.0f64, 0.0f64);
    let mut quiet = 0;
    for r in 0..MAX_TERMS {
        let t = next_term(r);
        if !t.is_finite() {
            return Err(Error::SeriesNonConvergence(format!("{what}: non-finite term at r={r}")));
        }
        sum += t;
        mag += t.abs();
        if t.abs() <= 1e-16 * sum.abs() {
            quiet += 1;
            if quiet >= QUIET_RUN {
                return Ok((sum, mag));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::SeriesNonConvergence(format!("{what}: {MAX_TERMS} terms without settling")))
}

/// Kummer series together with the sum of term magnitudes.
fn kummer_with_magnitude(a: f64, c: f64, x: f64) -> Result<(f64, f64)> {
    if c <= 0.0 && c == c.round() {
        return Err(Error::Pole(c));
    }
    let mut term = 1.0;
    series_sum(
        |r| {
            if r > 0 {
                let k = (r - 1) as f64;
                term *= (a + k) / (c + k) * x / (k + 1.0);
            }
            term
        },
        "Kummer Φ",
    )
}

/// Kummer's confluent hypergeometric function `Φ(a,c;x) = Σ (a)_r/(c)_r · x^r/r!`.
pub fn kummer_phi(a: f64, c: f64, x: f64) -> Result<f64> {
    Ok(kummer_with_magnitude(a, c, x)?.0)
}

/// Leading term of `Ψ(a,c;x)` as `x → 0⁺`.
pub fn psi_small_x_leading(a: f64, c: f64) -> Result<SmallXLeadingTerm> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("Ψ needs a > 0, got {a}")));
    }
    let t = if (c - 1.0).abs() < INTEGER_TOL {
        SmallXLeadingTerm { coefficient: recip_gamma(a), x_power: 0.0, log_flag: true }
    } else if c > 1.0 {
        let coef = SignedLog::ONE.mul_gamma(c - 1.0)?.div_gamma(a)?;
        SmallXLeadingTerm { coefficient: coef.value(), x_power: 1.0 - c, log_flag: false }
    } else {
        let coef = SignedLog::ONE.mul_gamma(1.0 - c)?.mul_value(recip_gamma(a - c + 1.0));
        SmallXLeadingTerm { coefficient: coef.value(), x_power: 0.0, log_flag: false }
    };
    Ok(t)
}

/// Two-Kummer form for non-integer `c`; returns value and summed magnitudes.
fn psi_noninteger(a: f64, c: f64, x: f64) -> Result<(f64, f64)> {
    let (p1, m1) = kummer_with_magnitude(a, c, x)?;
    let (p2, m2) = kummer_with_magnitude(a - c + 1.0, 2.0 - c, x)?;
    let k1 = SignedLog::ONE.mul_gamma(1.0 - c)?.mul_value(recip_gamma(a - c + 1.0)).value();
    let k2 = (SignedLog::ONE.mul_gamma(c - 1.0)?.div_gamma(a)? * SignedLog { sign: 1.0, ln_abs: (1.0 - c) * x.ln() }).value();
    Ok((k1 * p1 + k2 * p2, (k1 * m1).abs() + (k2 * m2).abs()))
}

/// Logarithmic form for `c = n + 1`, `n ≥ 0`.
fn psi_positive_integer(a: f64, n: u32, x: f64) -> Result<(f64, f64)> {
    let nf = n as f64;
    let lx = x.ln();
    let mut value = 0.0;
    let mut mag = 0.0;

    let rg = recip_gamma(a - nf);
    if rg != 0.0 {
        let mut nfact = 1.0;
        for k in 1..=n {
            nfact *= k as f64;
        }
        let pref = if (n + 1).is_multiple_of(2) { 1.0 } else { -1.0 } * rg / nfact;
        let mut coef = 1.0;
        let mut psi_a = digamma(a)?;
        let mut psi_1 = digamma(1.0)?;
        let mut psi_n = digamma(nf + 1.0)?;
        let (s, m) = series_sum(
            |k| {
                if k > 0 {
                    let km = (k - 1) as f64;
                    coef *= (a + km) / ((nf + 1.0 + km) * (km + 1.0)) * x;
                    psi_a += 1.0 / (a + km);
                    psi_1 += 1.0 / (km + 1.0);
                    psi_n += 1.0 / (nf + 1.0 + km);
                }
                coef * (lx + psi_a - psi_1 - psi_n)
            },
            "Ψ logarithmic series",
        )?;
        value += pref * s;
        mag += (pref * m).abs();
    }

    if n > 0 {
        let ra = recip_gamma(a);
        let mut finite = 0.0;
        let mut fmag = 0.0;
        let mut kfact = 1.0; // (k−1)!
        for k in 1..=n {
            if k > 1 {
                kfact *= (k - 1) as f64;
            }
            let mut nk_fact = 1.0;
            for j in 1..=(n - k) {
                nk_fact *= j as f64;
            }
            let poch = (0..(n - k)).fold(1.0, |p, j| p * (1.0 - a + k as f64 + j as f64));
            let t = kfact * poch / nk_fact * (-(k as f64) * lx).exp();
            finite += t;
            fmag += t.abs();
        }
        value += ra * finite;
        mag += (ra * fmag).abs();
    }
    Ok((value, mag))
}

fn psi_series_raw(args: PsiArgs) -> Result<(f64, f64)> {
    let PsiArgs { a, c, x } = args;
    match nearest_integer(c) {
        Some(ci) if ci >= 1 => psi_positive_integer(a, (ci - 1) as u32, x),
        Some(ci) => {
            // Ψ(a,c;x) = x^{1−c} Ψ(a−c+1, 2−c; x)
            let cf = ci as f64;
            let (v, m) = psi_positive_integer(a - cf + 1.0, (1 - ci) as u32, x)?;
            let s = ((1.0 - cf) * x.ln()).exp();
            Ok((s * v, s * m))
        }
        None => psi_noninteger(a, c, x),
    }
}

/// `Ψ(a,c;x)` by the series forms only.
///
/// Fails for `x` above [`SERIES_MAX_X`] or when cancellation between terms
/// would cost more than about four digits.
pub fn tricomi_psi_series(args: PsiArgs) -> Result<f64> {
    if args.x > SERIES_MAX_X {
        return Err(Error::SeriesNonConvergence(format!(
            "x={} exceeds the series threshold {SERIES_MAX_X}",
            args.x
        )));
    }
    let (v, m) = psi_series_raw(args)?;
    if !(v.abs() > 0.0) || m / v.abs() > MAX_CANCELLATION {
        return Err(Error::Numerical(format!(
            "Ψ({},{};{}) series loses {:.1} digits to cancellation",
            args.a,
            args.c,
            args.x,
            (m / v.abs()).log10()
        )));
    }
    Ok(v)
}

/// `ln Ψ(a,c;x)` from `x^{−a}/Γ(a) ∫₀^∞ e^{−u}u^{a−1}(1+u/x)^{c−a−1} du`
/// by the exp-sinh rule.
pub fn ln_tricomi_psi_exp_sinh(args: PsiArgs) -> Result<f64> {
    let PsiArgs { a, c, x } = args;
    let lx = x.ln();
    let p = c - a - 1.0;
    let integral = exp_sinh_ln(|w| -w.exp() + (a - 1.0) * w + p * softplus(w - lx), 1e-14)?;
    Ok(integral - a * lx - ln_gamma(a)?)
}

/// Tricomi's confluent hypergeometric function `Ψ(a,c;x)`.
///
/// Uses the series forms for `x ≤ 8` when `c` is an integer or well away from
/// one and the series is not dominated by cancellation; otherwise a
/// double-exponential quadrature of the integral representation.
pub fn tricomi_psi(args: PsiArgs) -> Result<f64> {
    let frac = (args.c - args.c.round()).abs();
    let near_integer = (INTEGER_TOL..NEAR_INTEGER_TOL).contains(&frac);
    if near_integer {
        warn!("Ψ({},{};{}): c is {frac:e} from an integer, using quadrature", args.a, args.c, args.x);
    } else if args.x <= SERIES_MAX_X {
        match tricomi_psi_series(args) {
            Ok(v) => return Ok(v),
            Err(Error::Numerical(_)) | Err(Error::SeriesNonConvergence(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(ln_tricomi_psi_exp_sinh(args)?.exp())
}

pub(crate) fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `ln ∫₀^∞ e^{−xt} t^{a−1} (1+t)^{c−a−1} dt`, i.e. `ln(Γ(a)·Ψ(a,c;x))`.
///
/// The integral is taken in `s = ln t`, where the integrand decays
/// exponentially at both ends, with breakpoints at `t = 1`, `t = 1/x` and the
/// interior mode, by adaptive Gauss–Kronrod at relative tolerance 1e-13.
pub fn ln_psi_integral(args: PsiArgs) -> Result<f64> {
    let PsiArgs { a, c, x } = args;
    let lx = x.ln();
    let p = c - a - 1.0;
    let lf = |s: f64| -(s + lx).exp() + a * s + p * softplus(s);

    let knee = -lx;
    let split = ((a - 1.0).max(1e-300) / x).ln().max(0.0);
    let mut marks = [0.0, knee, split];
    marks.sort_by(f64::total_cmp);
    let (mut lo, mut hi) = (marks[0] - 1.0, marks[2] + 1.0);

    // scan for the peak, then push the ends out until the integrand is negligible
    let peak = |lo: f64, hi: f64| {
        (0..=400).map(|i| lf(lo + (hi - lo) * i as f64 / 400.0)).fold(f64::NEG_INFINITY, f64::max)
    };
    let drop = 46.0;
    let mut m = peak(lo, hi);
    let mut step = 1.0;
    while lf(lo) > m - drop {
        lo -= step;
        step *= 2.0;
        if lo < -1e7 {
            return Err(Error::QuadratureNonConvergence(format!("Ψ({a},{c};{x}) integrand has no left decay")));
        }
    }
    step = 1.0;
    while lf(hi) > m - drop {
        hi += step;
        step *= 1.5;
        if hi > 1e4 {
            return Err(Error::QuadratureNonConvergence(format!("Ψ({a},{c};{x}) integrand has no right decay")));
        }
    }
    m = m.max(peak(lo, hi));

    let mut pts = vec![lo];
    pts.extend(marks.iter().copied().filter(|&v| v > lo && v < hi));
    pts.push(hi);
    pts.dedup();
    let r = gauss_kronrod(|s| (lf(s) - m).exp(), &pts, Tolerance::default())?;
    if !(r.value > 0.0) {
        return Err(Error::QuadratureNonConvergence(format!("Ψ({a},{c};{x}) integral is not positive")));
    }
    Ok(m + r.value.ln())
}

/// `ln Ψ(a,c;x)` by quadrature of the integral representation.
pub fn ln_psi_integral_oracle(args: PsiArgs) -> Result<f64> {
    Ok(ln_psi_integral(args)? - ln_gamma(args.a)?)
}

/// `Ψ(a,c;x) = (1/Γ(a)) ∫₀^∞ e^{−xt} t^{a−1} (1+t)^{c−a−1} dt` by adaptive quadrature.
pub fn psi_integral_oracle(args: PsiArgs) -> Result<f64> {
    Ok(ln_psi_integral_oracle(args)?.exp())
}
