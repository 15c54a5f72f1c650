//! Upper incomplete gamma function and the scaled exponential integral.

use super::gamma::{gamma, recip_gamma};
use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 10_000;

// Taylor coefficients of Γ(1+z) − 1 divided by z.
const GAMMA1P_COEFFS: [f64; 7] = [
    -0.577_215_664_901_532_9,
    0.989_055_995_327_972_6,
    -0.907_479_076_080_886_3,
    0.981_728_086_834_400_2,
    -0.981_995_068_903_145_2,
    0.993_149_114_621_276_2,
    -0.996_001_760_442_431_5,
];

/// Modified Lentz evaluation of `Γ(a,x)·eˣ·x^{−a}`; good for `x ≥ 1`.
fn scaled_continued_fraction(a: f64, x: f64) -> Result<f64> {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h);
        }
    }
    Err(Error::SeriesNonConvergence(format!("incomplete gamma continued fraction at a={a}, x={x}")))
}

/// Lower incomplete gamma `γ(a,x)` by its power series, `a > 0`.
fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..MAX_ITER {
        term *= x / (a + n as f64);
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            return Ok(sum * (-x + a * x.ln()).exp());
        }
    }
    Err(Error::SeriesNonConvergence(format!("lower incomplete gamma series at a={a}, x={x}")))
}

/// `Σ_{k≥1} (−x)^k / (k!·(s+k))`, for `x < 1`.
fn alternating_tail(s: f64, x: f64) -> f64 {
    let mut p = 1.0;
    let mut sum = 0.0;
    for k in 1..200 {
        p *= -x / k as f64;
        let t = p / (s + k as f64);
        sum += t;
        if t.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Γ(s,x)` for `|s| ≤ 1/2`, `0 < x < 1`.
fn upper_small_order(s: f64, x: f64) -> f64 {
    if s == 0.0 {
        return -EULER_GAMMA - x.ln() - alternating_tail(0.0, x);
    }
    let gm1_over_s = if s.abs() < 1e-3 {
        GAMMA1P_COEFFS.iter().rev().fold(0.0, |acc, c| acc * s + c)
    } else {
        (libm::tgamma(1.0 + s) - 1.0) / s
    };
    let lx = x.ln();
    gm1_over_s - (s * lx).exp_m1() / s - (s * lx).exp() * alternating_tail(s, x)
}

/// Upper incomplete gamma `Γ(a,x) = ∫ₓ^∞ t^{a−1}e^{−t} dt` for real `a` and `x ≥ 0`.
///
/// At `x = 0` the result is `Γ(a)` for `a > 0` and a domain error otherwise.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if a.is_nan() || x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("upper incomplete gamma needs x ≥ 0, got a={a}, x={x}")));
    }
    if x == 0.0 {
        if a > 0.0 {
            return gamma(a);
        }
        return Err(Error::Domain(format!("Γ({a}, 0) diverges")));
    }
    if x >= 1.0 && a < x + 1.0 {
        let h = scaled_continued_fraction(a, x)?;
        return Ok(h * (a * x.ln() - x).exp());
    }
    if a >= 0.5 {
        return Ok(gamma(a)? - lower_series(a, x)?);
    }
    // x < 1, a < 1/2: start near zero order and recur downward
    let n = a.round();
    let mut s = a - n;
    let mut g = upper_small_order(s, x);
    let ex = (-x).exp();
    for _ in 0..(-n) as i64 {
        g = (g - x.powf(s - 1.0) * ex) / (s - 1.0);
        s -= 1.0;
    }
    Ok(g)
}

/// Regularised upper incomplete gamma `Q(a,x) = Γ(a,x)/Γ(a)`, `a > 0`.
pub fn upper_incomplete_gamma_regularized(a: f64, x: f64) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::Domain(format!("regularised incomplete gamma needs a > 0, got {a}")));
    }
    Ok(upper_incomplete_gamma(a, x)? * recip_gamma(a))
}

/// `eˣ·E₁(x) = eˣ·Γ(0,x)`, free of overflow for small `x` and underflow for large `x`.
pub fn exp_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("exp_e1 needs x > 0, got {x}")));
    }
    if x >= 1.0 {
        return scaled_continued_fraction(0.0, x);
    }
    Ok(x.exp() * upper_small_order(0.0, x))
}
