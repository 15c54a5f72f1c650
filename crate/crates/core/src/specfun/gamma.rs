//! Gamma, log-Gamma, digamma and Pochhammer symbols.

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `ln|Γ(x)|`.
///
/// Fails with [`Error::Pole`] at `0, -1, -2, ...`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma_signed(x)?.0)
}

/// `(ln|Γ(x)|, sign Γ(x))`.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x.is_nan() {
        return Err(Error::Domain("ln_gamma of NaN".into()));
    }
    if is_non_positive_integer(x) {
        return Err(Error::Pole(x));
    }
    let (v, s) = libm::lgamma_r(x);
    Ok((v, if s < 0 { -1.0 } else { 1.0 }))
}

/// `Γ(x)`. Overflows to `±inf` above `x ≈ 171.6`.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    if is_non_positive_integer(x) {
        return Err(Error::Pole(x));
    }
    Ok(libm::tgamma(x))
}

/// `1/Γ(x)`, an entire function: zero at the poles of `Γ`.
pub fn recip_gamma(x: f64) -> f64 {
    if is_non_positive_integer(x) {
        return 0.0;
    }
    if x > 170.0 {
        let (l, s) = libm::lgamma_r(x);
        return (s as f64) * (-l).exp();
    }
    1.0 / libm::tgamma(x)
}

/// Digamma `ψ(x) = Γ'(x)/Γ(x)`.
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("digamma of NaN".into()));
    }
    if is_non_positive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        // reflection: ψ(1−x) − ψ(x) = π cot(πx)
        let pi = std::f64::consts::PI;
        let r = digamma(1.0 - x)?;
        return Ok(r - pi / (pi * x).tan());
    }
    if (x - 1.0).abs() < f64::EPSILON {
        return Ok(-EULER_GAMMA);
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    // Bernoulli tail B_{2k}/(2k)
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    Ok(acc + y.ln() - 0.5 / y - tail)
}

/// Rising factorial `(a)_n = a(a+1)…(a+n−1)`, with `(a)_0 = 1`.
///
/// The product form is valid for every real `a`, including the poles of `Γ(a)`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |p, k| p * (a + k as f64))
}

/// A real number stored as `sign · exp(ln_abs)`, for long products of Gamma values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: f64,
    pub ln_abs: f64,
}

impl Default for SignedLog {
    fn default() -> Self {
        Self::ONE
    }
}

impl std::ops::Mul for SignedLog {
    type Output = SignedLog;

    fn mul(self, o: SignedLog) -> SignedLog {
        SignedLog { sign: self.sign * o.sign, ln_abs: self.ln_abs + o.ln_abs }
    }
}

impl std::ops::Div for SignedLog {
    type Output = SignedLog;

    fn div(self, o: SignedLog) -> SignedLog {
        SignedLog { sign: self.sign * o.sign, ln_abs: self.ln_abs - o.ln_abs }
    }
}

impl SignedLog {
    pub const ONE: SignedLog = SignedLog { sign: 1.0, ln_abs: 0.0 };

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            SignedLog { sign: 0.0, ln_abs: f64::NEG_INFINITY }
        } else {
            SignedLog { sign: v.signum(), ln_abs: v.abs().ln() }
        }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    pub fn mul_value(self, v: f64) -> Self {
        self * SignedLog::from_value(v)
    }

    /// Multiplies by `Γ(x)`.
    pub fn mul_gamma(self, x: f64) -> Result<Self> {
        let (l, s) = ln_gamma_signed(x)?;
        Ok(self * SignedLog { sign: s, ln_abs: l })
    }

    /// Divides by `Γ(x)`.
    pub fn div_gamma(self, x: f64) -> Result<Self> {
        let (l, s) = ln_gamma_signed(x)?;
        Ok(self / SignedLog { sign: s, ln_abs: l })
    }

    pub fn powi(self, n: i32) -> Self {
        let sign = if n.rem_euclid(2) == 0 { if self.sign == 0.0 { 0.0 } else { 1.0 } } else { self.sign };
        SignedLog { sign, ln_abs: self.ln_abs * n as f64 }
    }
}
