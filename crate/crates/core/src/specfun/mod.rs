//! Special functions: Gamma family, incomplete gamma, confluent
//! hypergeometric functions and the quadrature behind them.

mod gamma;
mod hyper;
mod incgamma;
pub mod quad;

pub use gamma::{digamma, gamma, ln_gamma, ln_gamma_signed, pochhammer, recip_gamma, SignedLog};
pub use hyper::{
    kummer_phi, ln_psi_integral, ln_psi_integral_oracle, ln_tricomi_psi_exp_sinh, psi_integral_oracle,
    psi_small_x_leading, tricomi_psi, tricomi_psi_series, PsiArgs, SmallXLeadingTerm, INTEGER_TOL,
    NEAR_INTEGER_TOL, SERIES_MAX_X,
};
pub use incgamma::{exp_e1, upper_incomplete_gamma, upper_incomplete_gamma_regularized};
