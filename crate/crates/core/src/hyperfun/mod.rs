//! Special functions: complex Gamma and the Gauss hypergeometric function.

mod gamma;
mod hyp2f1;
mod ode;

pub use gamma::{beta, gamma, gamma_c, gamma_ratio, ln_gamma, ln_gamma_c, rgamma_c, rising_factorial};
#[doc(hidden)]
pub use gamma::set_gamma_perturbation;
pub use hyp2f1::{f21, hyp2f1, hyp2f1_deriv, hyp2f1_with, limit_ratio_at_one, HypConfig, HypParams, Hyp2F1Result};
pub use ode::{connection_coefficients, ode_solutions, wronskians, ConnectionCoefficients, OdeSolutions, Wronskians};

