use num_complex::Complex64;

use super::theta::ThetaParams;
use crate::error::{Error, Result};

/// `λ` together with the roots `a(λ), b(λ)` of `z² − (|θ|−1)z + 2λ = 0`.
///
/// `a + b = |θ| − 1` and `a·b = 2λ`. For `λ > (|θ|−1)²/8` the roots are a
/// complex-conjugate pair with `b = conj(a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralIndex {
    pub lambda: f64,
    pub a: Complex64,
    pub b: Complex64,
    /// `(|θ|−1)² − 8λ`.
    pub discriminant: f64,
    /// Set when `λ` hit the double-root point and was nudged by `1e−9·max(1, λ)`.
    pub shifted: bool,
}

/// The double-root value `λ* = (|θ|−1)²/8` where `a = b`.
pub fn singular_lambda(theta: &ThetaParams) -> f64 {
    (theta.theta_total() - 1.0).powi(2) / 8.0
}

pub fn spectral_index(theta: &ThetaParams, lambda: f64) -> Result<SpectralIndex> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda = {lambda} must be finite and >= 0")));
    }
    let star = singular_lambda(theta);
    let mut lam = lambda;
    let mut shifted = false;
    if (lam - star).abs() <= 1e-12 * lam.max(1.0) {
        lam += 1e-9 * lam.max(1.0);
        shifted = true;
    }
    let c = theta.theta_total() - 1.0;
    let disc = c * c - 8.0 * lam;
    let (a, b) = if disc >= 0.0 {
        let s = disc.sqrt();
        (Complex64::new(0.5 * (c + s), 0.0), Complex64::new(0.5 * (c - s), 0.0))
    } else {
        let s = (-disc).sqrt();
        (Complex64::new(0.5 * c, 0.5 * s), Complex64::new(0.5 * c, -0.5 * s))
    };
    Ok(SpectralIndex { lambda: lam, a, b, discriminant: disc, shifted })
}
