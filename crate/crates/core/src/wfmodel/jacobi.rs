use super::theta::ThetaParams;
use crate::error::{Error, Result};
use crate::hyperfun::ln_gamma;
use crate::quadrature::beta_recurrence;

/// Three-term recurrence of the polynomials orthonormal for Beta(θ₁, θ₂).
///
/// `p_n` has positive leading coefficient, so `R_n = p_n / p_n(1)` and
/// `π_n = 1 / p_n(1)²`.
#[derive(Debug, Clone)]
pub struct OrthoJacobi {
    alpha: Vec<f64>,
    sqrt_beta: Vec<f64>,
}

impl OrthoJacobi {
    /// Coefficients sufficient for degrees `0..=n_max`.
    pub fn new(theta: &ThetaParams, n_max: usize) -> Self {
        let (alpha, betas) = beta_recurrence(n_max + 2, theta.theta1(), theta.theta2());
        let sqrt_beta = betas.iter().map(|b| b.sqrt()).collect();
        Self { alpha, sqrt_beta }
    }

    pub fn max_degree(&self) -> usize {
        self.alpha.len() - 2
    }

    /// Calls `visit(n, p_n(x))` for `n = 0..=n_max` in order; stops early when
    /// `visit` returns `false`.
    pub fn walk<F: FnMut(usize, f64) -> bool>(&self, x: f64, n_max: usize, mut visit: F) {
        let n_max = n_max.min(self.max_degree());
        let (mut prev, mut cur) = (0.0, 1.0);
        for n in 0..=n_max {
            if !visit(n, cur) {
                return;
            }
            let sb = if n == 0 { 0.0 } else { self.sqrt_beta[n] };
            let next = ((x - self.alpha[n]) * cur - sb * prev) / self.sqrt_beta[n + 1];
            prev = cur;
            cur = next;
        }
    }

    /// `p_0(x), …, p_n(x)`.
    pub fn values(&self, x: f64, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n + 1);
        self.walk(x, n, |_, p| {
            out.push(p);
            true
        });
        out
    }
}

/// `R_n(x) = ₂F₁(−n, n+|θ|−1; θ₂; 1−x)`, normalised by `R_n(1) = 1`.
pub fn jacobi_r(theta: &ThetaParams, n: usize, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} must lie in [0, 1]")));
    }
    let basis = OrthoJacobi::new(theta, n);
    let px = basis.values(x, n)[n];
    let p1 = basis.values(1.0, n)[n];
    Ok(px / p1)
}

/// `π_n = ∫ R_n² dm = n!(θ₁)_n / [(|θ|+2n−1)(|θ|)_{n−1}(θ₂)_n]`, `π_0 = 1`.
pub fn pi_n(theta: &ThetaParams, n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (t1, t2, t) = (theta.theta1(), theta.theta2(), theta.theta_total());
    let nf = n as f64;
    let lg = |z: f64| ln_gamma(z).expect("positive argument");
    let ln = lg(nf + 1.0) + lg(t1 + nf) - lg(t1) - (t + 2.0 * nf - 1.0).ln() - (lg(t + nf - 1.0) - lg(t))
        - (lg(t2 + nf) - lg(t2));
    ln.exp()
}
