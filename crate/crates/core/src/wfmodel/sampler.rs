//! Exact draws from `p(t, x, ·)` through the coalescent mixture:
//! `n ~ q(t)`, `k ~ Binomial(n, x)`, `y ~ Beta(θ₁ + k, θ₂ + n − k)`.

use rand::Rng;
use rand_distr::{Beta, Binomial, Distribution};

use super::death::{death_process_with, DeathConfig};
use super::density::DENSITY_DEATH_CAP;
use super::theta::ThetaParams;
use crate::error::{Error, Result};

/// Caches the death-process law for one `(θ, t)` pair.
#[derive(Debug, Clone)]
pub struct TransitionSampler {
    theta: ThetaParams,
    t: f64,
    cdf: Vec<f64>,
}

impl TransitionSampler {
    pub fn new(theta: &ThetaParams, t: f64, tol: f64) -> Result<Self> {
        let death = death_process_with(theta, t, &DeathConfig { tol, max_level: DENSITY_DEATH_CAP })?;
        let mut cdf = death.cdf();
        // Force the last entry to 1 so the inverse CDF never runs off the end.
        if let Some(last) = cdf.last_mut() {
            *last = f64::INFINITY;
        }
        Ok(Self { theta: *theta, t, cdf })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn theta(&self) -> &ThetaParams {
        &self.theta
    }

    /// Number of surviving lineages `D_t`.
    pub fn sample_lineages<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c <= u)
    }

    /// One draw from `p(t, x, ·)`, strictly inside `(0, 1)`.
    pub fn sample<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} must lie in [0, 1]")));
        }
        let n = self.sample_lineages(rng);
        let k = if n == 0 {
            0
        } else {
            Binomial::new(n as u64, x).map_err(|e| Error::Parameter(e.to_string()))?.sample(rng) as usize
        };
        let shape1 = self.theta.theta1() + k as f64;
        let shape2 = self.theta.theta2() + (n - k) as f64;
        let y: f64 = Beta::new(shape1, shape2).map_err(|e| Error::Parameter(e.to_string()))?.sample(rng);
        // Beta draws with small shapes can underflow to the endpoints.
        Ok(y.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0))
    }
}

/// One exact transition draw. Builds the death-process law each call; use a
/// [`TransitionSampler`] for repeated draws at the same `t`.
pub fn exact_transition_sample<R: Rng + ?Sized>(theta: &ThetaParams, t: f64, x: f64, rng: &mut R) -> Result<f64> {
    TransitionSampler::new(theta, t, 1e-10)?.sample(x, rng)
}
