use crate::error::{Error, Result};
use crate::hyperfun::{beta, f21};
use num_complex::Complex64;

/// Mutation parameters `(θ₁, θ₂)` with both boundaries regular: `0 < θᵢ < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    theta1: f64,
    theta2: f64,
    theta_total: f64,
}

impl ThetaParams {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        for (name, v) in [("theta1", theta1), ("theta2", theta2)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Domain(format!(
                    "{name} = {v} must lie in (0, 1) for both boundaries to be regular"
                )));
            }
        }
        Ok(Self { theta1, theta2, theta_total: theta1 + theta2 })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    /// `|θ| = θ₁ + θ₂`.
    pub fn theta_total(&self) -> f64 {
        self.theta_total
    }

    /// The parameters of `1 − X`.
    pub fn swapped(&self) -> Self {
        Self::new(self.theta2, self.theta1).expect("already validated")
    }

    /// `B(θ₁, θ₂)`.
    pub fn beta(&self) -> f64 {
        beta(self.theta1, self.theta2).expect("positive arguments")
    }

    /// `B(1 − θ₁, 1 − θ₂)`.
    pub fn beta_complement(&self) -> f64 {
        beta(1.0 - self.theta1, 1.0 - self.theta2).expect("positive arguments")
    }

    /// Death rate `λ_n = n(n + |θ| − 1)/2`; also the spectral gap sequence.
    pub fn death_rate(&self, n: usize) -> f64 {
        let n = n as f64;
        0.5 * n * (n + self.theta_total - 1.0)
    }
}

pub fn make_theta(theta1: f64, theta2: f64) -> Result<ThetaParams> {
    ThetaParams::new(theta1, theta2)
}

fn check_open(x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} must lie in (0, 1)")))
    }
}

fn check_closed(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} must lie in [0, 1]")))
    }
}

/// Speed density `m(x) = x^{θ₁−1}(1−x)^{θ₂−1}/B(θ₁, θ₂)`, the Beta(θ₁, θ₂) density.
pub fn speed_density(theta: &ThetaParams, x: f64) -> Result<f64> {
    check_open(x)?;
    Ok(x.powf(theta.theta1 - 1.0) * (1.0 - x).powf(theta.theta2 - 1.0) / theta.beta())
}

/// `s'(x) = 2B(θ₁, θ₂) x^{−θ₁}(1−x)^{−θ₂}`.
pub fn scale_deriv(theta: &ThetaParams, x: f64) -> Result<f64> {
    check_open(x)?;
    Ok(2.0 * theta.beta() * x.powf(-theta.theta1) * (1.0 - x).powf(-theta.theta2))
}

/// Incomplete Beta integral `∫₀ˣ y^{p−1}(1−y)^{q−1} dy`.
pub fn incomplete_beta(p: f64, q: f64, x: f64) -> Result<f64> {
    check_closed(x)?;
    if x > 0.5 {
        return Ok(beta(p, q)? - incomplete_beta(q, p, 1.0 - x)?);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let re = |v: f64| Complex64::new(v, 0.0);
    Ok(x.powf(p) / p * f21(re(p), re(1.0 - q), p + 1.0, x)?)
}

/// Scale function `s(x) = 2B(θ₁, θ₂)·B(1−θ₁, 1−θ₂; x)`, with `s(0) = 0`.
pub fn scale(theta: &ThetaParams, x: f64) -> Result<f64> {
    Ok(2.0 * theta.beta() * incomplete_beta(1.0 - theta.theta1, 1.0 - theta.theta2, x)?)
}
