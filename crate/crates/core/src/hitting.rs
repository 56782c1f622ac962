//! Eigenfunctions `Φ_{λ,±}` of the generator (plain and killed at one end),
//! hitting-time Laplace transforms and the two-sided exit problem.

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::hyperfun::{f21, gamma_ratio, hyp2f1_deriv, HypParams};
use crate::wfmodel::{spectral_index, SpectralIndex, ThetaParams};

/// Boundary behaviour the eigenfunctions are built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Killing {
    Unkilled,
    /// Killed on reaching 0.
    At0,
    /// Killed on reaching 1.
    At1,
}

/// `Plus` is the decreasing solution `Φ_{λ,+}`, `Minus` the increasing `Φ_{λ,−}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Zero,
    One,
}

impl Boundary {
    pub fn opposite(self) -> Self {
        match self {
            Boundary::Zero => Boundary::One,
            Boundary::One => Boundary::Zero,
        }
    }

    pub fn point(self) -> f64 {
        match self {
            Boundary::Zero => 0.0,
            Boundary::One => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub theta: ThetaParams,
    pub idx: SpectralIndex,
    pub kind: Killing,
}

impl EigenPair {
    pub fn new(theta: &ThetaParams, lambda: f64, kind: Killing) -> Result<Self> {
        Ok(Self { theta: *theta, idx: spectral_index(theta, lambda)?, kind })
    }

    pub fn phi(&self, sign: Sign, x: f64) -> Result<f64> {
        phi(self, sign, x)
    }
}

fn re(v: f64) -> C {
    C::new(v, 0.0)
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} must lie in [0, 1]")))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda = {lambda} must be finite and >= 0")))
    }
}

/// `Φ_{λ,±}` (or its killed variant) at `x`.
pub fn phi(e: &EigenPair, sign: Sign, x: f64) -> Result<f64> {
    check_unit(x)?;
    let (a, b) = (e.idx.a, e.idx.b);
    let (t1, t2) = (e.theta.theta1(), e.theta.theta2());
    match (e.kind, sign) {
        (Killing::Unkilled | Killing::At0, Sign::Plus) => f21(a, b, t2, 1.0 - x),
        (Killing::Unkilled | Killing::At1, Sign::Minus) => f21(a, b, t1, x),
        (Killing::At0, Sign::Minus) => {
            if x == 0.0 {
                return Ok(0.0);
            }
            Ok(x.powf(1.0 - t1) * f21(t2 - b, t2 - a, 2.0 - t1, x)?)
        }
        (Killing::At1, Sign::Plus) => {
            if x == 1.0 {
                return Ok(0.0);
            }
            Ok((1.0 - x).powf(1.0 - t2) * f21(t1 - a, t1 - b, 2.0 - t2, 1.0 - x)?)
        }
    }
}

/// Endpoint values of the killed eigenfunctions that do not vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiBoundaryValues {
    /// `Φ⁰_{λ,+}(0) = Γ(θ₂)Γ(1−θ₁)/(Γ(θ₂−a)Γ(θ₂−b))`.
    pub plus_killed0_at0: f64,
    /// `Φ⁰_{λ,−}(1) = Γ(2−θ₁)Γ(1−θ₂)/(Γ(1−a)Γ(1−b))`.
    pub minus_killed0_at1: f64,
    /// `Φ¹_{λ,+}(0) = Γ(2−θ₂)Γ(1−θ₁)/(Γ(1−a)Γ(1−b))`.
    pub plus_killed1_at0: f64,
    /// `Φ¹_{λ,−}(1) = Γ(θ₁)Γ(1−θ₂)/(Γ(θ₁−a)Γ(θ₁−b))`.
    pub minus_killed1_at1: f64,
}

pub fn phi_boundary_values(theta: &ThetaParams, lambda: f64) -> Result<PhiBoundaryValues> {
    let idx = spectral_index(theta, lambda)?;
    let (a, b) = (idx.a, idx.b);
    let (t1, t2) = (re(theta.theta1()), re(theta.theta2()));
    let one = re(1.0);
    let two = re(2.0);
    Ok(PhiBoundaryValues {
        plus_killed0_at0: gamma_ratio(&[t2, one - t1], &[t2 - a, t2 - b])?.re,
        minus_killed0_at1: gamma_ratio(&[two - t1, one - t2], &[one - a, one - b])?.re,
        plus_killed1_at0: gamma_ratio(&[two - t2, one - t1], &[one - a, one - b])?.re,
        minus_killed1_at1: gamma_ratio(&[t1, one - t2], &[t1 - a, t1 - b])?.re,
    })
}

/// `E_x[e^{−λH_y}]`.
pub fn hitting_laplace(theta: &ThetaParams, lambda: f64, x: f64, y: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_unit(x)?;
    check_unit(y)?;
    if x == y || lambda == 0.0 {
        return Ok(1.0);
    }
    let e = EigenPair::new(theta, lambda, Killing::Unkilled)?;
    let sign = if x < y { Sign::Minus } else { Sign::Plus };
    Ok(phi(&e, sign, x)? / phi(&e, sign, y)?)
}

/// `P_x(H₁ < H₀) = B(1−θ₁, 1−θ₂; x)/B(1−θ₁, 1−θ₂)`.
pub fn exit_prob(theta: &ThetaParams, x: f64) -> Result<f64> {
    check_unit(x)?;
    if x > 0.5 {
        return Ok(1.0 - exit_prob(&theta.swapped(), 1.0 - x)?);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let (t1, t2) = (theta.theta1(), theta.theta2());
    let f = f21(re(1.0 - t1), re(t2), 2.0 - t1, x)?;
    Ok(x.powf(1.0 - t1) * f / (theta.beta_complement() * (1.0 - t1)))
}

/// `E_x[e^{−λH_b}; H_b < H_{1−b}]`, the Laplace transform of an exit through `target`.
pub fn restricted_laplace(theta: &ThetaParams, lambda: f64, x: f64, target: Boundary) -> Result<f64> {
    check_lambda(lambda)?;
    check_unit(x)?;
    let bv = phi_boundary_values(theta, lambda)?;
    match target {
        Boundary::One => {
            let e = EigenPair::new(theta, lambda, Killing::At0)?;
            Ok(phi(&e, Sign::Minus, x)? / bv.minus_killed0_at1)
        }
        Boundary::Zero => {
            let e = EigenPair::new(theta, lambda, Killing::At1)?;
            Ok(phi(&e, Sign::Plus, x)? / bv.plus_killed1_at0)
        }
    }
}

/// Limits of exit functionals normalised by exit probabilities at the boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryRatioLimits {
    /// `lim_{x→0} E_x[(1−e^{−λH₀}); H₀<H₁] / P_x(H₁<H₀)`.
    pub return_near0: f64,
    /// `lim_{x→1} E_x[(1−e^{−λH₁}); H₁<H₀] / P_x(H₀<H₁)`.
    pub return_near1: f64,
    /// `lim_{x→0} E_x[e^{−λH₁}; H₁<H₀] / P_x(H₁<H₀)`, equal to the mirror limit at 1:
    /// `Γ(1−a)Γ(1−b)/Γ(2−|θ|)`.
    pub crossing: f64,
}

pub fn boundary_ratio_limits(theta: &ThetaParams, lambda: f64) -> Result<BoundaryRatioLimits> {
    check_lambda(lambda)?;
    let idx = spectral_index(theta, lambda)?;
    let (a, b) = (idx.a, idx.b);
    let (t1, t2) = (re(theta.theta1()), re(theta.theta2()));
    let one = re(1.0);
    let crossing = gamma_ratio(&[one - a, one - b], &[re(2.0 - theta.theta_total())])?.re;
    let r0 = gamma_ratio(&[one - t2, t1], &[t1 - a, t1 - b])?.re;
    let r1 = gamma_ratio(&[one - t1, t2], &[t2 - a, t2 - b])?.re;
    Ok(BoundaryRatioLimits { return_near0: crossing * r0 - 1.0, return_near1: crossing * r1 - 1.0, crossing })
}

/// The scale derivative `Φ_{λ,−}'(y)/s'(y)`, which vanishes as `y → 0` (reflecting boundary).
pub fn phi_minus_scale_derivative(theta: &ThetaParams, lambda: f64, y: f64) -> Result<f64> {
    let idx = spectral_index(theta, lambda)?;
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Domain(format!("y = {y} must lie in (0, 1)")));
    }
    let d = hyp2f1_deriv(&HypParams::new(idx.a, idx.b, theta.theta1(), y))?;
    let (t1, t2) = (theta.theta1(), theta.theta2());
    Ok(d * y.powf(t1) * (1.0 - y).powf(t2) / (2.0 * theta.beta()))
}
