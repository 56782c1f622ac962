//! Transition density of the Wright–Fisher diffusion, in the Jacobi spectral
//! form and in the coalescent (death-process mixture) form.

use super::death::{death_process_with, DeathConfig};
use super::jacobi::{pi_n, OrthoJacobi};
use super::theta::{speed_density, ThetaParams};
use crate::error::{Error, Result};
use crate::hyperfun::ln_gamma;

/// Below this time the spectral series needs too many terms; the automatic
/// choice switches to the coalescent form.
pub const SPECTRAL_MIN_T: f64 = 0.02;

/// Largest spectral degree before the series is declared unreachable.
const SPECTRAL_CAP: usize = 50_000;

/// Level cap used for the death process behind the coalescent form.
pub(crate) const DENSITY_DEATH_CAP: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Spectral,
    Coalescent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEval {
    pub value: f64,
    pub terms_used: usize,
    pub representation: Representation,
    pub tail_bound: f64,
    /// Magnitude removed when a slightly negative truncated sum was clamped to 0.
    pub clamped: f64,
}

impl DensityEval {
    fn finish(raw: f64, terms_used: usize, representation: Representation, tail_bound: f64) -> Self {
        let clamped = (-raw).max(0.0);
        Self { value: raw.max(0.0), terms_used, representation, tail_bound, clamped }
    }

    fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.tail_bound *= factor;
        self.clamped *= factor;
        self
    }
}

fn check_inputs(t: f64, x: f64, y: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time t = {t} must be positive and finite")));
    }
    for (name, v) in [("x", x), ("y", y)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("{name} = {v} must lie in [0, 1]")));
        }
    }
    Ok(())
}

/// Transition density `p_m(t, x, y)` with respect to the speed measure.
pub fn transition_density_m(
    theta: &ThetaParams,
    t: f64,
    x: f64,
    y: f64,
    rep: Representation,
    tol: f64,
) -> Result<DensityEval> {
    check_inputs(t, x, y)?;
    match rep {
        Representation::Spectral => spectral_m(theta, t, x, y, tol),
        Representation::Coalescent => coalescent_m(theta, t, x, y, tol),
    }
}

/// Transition density `p(t, x, y)` with respect to Lebesgue measure; `y ∈ (0, 1)`.
pub fn transition_density(
    theta: &ThetaParams,
    t: f64,
    x: f64,
    y: f64,
    rep: Representation,
    tol: f64,
) -> Result<DensityEval> {
    let m = speed_density(theta, y)?;
    Ok(transition_density_m(theta, t, x, y, rep, tol)?.scaled(m))
}

/// Picks the coalescent form for `t < SPECTRAL_MIN_T`, the spectral form otherwise.
pub fn auto_representation(t: f64) -> Representation {
    if t < SPECTRAL_MIN_T {
        Representation::Coalescent
    } else {
        Representation::Spectral
    }
}

pub fn transition_density_auto(theta: &ThetaParams, t: f64, x: f64, y: f64, tol: f64) -> Result<DensityEval> {
    transition_density(theta, t, x, y, auto_representation(t), tol)
}

// Σ_n e^{−λ_n t} p_n(x) p_n(y). Each term is bounded by e^{−λ_n t} max(p_n(0)², p_n(1)²),
// and those endpoint values are the largest on [0,1] for these parameters.
fn spectral_m(theta: &ThetaParams, t: f64, x: f64, y: f64, tol: f64) -> Result<DensityEval> {
    let swapped = theta.swapped();
    let envelope = |n: usize| {
        let peak = 1.0 / pi_n(theta, n) + 1.0 / pi_n(&swapped, n);
        (-theta.death_rate(n) * t).exp() * (n as f64 + 1.0) * peak
    };
    let mut n_max = 1;
    while envelope(n_max) >= tol {
        n_max += 1;
        if n_max > SPECTRAL_CAP {
            return Err(Error::ToleranceUnreachable {
                tol,
                detail: format!("spectral series needs more than {SPECTRAL_CAP} terms at t = {t}"),
            });
        }
    }
    let basis = OrthoJacobi::new(theta, n_max);
    let px = basis.values(x, n_max);
    let py = basis.values(y, n_max);
    let sum: f64 = (0..=n_max).map(|n| (-theta.death_rate(n) * t).exp() * px[n] * py[n]).sum();
    Ok(DensityEval::finish(sum, n_max + 1, Representation::Spectral, envelope(n_max)))
}

/// `S_n(x, y) = Σ_k C(n,k) (xy)^k ((1−x)(1−y))^{n−k} (|θ|)_n / ((θ₁)_k (θ₂)_{n−k})`,
/// the `n`-lineage term of the coalescent form of `p_m`.
///
/// Summed outwards from the dominant `k` until terms drop below `1e−17` of the total.
pub fn mixture_kernel(theta: &ThetaParams, n: usize, x: f64, y: f64) -> f64 {
    let (t1, t2, tt) = (theta.theta1(), theta.theta2(), theta.theta_total());
    let u = x * y;
    let v = (1.0 - x) * (1.0 - y);
    let nf = n as f64;
    let lg = |z: f64| ln_gamma(z).expect("positive argument");
    let ln_term = |k: usize| {
        let kf = k as f64;
        let mut l = lg(nf + 1.0) - lg(kf + 1.0) - lg(nf - kf + 1.0) + lg(tt + nf) - lg(tt) - lg(t1 + kf) + lg(t1)
            - lg(t2 + nf - kf)
            + lg(t2);
        if k > 0 {
            l += kf * u.ln();
        }
        if k < n {
            l += (nf - kf) * v.ln();
        }
        l
    };
    if n == 0 {
        return 1.0;
    }
    if u == 0.0 && v == 0.0 {
        return 0.0;
    }
    let k0 = if u == 0.0 {
        0
    } else if v == 0.0 {
        n
    } else {
        ((nf * u.sqrt() / (u.sqrt() + v.sqrt())).round() as usize).min(n)
    };
    let ratio = |k: usize| (nf - k as f64) / (k as f64 + 1.0) * (u / v) * (t2 + nf - k as f64 - 1.0) / (t1 + k as f64);
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in k0..n {
        term *= ratio(k);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    term = 1.0;
    for k in (1..=k0).rev() {
        term /= ratio(k - 1);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    ln_term(k0).exp() * sum
}

// Σ_n q_n(t) S_n(x, y).
fn coalescent_m(theta: &ThetaParams, t: f64, x: f64, y: f64, tol: f64) -> Result<DensityEval> {
    let death = death_process_with(theta, t, &DeathConfig { tol, max_level: DENSITY_DEATH_CAP })?;
    let n_max = death.probabilities.len() - 1;
    let sum: f64 = death
        .probabilities
        .iter()
        .enumerate()
        .filter(|(_, &q)| q > 0.0)
        .map(|(n, &q)| q * mixture_kernel(theta, n, x, y))
        .sum();
    Ok(DensityEval::finish(sum, n_max + 1, Representation::Coalescent, death.tail_bound))
}
