//! Line-of-descent death process `D` entering from infinity, with death rates
//! `λ_n = n(n+|θ|−1)/2`.
//!
//! The law of `D_t` is computed from a finite chain started at level `M`:
//! the chain is solved by uniformization (all terms positive), and the time
//! `τ_M = Σ_{j>M} T_j` the entrance process needs to come down to `M` is
//! integrated out with a five-point Gauss rule built from its cumulants.
//! `M` grows geometrically until successive answers agree in total variation.

use super::theta::ThetaParams;
use crate::error::{Error, Result};
use crate::hyperfun::ln_gamma;
use nalgebra::{DMatrix, SymmetricEigen};

/// Law of `D_t` over `n = 0..=truncation_level`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeathProcessDist {
    pub t: f64,
    pub probabilities: Vec<f64>,
    pub truncation_level: usize,
    /// Total-variation change observed at the last refinement of the level.
    pub tail_bound: f64,
}

impl DeathProcessDist {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probabilities.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    /// `P(D_t ≤ n)` for every `n`.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeathConfig {
    /// Target total-variation accuracy.
    pub tol: f64,
    /// Hard cap on the starting level `M`.
    pub max_level: usize,
}

impl Default for DeathConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_level: 500 }
    }
}

pub fn death_process(theta: &ThetaParams, t: f64, tol: f64) -> Result<DeathProcessDist> {
    death_process_with(theta, t, &DeathConfig { tol, ..DeathConfig::default() })
}

pub fn death_process_with(theta: &ThetaParams, t: f64, cfg: &DeathConfig) -> Result<DeathProcessDist> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time t = {t} must be positive and finite")));
    }
    let unreachable = |m: usize| Error::ToleranceUnreachable {
        tol: cfg.tol,
        detail: format!("death-process level {m} exceeds cap {} at t = {t}", cfg.max_level),
    };
    // τ_M has mean ≈ 2/M, so M = 4/t puts the descent near t/2.
    let mut level = (4.0 / t).ceil() as usize + 10;
    if level > cfg.max_level {
        return Err(unreachable(level));
    }
    let mut prev = entrance_marginal(theta, t, level);
    loop {
        let next_level = (level * 3).div_ceil(2);
        if next_level > cfg.max_level {
            return Err(unreachable(next_level));
        }
        let next = entrance_marginal(theta, t, next_level);
        let tv: f64 = next
            .iter()
            .enumerate()
            .map(|(n, &p)| (p - prev.get(n).copied().unwrap_or(0.0)).abs())
            .sum::<f64>()
            * 0.5;
        if tv < cfg.tol {
            let mut probabilities = next;
            while probabilities.len() > 1 && *probabilities.last().unwrap() == 0.0 {
                probabilities.pop();
            }
            return Ok(DeathProcessDist { t, probabilities, truncation_level: next_level, tail_bound: tv });
        }
        prev = next;
        level = next_level;
    }
}

/// Law of `D_t` for the entrance process, approximated through level `m`.
fn entrance_marginal(theta: &ThetaParams, t: f64, m: usize) -> Vec<f64> {
    let (shifts, weights) = descent_time_rule(theta, m);
    let times: Vec<f64> = shifts.iter().map(|s| (t - s).max(0.0)).collect();
    let runs = uniformized(theta, m, &times);
    let mut out = vec![0.0; m + 1];
    for (w, run) in weights.iter().zip(&runs) {
        for (o, p) in out.iter_mut().zip(run) {
            *o += w * p;
        }
    }
    out.iter_mut().for_each(|p| *p = p.max(0.0));
    out
}

/// Points in the Gauss rule for the descent time `τ_m`.
const RULE_POINTS: usize = 5;
const CUMULANTS: usize = 2 * RULE_POINTS;

// Σ_{j>m} λ_j^{-r}, r = 1..=CUMULANTS: explicit to m + 4000, Euler–Maclaurin tail beyond.
fn inverse_rate_sums(theta: &ThetaParams, m: usize) -> [f64; CUMULANTS] {
    let c = theta.theta_total() - 1.0;
    let start = m + 4001;
    let mut s = [0.0; CUMULANTS];
    for j in (m + 1..start).rev() {
        let inv = 1.0 / theta.death_rate(j);
        let mut p = inv;
        for v in s.iter_mut() {
            *v += p;
            p *= inv;
        }
    }
    // f(x) = (2/(x(x+c)))^r = Σ_k a_k x^{-(2r+k)} with a_k = 2^r·C(−r, k)·c^k, and
    // Σ_{j≥N} f(j) ≈ ∫_N^∞ f + f(N)/2 − f′(N)/12 + f‴(N)/720.
    let n = start as f64;
    for (i, v) in s.iter_mut().enumerate() {
        let r = (i + 1) as f64;
        let mut coef = 2f64.powf(r);
        let mut tail = 0.0;
        for k in 0..6 {
            let p = 2.0 * r + k as f64;
            let f = coef * n.powf(-p);
            tail += f * n / (p - 1.0) + 0.5 * f + p * f / (12.0 * n)
                - p * (p + 1.0) * (p + 2.0) * f / (720.0 * n.powi(3));
            coef *= -(r + k as f64) / (k as f64 + 1.0) * c;
        }
        *v += tail;
    }
    s
}

/// Gauss rule for the law of `τ_m = Σ_{j>m} T_j`, built from its cumulants
/// `κ_r = (r−1)! Σ_{j>m} λ_j^{−r}` (Golub–Welsch on the moment matrix of
/// the standardised variable). Returns absolute nodes and weights.
fn descent_time_rule(theta: &ThetaParams, m: usize) -> (Vec<f64>, Vec<f64>) {
    let s = inverse_rate_sums(theta, m);
    let mean = s[0];
    let sd = s[1].sqrt();
    // Standardised cumulants, then raw moments of Z = (τ − mean)/sd.
    let mut kappa = [0.0; CUMULANTS + 1];
    let mut fact = 1.0;
    for r in 2..=CUMULANTS {
        fact *= (r - 1) as f64;
        kappa[r] = fact * s[r - 1] / sd.powi(r as i32);
    }
    let mut mu = [0.0; CUMULANTS + 1];
    mu[0] = 1.0;
    for n in 1..=CUMULANTS {
        let mut binom = 1.0;
        let mut acc = 0.0;
        for k in 0..n {
            acc += binom * kappa[k + 1] * mu[n - 1 - k];
            binom *= (n - 1 - k) as f64 / (k + 1) as f64;
        }
        mu[n] = acc;
    }
    for points in (1..=RULE_POINTS).rev() {
        if let Some((z, w)) = gauss_from_moments(&mu, points) {
            return (z.iter().map(|z| mean + sd * z).collect(), w);
        }
    }
    (vec![mean], vec![1.0])
}

fn gauss_from_moments(mu: &[f64], n: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let hankel = DMatrix::from_fn(n + 1, n + 1, |i, j| mu[i + j]);
    let r = hankel.cholesky()?.l().transpose();
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let prev = if j == 0 { 0.0 } else { r[(j - 1, j)] / r[(j - 1, j - 1)] };
        jac[(j, j)] = r[(j, j + 1)] / r[(j, j)] - prev;
        if j + 1 < n {
            let off = r[(j + 1, j + 1)] / r[(j, j)];
            jac[(j, j + 1)] = off;
            jac[(j + 1, j)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let weights: Vec<f64> = (0..n).map(|i| eig.eigenvectors[(0, i)].powi(2)).collect();
    (nodes.iter().all(|z| z.is_finite()) && weights.iter().all(|&w| w > 0.0)).then_some((nodes, weights))
}

// Poisson(mu) weights over the range carrying all but ~1e-18 of the mass.
fn poisson_weights(mu: f64) -> (usize, Vec<f64>) {
    if mu == 0.0 {
        return (0, vec![1.0]);
    }
    let mode = mu.floor() as usize;
    let ln_w0 = -mu + mode as f64 * mu.ln() - ln_gamma(mode as f64 + 1.0).expect("positive");
    let w0 = ln_w0.exp();
    let cutoff = 1e-20 * w0;
    let mut down = Vec::new();
    let mut w = w0;
    let mut k = mode;
    while k > 0 {
        w *= k as f64 / mu;
        k -= 1;
        if w < cutoff {
            break;
        }
        down.push(w);
    }
    let lo = mode - down.len();
    let mut out: Vec<f64> = down.into_iter().rev().collect();
    out.push(w0);
    let mut w = w0;
    let mut k = mode;
    loop {
        k += 1;
        w *= mu / k as f64;
        if w < cutoff {
            break;
        }
        out.push(w);
    }
    // ln w0 loses ~1e-16·μ absolutely to cancellation; renormalise.
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|w| *w /= total);
    (lo, out)
}

/// Law at each of `times` of the chain started at level `m`, by uniformization
/// at rate `λ_m`. One pass of the jump chain serves every time.
fn uniformized(theta: &ThetaParams, m: usize, times: &[f64]) -> Vec<Vec<f64>> {
    let big = theta.death_rate(m);
    let rates: Vec<f64> = (0..=m).map(|n| theta.death_rate(n) / big).collect();
    let plans: Vec<(usize, Vec<f64>)> = times.iter().map(|&s| poisson_weights(big * s)).collect();
    let k_max = plans.iter().map(|(lo, w)| lo + w.len()).max().unwrap_or(1);
    let mut out = vec![vec![0.0; m + 1]; times.len()];
    let mut v = vec![0.0; m + 1];
    v[m] = 1.0;
    // Levels outside [lo, hi] hold less than NEGLIGIBLE each and are dropped.
    const NEGLIGIBLE: f64 = 1e-30;
    let (mut lo, mut hi) = (m, m);
    for k in 0..k_max {
        for ((first, w), acc) in plans.iter().zip(out.iter_mut()) {
            if k >= *first && k < first + w.len() {
                let wk = w[k - first];
                for n in lo..=hi {
                    acc[n] += wk * v[n];
                }
            }
        }
        let new_lo = lo.saturating_sub(1);
        for n in new_lo..=hi {
            let stay = if n >= lo { v[n] * (1.0 - rates[n]) } else { 0.0 };
            let arrive = if n < hi { v[n + 1] * rates[n + 1] } else { 0.0 };
            v[n] = stay + arrive;
        }
        lo = new_lo;
        while lo < hi && v[lo] < NEGLIGIBLE {
            v[lo] = 0.0;
            lo += 1;
        }
        while hi > lo && v[hi] < NEGLIGIBLE {
            v[hi] = 0.0;
            hi -= 1;
        }
    }
    out
}
