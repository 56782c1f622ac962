//! Monte Carlo built on the exact transition sampler: paths on a time grid,
//! exit-probability and hitting-time estimators, and boundary occupation.
//!
//! Estimators draw one base seed from the caller's generator and give path
//! `i` its own ChaCha stream `i`, so results do not depend on the number of
//! worker threads.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hitting::exit_prob;
use crate::wfmodel::{ThetaParams, TransitionSampler};

/// Death-process truncation used by the simulators.
pub const SIM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub states: Vec<f64>,
    pub theta: ThetaParams,
    /// Seed of the stream the path was drawn from, when known.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_paths: usize,
    /// Width of the boundary collars used to detect hits.
    pub eps_boundary: f64,
}

/// Step sizes: `near` within 0.1 of either boundary, `bulk` elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub near: f64,
    pub bulk: f64,
    /// Cap on the total number of transitions over a batch of paths.
    pub max_steps: u64,
}

impl Default for StepConfig {
    fn default() -> Self {
        Self { near: 1e-3, bulk: 1e-2, max_steps: 10_000_000 }
    }
}

impl StepConfig {
    pub fn uniform(dt: f64) -> Self {
        Self { near: dt, bulk: dt, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.near > 0.0 && self.bulk > 0.0) {
            return Err(Error::Parameter(format!("step sizes must be positive: {self:?}")));
        }
        Ok(())
    }
}

const NEAR_ZONE: f64 = 0.1;

struct Stepper {
    near: TransitionSampler,
    bulk: TransitionSampler,
}

impl Stepper {
    fn new(theta: &ThetaParams, cfg: &StepConfig) -> Result<Self> {
        cfg.validate()?;
        let near = TransitionSampler::new(theta, cfg.near, SIM_TOL)?;
        let bulk = if cfg.bulk == cfg.near { near.clone() } else { TransitionSampler::new(theta, cfg.bulk, SIM_TOL)? };
        Ok(Self { near, bulk })
    }

    fn step<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> Result<(f64, f64)> {
        let s = if x < NEAR_ZONE || x > 1.0 - NEAR_ZONE { &self.near } else { &self.bulk };
        Ok((s.t(), s.sample(x, rng)?))
    }
}

fn path_rng(base: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index);
    rng
}

/// Exact transitions between consecutive grid times, starting from `x0` at `t_grid[0]`.
pub fn simulate_path<R: Rng + ?Sized>(theta: &ThetaParams, x0: f64, t_grid: &[f64], rng: &mut R) -> Result<PathSample> {
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::Domain(format!("x0 = {x0} must lie in [0, 1]")));
    }
    if t_grid.is_empty() || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("time grid must be non-empty and strictly increasing".into()));
    }
    let mut samplers: Vec<TransitionSampler> = Vec::new();
    let mut states = Vec::with_capacity(t_grid.len());
    let mut x = x0;
    states.push(x0);
    for w in t_grid.windows(2) {
        let gap = w[1] - w[0];
        let idx = match samplers.iter().position(|s| (s.t() - gap).abs() <= 1e-12 * gap) {
            Some(i) => i,
            None => {
                samplers.push(TransitionSampler::new(theta, gap, SIM_TOL)?);
                samplers.len() - 1
            }
        };
        x = samplers[idx].sample(x, rng)?;
        states.push(x);
    }
    Ok(PathSample { times: t_grid.to_vec(), states, theta: *theta, seed: None })
}

/// As [`simulate_path`] with a fresh generator seeded by `seed`.
pub fn simulate_path_seeded(theta: &ThetaParams, x0: f64, t_grid: &[f64], seed: u64) -> Result<PathSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut path = simulate_path(theta, x0, t_grid, &mut rng)?;
    path.seed = Some(seed);
    Ok(path)
}

// Runs `n_paths` independent paths in parallel and returns the per-path scores in order.
fn run_paths<R, F>(rng: &mut R, n_paths: usize, max_steps: u64, per_path: F) -> Result<Vec<f64>>
where
    R: Rng + ?Sized,
    F: Fn(&mut ChaCha8Rng, &AtomicU64) -> Result<f64> + Sync,
{
    if n_paths == 0 {
        return Err(Error::Parameter("need at least one path".into()));
    }
    let base: u64 = rng.random();
    let steps = AtomicU64::new(0);
    let scores: Vec<f64> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| per_path(&mut path_rng(base, i), &steps))
        .collect::<Result<_>>()?;
    if steps.load(Ordering::Relaxed) > max_steps {
        return Err(Error::BudgetExceeded { cap: max_steps });
    }
    Ok(scores)
}

fn summarize(scores: &[f64], eps: f64) -> HitEstimate {
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let var = if scores.len() > 1 { scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    HitEstimate { value: mean, std_error: (var / n).sqrt(), n_paths: scores.len(), eps_boundary: eps }
}

fn charge(steps: &AtomicU64, max_steps: u64) -> Result<()> {
    if steps.fetch_add(1, Ordering::Relaxed) >= max_steps {
        Err(Error::BudgetExceeded { cap: max_steps })
    } else {
        Ok(())
    }
}

/// Estimates `P_{x0}(H₁ < H₀)`.
///
/// Each path runs until it is first seen in `[0, eps]` or `[1 − eps, 1]`; its
/// score is the exact exit probability from that state rather than a 0/1
/// label, which removes the collar-width bias. What remains is the chance of
/// touching a boundary between grid times, which shrinks with the step size.
pub fn estimate_exit_prob<R: Rng + ?Sized>(
    theta: &ThetaParams,
    x0: f64,
    eps: f64,
    steps: &StepConfig,
    n_paths: usize,
    rng: &mut R,
) -> Result<HitEstimate> {
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::Domain(format!("eps = {eps} must lie in (0, 0.1)")));
    }
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::Domain(format!("x0 = {x0} must lie in [0, 1]")));
    }
    let stepper = Stepper::new(theta, steps)?;
    let scores = run_paths(rng, n_paths, steps.max_steps, |r, count| {
        let mut x = x0;
        while x > eps && x < 1.0 - eps {
            charge(count, steps.max_steps)?;
            x = stepper.step(x, r)?.1;
        }
        exit_prob(theta, x)
    })?;
    Ok(summarize(&scores, eps))
}

/// Estimates `E_{x0}[e^{−λH_y}]`, with `H_y` the first grid time at which the
/// path has reached or crossed `y`.
///
/// Grid monitoring sees crossings late, so the estimate is biased low by
/// `O(√dt)`; see [`crossing_bias_allowance`].
pub fn estimate_hitting_laplace<R: Rng + ?Sized>(
    theta: &ThetaParams,
    x0: f64,
    y: f64,
    lambda: f64,
    steps: &StepConfig,
    n_paths: usize,
    rng: &mut R,
) -> Result<HitEstimate> {
    if !(0.0..=1.0).contains(&x0) || !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain(format!("x0 = {x0} and y = {y} must lie in [0, 1]")));
    }
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda = {lambda} must be >= 0")));
    }
    let stepper = Stepper::new(theta, steps)?;
    let above = x0 > y;
    let scores = run_paths(rng, n_paths, steps.max_steps, |r, count| {
        if x0 == y || lambda == 0.0 {
            return Ok(1.0);
        }
        let (mut x, mut t) = (x0, 0.0);
        while (x > y) == above && x != y {
            charge(count, steps.max_steps)?;
            let (dt, next) = stepper.step(x, r)?;
            t += dt;
            x = next;
        }
        Ok((-lambda * t).exp())
    })?;
    Ok(summarize(&scores, 0.0))
}

/// Level shift `0.5826·σ√dt` that makes continuous-time hitting of a shifted
/// level match grid-monitored hitting of the original (σ = √(y(1−y))).
pub fn crossing_shift(y: f64, dt: f64) -> f64 {
    // −ζ(½)/√(2π)
    const BETA1: f64 = 0.582_597_157_939_010_7;
    BETA1 * (y * (1.0 - y) * dt).sqrt()
}

/// Size of the grid-monitoring bias of [`estimate_hitting_laplace`]: the change
/// of the exact transform when the target moves away from `x0` by [`crossing_shift`].
pub fn crossing_bias_allowance(theta: &ThetaParams, x0: f64, y: f64, lambda: f64, dt: f64) -> Result<f64> {
    let shift = crossing_shift(y, dt);
    let shifted = if x0 < y { (y + shift).min(1.0) } else { (y - shift).max(0.0) };
    let exact = crate::hitting::hitting_laplace(theta, lambda, x0, y)?;
    Ok((crate::hitting::hitting_laplace(theta, lambda, x0, shifted)? - exact).abs())
}

/// Fraction of grid times at which the path is below `eps`.
pub fn occupation_near_boundary(path: &PathSample, eps: f64) -> f64 {
    if path.states.is_empty() {
        return 0.0;
    }
    path.states.iter().filter(|&&x| x < eps).count() as f64 / path.states.len() as f64
}
