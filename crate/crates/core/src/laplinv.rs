//! Gaver–Stehfest inversion of Laplace transforms sampled on the real axis.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionMethod {
    GaverStehfest,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionConfig {
    pub method: InversionMethod,
    /// Number of Stehfest terms; even, between 8 and 24.
    pub order: usize,
    /// Smallest time accepted.
    pub t_min: f64,
    /// Largest relative gap tolerated between orders `order` and `order − 2`.
    pub consistency_tol: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self { method: InversionMethod::GaverStehfest, order: 16, t_min: 0.05, consistency_tol: 1e-2 }
    }
}

impl InversionConfig {
    fn validate(&self) -> Result<()> {
        if self.order % 2 != 0 || !(8..=24).contains(&self.order) {
            return Err(Error::Parameter(format!("Stehfest order {} must be even and in [8, 24]", self.order)));
        }
        if !(self.consistency_tol > 0.0) {
            return Err(Error::Parameter("consistency tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub value: f64,
    /// `|f_n − f_{n−2}| / |f_n|`.
    pub discrepancy: f64,
}

/// Stehfest weights `V_1..V_n`.
pub fn stehfest_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    let fact = |k: usize| (1..=k).fold(1.0f64, |acc, i| acc * i as f64);
    (1..=n)
        .map(|k| {
            let lo = k.div_ceil(2);
            let hi = k.min(half);
            let s: f64 = (lo..=hi)
                .map(|j| {
                    (j as f64).powi(half as i32) * fact(2 * j)
                        / (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k))
                })
                .sum();
            if (k + half) % 2 == 0 { s } else { -s }
        })
        .collect()
}

// Neumaier's compensated sum.
fn compensated_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in terms {
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + comp
}

fn stehfest(samples: &[f64], order: usize, t: f64) -> f64 {
    let w = stehfest_weights(order);
    std::f64::consts::LN_2 / t * compensated_sum(w.iter().zip(samples).map(|(v, f)| v * f))
}

/// Inverts `transform` at `t` without judging the result; `discrepancy`
/// compares orders `n` and `n − 2`.
pub fn invert_unchecked<F: FnMut(f64) -> Result<f64>>(mut transform: F, t: f64, cfg: &InversionConfig) -> Result<Inversion> {
    cfg.validate()?;
    if !(t >= cfg.t_min) || !t.is_finite() {
        return Err(Error::Domain(format!("t = {t} is below the inversion threshold {}", cfg.t_min)));
    }
    let step = std::f64::consts::LN_2 / t;
    let samples: Vec<f64> = (1..=cfg.order).map(|k| transform(k as f64 * step)).collect::<Result<_>>()?;
    let value = stehfest(&samples, cfg.order, t);
    // The lower order uses the first n − 2 nodes, which are shared.
    let coarse = stehfest(&samples[..cfg.order - 2], cfg.order - 2, t);
    let discrepancy = (value - coarse).abs() / value.abs().max(f64::MIN_POSITIVE);
    Ok(Inversion { value, discrepancy })
}

/// As [`invert_unchecked`], but fails when the two orders disagree by more
/// than `cfg.consistency_tol`.
pub fn invert_detailed<F: FnMut(f64) -> Result<f64>>(transform: F, t: f64, cfg: &InversionConfig) -> Result<Inversion> {
    let inv = invert_unchecked(transform, t, cfg)?;
    if inv.discrepancy > cfg.consistency_tol {
        return Err(Error::InversionUnstable { t, discrepancy: inv.discrepancy });
    }
    Ok(inv)
}

pub fn invert<F: FnMut(f64) -> Result<f64>>(transform: F, t: f64, cfg: &InversionConfig) -> Result<f64> {
    Ok(invert_detailed(transform, t, cfg)?.value)
}
