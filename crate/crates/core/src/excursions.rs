//! The excursion measure of the diffusion away from its boundaries.
//!
//! Local time is in the Itô–McKean normalisation tied to the Beta speed
//! measure, so every rate below scales with that choice of `m`.

use num_complex::Complex64 as C;
use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::hitting::{boundary_ratio_limits, restricted_laplace, Boundary};
use crate::hyperfun::gamma_ratio;
use crate::laplinv::{invert_detailed, invert_unchecked, InversionConfig};
use crate::quadrature::gauss_legendre;
use crate::wfmodel::{singular_lambda, spectral_index, speed_density, ThetaParams};

fn re(v: f64) -> C {
    C::new(v, 0.0)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda = {lambda} must be finite and >= 0")))
    }
}

// Boundary-0 quantities for `from = One` are the boundary-0 quantities of the mirrored process.
fn oriented(theta: &ThetaParams, from: Boundary) -> ThetaParams {
    match from {
        Boundary::Zero => *theta,
        Boundary::One => theta.swapped(),
    }
}

/// Rate `1/(2B(θ₁,θ₂)B(1−θ₁,1−θ₂))` of excursions that leave one boundary
/// for good and end at the other.
pub fn switch_rate(theta: &ThetaParams) -> f64 {
    1.0 / (2.0 * theta.beta() * theta.beta_complement())
}

/// `λ n_λ 1 = n(1 − e^{−λH_b})` for excursions from `from` (returning to it at `H_b`).
pub fn total_mass(theta: &ThetaParams, lambda: f64, from: Boundary) -> Result<f64> {
    check_lambda(lambda)?;
    let t = oriented(theta, from);
    let idx = spectral_index(&t, lambda)?;
    let (a, b) = (idx.a, idx.b);
    let (t1, t2) = (t.theta1(), t.theta2());
    let one = re(1.0);
    let num = [re(t.theta_total()), one - a, one - b];
    let den = [re(1.0 - t1), re(t2), re(t1) - a, re(t1) - b];
    Ok(0.5 * gamma_ratio(&num, &den)?.re)
}

/// Excursion functionals `φ_{i,j}(λ) = n^{i}((1 − e^{−λH_i}); H_j < H_{1−j})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiFunctionals {
    pub lambda: f64,
    pub phi00: f64,
    pub phi01: f64,
    pub phi10: f64,
    pub phi11: f64,
}

pub fn phi_functionals(theta: &ThetaParams, lambda: f64) -> Result<PhiFunctionals> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Ok(PhiFunctionals { lambda, phi00: 0.0, phi01: 0.0, phi10: 0.0, phi11: 0.0 });
    }
    let switch = switch_rate(theta);
    let crossing = boundary_ratio_limits(theta, lambda)?.crossing;
    let across = switch * (1.0 - crossing);
    Ok(PhiFunctionals {
        lambda,
        phi00: total_mass(theta, lambda, Boundary::Zero)? - switch,
        phi01: across,
        phi10: across,
        phi11: total_mass(theta, lambda, Boundary::One)? - switch,
    })
}

/// Density in `x` of the Laplace-transformed entrance law `n_λ(dx) = ∫ e^{−λt} n_t(dx) dt`
/// of excursions from `from`, killed on reaching the opposite boundary.
///
/// Equals `m(x)·E_x[e^{−λH_b}; H_b < H_{1−b}]`, which is the bracketed `₂F₁`
/// difference rewritten through the connection formula at `x = 1`.
pub fn entrance_law_laplace(theta: &ThetaParams, lambda: f64, from: Boundary, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("x = {x} must lie in (0, 1)")));
    }
    let (t, y) = match from {
        Boundary::Zero => (*theta, x),
        Boundary::One => (theta.swapped(), 1.0 - x),
    };
    Ok(speed_density(&t, y)? * restricted_laplace(&t, lambda, y, Boundary::Zero)?)
}

/// Total mass `∫ n_λ(dx)` of the Laplace-transformed entrance law.
///
/// Quadrature: `x = u^{1/θ}` at each edge flattens the `x^{θ−1}` speed-density
/// factor and a geometric mesh in `u` absorbs the fractional corrections.
pub fn entrance_law_mass(theta: &ThetaParams, lambda: f64, from: Boundary) -> Result<f64> {
    check_lambda(lambda)?;
    let t = oriented(theta, from);
    let gl = gauss_legendre(16);
    let density = |x: f64| -> Result<f64> { Ok(speed_density(&t, x)? * restricted_laplace(&t, lambda, x, Boundary::Zero)?) };
    let mut total = 0.0;
    for (p, mirror) in [(t.theta1(), false), (t.theta2(), true)] {
        let k = 1.0 / p;
        let mut hi = 0.5f64.powf(p);
        for _ in 0..MASS_LEVELS {
            let lo = 0.5 * hi;
            total += (hi - lo)
                * gl.try_integrate(|v| {
                    let u = lo + (hi - lo) * v;
                    let s = u.powf(k);
                    let x = if mirror { 1.0 - s } else { s };
                    // Beyond f64 resolution of the far edge the (finite) density has no weight.
                    if x >= 1.0 {
                        return Ok(0.0);
                    }
                    Ok(k * u.powf(k - 1.0) * density(x)?)
                })?;
            hi = lo;
        }
    }
    Ok(total)
}

// Halvings of the graded mesh; the uncovered piece is O(2^{-60}).
const MASS_LEVELS: usize = 60;

/// Entrance density `n_t(dx)/dx` at time `t`, by numerical Laplace inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntranceDensity {
    pub value: f64,
    /// Relative disagreement between the two inversion orders.
    pub discrepancy: f64,
}

pub fn entrance_density_time(
    theta: &ThetaParams,
    t: f64,
    from: Boundary,
    x: f64,
    cfg: &InversionConfig,
) -> Result<EntranceDensity> {
    let inv = invert_detailed(|lambda| entrance_law_laplace(theta, lambda, from, x), t, cfg)?;
    Ok(EntranceDensity { value: inv.value, discrepancy: inv.discrepancy })
}

/// As [`entrance_density_time`], but returns the inverted value even when the
/// inversion orders disagree; callers flag it through `discrepancy`.
pub fn entrance_density_time_unchecked(
    theta: &ThetaParams,
    t: f64,
    from: Boundary,
    x: f64,
    cfg: &InversionConfig,
) -> Result<EntranceDensity> {
    let inv = invert_unchecked(|lambda| entrance_law_laplace(theta, lambda, from, x), t, cfg)?;
    Ok(EntranceDensity { value: inv.value, discrepancy: inv.discrepancy })
}

/// Least-squares slope of `log φ_{b,b}(λ)` against `log λ`; the top decade counts twice.
///
/// The slope estimates the lower index of the inverse local time at `b`, which
/// is the Hausdorff dimension of the time set spent at `b`: `1 − θ₁` at 0 and
/// `1 − θ₂` at 1.
pub fn hausdorff_index(theta: &ThetaParams, boundary: Boundary, lambda_grid: &[f64]) -> Result<f64> {
    let (lo, hi) = lambda_grid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| (lo.min(l), hi.max(l)));
    if lambda_grid.len() < 3 || !(hi / lo >= 1e4) {
        return Err(Error::GridTooNarrow(format!("grid spans [{lo}, {hi}], need at least four decades")));
    }
    if lo <= singular_lambda(theta) {
        return Err(Error::GridTooNarrow(format!("grid must stay above {}", singular_lambda(theta))));
    }
    let top = hi / 10.0;
    let mut pts = Vec::with_capacity(lambda_grid.len());
    for &l in lambda_grid {
        let p = phi_functionals(theta, l)?;
        let v = match boundary {
            Boundary::Zero => p.phi00,
            Boundary::One => p.phi11,
        };
        if !(v > 0.0) {
            return Err(Error::Domain(format!("φ({l}) = {v} is not positive")));
        }
        pts.push((l.ln(), v.ln(), if l >= top { 2.0 } else { 1.0 }));
    }
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// `n` log-spaced points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp()).collect()
}

/// One sojourn at a boundary: returning excursions fill the local-time interval
/// `[local_time_start, local_time_end)` of `boundary`, and a switching excursion
/// to the other boundary starts at `local_time_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sojourn {
    pub boundary: Boundary,
    pub local_time_start: f64,
    pub local_time_end: f64,
}

/// The alternating boundary regime of a path, in local-time coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcursionSkeleton {
    pub segments: Vec<Sojourn>,
    /// Local-time length of each sojourn.
    pub switch_times: Vec<f64>,
}

/// Simulates `n_switches` sojourns starting at boundary 0.
///
/// Switching excursions form a Poisson process of rate [`switch_rate`] in each
/// boundary's local time; excursion interiors are not synthesised.
pub fn sample_skeleton<R: Rng + ?Sized>(theta: &ThetaParams, rng: &mut R, n_switches: usize) -> Result<ExcursionSkeleton> {
    if n_switches == 0 {
        return Err(Error::Parameter("need at least one switch".into()));
    }
    let exp = Exp::new(switch_rate(theta)).map_err(|e| Error::Parameter(e.to_string()))?;
    let mut clock = [0.0f64; 2];
    let mut boundary = Boundary::Zero;
    let mut segments = Vec::with_capacity(n_switches);
    let mut switch_times = Vec::with_capacity(n_switches);
    for _ in 0..n_switches {
        let slot = boundary as usize;
        let dur: f64 = exp.sample(rng);
        segments.push(Sojourn { boundary, local_time_start: clock[slot], local_time_end: clock[slot] + dur });
        clock[slot] += dur;
        switch_times.push(dur);
        boundary = boundary.opposite();
    }
    Ok(ExcursionSkeleton { segments, switch_times })
}
