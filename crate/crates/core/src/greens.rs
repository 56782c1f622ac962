//! Green's functions with respect to the speed measure, and resolvents of the
//! diffusion unkilled, killed at one endpoint and killed at both.

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::hitting::{exit_prob, phi_boundary_values, restricted_laplace, Boundary};
use crate::hyperfun::{f21, gamma_ratio};
use crate::quadrature::{gauss_jacobi, graded_beta_rule, QuadRule};
use crate::wfmodel::{mixture_kernel, spectral_index, speed_density, OrthoJacobi, SpectralIndex, ThetaParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenRep {
    /// `Σ_n p_n(x)p_n(y)/(λ+λ_n)` over the orthonormal Jacobi basis.
    JacobiSeries,
    /// `Σ_n (λ+λ_n)^{-1} Π_{j>n} λ_j/(λ+λ_j) · S_n(x, y)`.
    ProductForm,
    /// `2Γ(a)Γ(b)/Γ(|θ|) · ₂F₁(a,b;θ₁;x∧y) ₂F₁(a,b;θ₂;1−x∨y)`.
    WronskianClosed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenEval {
    pub value: f64,
    pub representation: GreenRep,
    pub terms_used: usize,
    /// Estimated size of the neglected tail (0 for the closed form).
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenConfig {
    pub tol: f64,
    /// Terms of the Jacobi series.
    pub jacobi_terms: usize,
    /// First truncation level of the product form; later levels double it.
    pub product_base: usize,
    pub product_doublings: u32,
}

impl Default for GreenConfig {
    fn default() -> Self {
        Self { tol: 1e-10, jacobi_terms: 20_000, product_base: 500, product_doublings: 5 }
    }
}

fn check_args(lambda: f64, x: f64, y: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda = {lambda} must be positive and finite")));
    }
    for (name, v) in [("x", x), ("y", y)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("{name} = {v} must lie in [0, 1]")));
        }
    }
    Ok(())
}

fn re(v: f64) -> C {
    C::new(v, 0.0)
}

/// `2Γ(a)Γ(b)/Γ(|θ|)`, the reciprocal of the Wronskian `w_λ` of `Φ_{λ,±}`.
pub fn inverse_wronskian(theta: &ThetaParams, idx: &SpectralIndex) -> Result<f64> {
    Ok(2.0 * gamma_ratio(&[idx.a, idx.b], &[re(theta.theta_total())])?.re)
}

pub fn green(theta: &ThetaParams, lambda: f64, x: f64, y: f64, rep: GreenRep) -> Result<GreenEval> {
    green_with(theta, lambda, x, y, rep, &GreenConfig::default())
}

pub fn green_with(
    theta: &ThetaParams,
    lambda: f64,
    x: f64,
    y: f64,
    rep: GreenRep,
    cfg: &GreenConfig,
) -> Result<GreenEval> {
    check_args(lambda, x, y)?;
    match rep {
        GreenRep::WronskianClosed => {
            let idx = spectral_index(theta, lambda)?;
            let value = wronskian_kernel(theta, &idx, x, y)?;
            Ok(GreenEval { value, representation: rep, terms_used: 0, tail_estimate: 0.0 })
        }
        GreenRep::JacobiSeries => jacobi_green(theta, lambda, x, y, cfg.jacobi_terms),
        GreenRep::ProductForm => product_green(theta, lambda, x, y, cfg),
    }
}

fn wronskian_kernel(theta: &ThetaParams, idx: &SpectralIndex, x: f64, y: f64) -> Result<f64> {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    Ok(inverse_wronskian(theta, idx)?
        * f21(idx.a, idx.b, theta.theta1(), lo)?
        * f21(idx.a, idx.b, theta.theta2(), 1.0 - hi)?)
}

// Average of p_n(x)² for large n: 1/(π m(x) √(x(1−x))).
fn christoffel_density(theta: &ThetaParams, x: f64) -> Result<f64> {
    Ok(1.0 / (std::f64::consts::PI * speed_density(theta, x)? * (x * (1.0 - x)).sqrt()))
}

fn jacobi_green(theta: &ThetaParams, lambda: f64, x: f64, y: f64, terms: usize) -> Result<GreenEval> {
    let basis = OrthoJacobi::new(theta, terms);
    let px = basis.values(x, terms - 1);
    if x == y {
        let sum: f64 = (0..terms).map(|n| px[n] * px[n] / (lambda + theta.death_rate(n))).sum();
        // On the diagonal the terms average 2A/n², leaving a tail ≈ 2A/(N+½).
        let tail = if x > 0.0 && x < 1.0 { 2.0 * christoffel_density(theta, x)? / (terms as f64 + 0.5) } else { 0.0 };
        return Ok(GreenEval {
            value: sum + tail,
            representation: GreenRep::JacobiSeries,
            terms_used: terms,
            tail_estimate: tail.max(1.0 / terms as f64),
        });
    }
    // Off the diagonal the terms oscillate; a smooth cutoff over the second half
    // of the range cancels the oscillating tail far better than plain truncation.
    let py = basis.values(y, terms - 1);
    let half = terms as f64 / 2.0;
    let sum = (0..terms)
        .map(|n| smooth_cutoff((n as f64 - half) / half) * px[n] * py[n] / (lambda + theta.death_rate(n)))
        .sum();
    Ok(GreenEval {
        value: sum,
        representation: GreenRep::JacobiSeries,
        terms_used: terms,
        tail_estimate: px[terms - 1].abs() * py[terms - 1].abs() / theta.death_rate(terms - 1),
    })
}

// C^∞ step from 1 (s ≤ 0) down to 0 (s ≥ 1).
fn smooth_cutoff(s: f64) -> f64 {
    if s <= 0.0 {
        return 1.0;
    }
    if s >= 1.0 {
        return 0.0;
    }
    let (u, v) = ((-1.0 / (1.0 - s)).exp(), (-1.0 / s).exp());
    u / (u + v)
}

/// `ln Π_{j>n} λ_j/(λ+λ_j)` for `n = 0..=n_max`.
///
/// The far tail `Σ_{j≥J} ln(1+λ/λ_j)` is expanded in powers of `1/j` and
/// summed with Euler–Maclaurin; the rest is summed explicitly.
pub fn log_tail_products(theta: &ThetaParams, lambda: f64, n_max: usize) -> Vec<f64> {
    let c = theta.theta_total() - 1.0;
    // Start the expansion where 2λ/j² ≤ 1e−4 and c/j ≤ 1e−3.
    let start = (n_max + 1).max((200.0 * lambda.sqrt()).ceil() as usize).max(1000);
    let nf = start as f64;
    // ln(1+z), z = 2λ j^{-2}(1+c/j)^{-1} = Σ_m Σ_k (−1)^{m+1}/m (2λ)^m C(−m,k) c^k j^{-(2m+k)}
    let mut tail = 0.0;
    for m in 1..=4 {
        let mf = m as f64;
        let mut coef = (if m % 2 == 1 { 1.0 } else { -1.0 }) / mf * (2.0 * lambda).powi(m);
        for k in 0..6 {
            let p = 2.0 * mf + k as f64;
            tail += coef * power_tail(nf, p);
            coef *= -(mf + k as f64) / (k as f64 + 1.0) * c;
        }
    }
    let mut acc = tail;
    for j in (n_max + 1..start).rev() {
        acc += (lambda / theta.death_rate(j)).ln_1p();
    }
    let mut out = vec![0.0; n_max + 1];
    out[n_max] = -acc;
    for n in (0..n_max).rev() {
        acc += (lambda / theta.death_rate(n + 1)).ln_1p();
        out[n] = -acc;
    }
    out
}

// Σ_{j≥N} j^{−p} by Euler–Maclaurin.
fn power_tail(n: f64, p: f64) -> f64 {
    let f = n.powf(-p);
    f * n / (p - 1.0) + 0.5 * f + p * f / (12.0 * n) - p * (p + 1.0) * (p + 2.0) * f / (720.0 * n.powi(3))
}

fn product_green(theta: &ThetaParams, lambda: f64, x: f64, y: f64, cfg: &GreenConfig) -> Result<GreenEval> {
    let n_top = cfg.product_base << cfg.product_doublings;
    let logs = log_tail_products(theta, lambda, n_top);
    let term = |n: usize| (logs[n].exp() / (lambda + theta.death_rate(n))) * mixture_kernel(theta, n, x, y);
    let mut partial = Vec::new();
    let mut sum = 0.0;
    let mut checkpoint = cfg.product_base;
    for n in 0..=n_top {
        let t = term(n);
        sum += t;
        if x != y && n > 10 && t * (n as f64) < cfg.tol * sum.abs() {
            return Ok(GreenEval {
                value: sum,
                representation: GreenRep::ProductForm,
                terms_used: n + 1,
                tail_estimate: t * n as f64,
            });
        }
        if n == checkpoint {
            partial.push(sum);
            checkpoint *= 2;
        }
    }
    if x != y {
        return Err(Error::ToleranceUnreachable {
            tol: cfg.tol,
            detail: format!("product form not converged after {n_top} terms at x = {x}, y = {y}"),
        });
    }
    // Diagonal: S_n(x,x) ~ n^{1−e0} with e0 = ½ inside, 1−θ₁ at 0 and 1−θ₂ at 1, so the
    // truncation error expands in N^{−(e0+k)}; remove the leading orders by Richardson.
    let e0 = if x == 0.0 {
        1.0 - theta.theta1()
    } else if x == 1.0 {
        1.0 - theta.theta2()
    } else {
        0.5
    };
    let mut table = partial;
    let mut last_change = f64::INFINITY;
    for k in 0..table.len() - 1 {
        let factor = 2f64.powf(e0 + k as f64);
        let next: Vec<f64> = table.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
        if next.len() >= 2 {
            last_change = (next[next.len() - 1] - next[next.len() - 2]).abs();
        }
        table = next;
    }
    Ok(GreenEval {
        value: table[0],
        representation: GreenRep::ProductForm,
        terms_used: n_top + 1,
        tail_estimate: last_change,
    })
}

/// Relative discrepancy between the two sides of
/// `₂F₁(a,b;θ₁;x∧y)₂F₁(a,b;θ₂;1−x∨y) = Γ(|θ|)/(2Γ(a)Γ(b)) Σ_n 2/(2λ+n(n+|θ|−1)) R_n(x)R_n(y)/π_n`.
pub fn new_identity_check(theta: &ThetaParams, lambda: f64, x: f64, y: f64) -> Result<f64> {
    check_args(lambda, x, y)?;
    let idx = spectral_index(theta, lambda)?;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let lhs = f21(idx.a, idx.b, theta.theta1(), lo)? * f21(idx.a, idx.b, theta.theta2(), 1.0 - hi)?;
    let series = jacobi_green(theta, lambda, x, y, GreenConfig::default().jacobi_terms)?.value;
    let rhs = series / inverse_wronskian(theta, &idx)?;
    Ok((lhs - rhs).abs() / lhs.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolventKind {
    Unkilled,
    /// Killed on reaching 0.
    Killed0,
    /// Killed on reaching 1.
    Killed1,
    /// Killed at either endpoint, built by killing at 0 and then at 1.
    Killed01,
    /// Killed at either endpoint, built by killing at 1 and then at 0.
    Killed10,
}

/// Representation of the unkilled resolvent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolventForm {
    /// `Σ_n p_n(x) E[p_n(Y)f(Y)]/(λ+λ_n)`.
    Jacobi,
    /// `Σ_n (λ+λ_n)^{-1} Π_{j>n} λ_j/(λ+λ_j) · E_K[∫ f dBeta(θ₁+K, θ₂+n−K)]`.
    BetaMixture,
    /// `E[G_λ(x, Y) f(Y)]` with the closed-form kernel.
    Wronskian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventEval {
    pub value: f64,
    pub kind: ResolventKind,
    pub quadrature_nodes: usize,
}

/// The kernel pieces shared by every resolvent formula at one `λ`.
struct Kernels {
    theta: ThetaParams,
    idx: SpectralIndex,
    inv_w: f64,
    /// `Γ(θ₂−a)Γ(θ₂−b)/(Γ(θ₂)Γ(1−θ₁))`.
    c0: f64,
    /// `Γ(θ₁−a)Γ(θ₁−b)/(Γ(θ₁)Γ(1−θ₂))`.
    c1: f64,
}

impl Kernels {
    fn new(theta: &ThetaParams, lambda: f64) -> Result<Self> {
        let idx = spectral_index(theta, lambda)?;
        let bv = phi_boundary_values(theta, lambda)?;
        Ok(Self {
            theta: *theta,
            idx,
            inv_w: inverse_wronskian(theta, &idx)?,
            c0: 1.0 / bv.plus_killed0_at0,
            c1: 1.0 / bv.minus_killed1_at1,
        })
    }

    fn f1(&self, x: f64) -> Result<f64> {
        f21(self.idx.a, self.idx.b, self.theta.theta1(), x)
    }

    fn f2(&self, x: f64) -> Result<f64> {
        f21(self.idx.a, self.idx.b, self.theta.theta2(), 1.0 - x)
    }

    fn green(&self, x: f64, y: f64) -> Result<f64> {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        Ok(self.f1(lo)? * self.f2(hi)?)
    }
}

/// `R_λ f(x) = E_x ∫₀^∞ e^{−λt} f(X_t) dt` (or its killed variants) with the
/// closed-form kernels, integrated against Beta(θ₁, θ₂) in `y`.
pub fn resolvent<F: Fn(f64) -> f64>(
    theta: &ThetaParams,
    lambda: f64,
    f: F,
    x: f64,
    kind: ResolventKind,
) -> Result<ResolventEval> {
    resolvent_with_breaks(theta, lambda, f, x, kind, &[])
}

/// As [`resolvent`], with extra quadrature breakpoints where `f` jumps or kinks.
pub fn resolvent_with_breaks<F: Fn(f64) -> f64>(
    theta: &ThetaParams,
    lambda: f64,
    f: F,
    x: f64,
    kind: ResolventKind,
    breaks: &[f64],
) -> Result<ResolventEval> {
    check_args(lambda, x, x)?;
    let k = Kernels::new(theta, lambda)?;
    let mut cuts = breaks.to_vec();
    cuts.push(x);
    let rule = graded_beta_rule(theta.theta1(), theta.theta2(), &cuts)?;
    let kr = &k;
    let kernel: Box<dyn Fn(f64) -> Result<f64>> = match kind {
        ResolventKind::Unkilled => Box::new(|y| kr.green(x, y)),
        ResolventKind::Killed0 => {
            let fx = kr.f2(x)?;
            Box::new(move |y| Ok(kr.green(x, y)? - kr.c0 * fx * kr.f2(y)?))
        }
        ResolventKind::Killed1 => {
            let fx = kr.f1(x)?;
            Box::new(move |y| Ok(kr.green(x, y)? - kr.c1 * fx * kr.f1(y)?))
        }
        ResolventKind::Killed01 => {
            let fx = kr.f2(x)?;
            let hit1 = restricted_laplace(theta, lambda, x, Boundary::One)?;
            Box::new(move |y| {
                let f2y = kr.f2(y)?;
                Ok(kr.green(x, y)? - kr.c0 * fx * f2y - hit1 * (kr.f1(y)? - kr.c0 * f2y))
            })
        }
        ResolventKind::Killed10 => {
            let fx = kr.f1(x)?;
            let hit0 = restricted_laplace(theta, lambda, x, Boundary::Zero)?;
            Box::new(move |y| {
                let f1y = kr.f1(y)?;
                Ok(kr.green(x, y)? - kr.c1 * fx * f1y - hit0 * (kr.f2(y)? - kr.c1 * f1y))
            })
        }
    };
    let value = k.inv_w * rule.try_integrate(|y| Ok(kernel(y)? * f(y)))?;
    Ok(ResolventEval { value, kind, quadrature_nodes: rule.len() })
}

/// Unkilled resolvent in any of its three representations.
pub fn resolvent_unkilled<F: Fn(f64) -> f64>(
    theta: &ThetaParams,
    lambda: f64,
    f: F,
    x: f64,
    form: ResolventForm,
) -> Result<ResolventEval> {
    check_args(lambda, x, x)?;
    match form {
        ResolventForm::Wronskian => resolvent(theta, lambda, f, x, ResolventKind::Unkilled),
        ResolventForm::Jacobi => {
            let rule = gauss_jacobi(128, theta.theta1(), theta.theta2())?;
            let n = rule.len();
            let basis = OrthoJacobi::new(theta, n);
            let px = basis.values(x, n - 1);
            let mut coeffs = vec![0.0; n];
            for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
                let fy = w * f(y);
                basis.walk(y, n - 1, |k, p| {
                    coeffs[k] += fy * p;
                    true
                });
            }
            let value = (0..n).map(|k| px[k] * coeffs[k] / (lambda + theta.death_rate(k))).sum();
            Ok(ResolventEval { value, kind: ResolventKind::Unkilled, quadrature_nodes: n })
        }
        ResolventForm::BetaMixture => beta_mixture_resolvent(theta, lambda, &f, x),
    }
}

// Partial sums at N = 64·2^j, j = 0..3, Richardson-extrapolated in powers of 1/N.
fn beta_mixture_resolvent<F: Fn(f64) -> f64>(theta: &ThetaParams, lambda: f64, f: &F, x: f64) -> Result<ResolventEval> {
    const BASE: usize = 64;
    const LEVELS: u32 = 4;
    let n_top = BASE << (LEVELS - 1);
    // Exact for f·(degree ≤ n_top polynomial) when f is a low-degree polynomial.
    let rule: QuadRule = gauss_jacobi(n_top / 2 + 64, theta.theta1(), theta.theta2())?;
    let fy: Vec<f64> = rule.nodes.iter().zip(&rule.weights).map(|(&y, &w)| w * f(y)).collect();
    let logs = log_tail_products(theta, lambda, n_top);
    let mut partial = Vec::new();
    let mut sum = 0.0;
    let mut checkpoint = BASE;
    for n in 0..=n_top {
        let inner: f64 = rule.nodes.iter().zip(&fy).map(|(&y, &wf)| wf * mixture_kernel(theta, n, x, y)).sum();
        sum += logs[n].exp() / (lambda + theta.death_rate(n)) * inner;
        if n == checkpoint {
            partial.push(sum);
            checkpoint *= 2;
        }
    }
    let mut table = partial;
    for k in 1..table.len() {
        let factor = 2f64.powi(k as i32);
        table = table.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
    }
    Ok(ResolventEval { value: table[0], kind: ResolventKind::Unkilled, quadrature_nodes: rule.len() })
}

/// Right-hand sides of the limits of `R^{0,1}_λ f(x)/P_x(H₁<H₀)` as `x → 0`
/// and of `R^{0,1}_λ f(x)/P_x(H₀<H₁)` as `x → 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KilledRatioLimits {
    pub at0: f64,
    pub at1: f64,
}

pub fn killed_ratio_limits<F: Fn(f64) -> f64>(theta: &ThetaParams, lambda: f64, f: F) -> Result<KilledRatioLimits> {
    let r0 = resolvent(theta, lambda, &f, 0.0, ResolventKind::Unkilled)?.value;
    let r1 = resolvent(theta, lambda, &f, 1.0, ResolventKind::Unkilled)?.value;
    let idx = spectral_index(theta, lambda)?;
    let (a, b) = (idx.a, idx.b);
    let (t1, t2) = (re(theta.theta1()), re(theta.theta2()));
    let one = re(1.0);
    let crossing = gamma_ratio(&[one - a, one - b], &[re(2.0 - theta.theta_total())])?.re;
    // The Γ(b) factors of the stated bracket cancel; with 1−θ₂+b = θ₁−a what remains is
    // crossing·[R f(0)·Γ(θ₁)Γ(1−θ₂)/(Γ(θ₁−a)Γ(θ₁−b)) − R f(1)], and its mirror image.
    let g0 = gamma_ratio(&[t1, one - t2], &[t1 - a, t1 - b])?.re;
    let g1 = gamma_ratio(&[t2, one - t1], &[t2 - a, t2 - b])?.re;
    Ok(KilledRatioLimits { at0: crossing * (r0 * g0 - r1), at1: crossing * (r1 * g1 - r0) })
}

/// `R^{0,1}_λ f(x)/P_x(H₁<H₀)`, the quantity whose `x → 0` limit is `at0`.
pub fn killed_ratio_at(theta: &ThetaParams, lambda: f64, f: impl Fn(f64) -> f64, x: f64) -> Result<f64> {
    let r = resolvent(theta, lambda, f, x, ResolventKind::Killed01)?.value;
    Ok(r / exit_prob(theta, x)?)
}
