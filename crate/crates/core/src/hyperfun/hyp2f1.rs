//! Gauss hypergeometric function on `[0, 1]` with complex (usually conjugate) `a`, `b`.

use num_complex::Complex64;

use super::gamma::gamma_ratio;
use crate::error::{Error, Result};

type C = Complex64;

/// Arguments of `₂F₁(a, b; c; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: f64,
    pub x: f64,
}

impl HypParams {
    pub fn new(a: Complex64, b: Complex64, c: f64, x: f64) -> Self {
        Self { a, b, c, x }
    }

    pub fn real(a: f64, b: f64, c: f64, x: f64) -> Self {
        Self::new(C::new(a, 0.0), C::new(b, 0.0), c, x)
    }
}

/// Value of a `₂F₁` evaluation with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Result {
    pub value: f64,
    /// Absolute imaginary part discarded when returning `value`.
    pub imag_residual: f64,
    pub terms_used: usize,
    /// Whether the `x ↦ 1 − x` connection formula was used.
    pub transformed: bool,
}

/// Series controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypConfig {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for HypConfig {
    fn default() -> Self {
        Self { tol: 1e-15, max_terms: 10_000 }
    }
}

// Below this distance from an integer, c − a − b is treated as integral and the
// connection formula (whose Gamma factors blow up) is bypassed.
const NEAR_INTEGER: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Eval {
    pub value: C,
    pub terms: usize,
    pub transformed: bool,
}

fn nonpos_int(z: C) -> Option<u64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        Some((-z.re) as u64)
    } else {
        None
    }
}

fn near_integer(z: C) -> bool {
    z.im.abs() < NEAR_INTEGER && (z.re - z.re.round()).abs() < NEAR_INTEGER
}

/// Evaluates `₂F₁(a, b; c; x)` for `x ∈ [0, 1]` with fully complex parameters.
pub(crate) fn eval(a: C, b: C, c: C, x: f64, cfg: &HypConfig) -> Result<Eval> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(Error::Domain(format!("2F1 argument x = {x} outside [0, 1]")));
    }
    let degree = match (nonpos_int(a), nonpos_int(b)) {
        (Some(n), Some(m)) => Some(n.min(m)),
        (Some(n), None) | (None, Some(n)) => Some(n),
        (None, None) => None,
    };
    if let Some(m) = nonpos_int(c) {
        if !degree.is_some_and(|n| n <= m) {
            return Err(Error::Parameter(format!("c = {} is a non-positive integer", c.re)));
        }
    }
    if x == 0.0 {
        return Ok(Eval { value: C::new(1.0, 0.0), terms: 1, transformed: false });
    }
    if let Some(n) = degree {
        return Ok(polynomial(a, b, c, x, n as usize));
    }
    let s = c - a - b;
    if x == 1.0 {
        if s.re <= 0.0 {
            return Err(Error::Parameter(format!(
                "series diverges at x = 1 with Re(c - a - b) = {}",
                s.re
            )));
        }
        let value = gamma_ratio(&[c, s], &[c - a, c - b])?;
        return Ok(Eval { value, terms: 0, transformed: false });
    }
    if x <= 0.5 {
        let (value, terms) = series(a, b, c, x, cfg)?;
        return Ok(Eval { value, terms, transformed: false });
    }
    if !near_integer(s) {
        if let Some(e) = connection(a, b, c, x, cfg)? {
            return Ok(e);
        }
    }
    continuation(a, b, c, x, cfg)
}

fn polynomial(a: C, b: C, c: C, x: f64, n: usize) -> Eval {
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..n {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
    }
    Eval { value: sum, terms: n + 1, transformed: false }
}

/// Direct power series; stops once the geometric tail estimate is negligible.
fn series(a: C, b: C, c: C, x: f64, cfg: &HypConfig) -> Result<(C, usize)> {
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut max_term = 1.0_f64;
    for n in 0..cfg.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        term *= ratio;
        sum += term;
        let t = term.norm();
        max_term = max_term.max(t);
        if t == 0.0 {
            return Ok((sum, n + 2));
        }
        let r = ratio.norm();
        if r < 1.0 {
            let rho = r.max(x);
            if rho < 1.0 {
                let tail = t * rho / (1.0 - rho);
                if tail <= (cfg.tol * sum.norm()).max(1e-16 * max_term) {
                    return Ok((sum, n + 2));
                }
            }
        }
    }
    Err(Error::Convergence {
        terms: cfg.max_terms,
        last_rel: term.norm() / sum.norm(),
    })
}

/// `F(x) = A·F(a,b;1−s;1−x) + B·(1−x)^s·F(c−a,c−b;1+s;1−x)` with `s = c − a − b`.
///
/// Returns `None` when the two terms cancel badly (large conjugate-pair
/// parameters), leaving the caller to continue the solution instead.
fn connection(a: C, b: C, c: C, x: f64, cfg: &HypConfig) -> Result<Option<Eval>> {
    let s = c - a - b;
    let y = 1.0 - x;
    let coef_a = gamma_ratio(&[c, s], &[c - a, c - b])?;
    let coef_b = gamma_ratio(&[c, -s], &[a, b])?;
    let mut terms = 0;
    let mut t1 = C::new(0.0, 0.0);
    let mut t2 = C::new(0.0, 0.0);
    if coef_a != C::new(0.0, 0.0) {
        let (f1, n1) = series(a, b, 1.0 - s, y, cfg)?;
        t1 = coef_a * f1;
        terms += n1;
    }
    if coef_b != C::new(0.0, 0.0) {
        let (f2, n2) = series(c - a, c - b, 1.0 + s, y, cfg)?;
        t2 = coef_b * C::new(y, 0.0).powc(s) * f2;
        terms += n2;
    }
    let value = t1 + t2;
    let scale = t1.norm() + t2.norm();
    if !scale.is_finite() || scale > MAX_CANCELLATION * value.norm() {
        return Ok(None);
    }
    Ok(Some(Eval { value, terms, transformed: true }))
}

// Largest tolerated ratio between the connection-formula terms and their sum.
const MAX_CANCELLATION: f64 = 10.0;

/// Analytic continuation from `x = 1/2` by Taylor stepping of the
/// hypergeometric ODE; each step uses at most half the distance to the
/// singular point 1, so the local series converge at least like `2^{-k}`.
fn continuation(a: C, b: C, c: C, x: f64, cfg: &HypConfig) -> Result<Eval> {
    let x0 = 0.5;
    let (mut y, mut terms) = series(a, b, c, x0, cfg)?;
    let (dy, n) = series(a + 1.0, b + 1.0, c + 1.0, x0, cfg)?;
    let mut dy = a * b / c * dy;
    terms += n;
    let ab = a * b;
    let apb1 = a + b + 1.0;
    let mut xc = x0;
    while xc < x {
        let h = (x - xc).min(0.5 * (1.0 - xc));
        let p0 = xc * (1.0 - xc);
        let p1 = 1.0 - 2.0 * xc;
        let q0 = c - apb1 * xc;
        // y_{k+2} from the ODE recurrence around xc.
        let (mut yk, mut yk1) = (y, dy);
        let mut val = yk + yk1 * h;
        let mut der = yk1;
        let mut hp = h; // h^{k+1} for the current yk1
        let mut max_term = val.norm().max(der.norm() * h);
        let mut small = 0;
        let mut k = 0usize;
        loop {
            let kf = k as f64;
            let yk2 = -((p1 * kf + q0) * (kf + 1.0) * yk1 + (-kf * (kf - 1.0) - apb1 * kf - ab) * yk)
                / (p0 * (kf + 2.0) * (kf + 1.0));
            let hp2 = hp * h;
            let tv = yk2 * hp2;
            let td = yk2 * (kf + 2.0) * hp;
            val += tv;
            der += td;
            let mag = tv.norm().max(td.norm() * h);
            max_term = max_term.max(mag);
            if mag <= 1e-17 * max_term.max(val.norm()) {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            k += 1;
            if k > cfg.max_terms {
                return Err(Error::Convergence { terms: k, last_rel: mag / val.norm() });
            }
            yk = yk1;
            yk1 = yk2;
            hp = hp2;
        }
        terms += k + 2;
        y = val;
        dy = der;
        xc += h;
        if x - xc < 1e-15 * x {
            break;
        }
    }
    Ok(Eval { value: y, terms, transformed: true })
}

/// `₂F₁(a, b; c; x)` with real output.
pub fn hyp2f1(p: &HypParams, tol: f64) -> Result<Hyp2F1Result> {
    hyp2f1_with(p, &HypConfig { tol, ..HypConfig::default() })
}

pub fn hyp2f1_with(p: &HypParams, cfg: &HypConfig) -> Result<Hyp2F1Result> {
    let e = eval(p.a, p.b, C::new(p.c, 0.0), p.x, cfg)?;
    Ok(Hyp2F1Result {
        value: e.value.re,
        imag_residual: e.value.im.abs(),
        terms_used: e.terms,
        transformed: e.transformed,
    })
}

/// Shorthand for the real value of `₂F₁(a, b; c; x)` at default tolerance.
pub fn f21(a: Complex64, b: Complex64, c: f64, x: f64) -> Result<f64> {
    Ok(eval(a, b, C::new(c, 0.0), x, &HypConfig::default())?.value.re)
}

/// `d/dx ₂F₁(a, b; c; x) = (ab/c)·₂F₁(a+1, b+1; c+1; x)`.
pub fn hyp2f1_deriv(p: &HypParams) -> Result<f64> {
    Ok(deriv_c(p.a, p.b, C::new(p.c, 0.0), p.x)?.re)
}

pub(crate) fn deriv_c(a: C, b: C, c: C, x: f64) -> Result<C> {
    let e = eval(a + 1.0, b + 1.0, c + 1.0, x, &HypConfig::default())?;
    Ok(a * b / c * e.value)
}

/// `lim_{z→1⁻} (1−z)^{a+b−c} ₂F₁(a, b; c; z) = Γ(c)Γ(a+b−c)/(Γ(a)Γ(b))`.
pub fn limit_ratio_at_one(a: Complex64, b: Complex64, c: f64) -> Result<f64> {
    let c = C::new(c, 0.0);
    let s = c - a - b;
    if s.re >= 0.0 {
        return Err(Error::Parameter(format!(
            "limit requires Re(c - a - b) < 0, got {}",
            s.re
        )));
    }
    Ok(gamma_ratio(&[c, -s], &[a, b])?.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_closed_form() {
        let r = hyp2f1(&HypParams::real(1.0, 1.0, 2.0, 0.5), 1e-14).unwrap();
        assert!((r.value - 2.0 * 2f64.ln()).abs() < 1e-13);
        assert!(!r.transformed);
    }

    #[test]
    fn log_closed_form_transformed() {
        // c − a − b = 0 is integral: falls back to the direct series.
        let r = hyp2f1(&HypParams::real(1.0, 1.0, 2.0, 0.9), 1e-14).unwrap();
        let exact = -(0.1f64).ln() / 0.9;
        assert!((r.value - exact).abs() < 1e-11 * exact);
    }

    #[test]
    fn polynomial_case() {
        // F(-2, b; c; x) = 1 - 2bx/c + b(b+1)x²/(c(c+1))
        let (b, c, x) = (1.5, 0.7, 0.8);
        let exact = 1.0 - 2.0 * b * x / c + b * (b + 1.0) * x * x / (c * (c + 1.0));
        let r = hyp2f1(&HypParams::real(-2.0, b, c, x), 1e-12).unwrap();
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn forbidden_c() {
        assert!(matches!(
            hyp2f1(&HypParams::real(0.5, 0.5, -1.0, 0.3), 1e-12),
            Err(Error::Parameter(_))
        ));
        // allowed: polynomial of degree 1 with c = -2
        assert!(hyp2f1(&HypParams::real(-1.0, 0.5, -2.0, 0.3), 1e-12).is_ok());
    }
}
