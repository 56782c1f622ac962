//! Gauss rules on `[0, 1]` and a graded composite rule for integrals against
//! Beta densities whose integrands carry `x^{1-θ}`-type endpoint behaviour.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::hyperfun::beta;

/// Nodes and weights; `Σ wᵢ f(xᵢ)` approximates the integral.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Fallible integrand; the first error aborts the sum.
    pub fn try_integrate<F: FnMut(f64) -> Result<f64>>(&self, mut f: F) -> Result<f64> {
        let mut s = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(x)?;
        }
        Ok(s)
    }
}

// Monic Jacobi recurrence for the Beta(p, q) law on [0, 1]:
// returns (α_k, β_k), k = 0..n, with β_0 = 1.
pub(crate) fn beta_recurrence(n: usize, p: f64, q: f64) -> (Vec<f64>, Vec<f64>) {
    // On [-1,1] the weight is (1-t)^{al} (1+t)^{be}.
    let al = q - 1.0;
    let be = p - 1.0;
    let s = al + be;
    let mut alpha = Vec::with_capacity(n);
    let mut betas = Vec::with_capacity(n);
    for k in 0..n {
        let kf = k as f64;
        let a = if k == 0 {
            (be - al) / (s + 2.0)
        } else {
            (be * be - al * al) / ((2.0 * kf + s) * (2.0 * kf + s + 2.0))
        };
        alpha.push(0.5 * (1.0 + a));
        let b = match k {
            0 => 1.0,
            1 => 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s).powi(2) * (3.0 + s)),
            _ => {
                4.0 * kf * (kf + al) * (kf + be) * (kf + s)
                    / ((2.0 * kf + s).powi(2) * (2.0 * kf + s + 1.0) * (2.0 * kf + s - 1.0))
            }
        };
        betas.push(if k == 0 { 1.0 } else { 0.25 * b });
    }
    (alpha, betas)
}

// Orthonormal polynomials p_0..p_n at x plus p_n'(x); also Σ_{k<n} p_k².
fn orthonormal_eval(x: f64, alpha: &[f64], betas: &[f64], n: usize) -> (f64, f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    let mut sumsq = 0.0;
    for k in 0..n {
        sumsq += p * p;
        let sb_next = betas[k + 1].sqrt();
        let sb = if k == 0 { 0.0 } else { betas[k].sqrt() };
        let p_next = ((x - alpha[k]) * p - sb * p_prev) / sb_next;
        let d_next = (p + (x - alpha[k]) * d - sb * d_prev) / sb_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d, sumsq)
}

/// `n`-point Gauss rule for the Beta(p, q) probability measure on `[0, 1]`
/// (weights sum to one). Golub–Welsch followed by Newton polishing.
pub fn gauss_jacobi(n: usize, p: f64, q: f64) -> Result<QuadRule> {
    if n == 0 || !(p > 0.0 && q > 0.0) {
        return Err(Error::Domain(format!("Gauss-Jacobi needs n >= 1, p, q > 0 (n={n}, p={p}, q={q})")));
    }
    let (alpha, betas) = beta_recurrence(n + 1, p, q);
    let jm = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            betas[j].sqrt()
        } else if j + 1 == i {
            betas[i].sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jm);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (pn, dn, _) = orthonormal_eval(*x, &alpha, &betas, n);
            if dn == 0.0 {
                break;
            }
            let step = pn / dn;
            let nx = *x - step;
            if nx > 0.0 && nx < 1.0 {
                *x = nx;
            }
            if step.abs() < 1e-16 * x.abs() {
                break;
            }
        }
        let (_, _, sumsq) = orthonormal_eval(*x, &alpha, &betas, n);
        weights.push(1.0 / sumsq);
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(QuadRule { nodes, weights })
}

/// `n`-point Gauss–Legendre rule on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> QuadRule {
    gauss_jacobi(n, 1.0, 1.0).expect("valid Legendre parameters")
}

fn legendre16() -> &'static QuadRule {
    static RULE: OnceLock<QuadRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// Plain Gauss–Jacobi rule for `∫ f dBeta(θ₁, θ₂)`; exact for polynomials of degree < 2n.
pub fn beta_rule(n: usize, p: f64, q: f64) -> Result<QuadRule> {
    gauss_jacobi(n, p, q)
}

/// Geometric grading ratio and depth of the composite rule.
const GRADE: f64 = 0.25;
const DEPTH: i32 = 18;
const END_NODES: usize = 16;

/// Composite rule for `∫₀¹ f(x) m(x) dx`, `m` the Beta(p, q) density.
///
/// Cells shrink geometrically (ratio 1/4) towards both endpoints; the two end
/// cells use Gauss–Jacobi rules that absorb `x^{p-1}` and `(1-x)^{q-1}`, the
/// rest 16-point Gauss–Legendre. `breaks` adds interior cell boundaries
/// (derivative discontinuities of the integrand).
pub fn graded_beta_rule(p: f64, q: f64, breaks: &[f64]) -> Result<QuadRule> {
    let b = beta(p, q)?;
    let h_end = 0.5 * GRADE.powi(DEPTH);
    let mut pts = vec![0.0, 1.0, 0.5];
    for k in 0..DEPTH {
        let y = 0.5 * GRADE.powi(k + 1);
        pts.push(y);
        pts.push(1.0 - y);
    }
    pts.extend(
        breaks
            .iter()
            .copied()
            .filter(|&x| x > 2.0 * h_end && x < 1.0 - 2.0 * h_end),
    );
    pts.sort_by(|a, c| a.total_cmp(c));
    pts.dedup_by(|a, c| (*a - *c).abs() < 1e-15);

    let leg = legendre16();
    let left = gauss_jacobi(END_NODES, p, 1.0)?;
    let right = gauss_jacobi(END_NODES, 1.0, q)?;
    let mut nodes = Vec::with_capacity(pts.len() * 16);
    let mut weights = Vec::with_capacity(pts.len() * 16);
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let h = hi - lo;
        if lo == 0.0 {
            // ∫₀^h f x^{p-1}(1-x)^{q-1}/B = h^p/(pB) Σ wⱼ (1-h uⱼ)^{q-1} f(h uⱼ)
            let scale = h.powf(p) / (p * b);
            for (&u, &wj) in left.nodes.iter().zip(&left.weights) {
                let x = h * u;
                nodes.push(x);
                weights.push(scale * wj * (1.0 - x).powf(q - 1.0));
            }
        } else if hi == 1.0 {
            let scale = h.powf(q) / (q * b);
            for (&u, &wj) in right.nodes.iter().zip(&right.weights) {
                // 1 - x = h(1 - u): the (1-x)^{q-1} factor is the rule's weight.
                let x = lo + h * u;
                nodes.push(x);
                weights.push(scale * wj * x.powf(p - 1.0));
            }
        } else {
            for (&u, &wj) in leg.nodes.iter().zip(&leg.weights) {
                let x = lo + h * u;
                nodes.push(x);
                weights.push(h * wj * x.powf(p - 1.0) * (1.0 - x).powf(q - 1.0) / b);
            }
        }
    }
    Ok(QuadRule { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let r = gauss_legendre(8);
        let v = r.integrate(|x| x.powi(15));
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_moments() {
        // E[X^k] for Beta(p, q) = Π_{j<k} (p+j)/(p+q+j)
        let (p, q) = (0.3, 0.7);
        let r = gauss_jacobi(20, p, q).unwrap();
        let mut m = 1.0;
        for k in 0..40 {
            let v = r.integrate(|x| x.powi(k));
            assert!((v - m).abs() < 1e-13 * m, "k={k}: {v} vs {m}");
            m *= (p + k as f64) / (p + q + k as f64);
        }
    }

    #[test]
    fn graded_rule_handles_endpoint_powers() {
        let (p, q) = (0.3, 0.7);
        let r = graded_beta_rule(p, q, &[0.37]).unwrap();
        let total: f64 = r.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        // ∫ x^{1-p} m(x) dx = B(1, q)/B(p, q)
        let v = r.integrate(|x| x.powf(1.0 - p));
        let exact = beta(1.0, q).unwrap() / beta(p, q).unwrap();
        assert!((v - exact).abs() < 1e-12 * exact);
    }
}
