//! Oracles shared by the integration targets.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wf_excursions::hyperfun::{
    connection_coefficients, gamma_ratio, hyp2f1, hyp2f1_deriv, ode_solutions, wronskians, HypParams,
};
use wf_excursions::quadrature::gauss_jacobi;
use wf_excursions::wfmodel::{transition_density_m, Representation, ThetaParams};

type C = Complex64;

pub fn re(v: f64) -> C {
    C::new(v, 0.0)
}

/// Parameter triples covering real pairs and the conjugate pairs the model produces.
pub fn ode_parameter_sets() -> Vec<(C, C, f64)> {
    vec![
        (re(0.35), re(-0.85), 0.3),
        (re(1.2), re(0.45), 0.7),
        (re(-0.4), re(0.15), 1.4),
        (C::new(-0.2, 1.3), C::new(-0.2, -1.3), 0.3),
        (C::new(0.1, 3.0), C::new(0.1, -3.0), 0.55),
        (C::new(-0.25, 0.6), C::new(-0.25, -0.6), 0.8),
    ]
}

/// Worst relative error of ₂F₁(a, b; c; 1) against Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)).
pub fn gauss_sum_worst(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < n {
        let c = rng.random_range(0.3..3.0);
        let s = rng.random_range(0.1..2.0);
        let (a, b) = if rng.random_bool(0.5) {
            let a = rng.random_range(-0.9..1.5);
            (re(a), re(c - s - a))
        } else {
            let v = rng.random_range(0.1..3.0);
            (C::new(0.5 * (c - s), v), C::new(0.5 * (c - s), -v))
        };
        let Ok(r) = hyp2f1(&HypParams::new(a, b, c, 1.0), 1e-14) else { continue };
        let exact = gamma_ratio(&[re(c), re(s)], &[re(c) - a, re(c) - b]).unwrap().re;
        if exact.abs() < 1e-3 {
            continue;
        }
        worst = worst.max((r.value - exact).abs() / exact.abs());
        done += 1;
    }
    worst
}

/// Worst relative gap between the derivative and a central difference (step 1e−6).
pub fn derivative_worst(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-6;
    (0..n)
        .map(|_| {
            let c = rng.random_range(0.3..2.5);
            let a = rng.random_range(-1.0..1.5);
            let b = rng.random_range(-1.0..1.0);
            let x = rng.random_range(0.05..0.9);
            let f = |x| hyp2f1(&HypParams::real(a, b, c, x), 1e-15).unwrap().value;
            let fd = (f(x + h) - f(x - h)) / (2.0 * h);
            let d = hyp2f1_deriv(&HypParams::real(a, b, c, x)).unwrap();
            (d - fd).abs() / d.abs().max(1e-2)
        })
        .fold(0.0, f64::max)
}

/// Worst relative residual of `h = α₁f + β₁g`, `κ = α₂f + β₂g` on x = 0.1, …, 0.9.
pub fn connection_worst() -> f64 {
    let mut worst = 0.0f64;
    for (a, b, c) in ode_parameter_sets() {
        let k = connection_coefficients(a, b, c).unwrap();
        for i in 1..10 {
            let s = ode_solutions(a, b, c, 0.1 * i as f64).unwrap();
            let h = k.alpha1 * s.f + k.beta1 * s.g;
            let kappa = k.alpha2 * s.f + k.beta2 * s.g;
            worst = worst.max((h - s.h).abs() / s.h.abs()).max((kappa - s.kappa).abs() / s.kappa.abs());
        }
    }
    worst
}

fn derivs(u: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64, f64) {
    let (m2, m1, z, p1, p2) = (u(x - 2.0 * h), u(x - h), u(x), u(x + h), u(x + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
    (z, d1, d2)
}

/// Worst relative gap between closed-form and finite-difference Wronskians at x = ¼, ½, ¾.
pub fn wronskian_worst() -> f64 {
    let mut worst = 0.0f64;
    for (a, b, c) in ode_parameter_sets() {
        for x in [0.25, 0.5, 0.75] {
            let sol = |x| ode_solutions(a, b, c, x).unwrap();
            let comp = |pick: fn(&wf_excursions::hyperfun::OdeSolutions) -> f64| derivs(|x| pick(&sol(x)), x, 1e-3);
            let (f, df, _) = comp(|s| s.f);
            let (g, dg, _) = comp(|s| s.g);
            let (h, dh, _) = comp(|s| s.h);
            let (k, dk, _) = comp(|s| s.kappa);
            let w = wronskians(a, b, c, x).unwrap();
            let fd = [f * dg - df * g, f * dh - df * h, f * dk - df * k, g * dh - dg * h];
            for (exact, approx) in [w.fg, w.fh, w.fkappa, w.gh].into_iter().zip(fd) {
                worst = worst.max((exact - approx).abs() / exact.abs());
            }
        }
    }
    worst
}

/// Worst ODE residual `x(1−x)u'' + (c − (a+b+1)x)u' − ab·u`, relative to its largest term.
pub fn ode_residual_worst() -> f64 {
    let mut worst = 0.0f64;
    for (a, b, c) in ode_parameter_sets() {
        let ab = (a * b).re;
        let apb = (a + b).re;
        for i in 1..10 {
            let x = 0.1 * i as f64;
            let pickers: [fn(&wf_excursions::hyperfun::OdeSolutions) -> f64; 4] =
                [|s| s.f, |s| s.g, |s| s.h, |s| s.kappa];
            for pick in pickers {
                let (u, du, d2u) = derivs(|x| pick(&ode_solutions(a, b, c, x).unwrap()), x, 1e-3);
                let terms = [x * (1.0 - x) * d2u, (c - (apb + 1.0) * x) * du, -ab * u];
                let scale = terms.iter().map(|t| t.abs()).fold(0.0, f64::max);
                worst = worst.max(terms.iter().sum::<f64>().abs() / scale);
            }
        }
    }
    worst
}

/// `P(X_t ≤ y | X_0 = x) = ∫₀^y p_m(t, x, z) m(z) dz`, with `z = y·u` and the
/// `u^{θ₁−1}` factor carried by a Jacobi weight.
pub fn transition_cdf(t: &ThetaParams, time: f64, x: f64, y: f64) -> f64 {
    if y > 0.5 {
        return 1.0 - transition_cdf(&t.swapped(), time, 1.0 - x, 1.0 - y);
    }
    let (p, q) = (t.theta1(), t.theta2());
    let rule = gauss_jacobi(40, p, 1.0).unwrap();
    // Rule weights integrate against u^{p−1}/B(p, 1) = p·u^{p−1}.
    let scale = y.powf(p) / (p * t.beta());
    scale
        * rule.integrate(|u| {
            let z = y * u;
            (1.0 - z).powf(q - 1.0) * transition_density_m(t, time, x, z, Representation::Spectral, 1e-12).unwrap().value
        })
}

/// Two-sided Kolmogorov–Smirnov distance of a sample from a continuous CDF.
pub fn ks_statistic(mut draws: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    draws.sort_by(f64::total_cmp);
    let n = draws.len() as f64;
    draws
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let f = cdf(y);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// 1% critical value of the asymptotic Kolmogorov distribution, scaled by √n.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// `∫₀¹ g(x) dx` for integrands with `x^{θ₀−1}` and `(1−x)^{θ₁−1}` edge behaviour
/// (plus fractional corrections): `x = u^{1/θ}` flattens the leading power and a
/// geometric mesh in `u` resolves the rest.
pub fn integrate_edges(g: impl Fn(f64) -> f64, theta0: f64, theta1: f64) -> f64 {
    let gl = wf_excursions::quadrature::gauss_legendre(16);
    let half = |p: f64, mirror: bool| {
        let k = 1.0 / p;
        let top = 0.5f64.powf(p);
        let mut sum = 0.0;
        let mut hi = top;
        for _ in 0..60 {
            let lo = 0.5 * hi;
            sum += (hi - lo)
                * gl.integrate(|v| {
                    let u = lo + (hi - lo) * v;
                    let s = u.powf(k);
                    let jac = k * u.powf(k - 1.0);
                    let x = if mirror { 1.0 - s } else { s };
                    // Nodes closer to the edge than f64 resolves carry no weight.
                    if x > 0.0 && x < 1.0 { jac * g(x) } else { 0.0 }
                });
            hi = lo;
        }
        sum
    };
    half(theta0, false) + half(theta1, true)
}

/// `∫ n_λ(dx)` for the entrance law from `from`, by quadrature.  The far edge
/// is only resolved to f64 spacing, so use `Boundary::Zero` with swapped
/// parameters for the law from 1.
pub fn entrance_mass(t: &ThetaParams, lambda: f64, from: wf_excursions::hitting::Boundary) -> f64 {
    integrate_edges(
        |x| wf_excursions::excursions::entrance_law_laplace(t, lambda, from, x).unwrap(),
        t.theta1(),
        t.theta2(),
    )
}
