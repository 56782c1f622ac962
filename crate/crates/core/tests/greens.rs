use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wf_excursions::greens::*;
use wf_excursions::hitting::exit_prob;
use wf_excursions::quadrature::{gauss_legendre, graded_beta_rule};
use wf_excursions::wfmodel::{make_theta, speed_density, transition_density_m, Representation, ThetaParams};
use wf_excursions::Error;

fn th(a: f64, b: f64) -> ThetaParams {
    make_theta(a, b).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

const REPS: [GreenRep; 3] = [GreenRep::JacobiSeries, GreenRep::ProductForm, GreenRep::WronskianClosed];

#[test]
fn representations_agree() {
    let t = th(0.3, 0.7);
    let closed = green(&t, 1.0, 0.2, 0.6, GreenRep::WronskianClosed).unwrap().value;
    for rep in REPS {
        let g = green(&t, 1.0, 0.2, 0.6, rep).unwrap();
        assert_eq!(g.representation, rep);
        assert!(rel(g.value, closed) < 1e-6, "{rep:?}: {} vs {closed}", g.value);
    }
    // Diagonal and boundary points.
    let t = th(0.4, 0.25);
    for (x, y) in [(0.5, 0.5), (0.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.9, 0.05)] {
        let closed = green(&t, 2.5, x, y, GreenRep::WronskianClosed).unwrap().value;
        let product = green(&t, 2.5, x, y, GreenRep::ProductForm).unwrap().value;
        assert!(rel(product, closed) < 1e-6, "({x},{y}): {product} vs {closed}");
        if x > 0.0 && x < 1.0 {
            let series = green(&t, 2.5, x, y, GreenRep::JacobiSeries).unwrap().value;
            assert!(rel(series, closed) < 1e-6, "({x},{y}): {series} vs {closed}");
        }
    }
}

#[test]
fn symmetric_and_positive() {
    let t = th(0.6, 0.35);
    for rep in REPS {
        for (x, y) in [(0.1, 0.7), (0.3, 0.95)] {
            let a = green(&t, 0.7, x, y, rep).unwrap().value;
            let b = green(&t, 0.7, y, x, rep).unwrap().value;
            assert!(a > 0.0 && rel(a, b) < 1e-12);
        }
    }
}

#[test]
fn argument_checks() {
    let t = th(0.3, 0.7);
    assert!(matches!(green(&t, 0.0, 0.2, 0.3, GreenRep::WronskianClosed), Err(Error::Domain(_))));
    assert!(matches!(green(&t, 1.0, -0.1, 0.3, GreenRep::JacobiSeries), Err(Error::Domain(_))));
    // Almost-diagonal points converge too slowly for the product form.
    let near = green(&t, 1.0, 0.5, 0.5 + 1e-9, GreenRep::ProductForm);
    assert!(matches!(near, Err(Error::ToleranceUnreachable { .. })));
}

#[test]
fn laplace_transform_of_transition_density() {
    let t = th(0.3, 0.7);
    let (lambda, x, y) = (1.0, 0.2, 0.6);
    // [0, 0.005] carries mass below e^{−60}.
    let cuts = [0.005, 0.02, 0.1, 0.5, 2.0, 10.0, 50.0];
    let gl = gauss_legendre(40);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        total += (hi - lo)
            * gl.integrate(|u| {
                let s = lo + (hi - lo) * u;
                let rep = if s < 0.05 { Representation::Coalescent } else { Representation::Spectral };
                (-lambda * s).exp() * transition_density_m(&t, s, x, y, rep, 1e-12).unwrap().value
            });
    }
    let g = green(&t, lambda, x, y, GreenRep::WronskianClosed).unwrap().value;
    assert!((total - g).abs() < 1e-4, "{total} vs {g}");
}

#[test]
fn integrates_to_inverse_rate() {
    let t = th(0.3, 0.7);
    for lambda in [0.5, 3.0] {
        for x in [0.0, 0.35, 0.8] {
            let rule = graded_beta_rule(t.theta1(), t.theta2(), &[x]).unwrap();
            let mass = rule.integrate(|y| green(&t, lambda, x, y, GreenRep::WronskianClosed).unwrap().value);
            assert!((mass * lambda - 1.0).abs() < 1e-6, "{mass}");
        }
    }
    // The speed density is the Beta(θ₁, θ₂) law the rule integrates against.
    assert!((speed_density(&t, 0.5).unwrap() - 0.5f64.powf(-0.7 + -0.3) / t.beta()).abs() < 1e-14);
}

#[test]
fn series_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..20 {
        let t = th(rng.random_range(0.05..0.95), rng.random_range(0.05..0.95));
        let lambda = rng.random_range(0.1..10.0);
        let x = rng.random_range(0.02..0.98);
        let y = if i % 5 == 0 { x } else { rng.random_range(0.02..0.98) };
        let d = new_identity_check(&t, lambda, x, y).unwrap();
        assert!(d < 1e-6, "{t:?} {lambda} {x} {y}: {d:e}");
    }
    // Large λ: complex conjugate indices.
    let t = th(0.3, 0.4);
    for (x, y) in [(0.2, 0.7), (0.5, 0.5)] {
        let d = new_identity_check(&t, 200.0, x, y).unwrap();
        assert!(d < 1e-5, "{d:e}");
    }
}

#[test]
fn unkilled_resolvent_forms() {
    let t = th(0.3, 0.7);
    for form in [ResolventForm::Jacobi, ResolventForm::BetaMixture, ResolventForm::Wronskian] {
        let r = resolvent_unkilled(&t, 2.0, |_| 1.0, 0.4, form).unwrap().value;
        assert!((r - 0.5).abs() < 1e-8, "{form:?}: {r}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let x: f64 = rng.random();
        let lambda = rng.random_range(0.2..5.0);
        let vals: Vec<f64> = [ResolventForm::Jacobi, ResolventForm::BetaMixture, ResolventForm::Wronskian]
            .iter()
            .map(|&form| resolvent_unkilled(&t, lambda, |y| y * y, x, form).unwrap().value)
            .collect();
        assert!(rel(vals[0], vals[2]) < 1e-6 && rel(vals[1], vals[2]) < 1e-6, "{vals:?}");
    }
}

#[test]
fn resolvent_identity() {
    let t = th(0.3, 0.7);
    let (lambda, mu) = (1.0, 2.0);
    let f = |y: f64| y;
    for x in [0.1, 0.5, 0.9] {
        let r = |l: f64, x: f64| resolvent_unkilled(&t, l, f, x, ResolventForm::Jacobi).unwrap().value;
        let nested = resolvent_unkilled(&t, lambda, |y| r(mu, y), x, ResolventForm::Jacobi).unwrap().value;
        let lhs = r(lambda, x) - r(mu, x);
        assert!((lhs - (mu - lambda) * nested).abs() < 1e-5);
    }
}

#[test]
fn killed_resolvents() {
    let t = th(0.3, 0.7);
    let kinds = [ResolventKind::Unkilled, ResolventKind::Killed0, ResolventKind::Killed1, ResolventKind::Killed01];
    for lambda in [0.5, 4.0] {
        for x in [0.05, 0.4, 0.9] {
            let v: Vec<f64> = kinds.iter().map(|&k| resolvent(&t, lambda, |y| y * (1.0 - y) + 0.1, x, k).unwrap().value).collect();
            // Contraction and domination by less-killed resolvents.
            assert!(v.iter().all(|&r| r > 0.0 && r <= 0.35 / lambda));
            assert!(v[3] <= v[1] && v[3] <= v[2] && v[1] <= v[0] && v[2] <= v[0], "{v:?}");
        }
    }
    // Killing at the starting point.
    for kind in [ResolventKind::Killed0, ResolventKind::Killed01, ResolventKind::Killed10] {
        let r = resolvent(&t, 1.0, |_| 1.0, 0.0, kind).unwrap().value;
        assert!(r.abs() < 1e-10, "{kind:?}: {r}");
    }
    let small = resolvent(&t, 1.0, |_| 1.0, 1e-6, ResolventKind::Killed01).unwrap().value;
    assert!(small < 1e-3);
    let r = resolvent(&t, 1.0, |_| 1.0, 1.0, ResolventKind::Killed1).unwrap().value;
    assert!(r.abs() < 1e-10);
}

#[test]
fn killing_order_is_irrelevant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = th(0.35, 0.55);
    for _ in 0..10 {
        let x: f64 = rng.random_range(0.01..0.99);
        let lambda = rng.random_range(0.1..20.0);
        let a = resolvent(&t, lambda, |y| y, x, ResolventKind::Killed01).unwrap().value;
        let b = resolvent(&t, lambda, |y| y, x, ResolventKind::Killed10).unwrap().value;
        assert!(rel(a, b) < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn killed_ratio_limit_closed_form() {
    let t = th(0.3, 0.7);
    let lim = killed_ratio_limits(&t, 1.0, |y| y).unwrap();
    let at = killed_ratio_at(&t, 1.0, |y| y, 1e-3).unwrap();
    assert!(rel(at, lim.at0) < 1e-2, "{at} vs {}", lim.at0);
    // Approach from the other end through the mirror process.
    let mirrored = killed_ratio_limits(&t.swapped(), 1.0, |y| 1.0 - y).unwrap();
    assert!(rel(mirrored.at0, lim.at1) < 1e-10 && rel(mirrored.at1, lim.at0) < 1e-10);
    let x = 1.0 - 1e-5;
    let near1 = resolvent(&t, 1.0, |y| y, x, ResolventKind::Killed01).unwrap().value / (1.0 - exit_prob(&t, x).unwrap());
    assert!(rel(near1, lim.at1) < 1e-2);
    let zero = killed_ratio_limits(&t, 1.0, |_| 0.0).unwrap();
    assert_eq!((zero.at0, zero.at1), (0.0, 0.0));
}
