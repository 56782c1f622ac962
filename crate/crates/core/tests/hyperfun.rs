mod common;

use common::{connection_worst, derivative_worst, gauss_sum_worst, ode_residual_worst, re, wronskian_worst};
use num_complex::Complex64;
use std::f64::consts::PI;
use wf_excursions::hyperfun::*;
use wf_excursions::Error;

#[test]
fn gamma_values_and_recurrence() {
    assert!((gamma_c(re(1.0)).unwrap() - re(1.0)).norm() < 1e-15);
    assert!((gamma_c(re(0.5)).unwrap().re - PI.sqrt()).abs() < 1e-14);
    let z = Complex64::new(2.3, 1.1);
    let via = gamma_c(z + 3.0).unwrap() / (z * (z + 1.0) * (z + 2.0));
    assert!((gamma_c(z).unwrap() - via).norm() / via.norm() < 1e-13);
    // Whole strip: Γ(z+1) = zΓ(z).
    for re_z in [-19.5, -7.25, -0.5, 0.3, 4.0, 19.0] {
        for im_z in [0.0, 0.7, 12.0, 49.0] {
            let z = Complex64::new(re_z, im_z);
            let (g, g1) = (gamma_c(z).unwrap(), gamma_c(z + 1.0).unwrap());
            assert!((g1 - z * g).norm() <= 1e-12 * g1.norm(), "{z}");
        }
    }
    assert!(matches!(gamma_c(re(-3.0)), Err(Error::Pole { .. })));
    assert!(matches!(gamma(0.0), Err(Error::Pole { .. })));
}

#[test]
fn rising_factorials() {
    assert_eq!(rising_factorial(Complex64::new(0.3, 2.0), 0), re(1.0));
    assert_eq!(rising_factorial(re(3.0), 4), re(360.0));
    assert_eq!(rising_factorial(re(-2.0), 3), re(0.0));
    let a = Complex64::new(0.7, -0.4);
    let via = gamma_c(a + 6.0).unwrap() / gamma_c(a).unwrap();
    assert!((rising_factorial(a, 6) - via).norm() < 1e-12 * via.norm());
}

#[test]
fn series_examples() {
    let p = HypParams::new(Complex64::new(0.4, 2.0), Complex64::new(0.4, -2.0), 0.9, 0.0);
    assert_eq!(hyp2f1(&p, 1e-14).unwrap().value, 1.0);
    // Oracle: 200 terms of Σ x^n/(n+1) against −ln(1−x)/x.
    let direct: f64 = (0..200).map(|n| 0.5f64.powi(n) / (n + 1) as f64).sum();
    let r = hyp2f1(&HypParams::real(1.0, 1.0, 2.0, 0.5), 1e-15).unwrap();
    assert!((r.value - direct).abs() < 1e-14 && (direct - 2.0 * 2f64.ln()).abs() < 1e-14);
    let r = hyp2f1(&HypParams::real(1.0, 1.0, 2.0, 0.8), 1e-15).unwrap();
    assert!(r.transformed && (r.value + 0.2f64.ln() / 0.8).abs() < 1e-13);
    // Polynomial: ₂F₁(−2, b; c; x) = 1 − 2bx/c + b(b+1)x²/(c(c+1)).
    let (b, c, x) = (0.7, 1.3, 0.9);
    let poly = 1.0 - 2.0 * b * x / c + b * (b + 1.0) * x * x / (c * (c + 1.0));
    assert!((hyp2f1(&HypParams::real(-2.0, b, c, x), 1e-14).unwrap().value - poly).abs() < 1e-14);
    assert!(matches!(hyp2f1(&HypParams::real(0.5, 0.5, -2.0, 0.3), 1e-14), Err(Error::Parameter(_))));
    // c = −2 is admissible when the series stops first.
    assert!(hyp2f1(&HypParams::real(-1.0, 0.5, -2.0, 0.3), 1e-14).is_ok());
}

#[test]
fn conjugate_pairs_are_real() {
    for (a, b, c) in common::ode_parameter_sets() {
        for x in [0.1, 0.45, 0.7, 0.99] {
            let r = hyp2f1(&HypParams::new(a, b, c, x), 1e-14).unwrap();
            assert!(r.imag_residual <= 1e-10 * r.value.abs().max(1.0), "{a} {c} {x}: {r:?}");
        }
    }
}

#[test]
fn gauss_summation() {
    let worst = gauss_sum_worst(50, 2024);
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn derivative() {
    let p = HypParams::real(0.6, -1.4, 0.35, 0.0);
    assert!((hyp2f1_deriv(&p).unwrap() - 0.6 * -1.4 / 0.35).abs() < 1e-14);
    // d/dx[−ln(1−x)/x] = 1/(x(1−x)) + ln(1−x)/x².
    let x: f64 = 0.3;
    let closed = 1.0 / (x * (1.0 - x)) + (1.0 - x).ln() / (x * x);
    assert!((hyp2f1_deriv(&HypParams::real(1.0, 1.0, 2.0, x)).unwrap() - closed).abs() < 1e-12);
    let worst = derivative_worst(20, 7);
    assert!(worst < 1e-5, "{worst}");
}

#[test]
fn limit_at_one() {
    let (a, b, c) = (re(1.0), re(1.0), 0.5);
    assert!((limit_ratio_at_one(a, b, c).unwrap() - PI / 2.0).abs() < 1e-13);
    let (a, b, c) = (Complex64::new(0.9, 0.0), Complex64::new(0.8, 0.0), 1.2);
    assert_eq!(limit_ratio_at_one(a, b, c).unwrap(), limit_ratio_at_one(b, a, c).unwrap());
    let z: f64 = 1.0 - 1e-6;
    let near = (1.0 - z).powf(1.7 - 1.2) * f21(a, b, c, z).unwrap();
    assert!((near / limit_ratio_at_one(a, b, c).unwrap() - 1.0).abs() < 1e-3);
    assert!(matches!(limit_ratio_at_one(re(0.1), re(0.2), 0.5), Err(Error::Parameter(_))));
}

#[test]
fn kummer_solutions() {
    for (a, b, c) in common::ode_parameter_sets() {
        // h is singular at 0 once c > 1.
        if c < 1.0 {
            let at0 = ode_solutions(a, b, c, 0.0).unwrap();
            assert_eq!((at0.f, at0.g), (1.0, 0.0));
        }
        if (re(c) - a - b).re > 0.0 {
            let at1 = ode_solutions(a, b, c, 1.0).unwrap();
            assert_eq!((at1.h, at1.kappa), (1.0, 0.0));
        }
    }
    assert!(matches!(ode_solutions(re(0.2), re(0.3), 2.0, 0.4), Err(Error::Degenerate(_))));
    assert!(matches!(ode_solutions(re(0.2), re(1.2), 0.5, 0.4), Err(Error::Degenerate(_))));
    assert!(matches!(ode_solutions(re(0.2), re(0.3), 1.5, 0.4), Err(Error::Degenerate(_))));
    let worst = ode_residual_worst();
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn connection_formulas() {
    let worst = connection_worst();
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn wronskian_closed_forms() {
    let worst = wronskian_worst();
    assert!(worst < 1e-6, "{worst}");
    // Bilinearity: W(f, αf + βg) = βW(f, g), i.e. W(f, h) = β₁W(f, g).
    let (a, b, c) = (re(0.35), re(-0.85), 0.3);
    let k = connection_coefficients(a, b, c).unwrap();
    let w = wronskians(a, b, c, 0.4).unwrap();
    assert!((w.fh - k.beta1 * w.fg).abs() < 1e-14 * w.fh.abs());
    let x: f64 = 0.4;
    let closed = (1.0 - c) * x.powf(-c) * (1.0 - x).powf(c - 0.35 + 0.85 - 1.0);
    assert!((w.fg - closed).abs() < 1e-14 * closed.abs());
    assert!(wronskians(a, b, c, 1.0).is_err());
}
