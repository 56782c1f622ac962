//! Complex Gamma function via a Lanczos approximation (g = 671/128, 14 terms),
//! with reflection for `Re z < 1/2`.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

// Relative perturbation applied to every Gamma evaluation. Zero in normal use;
// the verification harness sets it to prove that its checks can fail.
static PERTURBATION: AtomicU64 = AtomicU64::new(0);

#[doc(hidden)]
pub fn set_gamma_perturbation(rel: f64) {
    PERTURBATION.store(rel.to_bits(), Ordering::Relaxed);
}

#[inline]
fn perturbation() -> f64 {
    f64::from_bits(PERTURBATION.load(Ordering::Relaxed))
}

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

// Lanczos log-Gamma, valid for Re z > 0.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let t = z + LANCZOS_G;
    let head = (z + 0.5) * t.ln() - t;
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    let mut y = z;
    for &c in &LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    head + (ser * SQRT_2PI / z).ln()
}

/// `ln sin(πz)` on any branch, without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    if z.im > 0.0 {
        // sin(πz) = (i/2) e^{-iπz} (1 - e^{2iπz})
        -i * PI * z + Complex64::new(0.0, 0.5).ln() + (1.0 - (2.0 * i * PI * z).exp()).ln()
    } else {
        // sin(πz) = (1/(2i)) e^{iπz} (1 - e^{-2iπz})
        i * PI * z - Complex64::new(0.0, 2.0).ln() + (1.0 - (-2.0 * i * PI * z).exp()).ln()
    }
}

/// Principal-ish branch of `ln Γ(z)`; only `exp` of sums of these values is meaningful.
pub fn ln_gamma_c(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    let v = if z.re < 0.5 {
        Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_right(1.0 - z)
    } else {
        ln_gamma_right(z)
    };
    let p = perturbation();
    Ok(if p == 0.0 { v } else { v + (1.0 + p).ln() })
}

/// Complex Gamma function.
pub fn gamma_c(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.re < 0.5 && z.im.abs() < 200.0 {
        // Direct reflection keeps the sign exact on the negative real axis.
        let g = ln_gamma_right(1.0 - z).exp();
        let v = PI / ((z * PI).sin() * g);
        let p = perturbation();
        return Ok(v * (1.0 + p));
    }
    Ok(ln_gamma_c(z)?.exp())
}

/// `1/Γ(z)`, entire: zero at the poles of Γ.
pub fn rgamma_c(z: Complex64) -> Complex64 {
    if is_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    match gamma_c(z) {
        Ok(g) => 1.0 / g,
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// Real Gamma function.
pub fn gamma(x: f64) -> Result<f64> {
    Ok(gamma_c(Complex64::new(x, 0.0))?.re)
}

/// `ln |Γ(x)|` for real `x`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma_c(Complex64::new(x, 0.0))?.re)
}

/// Beta function `B(p, q)` for positive arguments.
pub fn beta(p: f64, q: f64) -> Result<f64> {
    Ok((ln_gamma(p)? + ln_gamma(q)? - ln_gamma(p + q)?).exp())
}

/// Rising factorial `(a)_n = a(a+1)...(a+n-1)`.
pub fn rising_factorial(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

/// A product of Gamma values raised to ±1, evaluated in log space.
///
/// Returns zero if any denominator argument sits on a pole; errors if a numerator does.
pub fn gamma_ratio(num: &[Complex64], den: &[Complex64]) -> Result<Complex64> {
    if den.iter().any(|&z| is_pole(z)) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut sign = 1.0;
    for &z in num {
        acc += ln_gamma_c(z)?;
        if z.im == 0.0 && z.re < 0.0 && gamma_sign_negative(z.re) {
            sign = -sign;
        }
    }
    for &z in den {
        acc -= ln_gamma_c(z)?;
        if z.im == 0.0 && z.re < 0.0 && gamma_sign_negative(z.re) {
            sign = -sign;
        }
    }
    // On the real axis the log branch carries the sign in its imaginary part;
    // replace it with the exact sign to avoid round-off leakage.
    if num.iter().chain(den).all(|z| z.im == 0.0) {
        return Ok(Complex64::new(sign * acc.re.exp(), 0.0));
    }
    Ok(acc.exp())
}

// Γ(x) < 0 for x in (-1,0), (-3,-2), ...
fn gamma_sign_negative(x: f64) -> bool {
    (-x).floor() as i64 % 2 == 0
}
