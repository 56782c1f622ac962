//! The four Kummer solutions of the hypergeometric ODE on `(0, 1)`, their
//! connection coefficients and Wronskians.

use num_complex::Complex64;

use super::gamma::gamma_ratio;
use super::hyp2f1::{eval, HypConfig};
use crate::error::{Error, Result};

type C = Complex64;

/// `f, g` (regular and singular at 0) and `h, κ` (regular and vanishing at 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSolutions {
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wronskians {
    pub fg: f64,
    pub fh: f64,
    pub fkappa: f64,
    pub gh: f64,
}

/// `h = α₁f + β₁g` and `κ = α₂f + β₂g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionCoefficients {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
}

fn is_integer(z: C) -> bool {
    z.im.abs() < 1e-12 && (z.re - z.re.round()).abs() < 1e-12
}

fn check(a: C, b: C, c: f64) -> Result<()> {
    let cc = C::new(c, 0.0);
    for (name, z) in [("c", cc), ("c - a - b", cc - a - b), ("a - b", a - b)] {
        if is_integer(z) {
            return Err(Error::Degenerate(format!("{name} = {} is an integer", z.re)));
        }
    }
    Ok(())
}

/// Evaluates the four solutions at `x`.
pub fn ode_solutions(a: Complex64, b: Complex64, c: f64, x: f64) -> Result<OdeSolutions> {
    check(a, b, c)?;
    let cfg = HypConfig::default();
    let cc = C::new(c, 0.0);
    let f = eval(a, b, cc, x, &cfg)?.value;
    let g = if x == 0.0 {
        C::new(0.0, 0.0)
    } else {
        C::new(x, 0.0).powf(1.0 - c) * eval(a - cc + 1.0, b - cc + 1.0, 2.0 - cc, x, &cfg)?.value
    };
    let h = eval(a, b, a + b + 1.0 - cc, 1.0 - x, &cfg)?.value;
    let s = cc - a - b;
    let kappa = if x == 1.0 {
        C::new(0.0, 0.0)
    } else {
        C::new(1.0 - x, 0.0).powc(s) * eval(cc - a, cc - b, s + 1.0, 1.0 - x, &cfg)?.value
    };
    Ok(OdeSolutions { f: f.re, g: g.re, h: h.re, kappa: kappa.re })
}

/// Gamma coefficients expressing `h` and `κ` in the basis `{f, g}`.
pub fn connection_coefficients(a: Complex64, b: Complex64, c: f64) -> Result<ConnectionCoefficients> {
    check(a, b, c)?;
    let c = C::new(c, 0.0);
    let one = C::new(1.0, 0.0);
    let alpha1 = gamma_ratio(&[one - c, a + b - c + 1.0], &[a - c + 1.0, b - c + 1.0])?;
    let beta1 = gamma_ratio(&[c - 1.0, a + b - c + 1.0], &[a, b])?;
    let alpha2 = gamma_ratio(&[one - c, c - a - b + 1.0], &[one - a, one - b])?;
    let beta2 = gamma_ratio(&[c - 1.0, c - a - b + 1.0], &[c - a, c - b])?;
    Ok(ConnectionCoefficients {
        alpha1: alpha1.re,
        beta1: beta1.re,
        alpha2: alpha2.re,
        beta2: beta2.re,
    })
}

/// Closed-form Wronskians `W(u, v) = u v' − u' v`.
///
/// `W(g, h) = −α₁ W(f, g)`: the sign follows from `W(g, f) = −W(f, g)`.
pub fn wronskians(a: Complex64, b: Complex64, c: f64, x: f64) -> Result<Wronskians> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("Wronskians need x in (0, 1), got {x}")));
    }
    let k = connection_coefficients(a, b, c)?;
    let s = C::new(c, 0.0) - a - b;
    let base = (1.0 - c) * x.powf(-c) * C::new(1.0 - x, 0.0).powc(s - 1.0);
    let base = base.re;
    Ok(Wronskians {
        fg: base,
        fh: k.beta1 * base,
        fkappa: k.beta2 * base,
        gh: -k.alpha1 * base,
    })
}
