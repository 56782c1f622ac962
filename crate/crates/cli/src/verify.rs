//! Identity ledger: every check is an independent route to a quantity the
//! library also computes another way.

use serde::Serialize;

use wf_excursions::excursions::{entrance_law_mass, hausdorff_index, log_grid, switch_rate, total_mass};
use wf_excursions::greens::{green, resolvent, GreenRep, ResolventKind};
use wf_excursions::hitting::{boundary_ratio_limits, Boundary};
use wf_excursions::wfmodel::ThetaParams;

use crate::commands::theta_set;
use crate::error::{CliError, CliResult};
use crate::output::{emit, Provenance};
use crate::Common;

const GRID: [f64; 3] = [0.3, 0.5, 0.7];
const GREEN_TOL: f64 = 1e-6;
const KILLING_TOL: f64 = 1e-8;
const COMPLEMENTARITY_TOL: f64 = 1e-8;
const MASS_TOL: f64 = 1e-8;
const INDEX_TOL: f64 = 0.05;

#[derive(Debug, Serialize)]
struct CheckRow {
    check: &'static str,
    theta1: f64,
    theta2: f64,
    point: String,
    discrepancy: f64,
    tolerance: f64,
    pass: bool,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn checks_for(t: &ThetaParams) -> CliResult<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let mut push = |check, point: String, discrepancy: f64, tolerance: f64| {
        rows.push(CheckRow {
            check,
            theta1: t.theta1(),
            theta2: t.theta2(),
            point,
            discrepancy,
            tolerance,
            pass: discrepancy <= tolerance,
        })
    };

    for lambda in [0.5, 1.0, 5.0] {
        for x in [0.2, 0.5, 0.8] {
            for y in [0.2, 0.5, 0.8] {
                let g = |rep| green(t, lambda, x, y, rep).map(|e| e.value);
                let (j, p, w) = (g(GreenRep::JacobiSeries)?, g(GreenRep::ProductForm)?, g(GreenRep::WronskianClosed)?);
                let d = rel(j, w).max(rel(p, w)).max(rel(j, p));
                push("green_tri_form", format!("lambda={lambda} x={x} y={y}"), d, GREEN_TOL);
            }
        }
    }

    let f = |y: f64| y * (1.0 - y);
    for (x, lambda) in [(0.2, 0.5), (0.35, 2.0), (0.5, 1.0), (0.8, 5.0)] {
        let r01 = resolvent(t, lambda, f, x, ResolventKind::Killed01)?.value;
        let r10 = resolvent(t, lambda, f, x, ResolventKind::Killed10)?.value;
        push("killing_order", format!("lambda={lambda} x={x}"), rel(r01, r10), KILLING_TOL);
    }

    // n(1 − e^{−λζ}) = λ∫n_λ(dx) splits into returning excursions (φ₀₀) and
    // switching ones; together with the switching rate this must rebuild λn_λ1.
    let rate = switch_rate(t);
    for lambda in log_grid(0.01, 100.0, 10) {
        let crossing = boundary_ratio_limits(t, lambda)?.crossing;
        let phi00 = lambda * entrance_law_mass(t, lambda, Boundary::Zero)? - rate * (1.0 - crossing);
        let tm = total_mass(t, lambda, Boundary::Zero)?;
        push("complementarity", format!("lambda={lambda}"), rel(rate + phi00, tm), COMPLEMENTARITY_TOL);
    }

    // The entrance law misses exactly the e^{−λH₁} weight of switching excursions.
    for lambda in [0.5, 1.0, 5.0] {
        let crossing = boundary_ratio_limits(t, lambda)?.crossing;
        let mass = lambda * entrance_law_mass(t, lambda, Boundary::Zero)?;
        let tm = total_mass(t, lambda, Boundary::Zero)?;
        push("mass_consistency", format!("lambda={lambda}"), rel(mass + rate * crossing, tm), MASS_TOL);
    }

    let grid = log_grid(10.0, 1e5, 41);
    for (b, boundary, expected) in [(0, Boundary::Zero, 1.0 - t.theta1()), (1, Boundary::One, 1.0 - t.theta2())] {
        let slope = hausdorff_index(t, boundary, &grid)?;
        push("index_slope", format!("boundary={b}"), (slope - expected).abs(), INDEX_TOL);
    }
    Ok(rows)
}

pub fn run(common: &Common) -> CliResult<()> {
    let defaults: Vec<(f64, f64)> = GRID.iter().flat_map(|&a| GRID.iter().map(move |&b| (a, b))).collect();
    let thetas = theta_set(common, &defaults)?;
    let mut rows = Vec::new();
    for t in &thetas {
        rows.extend(checks_for(t)?);
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let list = |f: fn(&ThetaParams) -> f64| thetas.iter().map(|t| f(t).to_string()).collect::<Vec<_>>().join(",");
    let mut prov = Provenance::new("verify").with("theta1", list(ThetaParams::theta1)).with("theta2", list(ThetaParams::theta2));
    if let Some(rel) = common.perturb_gamma {
        prov = prov.with("gamma_perturbation", rel);
    }
    emit(&prov, &rows, common.format, common.out.as_deref())?;
    if failed > 0 {
        return Err(CliError::Verification { failed, total: rows.len() });
    }
    Ok(())
}
