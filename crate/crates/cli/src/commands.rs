//! Thin dispatchers: validate, compute, emit.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use wf_excursions::excursions::{entrance_density_time_unchecked, hausdorff_index};
use wf_excursions::greens::{green_with, resolvent, GreenConfig, GreenRep, ResolventKind};
use wf_excursions::hitting::{Boundary, EigenPair, Killing, Sign};
use wf_excursions::laplinv::InversionConfig;
use wf_excursions::simulate::{estimate_exit_prob, estimate_hitting_laplace, simulate_path, StepConfig};
use wf_excursions::wfmodel::{make_theta, ThetaParams};

use crate::error::{CliError, CliResult};
use crate::output::{emit, Provenance};
use crate::{verify, BoundaryArg, Command, Common, KindArg, SimMode, TestFunction};

const DEFAULT_THETA: (f64, f64) = (0.3, 0.7);

/// Parameter sets of the published eigenfunction plots.
const EIGEN_THETAS: [(f64, f64); 3] = [(0.3, 0.3), (0.3, 0.7), (0.7, 0.3)];

fn config<T>(r: Result<T, String>) -> CliResult<T> {
    r.map_err(CliError::Config)
}

fn theta(common: &Common) -> CliResult<ThetaParams> {
    let (a, b) = (common.theta1.unwrap_or(DEFAULT_THETA.0), common.theta2.unwrap_or(DEFAULT_THETA.1));
    make_theta(a, b).map_err(|e| CliError::Config(e.to_string()))
}

/// Explicit `(θ₁, θ₂)` when both are given, otherwise the supplied defaults.
pub(crate) fn theta_set(common: &Common, defaults: &[(f64, f64)]) -> CliResult<Vec<ThetaParams>> {
    let pairs = match (common.theta1, common.theta2) {
        (Some(a), Some(b)) => vec![(a, b)],
        (None, None) => defaults.to_vec(),
        _ => return Err(CliError::Config("give both --theta1 and --theta2, or neither".into())),
    };
    pairs.into_iter().map(|(a, b)| make_theta(a, b).map_err(|e| CliError::Config(e.to_string()))).collect()
}

fn provenance(command: &str, common: &Common, thetas: &[ThetaParams]) -> Provenance {
    let list = |f: fn(&ThetaParams) -> f64| thetas.iter().map(|t| f(t).to_string()).collect::<Vec<_>>().join(",");
    let mut p = Provenance::new(command)
        .with("theta1", list(ThetaParams::theta1))
        .with("theta2", list(ThetaParams::theta2))
        .with("seed", common.seed);
    if let Some(tol) = common.tol {
        p = p.with("tol", tol);
    }
    p
}

fn boundary(b: BoundaryArg) -> Boundary {
    match b {
        BoundaryArg::Zero => Boundary::Zero,
        BoundaryArg::One => Boundary::One,
    }
}

pub fn dispatch(common: &Common, command: &Command) -> CliResult<()> {
    match command {
        Command::Eigen { lambda, x_grid } => {
            config(x_grid.within("x-grid", 0.0, 1.0, false))?;
            let thetas = theta_set(common, &EIGEN_THETAS)?;
            let mut rows = Vec::new();
            for t in &thetas {
                let e = EigenPair::new(t, *lambda, Killing::Unkilled)?;
                for &x in x_grid.points() {
                    rows.push(EigenRow {
                        x,
                        phi_minus: e.phi(Sign::Minus, x)?,
                        phi_plus: e.phi(Sign::Plus, x)?,
                        theta1: t.theta1(),
                        theta2: t.theta2(),
                        lambda: *lambda,
                    });
                }
            }
            let prov = provenance("eigen", common, &thetas).with("lambda", lambda).with("x_grid", x_grid);
            emit(&prov, &rows, common.format, common.out.as_deref())
        }
        Command::Entrance { t_grid, x_grid, from, order } => {
            let t = theta(common)?;
            let cfg = InversionConfig { order: *order, ..InversionConfig::default() };
            config(x_grid.within("x-grid", 0.0, 1.0, true))?;
            config(t_grid.within("t-grid", cfg.t_min, f64::INFINITY, false))?;
            let mut rows = Vec::new();
            for &time in t_grid.points() {
                for &x in x_grid.points() {
                    let d = entrance_density_time_unchecked(&t, time, boundary(*from), x, &cfg)?;
                    let ok = d.discrepancy <= cfg.consistency_tol;
                    rows.push(EntranceRow {
                        t: time,
                        x,
                        density: d.value,
                        consistency_flag: if ok { "ok" } else { "unstable" },
                        discrepancy: d.discrepancy,
                    });
                }
            }
            let prov = provenance("entrance", common, &[t])
                .with("t_grid", t_grid)
                .with("x_grid", x_grid)
                .with("from", if *from == BoundaryArg::Zero { 0 } else { 1 })
                .with("order", order)
                .with("consistency_tol", cfg.consistency_tol);
            emit(&prov, &rows, common.format, common.out.as_deref())
        }
        Command::Verify => verify::run(common),
        Command::Simulate { mode, x0, t_grid, n_paths, eps, y, lambda, dt, max_steps } => {
            let t = theta(common)?;
            let steps = match dt {
                Some(dt) => StepConfig { max_steps: *max_steps, ..StepConfig::uniform(*dt) },
                None => StepConfig { max_steps: *max_steps, ..StepConfig::default() },
            };
            let mut prov = provenance("simulate", common, &[t])
                .with("mode", format!("{mode:?}").to_lowercase())
                .with("x0", x0)
                .with("n_paths", n_paths);
            match mode {
                SimMode::Path => {
                    prov = prov.with("t_grid", t_grid);
                    let mut rows = Vec::new();
                    for i in 0..*n_paths {
                        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
                        rng.set_stream(i as u64);
                        let p = simulate_path(&t, *x0, t_grid.points(), &mut rng)?;
                        rows.extend(p.times.iter().zip(&p.states).map(|(&time, &x)| PathRow { path: i, t: time, x }));
                    }
                    emit(&prov, &rows, common.format, common.out.as_deref())
                }
                SimMode::Exit | SimMode::Hitting => {
                    prov = prov.with("near_step", steps.near).with("bulk_step", steps.bulk).with("max_steps", steps.max_steps);
                    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
                    let (est, target) = if *mode == SimMode::Exit {
                        prov = prov.with("eps", eps);
                        (estimate_exit_prob(&t, *x0, *eps, &steps, *n_paths, &mut rng)?, None)
                    } else {
                        prov = prov.with("y", y).with("lambda", lambda);
                        (estimate_hitting_laplace(&t, *x0, *y, *lambda, &steps, *n_paths, &mut rng)?, Some((*y, *lambda)))
                    };
                    let row = EstimateRow {
                        mode: if target.is_some() { "hitting" } else { "exit" },
                        x0: *x0,
                        y: target.map(|p| p.0),
                        lambda: target.map(|p| p.1),
                        eps: est.eps_boundary,
                        value: est.value,
                        std_error: est.std_error,
                        n_paths: est.n_paths,
                    };
                    emit(&prov, &[row], common.format, common.out.as_deref())
                }
            }
        }
        Command::Hausdorff { lambda_grid } => {
            let t = theta(common)?;
            let rows = [(0u8, Boundary::Zero, 1.0 - t.theta1()), (1, Boundary::One, 1.0 - t.theta2())]
                .into_iter()
                .map(|(b, bd, expected)| Ok(HausdorffRow { boundary: b, slope: hausdorff_index(&t, bd, lambda_grid.points())?, expected }))
                .collect::<CliResult<Vec<_>>>()?;
            let prov = provenance("hausdorff", common, &[t]).with("lambda_grid", lambda_grid);
            emit(&prov, &rows, common.format, common.out.as_deref())
        }
        Command::Green { lambda_grid, x_grid } => {
            let t = theta(common)?;
            config(x_grid.within("x-grid", 0.0, 1.0, true))?;
            let cfg = GreenConfig { tol: common.tol.unwrap_or(GreenConfig::default().tol), ..GreenConfig::default() };
            let mut rows = Vec::new();
            for &lambda in lambda_grid.points() {
                for &x in x_grid.points() {
                    for &y in x_grid.points() {
                        let g = |rep| green_with(&t, lambda, x, y, rep, &cfg).map(|e| e.value);
                        rows.push(GreenRow {
                            lambda,
                            x,
                            y,
                            jacobi: g(GreenRep::JacobiSeries)?,
                            product: g(GreenRep::ProductForm)?,
                            wronskian: g(GreenRep::WronskianClosed)?,
                        });
                    }
                }
            }
            let prov = provenance("green", common, &[t]).with("lambda_grid", lambda_grid).with("x_grid", x_grid);
            emit(&prov, &rows, common.format, common.out.as_deref())
        }
        Command::Resolvent { lambda_grid, x_grid, function, kind } => {
            let t = theta(common)?;
            config(x_grid.within("x-grid", 0.0, 1.0, false))?;
            let f: fn(f64) -> f64 = match function {
                TestFunction::One => |_| 1.0,
                TestFunction::Y => |y| y,
                TestFunction::Y2 => |y| y * y,
                TestFunction::YOneMinusY => |y| y * (1.0 - y),
            };
            let k = match kind {
                KindArg::Unkilled => ResolventKind::Unkilled,
                KindArg::Killed0 => ResolventKind::Killed0,
                KindArg::Killed1 => ResolventKind::Killed1,
                KindArg::Killed01 => ResolventKind::Killed01,
                KindArg::Killed10 => ResolventKind::Killed10,
            };
            let mut rows = Vec::new();
            for &lambda in lambda_grid.points() {
                for &x in x_grid.points() {
                    rows.push(ResolventRow { lambda, x, value: resolvent(&t, lambda, f, x, k)?.value });
                }
            }
            let prov = provenance("resolvent", common, &[t])
                .with("lambda_grid", lambda_grid)
                .with("x_grid", x_grid)
                .with("function", format!("{function:?}").to_lowercase())
                .with("kind", format!("{kind:?}").to_lowercase());
            emit(&prov, &rows, common.format, common.out.as_deref())
        }
    }
}

#[derive(Serialize)]
struct EigenRow {
    x: f64,
    phi_minus: f64,
    phi_plus: f64,
    theta1: f64,
    theta2: f64,
    lambda: f64,
}

#[derive(Serialize)]
struct EntranceRow {
    t: f64,
    x: f64,
    density: f64,
    consistency_flag: &'static str,
    discrepancy: f64,
}

#[derive(Serialize)]
struct PathRow {
    path: usize,
    t: f64,
    x: f64,
}

#[derive(Serialize)]
struct EstimateRow {
    mode: &'static str,
    x0: f64,
    y: Option<f64>,
    lambda: Option<f64>,
    eps: f64,
    value: f64,
    std_error: f64,
    n_paths: usize,
}

#[derive(Serialize)]
struct HausdorffRow {
    boundary: u8,
    slope: f64,
    expected: f64,
}

#[derive(Serialize)]
struct GreenRow {
    lambda: f64,
    x: f64,
    y: f64,
    jacobi: f64,
    product: f64,
    wronskian: f64,
}

#[derive(Serialize)]
struct ResolventRow {
    lambda: f64,
    x: f64,
    value: f64,
}
