use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A Gamma function was evaluated at a pole.
    #[error("Gamma pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    /// A hypergeometric parameter set is not admissible (forbidden `c`, divergent series, ...).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A series did not reach the requested relative tolerance within its term budget.
    #[error("series did not converge after {terms} terms (last relative term {last_rel:e})")]
    Convergence { terms: usize, last_rel: f64 },

    /// Parameters for which the requested closed form degenerates (integer parameter gaps).
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    /// A truncation could not be made small enough within its hard cap.
    #[error("tolerance {tol:e} unreachable: {detail}")]
    ToleranceUnreachable { tol: f64, detail: String },

    /// Numerical Laplace inversion failed its internal consistency check.
    #[error("inversion unstable at t = {t}: orders disagree by {discrepancy:e} (relative)")]
    InversionUnstable { t: f64, discrepancy: f64 },

    /// A λ-grid is too narrow for an asymptotic index estimate.
    #[error("grid too narrow: {0}")]
    GridTooNarrow(String),

    /// A Monte Carlo run exhausted its step budget.
    #[error("step budget of {cap} exceeded")]
    BudgetExceeded { cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
