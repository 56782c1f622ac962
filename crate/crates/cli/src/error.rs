use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(wf_excursions::Error),

    #[error("verification failed: {failed} of {total} checks outside tolerance")]
    Verification { failed: usize, total: usize },

    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Verification { .. } => 4,
            CliError::Output(_) => 1,
        }
    }
}

impl From<wf_excursions::Error> for CliError {
    fn from(e: wf_excursions::Error) -> Self {
        use wf_excursions::Error as E;
        match e {
            // These reflect the inputs rather than the numerics.
            E::Domain(m) | E::Parameter(m) | E::GridTooNarrow(m) => CliError::Config(m),
            other => CliError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
