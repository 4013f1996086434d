//! Crate-wide error type.

use thiserror::Error;

use crate::coeffs::ValidationReport;
use crate::expr::{EvalError, ParseError};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid: {0}")]
    Grid(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    /// Coefficient data violates the standing hypotheses; the report lists
    /// every failed check with its location.
    #[error("coefficient validation failed:\n{0}")]
    Validation(ValidationReport),

    /// a4/a5 has a nonzero spatial mean, so its antiderivative F would not
    /// be periodic.
    #[error("a4/a5 has mean {mean:.3e} at t = {t}; F is not periodic (|mean| must be <= {tol:.1e})")]
    NonPeriodicF { t: f64, mean: f64, tol: f64 },

    /// The value under the square root (exact weight variant) or the weight
    /// itself is not strictly positive.
    #[error("degenerate weight at t = {t}: {what} has minimum {min:.3e}")]
    DegenerateWeight { t: f64, what: String, min: f64 },

    /// Explicit time step violates the scheme's stability bound.
    #[error("time step {dt:.3e} exceeds the {scheme} stability limit {limit:.3e} (dt * max|dispersion| = {product:.3} > 2.8)")]
    Unstable {
        scheme: String,
        dt: f64,
        limit: f64,
        product: f64,
    },

    /// Bad solver/scenario configuration (step not dividing the horizon,
    /// out-of-contract numeric field, ...).
    #[error("configuration: {0}")]
    Config(String),

    /// Scenario file problems that are not plain TOML syntax errors.
    #[error("scenario {path}: {msg}")]
    Scenario { path: String, msg: String },

    /// Snapshot/trace format violations (bad magic, version, truncation).
    #[error("format: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
