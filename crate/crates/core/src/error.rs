use thiserror::Error;

use crate::manifold::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown state id {0}")]
    UnknownState(usize),

    #[error("manifold failed validation: {}", format_violations(.0))]
    InvalidManifold(Vec<Violation>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("negative delay {name} = {value} fs")]
    NegativeTime { name: &'static str, value: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
