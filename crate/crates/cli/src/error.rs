use std::process::ExitCode;

use thiserror::Error;
use vgraph_core::config::ConfigError;
use vgraph_core::eval::EvalError;
use vgraph_core::gat::GatError;
use vgraph_core::graph::GraphError;
use vgraph_core::labels::LabelError;
use vgraph_core::svg::SvgError;

/// Exit 1 for bad input, 2 when an internal invariant breaks.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(1),
            CliError::Invariant(_) => ExitCode::from(2),
        }
    }

    pub fn input(context: impl std::fmt::Display, e: impl std::fmt::Display) -> Self {
        CliError::Input(format!("{context}: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SvgError> for CliError {
    fn from(e: SvgError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LabelError> for CliError {
    fn from(e: LabelError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::InvalidGraph(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GatError> for CliError {
    fn from(e: GatError) -> Self {
        match e {
            GatError::DivergedLoss { .. } | GatError::Evaluation(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Model(m) => m.into(),
            EvalError::LengthMismatch { .. } | EvalError::CategoryOutOfRange { .. } => {
                CliError::Invariant(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}
