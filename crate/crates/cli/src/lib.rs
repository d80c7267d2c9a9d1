//! Command-line front end: an expression parser, lowering into the engine
//! types, one command per operation family, and table/JSON/CSV reports.

// `!(x <= tol)` style tests are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod expr;
pub mod lower;
pub mod report;
pub mod selftest;

pub use commands::run_command;
pub use config::{parse_args, CommandId, DomainChoice, OutputFormat, Payload, RouteChoice, RunConfig};
pub use expr::{parse_expression, Expr, ParseError};
pub use report::{OracleCheck, Report};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Engine(#[from] diffint::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("output: {0}")]
    Output(String),
}
