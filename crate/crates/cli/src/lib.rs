//! Command-line front end for [`pqmkz`]: figure data, bound reports,
//! convergence tables and density profiles as CSV, JSON or SVG.

pub mod commands;
pub mod config;
mod output;
mod selftest;
mod svg;

pub use commands::run;
pub use config::{
    Cli, CommandKind, Format, FunctionSpec, GridSpec, ParamSource, RunConfig, Truncation,
};
pub use output::{write_outcome, Artifact, Outcome};
