//! File formats and subcommands of the `stagflow` command-line tool.

pub mod commands;
pub mod error;
pub mod jsonfmt;
pub mod problem;
pub mod solution;

pub use commands::{cmd_flowlines, cmd_solve, cmd_stream, cmd_sweep, cmd_verify, Format, Status};
pub use error::{CliError, Result};
pub use problem::ProblemFile;
pub use solution::SolutionFile;
