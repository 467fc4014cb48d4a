//! Library side of the `zml` command-line tool: the per-command logic and
//! the CSV / JSON output records, kept separate from argument parsing so
//! tests can call them directly.

pub mod commands;
pub mod output;

pub use commands::{cmd_estimate, cmd_lyapunov, cmd_sweep, cmd_zeros, CliError, Outcome};
pub use output::{format_g, Cell, OutputRecord, SCHEMA_VERSION};
