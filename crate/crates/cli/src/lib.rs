//! Experiment harness for the `rtkm` library: seeded restarts, outlier
//! fraction sweeps and evaluation, with JSON and CSV artifacts that record
//! how every number was produced.

pub mod args;
pub mod commands;
pub mod dataset;
pub mod error;
pub mod grid;
pub mod manifest;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};
pub use grid::parse_alpha_grid;

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Fit(args) => commands::write_fit(args, &commands::cmd_fit(args)?),
        Command::Sweep(args) => {
            let (rows, manifest) = commands::cmd_sweep(args)?;
            commands::write_sweep(args, &rows, &manifest)
        }
        Command::Eval(args) => commands::write_eval(args, &commands::cmd_eval(args)?),
        Command::Generate(args) => commands::write_generate(args, &commands::cmd_generate(args)?),
    }
}
