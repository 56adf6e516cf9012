//! Command-line front end for `tailbound-core`.

pub mod args;
pub mod capability;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;

use std::io::Write;

use args::{Cli, Command};
use config::Config;
use error::CliError;

/// Runs one parsed command line, writing its output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = Config::load(cli.config.as_deref())?;
    if let Some(p) = cli.precision {
        cfg.precision = p;
    }
    cfg.validate()?;
    match &cli.command {
        Command::Bound(a) => commands::bound_cmd(a, &cfg, out),
        Command::Capability(a) => commands::capability_cmd(a, &cfg, out),
        Command::Verify(a) => commands::verify_cmd(a, &cfg, out),
        Command::Sweep(a) => commands::sweep_cmd(a, &cfg, out),
        Command::Table1(a) => commands::table1_cmd(a, &cfg, out),
        Command::Extremal(a) => commands::extremal_cmd(a, &cfg, out),
    }
}
