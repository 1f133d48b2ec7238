//! Command-line front end.
//!
//! Subcommands: `solve` (CSV of the solution and its arcs), `check`
//! (verification report), `plot` (SVG), `sweep` (per-parameter-value
//! table), `presets` (profile family reference). All of them read the
//! same flat key set from flags and/or a `--config` file; see
//! [`config`].
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver error,
//! 4 degenerate endpoint slope, 5 verification verdict failed.

pub mod commands;
pub mod config;
pub mod csv;
pub mod svg;

use clap::Parser;

pub use config::{Cli, Command, RunConfig, Start, SweepSpec};

/// Writes a report block to stdout, tolerating a closed pipe (`head`,
/// broken downstream consumers) instead of panicking mid-report.
pub(crate) fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

/// Parses the process arguments, runs the selected command, and returns
/// the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap renders its own message (help and version exit 0, usage
        // errors exit 2).
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, crate::error::Error> {
    match cli.command {
        Command::Solve(args) => {
            let cfg = config::build_config(&args.common, args.strict, None)?;
            commands::cmd_solve(&cfg)
        }
        Command::Check(args) => {
            if let Some(path) = &args.from_csv {
                return commands::cmd_check_csv(path);
            }
            let cfg = config::build_config(&args.common, false, None)?;
            commands::cmd_check(&cfg)
        }
        Command::Plot(args) => {
            let cfg = config::build_config(&args.common, false, None)?;
            commands::cmd_plot(&cfg)
        }
        Command::Sweep(args) => {
            let cfg = config::build_config(&args.common, false, args.sweep.as_deref())?;
            commands::cmd_sweep(&cfg)
        }
        Command::Presets => {
            commands::cmd_presets();
            Ok(0)
        }
    }
}
