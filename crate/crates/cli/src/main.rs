//! `sphere-extremal`: command-line front end for the barotropic extremal
//! theory, its numerical oracle and BVE stability probes.
//!
//! Every command writes `<output_dir>/<command>-<timestamp>.json` (and a
//! `.csv` where tabular data exist) and prints the JSON on stdout.
//! Exit status: 0 success, 1 numerical failure, 2 usage error.

mod artifacts;
mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunConfig, Settings, Usage, OUTPUT_ENV};

#[derive(Parser)]
#[command(name = "sphere-extremal", version, about = "Energy extremals of barotropic flow on a rotating sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Regime of the counter-rotating extremal for (Ω, Q_rel).
    Classify,
    /// Both solid-body extremals with multipliers and energies.
    Extremals,
    /// Solve the Euler–Lagrange equation at a given multiplier.
    #[command(name = "solve-el")]
    SolveEl,
    /// Projected-gradient extremization from a random start.
    Oracle,
    /// Integrate the barotropic vorticity equation.
    Evolve,
    /// Perturb an extremal and monitor the energy–enstrophy norm.
    Probe,
    /// Tabulate one of the four closed-form curve families as CSV.
    Figures,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::Classify => "classify",
            Self::Extremals => "extremals",
            Self::SolveEl => "solve-el",
            Self::Oracle => "oracle",
            Self::Evolve => "evolve",
            Self::Probe => "probe",
            Self::Figures => "figures",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let env_out = std::env::var_os(OUTPUT_ENV).map(Into::into);
    let result = RunConfig::resolve(cli.command.name(), cli.settings, env_out).and_then(|cfg| commands::run(&cfg));
    match result {
        Ok(out) => {
            // a closed pipe on stdout is not an error for a batch tool
            let _ = writeln!(std::io::stdout().lock(), "{}", out.json);
            for p in &out.artifacts {
                eprintln!("wrote {}", p.display());
            }
            if out.failed {
                eprintln!("error: numerical failure (see `result` in the JSON)");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) if e.downcast_ref::<Usage>().is_some() => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
