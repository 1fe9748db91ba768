//! `eisum`: divergent-series resummation by exponential-integral sums.

#![forbid(unsafe_code)]

mod commands;
mod settings;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eisum_core::{Error, ErrorClass};
use settings::{Opts, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "eisum", version, about = "Borel-Padé resummation into exponential-integral sums, applied to Painlevé I")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Exact coefficients a_k of the series h = Σ a_k x^{-(k+1)}
    Coeffs(Opts),
    /// Borel transform, [N/N] Padé, partial fractions: pole/residue data
    Summate(Opts),
    /// log10 of the h-equation residual of the Ei sum over a grid
    ResidualGrid(Opts),
    /// Tritronquée poles from a seed at z0
    Poles(Opts),
    /// Green's-function rate G = |ψ(w)| and (G + eps)^{n+m}
    Greens(Opts),
    /// e^{-x} Ei⁺(x) by series or dyadic expansion
    EiEval(Opts),
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Usage => 2,
        ErrorClass::Domain => 3,
        ErrorClass::Degenerate => 4,
        ErrorClass::Convergence => 5,
        ErrorClass::Io => 6,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (opts, run): (&Opts, fn(&RunConfig) -> eisum_core::Result<()>) = match &cli.cmd {
        Cmd::Coeffs(o) => (o, commands::coeffs),
        Cmd::Summate(o) => (o, commands::summate),
        Cmd::ResidualGrid(o) => (o, commands::residual_grid),
        Cmd::Poles(o) => (o, commands::poles),
        Cmd::Greens(o) => (o, commands::greens),
        Cmd::EiEval(o) => (o, commands::ei_eval),
    };
    match RunConfig::load(opts).and_then(|cfg| run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eisum: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
