//! Command-line front end: samples Wigner fields, decay curves of the
//! negative volume, threshold decay times, and beam-splitter overlap tables
//! as deterministic CSV/JSON files, and runs the verification suite.

mod args;
mod commands;
mod config;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::args::{GridArg, OutputFormat, SweepRange, ValueRange};

#[derive(Parser, Debug)]
#[command(
    name = "pacs-wigner",
    version,
    about = "Phase-space simulation of photon-added coherent states in thermal channels"
)]
struct Cli {
    /// Optional key = value file supplying defaults for unset flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a Wigner field (CSV columns q,p,w).
    Wigner(WignerArgs),
    /// Negative-volume decay curves (CSV columns gamma_t,p_nw + JSON sidecar).
    Pnw(PnwArgs),
    /// Threshold decay time: numeric bisection vs the closed form.
    Threshold(ThresholdArgs),
    /// Beam-splitter overlap table for all four logical bit pairs.
    Gate(GateArgs),
    /// Run the full verification suite and print one line per criterion.
    Verify(VerifyArgs),
}

#[derive(clap::Args, Debug)]
struct WignerArgs {
    /// Real part of the seed amplitude.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Imaginary part of the seed amplitude.
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    /// Added photons: 0, 1, or 2.
    #[arg(long)]
    m: Option<u32>,
    /// Mean thermal photon number of the channel.
    #[arg(long)]
    n: Option<f64>,
    /// Dimensionless decay time.
    #[arg(long)]
    gamma_t: Option<f64>,
    /// Grid override qmin,qmax,pmin,pmax,nq,np.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridArg>,
    /// Output path (default wigner.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv (default) or json.
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(clap::Args, Debug)]
struct PnwArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    /// Thermal photon number: a value or a range start..stopxCOUNT.
    #[arg(long)]
    n: Option<ValueRange>,
    /// Decay times: a value or a range start..stopxCOUNT.
    #[arg(long)]
    t: Option<ValueRange>,
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridArg>,
    /// Output path (default pnw.csv); ranges in n append _n<value>.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(clap::Args, Debug)]
struct ThresholdArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    /// Single thermal photon number.
    #[arg(long, conflicts_with = "sweep_n")]
    n: Option<f64>,
    /// Sweep start:stop:COUNT over thermal photon numbers.
    #[arg(long)]
    sweep_n: Option<SweepRange>,
    /// Bisection bracket tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Output path (default threshold.json, or threshold_sweep.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sweep output format: csv (default) or json.
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(clap::Args, Debug)]
struct GateArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    /// Beam-splitter angle in radians.
    #[arg(long)]
    phi: Option<f64>,
    /// Truncation override (defaults to the cutoff rule).
    #[arg(long)]
    cutoff: Option<usize>,
    /// Output path (default gate.json).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Optional JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::Config::load(cli.config.as_deref()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {:#}", e);
            return ExitCode::FAILURE;
        }
    };
    let result = match cli.command {
        Command::Wigner(a) => commands::wigner(a, &cfg),
        Command::Pnw(a) => commands::pnw(a, &cfg),
        Command::Threshold(a) => commands::threshold(a, &cfg),
        Command::Gate(a) => commands::gate(a, &cfg),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::FAILURE
        }
    }
}
