//! Command-line interface for the trapped-electron-on-helium qubit toolbox:
//! Stark spectrum, trap and drive parameters, thermal occupation, sideband
//! dynamics, and cooling protocols.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 solver
//! failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::CliError;
use config::Config;
use output::Format;

#[derive(Parser)]
#[command(
    name = "helium-jcm",
    version,
    about = "Electron-on-helium qubit toolbox: spectrum, trap, drives, thermal motion, sideband dynamics, cooling"
)]
struct Cli {
    /// Config file of `key = value` lines (see README for the key list).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Named parameter bundle applied before the config file
    /// (primary | large-eta).
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,

    /// Write output here (atomically) instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Worker threads for parallel sections (default: all cores). Ignored
    /// in builds without the `parallel` feature.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bound-state energies and dipole matrix elements of the vertical motion.
    Spectrum,
    /// Lateral trap frequency, Lamb-Dicke parameters, thermal occupation.
    Trap,
    /// Drive tone: Rabi frequencies and basic pulse times.
    Drive,
    /// Thermal Fock-level distribution of the lateral motion.
    Thermal,
    /// Propagate one basis state under the full time-dependent drive.
    Evolve,
    /// Run a sideband cooling protocol on a thermal mixture.
    Cool,
    /// Check the resolved configuration and print it.
    Validate,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();

    #[cfg(feature = "parallel")]
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("config error: cannot build thread pool: {e}");
            return 2;
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = cli.workers;

    let cfg = match Config::resolve(cli.preset.as_deref(), cli.config.as_deref()) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return 2;
        }
    };

    let result = match cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::Trap => commands::trap(&cfg),
        Command::Drive => commands::drive(&cfg),
        Command::Thermal => commands::thermal(&cfg),
        Command::Evolve => commands::evolve(&cfg),
        Command::Cool => commands::cool(&cfg),
        Command::Validate => commands::validate(&cfg),
    };

    match result {
        Ok(mut doc) => {
            doc.config = cfg.header_pairs();
            let text = doc.render(cli.format.into());
            match output::emit(&text, cli.out.as_deref()) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("io error: {e}");
                    1
                }
            }
        }
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            2
        }
        Err(CliError::Solver(msg)) => {
            eprintln!("solver error: {msg}");
            3
        }
    }
}
