//! Command-line front end for the artificial-signal link simulator.

use artsig_sim::config::{load_overlay, parse_scheme_list, ExperimentConfig};
use artsig_sim::csv::write_csv;
use artsig_sim::problem::load_problem;
use artsig_sim::selftest::run_selftest;
use artsig_sim::sweep::{ensure_runnable, run_sweep};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "artsig",
    version,
    about = "Link-level Monte Carlo sweeps for artificial-signal transmission \
             over mismatched MIMO precoders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML config file applied over the built-in defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed; fixes every random draw of the sweep.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Monte Carlo trials per grid cell.
    #[arg(long, value_name = "K")]
    trials: Option<usize>,
    /// Output CSV path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Comma-separated scheme subset: ideal, conventional, pas, as.
    #[arg(long, value_name = "LIST")]
    schemes: Option<String>,
    /// Skip the eavesdropper (halves the rows, drops secrecy columns to NaN).
    #[arg(long)]
    no_eve: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Noise-free error and secrecy versus the alignment parameter phi.
    SweepPhi {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Bit error rate versus phi at one fixed SNR.
    SweepPhiBer {
        /// Per-stream SNR in dB [default: 3].
        #[arg(long, value_name = "DB")]
        snr_db: Option<f64>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Bit error rate versus SNR at one fixed phi.
    SweepSnr {
        /// Alignment parameter in [0, 1].
        #[arg(long, value_name = "PHI")]
        phi: f64,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Solve one ball-constrained least-squares instance from a TOML file.
    Solve {
        /// Problem file with radius, matrix a, and target.
        input: PathBuf,
    },
    /// Run the runtime invariant suite and report each check.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> artsig_core::Result<ExitCode> {
    match cli.command {
        Command::SweepPhi { sweep } => {
            // Noise-free is this subcommand's default; the config file may
            // still override it.
            let mut config = ExperimentConfig {
                noise_free: true,
                ..ExperimentConfig::default()
            };
            apply_file(&mut config, &sweep)?;
            apply_flags(&mut config, &sweep)?;
            execute_sweep(&config, &output_path(&sweep, "sweep_phi.csv"))
        }
        Command::SweepPhiBer { snr_db, sweep } => {
            let mut config = ExperimentConfig {
                snr_grid_db: vec![3.0],
                ..ExperimentConfig::default()
            };
            apply_file(&mut config, &sweep)?;
            if let Some(db) = snr_db {
                config.snr_grid_db = vec![db];
            }
            apply_flags(&mut config, &sweep)?;
            execute_sweep(&config, &output_path(&sweep, "sweep_phi_ber.csv"))
        }
        Command::SweepSnr { phi, sweep } => {
            let mut config = ExperimentConfig::default();
            apply_file(&mut config, &sweep)?;
            config.phi_grid = vec![phi];
            apply_flags(&mut config, &sweep)?;
            execute_sweep(&config, &output_path(&sweep, "sweep_snr.csv"))
        }
        Command::Solve { input } => {
            let problem = load_problem(&input)?;
            let result = artsig_core::solve_norm_constrained_ls(&problem)?;
            for (i, z) in result.xi.iter().enumerate() {
                println!("xi[{i}] = {}", format_complex(*z));
            }
            println!("norm = {:.12e}", artsig_core::vec_norm(&result.xi));
            println!("lambda = {:.12e}", result.lambda);
            println!("residual = {:.12e}", result.residual);
            println!("iterations = {}", result.iterations);
            println!("constraint_active = {}", result.constraint_active);
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let outcomes = run_selftest();
            let mut failures = 0;
            for outcome in &outcomes {
                let status = if outcome.passed { "ok  " } else { "FAIL" };
                println!("{status} {}: {}", outcome.name, outcome.detail);
                if !outcome.passed {
                    failures += 1;
                }
            }
            if failures == 0 {
                println!("selftest passed ({} checks)", outcomes.len());
                Ok(ExitCode::SUCCESS)
            } else {
                Err(artsig_core::Error::invalid(format!(
                    "{failures} of {} selftest checks failed",
                    outcomes.len()
                )))
            }
        }
    }
}

fn apply_file(config: &mut ExperimentConfig, sweep: &SweepArgs) -> artsig_core::Result<()> {
    if let Some(path) = &sweep.config {
        let overlay = load_overlay(path)?;
        config.apply_overlay(&overlay)?;
    }
    Ok(())
}

/// Command-line overrides win over both defaults and the config file.
fn apply_flags(config: &mut ExperimentConfig, sweep: &SweepArgs) -> artsig_core::Result<()> {
    if let Some(seed) = sweep.seed {
        config.master_seed = seed;
    }
    if let Some(trials) = sweep.trials {
        config.trials = trials;
    }
    if let Some(list) = &sweep.schemes {
        config.schemes = parse_scheme_list(list)?;
    }
    if sweep.no_eve {
        config.eve_enabled = false;
    }
    ensure_runnable(config)
}

fn output_path(sweep: &SweepArgs, default_out: &str) -> PathBuf {
    sweep
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(default_out))
}

fn execute_sweep(config: &ExperimentConfig, out: &Path) -> artsig_core::Result<ExitCode> {
    let result = run_sweep(config)?;
    write_csv(&result, out)?;
    println!("wrote {} rows to {}", result.rows.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn format_complex(z: num_complex::Complex64) -> String {
    format!(
        "{:.12e} {} {:.12e}j",
        z.re,
        if z.im < 0.0 { "-" } else { "+" },
        z.im.abs()
    )
}
