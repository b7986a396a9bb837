mod commands;
mod config;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Context, FitRequest, Fixture};
use config::RunConfig;
use failure::Failure;

/// Modal analysis, optomechanical coupling and mask export for suspended
/// spiral capacitors and inductors.
#[derive(Debug, Parser)]
#[command(name = "spiralmech", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for sweeps (default: number of processors).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output directory (overrides outputs.directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Recompute the four reference designs and report pass/fail per band.
    #[arg(long, global = true)]
    table1: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mode table, fundamental profile CSV and SVG plot.
    Modes,
    /// Coupling (capacitor) or inductor report JSON.
    G0,
    /// One design per value of a parameter.
    Sweep,
    /// Mask outline as SVG and vertex CSV.
    Mask,
    /// Lorentzian fit of a resonance spectrum.
    Fit {
        /// `freq_hz,psd` CSV to fit.
        #[arg(long)]
        spectrum: Option<PathBuf>,
        /// Use a bundled synthetic spectrum instead.
        #[arg(long, value_enum)]
        fixture: Option<Fixture>,
        #[arg(long)]
        f_min: Option<f64>,
        #[arg(long)]
        f_max: Option<f64>,
    },
    /// Write the synthetic natural and driven spectra for `--seed`.
    Synth,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = cli.config.as_deref().map(RunConfig::load).transpose()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::config(format!("--jobs: {e}")))?;
    let elems_per_turn = config
        .as_ref()
        .map_or(spiralmech::beam::DEFAULT_ELEMS_PER_TURN, |c| c.solver.elems_per_turn);
    let ctx = Context {
        config,
        out: cli.out,
        seed: cli.seed,
        pool,
    };
    if cli.table1 {
        return match cli.command {
            Command::Modes | Command::G0 | Command::Sweep => commands::table1(&ctx, elems_per_turn),
            _ => Err(Failure::config("--table1 applies to modes, g0 and sweep")),
        };
    }
    match cli.command {
        Command::Modes => commands::modes(&ctx),
        Command::G0 => commands::g0(&ctx),
        Command::Sweep => commands::sweep(&ctx),
        Command::Mask => commands::mask(&ctx),
        Command::Fit {
            spectrum,
            fixture,
            f_min,
            f_max,
        } => commands::fit(
            &ctx,
            &FitRequest {
                spectrum,
                fixture,
                f_min,
                f_max,
            },
        ),
        Command::Synth => commands::synth(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::config(e.to_string().trim_end().to_string());
            eprintln!("{}", f.to_json());
            return ExitCode::from(f.exit_code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.exit_code as u8)
        }
    }
}
