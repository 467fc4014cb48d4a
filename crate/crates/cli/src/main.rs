use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zml_cli::commands::{cmd_estimate, cmd_lyapunov, cmd_sweep, cmd_zeros, CliError, Outcome};
use zml_core::lyapunov::LyapunovMode;
use zml_core::{MapConfig, SModel, SeriesPrecision};

/// Zeta zeros from the Lambert-W fixed-point map, and the map's Lyapunov exponent.
///
/// Flags override `ZML_*` environment variables, which override built-in defaults.
#[derive(Parser, Debug)]
#[command(name = "zml", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form Lambert-W estimates of the zero heights.
    Estimate {
        #[arg(long, default_value_t = 1)]
        n_start: u64,
        #[arg(long, default_value_t = 10)]
        n_end: u64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Solve for zero heights by iterating the map.
    Zeros {
        #[arg(long, default_value_t = 1)]
        n_start: u64,
        #[arg(long, default_value_t = 10)]
        n_end: u64,
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_enum, env = "ZML_S_MODEL", default_value = "true")]
        s_model: ModelArg,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Lyapunov exponent at one delta.
    Lyapunov {
        #[arg(long, env = "ZML_N_MAX", default_value_t = 100)]
        n_max: u64,
        #[arg(long, value_enum, env = "ZML_MODE", default_value = "ensemble")]
        mode: ModeArg,
        #[arg(long, value_enum, env = "ZML_S_MODEL", default_value = "smooth")]
        s_model: ModelArg,
        /// Also emit one row per ln|T'| term.
        #[arg(long)]
        emit_terms: bool,
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Lyapunov exponents over a uniform delta grid.
    Sweep {
        #[arg(long, env = "ZML_DELTA_MIN", default_value_t = 0.25, allow_negative_numbers = true)]
        delta_min: f64,
        #[arg(long, env = "ZML_DELTA_MAX", default_value_t = 1.75, allow_negative_numbers = true)]
        delta_max: f64,
        #[arg(long, env = "ZML_STEPS", default_value_t = 7)]
        steps: usize,
        #[arg(long, env = "ZML_N_MAX", default_value_t = 100)]
        n_max: u64,
        #[arg(long, value_enum, env = "ZML_MODE", default_value = "ensemble")]
        mode: ModeArg,
        #[arg(long, value_enum, env = "ZML_S_MODEL", default_value = "smooth")]
        s_model: ModelArg,
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Args, Debug)]
struct MapArgs {
    #[arg(long, env = "ZML_DELTA", default_value_t = 1.0, allow_negative_numbers = true)]
    delta: f64,
    #[arg(long, env = "ZML_TOL", default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, env = "ZML_MAX_ITER", default_value_t = 64)]
    max_iter: usize,
    #[arg(long, env = "ZML_SIGMA_OFFSET", default_value_t = 1e-6)]
    sigma_offset: f64,
}

#[derive(Args, Debug)]
struct IoArgs {
    #[arg(long, value_enum, env = "ZML_FORMAT", default_value = "csv")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, env = "ZML_JOBS", default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    True,
    Smooth,
}

impl From<ModelArg> for SModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::True => SModel::TrueArgZeta,
            ModelArg::Smooth => SModel::SmoothModel,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Ensemble,
    Orbit,
}

impl From<ModeArg> for LyapunovMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ensemble => LyapunovMode::EnsembleFixedPoints,
            ModeArg::Orbit => LyapunovMode::OrbitPerN,
        }
    }
}

impl MapArgs {
    fn config(&self, s_model: ModelArg) -> MapConfig {
        MapConfig {
            delta: self.delta,
            tol: self.tol,
            max_iter: self.max_iter,
            sigma_offset: self.sigma_offset,
            prec: SeriesPrecision::default(),
            s_model: s_model.into(),
        }
    }
}

fn run(command: Command) -> Result<(Outcome, IoArgs), CliError> {
    Ok(match command {
        Command::Estimate { n_start, n_end, io } => (cmd_estimate(n_start, n_end)?, io),
        Command::Zeros {
            n_start,
            n_end,
            map,
            s_model,
            io,
        } => {
            let cfg = map.config(s_model);
            (with_jobs(io.jobs, || cmd_zeros(n_start, n_end, &cfg))?, io)
        }
        Command::Lyapunov {
            n_max,
            mode,
            s_model,
            emit_terms,
            map,
            io,
        } => {
            let cfg = map.config(s_model);
            (with_jobs(io.jobs, || cmd_lyapunov(&cfg, mode.into(), n_max, emit_terms))?, io)
        }
        Command::Sweep {
            delta_min,
            delta_max,
            steps,
            n_max,
            mode,
            s_model,
            map,
            io,
        } => {
            let cfg = map.config(s_model);
            let out = with_jobs(io.jobs, || {
                cmd_sweep(delta_min, delta_max, steps, &cfg, mode.into(), n_max)
            })?;
            (out, io)
        }
    })
}

fn with_jobs<T: Send>(
    jobs: usize,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    pool.install(f)
}

fn emit(outcome: &Outcome, io: &IoArgs) -> Result<(), CliError> {
    let text = match io.format {
        Format::Csv => outcome.record.to_csv(),
        Format::Json => outcome.record.to_json(),
    };
    match &io.out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|(outcome, io)| {
        emit(&outcome, &io)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            for note in &outcome.notes {
                eprintln!("zml: {note}");
            }
            if outcome.all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("zml: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
