use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussdiv::Error;

mod commands;
mod output;

#[derive(Debug, Parser)]
#[command(name = "gaussdiv", version, about = "Divisibility and non-Markovianity of Gaussian processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a channel file as CP, P_not_CP or NP.
    CheckChannel(RunArgs),
    /// Label every grid time of a process and assign its divisibility class.
    ClassifyProcess(RunArgs),
    /// Export the (eps, mu) trajectory of a one-mode process.
    Trajectory(RunArgs),
    /// Check global complete positivity of a process over time.
    Physicality(RunArgs),
    /// List windows of sub-quantum-limit amplification.
    Amplification(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Channel or process JSON file.
    pub input: PathBuf,
    /// Number of time-grid points.
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    /// Eigenvalue tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Boundary band of the region labels.
    #[arg(long, default_value_t = 1e-6)]
    pub margin: f64,
    /// Step of the direct intermediate-map checks.
    #[arg(long, default_value_t = 1e-4)]
    pub tau: f64,
    /// Finite-difference step for processes without analytic derivatives.
    #[arg(long = "fd-step", default_value_t = 1e-4)]
    pub fd_step: f64,
    /// Seed of the sampling falsifiers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output format (default depends on the command).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, written atomically; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    fn validate(&self) -> Result<(), Error> {
        if self.grid < 2 {
            return Err(Error::InvalidArgument("--grid must be at least 2".into()));
        }
        for (name, v) in [("--tol", self.tol), ("--margin", self.margin), ("--tau", self.tau), ("--fd-step", self.fd_step)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn read_input(&self) -> Result<String, Error> {
        std::fs::read_to_string(&self.input)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", self.input.display())))
    }
}

/// What a command produced: the rendered report and whether it found the
/// input unphysical.
pub struct Produced {
    pub body: String,
    pub unphysical: bool,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) => 1,
        Error::SingularMap { .. } | Error::NumericalFailure(_) | Error::Unsupported(_) => 3,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("GAUSSDIV_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("GAUSSDIV_THREADS must be a number, got {raw:?}")))?;
    // 0 keeps rayon's automatic choice
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::NumericalFailure(format!("thread pool: {e}")))
}

fn run(command: &Command) -> Result<Produced, Error> {
    configure_threads()?;
    match command {
        Command::CheckChannel(a) => a.validate().and_then(|_| commands::check_channel(a)),
        Command::ClassifyProcess(a) => a.validate().and_then(|_| commands::classify_process(a)),
        Command::Trajectory(a) => a.validate().and_then(|_| commands::trajectory(a)),
        Command::Physicality(a) => a.validate().and_then(|_| commands::physicality(a)),
        Command::Amplification(a) => a.validate().and_then(|_| commands::amplification(a)),
    }
}

fn out_path(command: &Command) -> Option<&Path> {
    match command {
        Command::CheckChannel(a)
        | Command::ClassifyProcess(a)
        | Command::Trajectory(a)
        | Command::Physicality(a)
        | Command::Amplification(a) => a.out.as_deref(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(produced) => {
            if let Err(e) = output::emit(out_path(&cli.command), &produced.body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if produced.unphysical {
                eprintln!("process is not globally physical");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
