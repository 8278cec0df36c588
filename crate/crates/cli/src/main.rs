//! Command-line front end: tautological presentations, fixed points,
//! localization images, and the GKM calculus for thin quiver moduli.
//!
//! Exit codes: 0 on success, 1 on domain errors or failed checks, 2 on
//! I/O or parse errors. Reports are byte-identical across runs and thread
//! counts; `QUIVER_CHOW_THREADS` only splits work.

mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quiver_chow::input::{parse_instance, Instance};
use quiver_chow::presentation::StabilityMode;

#[derive(Debug)]
pub enum CliError {
    Domain(String),
    Parse(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(m) => write!(f, "error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Domain(_) => ExitCode::from(1),
            CliError::Parse(_) | CliError::Io(_) => ExitCode::from(2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Kernel of restriction to the semistable locus.
    Sst,
    /// Kernel of restriction to the stable locus.
    St,
}

impl From<Mode> for StabilityMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sst => StabilityMode::Semistable,
            Mode::St => StabilityMode::Stable,
        }
    }
}

/// Exact equivariant Chow-ring computations for quiver moduli spaces.
#[derive(Parser)]
#[command(name = "quiver-chow", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree-truncated kernel generators of the tautological presentation
    Present {
        file: PathBuf,
        /// Which restriction kernel to present
        #[arg(long, value_enum)]
        mode: Mode,
        /// Truncation degree for the generator search
        #[arg(long)]
        max_degree: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Torus-fixed components of the moduli space
    FixedPoints {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Generators of the image of the localization map
    Localize {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Emit LaTeX column vectors (same as --format latex)
        #[arg(long)]
        latex: bool,
    },
    /// GKM data of a thin (toric) quiver moduli space
    ToricGkm {
        #[command(subcommand)]
        command: ToricCommand,
    },
    /// Replay the bundled instances and diff against golden outputs
    VerifyExamples,
}

#[derive(Subcommand)]
enum ToricCommand {
    /// Stable spanning trees (the torus-fixed points)
    Trees { file: PathBuf },
    /// Stable spanning almost trees (the one-dimensional orbits)
    Edges {
        file: PathBuf,
        /// Emit the GKM graph in DOT format
        #[arg(long)]
        dot: bool,
    },
    /// Kernel generators and a basis of the localization image
    Basis {
        file: PathBuf,
        #[arg(long)]
        max_degree: u32,
    },
    /// Check a tuple file against the GKM edge conditions
    Check { file: PathBuf, tuple_file: PathBuf },
}

fn read_instance(path: &PathBuf) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| CliError::Parse(e.to_string()))
}

fn thread_count() -> usize {
    std::env::var("QUIVER_CHOW_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    match cli.command {
        Command::Present {
            file,
            mode,
            max_degree,
            format,
        } => {
            let inst = read_instance(&file)?;
            Ok((
                report::present_report(&inst, mode.into(), max_degree, format)?,
                true,
            ))
        }
        Command::FixedPoints { file, format } => {
            let inst = read_instance(&file)?;
            Ok((report::fixed_points_report(&inst, format)?, true))
        }
        Command::Localize {
            file,
            format,
            latex,
        } => {
            let inst = read_instance(&file)?;
            let format = if latex { Format::Latex } else { format };
            Ok((
                report::localize_report(&inst, format, thread_count())?,
                true,
            ))
        }
        Command::ToricGkm { command } => match command {
            ToricCommand::Trees { file } => {
                let inst = read_instance(&file)?;
                Ok((report::trees_report(&inst)?, true))
            }
            ToricCommand::Edges { file, dot } => {
                let inst = read_instance(&file)?;
                Ok((report::edges_report(&inst, dot)?, true))
            }
            ToricCommand::Basis { file, max_degree } => {
                let inst = read_instance(&file)?;
                Ok((report::basis_report(&inst, max_degree)?, true))
            }
            ToricCommand::Check { file, tuple_file } => {
                let inst = read_instance(&file)?;
                let tuple_text = std::fs::read_to_string(&tuple_file)
                    .map_err(|e| CliError::Io(format!("{}: {e}", tuple_file.display())))?;
                report::check_report(&inst, &tuple_text)
            }
        },
        Command::VerifyExamples => verify::verify_examples(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((output, ok)) => {
            print!("{output}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("{err}");
            err.exit_code()
        }
    }
}
