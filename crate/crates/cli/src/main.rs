//! `corolla`: command-line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{run, CliError};

#[derive(Parser, Debug)]
#[command(name = "corolla", version, about = "Gauge-theory parametric integrands from scalar Feynman graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the first and second Symanzik polynomials.
    Symanzik(Common),
    /// Print the scalar parametric integrand.
    Integrand(Common),
    /// Print the Corolla polynomial, or one ghost sector of it.
    Corolla(Common),
    /// Print the gauge factor of the QCD Corolla differential acting on the integrand.
    Diff(Common),
    /// Residues in the shrunk Schwinger parameters, regular part in the rest.
    Resreg(Common),
    /// Print the J factor and the W/Z/A labelings.
    EwGauge(Common),
    /// Print scalar edge sets, shrink sets and labelings with couplings.
    EwScalar(Common),
    /// Apply the QCD and electroweak differentials to the integrand.
    EwApply(Common),
    /// List spanning trees, spanning 2-forests, 2-factors and cycles.
    Enumerate(Common),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Latex,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Externals {
    Free,
    Uniform,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Graph file.
    pub graph: PathBuf,
    /// Momentum routing file; the automatic routing fills unlisted edges.
    #[arg(long)]
    pub routing: Option<PathBuf>,
    /// Coupling-rule file.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Number of ghost cycles.
    #[arg(long)]
    pub ghost_order: Option<usize>,
    /// Comma-separated edge ids to shrink.
    #[arg(long, value_delimiter = ',')]
    pub shrink: Vec<String>,
    /// Comma-separated edge ids; restrict `ew-scalar` to this scalar edge set.
    #[arg(long, value_delimiter = ',')]
    pub scalar: Option<Vec<String>>,
    /// How external edges may be labeled.
    #[arg(long, value_enum, default_value_t = Externals::Free)]
    pub externals: Externals,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Computation(_) => 4,
        }
    }
}
