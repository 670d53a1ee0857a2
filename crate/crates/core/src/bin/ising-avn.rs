use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ising_avn::model::{self, Parity};
use ising_avn::report::{self, Command, OutputFormat, RunConfig};
use ising_avn::search;
use ising_avn::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_NOT_CERTIFIED: u8 = 4;

#[derive(Parser)]
#[command(name = "ising-avn", version, about = "Transverse-field Ising ring: spectra and GHZ contradictions")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Diagonalize the ring and list levels with degeneracies.
    Spectrum(Flags),
    /// Compare the closed-form ground states (n = 3, 4) with numerical ones.
    VerifyClosedForm(Flags),
    /// Certify the all-versus-nothing contradiction for the standard or excited set.
    Avn(Flags),
    /// Scan all Pauli stabilizers of a ground state and search for contradiction sets.
    Search(Flags),
    /// Seeded single-shot measurement experiment.
    Simulate(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Flags {
    /// Number of spins on the ring.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Transverse field B (>= 0); closed-form checks default to a grid.
    #[arg(long)]
    field: Option<f64>,
    /// Eigenequation residual tolerance [default: 1e-10 analytic, 1e-8 numerical states].
    #[arg(long)]
    tol_eigen: Option<f64>,
    #[arg(long, default_value_t = model::DEFAULT_DEGENERACY_TOL)]
    tol_degeneracy: f64,
    #[arg(long, default_value_t = search::DEFAULT_STABILIZER_TOL)]
    tol_stabilizer: f64,
    #[arg(long, default_value_t = 10_000)]
    shots: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Parity sector used to pick a state from a degenerate ground level.
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    /// Use the four-site first excited state and its operator set.
    #[arg(long)]
    excited: bool,
    /// Levels whose eigenvectors are computed and checked.
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Largest contradiction subset searched for.
    #[arg(long, default_value_t = search::DEFAULT_MAX_SUBSET)]
    max_subset: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn to_config(command: Command, f: Flags) -> RunConfig {
    RunConfig {
        command,
        n: f.n,
        field_b: f.field,
        tol_eigen: f.tol_eigen,
        tol_degeneracy: f.tol_degeneracy,
        tol_stabilizer: f.tol_stabilizer,
        shots: f.shots,
        seed: f.seed,
        parity: f.parity.map(|p| match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }),
        excited: f.excited,
        levels: f.levels,
        max_subset: f.max_subset,
        format: match f.format {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Text => OutputFormat::Text,
        },
        out: f.out,
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Numerical(_) => EXIT_FAILURE,
        _ => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.command {
        Sub::Spectrum(f) => to_config(Command::Spectrum, f),
        Sub::VerifyClosedForm(f) => to_config(Command::VerifyClosedForm, f),
        Sub::Avn(f) => to_config(Command::Avn, f),
        Sub::Search(f) => to_config(Command::Search, f),
        Sub::Simulate(f) => to_config(Command::Simulate, f),
    };

    let report = match report::run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let rendered = report.render(config.format);
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_FAILURE);
            }
        }
        None => print!("{rendered}"),
    }
    if report.succeeded() {
        ExitCode::SUCCESS
    } else {
        eprintln!("check failed; see report");
        ExitCode::from(EXIT_NOT_CERTIFIED)
    }
}
