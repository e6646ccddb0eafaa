use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use cdmalab_cli::{ber_table, pdf_table, validate, BerMode, CliError, PdfMethod, ScenarioFile, Sweep, SEED_ENV};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cdmalab", version, about = "Coded-CDMA link SNR densities, BER bounds and simulation")]
struct Cli {
    /// Override the scenario file's seed.
    #[arg(long, global = true, env = SEED_ENV)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write uplink/downlink SNR densities of d combined coded bits as CSV.
    Pdf {
        scenario: PathBuf,
        /// Number of combined coded bits (default: the code's free distance, or 1).
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, value_enum, default_value_t = PdfMethod::Exact)]
        method: PdfMethod,
        /// Output path (default: [output].pdf, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Union bound and/or simulated BER, optionally over a parameter sweep.
    Ber {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = BerMode::Both)]
        mode: BerMode,
        /// Sweep as param=lo:hi:step, param in {ebn0_db, users}.
        #[arg(long)]
        sweep: Option<Sweep>,
        /// Output path (default: [output].ber, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the certification checks; exit 0 iff all pass.
    Validate { scenario: PathBuf },
}

fn load(path: &Path, seed: Option<u64>) -> Result<ScenarioFile, CliError> {
    let mut file = ScenarioFile::load(path)?;
    if let Some(seed) = seed {
        file.experiment.seed = seed;
    }
    Ok(file)
}

fn emit(text: &str, out: Option<PathBuf>, configured: Option<&String>) -> Result<()> {
    match out.or_else(|| configured.map(PathBuf::from)) {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            // A closed pipe (e.g. `| head`) is not an error.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.context("writing to stdout"),
        },
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Pdf { scenario, d, method, out } => {
            let file = load(&scenario, cli.seed)?;
            let table = pdf_table(&file, d, method)?;
            emit(&table.render(), out, file.output.pdf.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ber { scenario, mode, sweep, out } => {
            let file = load(&scenario, cli.seed)?;
            let (table, rows) = ber_table(&file, mode, sweep.as_ref())?;
            emit(&table.render(), out, file.output.ber.as_ref())?;
            let violations: Vec<_> = rows.iter().filter(|r| r.violates_bound()).collect();
            if violations.is_empty() {
                return Ok(ExitCode::SUCCESS);
            }
            for r in violations {
                eprintln!(
                    "warning: simulated BER {} exceeds the bound {} at {}",
                    r.simulated.map_or(f64::NAN, |s| s.point_estimate),
                    r.bound.unwrap_or(f64::NAN),
                    r.value
                );
            }
            Ok(ExitCode::from(1))
        }
        Command::Validate { scenario } => {
            let file = load(&scenario, cli.seed)?;
            let report = validate(&file);
            println!("{report}");
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
