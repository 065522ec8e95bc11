use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qel_harness::{build_config, parse_document, Entry, ExperimentKind, HarnessError, Value};

/// Run seeded experiments and write CSV or JSON result files.
#[derive(Debug, Parser)]
#[command(name = "qel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Read parameters from a key = value or JSON file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override one parameter, e.g. `-p n=6`. Repeatable; wins over the file.
    #[arg(short = 'p', long = "param", global = true, value_name = "KEY=VALUE")]
    params: Vec<String>,

    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file; results go to stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo mean of ⟨ψ|P|ψ⟩ against rank / 2^n.
    OverlapCheck,
    /// Certified simple-state search in a random projector image.
    FindSimple,
    /// Von Neumann entropy of a source family.
    Entropy,
    /// Block compression fidelity against rate.
    Compression,
    /// Ĥ proxy upper bound across source entropies.
    ClaimSweep,
    /// Randomness deficiency of bit strings.
    Deficiency,
    /// Run whatever experiment the config file names.
    Run,
}

impl Command {
    fn kind(&self) -> Option<ExperimentKind> {
        match self {
            Command::OverlapCheck => Some(ExperimentKind::OverlapCheck),
            Command::FindSimple => Some(ExperimentKind::FindSimple),
            Command::Entropy => Some(ExperimentKind::Entropy),
            Command::Compression => Some(ExperimentKind::Compression),
            Command::ClaimSweep => Some(ExperimentKind::ClaimSweep),
            Command::Deficiency => Some(ExperimentKind::Deficiency),
            Command::Run => None,
        }
    }
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    let mut entries = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path.display(), e))?;
            parse_document(&text)?
        }
        None => Vec::new(),
    };
    for p in &cli.params {
        entries.push(Entry::from_override(p)?);
    }
    if let Some(seed) = cli.seed {
        entries.push(Entry::new("seed", Value::Scalar(seed.to_string())));
    }
    if let Some(out) = &cli.out {
        entries.push(Entry::new("out", Value::Scalar(out.display().to_string())));
    }
    if let Some(format) = &cli.format {
        entries.push(Entry::new("format", Value::Scalar(format.clone())));
    }
    let cfg = build_config(entries, cli.command.kind())?;
    let (rows, bytes) = qel_harness::run_to_output(&cfg)?;
    match &cfg.output {
        Some(path) => eprintln!("wrote {} rows to {}", rows.len(), path.display()),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| HarnessError::io("stdout", e))?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{report}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
