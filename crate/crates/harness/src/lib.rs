//! Configuration, orchestration and result files for the `qel` experiments.
//!
//! ```no_run
//! let cfg = qel_harness::parse_config("experiment = entropy\np = 1.0\n").unwrap();
//! let rows = qel_harness::run(&cfg).unwrap();
//! assert_eq!(rows[0].real("S"), Some(0.0));
//! ```

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{build_config, parse_config, parse_document, Entry, ExperimentConfig, ExperimentKind, Format, Value};
pub use error::{HarnessError, Result};
pub use experiments::Experiment;
pub use output::{format_g12, Field, ResultRow};

/// Validate and run the configured experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    Experiment::from_config(cfg)?.run(cfg.master_seed)
}

/// Run, render in the configured format and write atomically to the
/// configured path (or return the bytes when no path is set).
pub fn run_to_output(cfg: &ExperimentConfig) -> Result<(Vec<ResultRow>, Vec<u8>)> {
    let rows = run(cfg)?;
    let bytes = output::render(&rows, cfg.format)?;
    if let Some(path) = &cfg.output {
        output::write_atomic(path, &bytes)?;
    }
    Ok((rows, bytes))
}
