//! Reproducible experiments on top of `pclocal`.
//!
//! An experiment is named by an [`ExperimentKind`], configured by a JSON
//! [`ExperimentConfig`] and run by [`run_experiment`], which writes CSV and
//! JSON artifacts stamped with the hash of the resolved settings plus a
//! manifest listing every seed drawn. All randomness derives from the master
//! seed, so artifacts are byte-identical across runs and thread counts; only
//! the manifest's wall time differs.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;

pub use config::{validate_config, ExperimentConfig, ExperimentKind, Overrides, Settings};
pub use error::CliError;
pub use experiments::{run_experiment, Check, Report, RunOutcome};

/// Sizes the global rayon pool. Without the `parallel` feature the request
/// is ignored.
pub fn set_threads(threads: usize) -> Result<(), CliError> {
    if threads == 0 {
        return Err(CliError::Validation("--threads must be positive".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(())
}
