//! Experiment recipes over the `nhchain` toolkit: layered configuration,
//! random-matrix ensembles, seeded runs and CSV/JSON export.

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod ensemble;
pub mod error;
pub mod output;
pub mod recipes;
pub mod seeds;

use std::path::PathBuf;

pub use config::{ExperimentConfig, RawConfig};
pub use error::{ExperimentError, Result};
pub use output::Artifact;
pub use recipes::{Recipe, Registry};

/// Layers `file` then `flags` over the recipe defaults and resolves the result.
pub fn resolve(
    recipe: &dyn Recipe,
    file: Option<&RawConfig>,
    flags: &RawConfig,
    env_output: Option<PathBuf>,
) -> Result<ExperimentConfig> {
    let mut raw = recipe.defaults();
    if let Some(file) = file {
        raw = raw.overlay(file);
    }
    ExperimentConfig::resolve(recipe.name(), &raw.overlay(flags), env_output)
}

/// Runs `recipe` and writes its artifacts into the configured output directory.
pub fn run(recipe: &dyn Recipe, config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let artifacts = recipe.run(config)?;
    output::write_artifacts(&config.output_dir, &artifacts)
}
