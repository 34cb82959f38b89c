//! Recipe strategies, registered by name and selected at run time.

mod entanglement;
mod quench;
mod scrambling;
mod spectrum;

use nhchain::opent::Bipartition;
use nhchain::spectral::{diagonalizer, SpectralDecomposition};
use nhchain::{ChainBuilder, SpinChainParams};

use crate::config::{ExperimentConfig, RawConfig};
use crate::error::{Context, Result};
use crate::output::Artifact;

pub use entanglement::{lta_row, LtaRow, OpentLtaScanL, OpentLtaScanParam, OpentSeries, LTA_SCAN_HEADER};
pub use quench::{QuenchScaling, QuenchSubsystem};
pub use scrambling::{HaarConvergence, Lightcone};
pub use spectrum::{SpectrumFlow, StationaryCheck};

/// One experiment family: recipe-specific defaults plus a run producing artifacts.
pub trait Recipe: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Settings applied beneath the config file and flags.
    fn defaults(&self) -> RawConfig;
    fn run(&self, config: &ExperimentConfig) -> Result<Vec<Artifact>>;
}

#[derive(Default)]
pub struct Registry {
    recipes: Vec<Box<dyn Recipe>>,
}

impl Registry {
    /// All built-in recipes.
    pub fn builtin() -> Self {
        let mut registry = Registry::default();
        registry.register(Box::new(Lightcone));
        registry.register(Box::new(OpentSeries));
        registry.register(Box::new(OpentLtaScanL));
        registry.register(Box::new(OpentLtaScanParam));
        registry.register(Box::new(SpectrumFlow));
        registry.register(Box::new(QuenchSubsystem));
        registry.register(Box::new(QuenchScaling));
        registry.register(Box::new(HaarConvergence));
        registry.register(Box::new(StationaryCheck));
        registry
    }

    /// Adds a recipe, replacing any previous one with the same name.
    pub fn register(&mut self, recipe: Box<dyn Recipe>) {
        self.recipes.retain(|r| r.name() != recipe.name());
        self.recipes.push(recipe);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Recipe> {
        self.recipes.iter().find(|r| r.name() == name).map(|r| r.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Recipe> {
        self.recipes.iter().map(|r| r.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.recipes.iter().map(|r| r.name()).collect()
    }
}

/// Decomposition of `params` with the configured strategy.
pub(crate) fn decompose(config: &ExperimentConfig, params: &SpinChainParams) -> Result<SpectralDecomposition> {
    let h = ChainBuilder::default().hamiltonian(params).context(|| params.describe())?;
    diagonalizer(&config.diagonalizer, params)
        .and_then(|d| d.decompose(&h))
        .context(|| format!("diagonalizing {}", params.describe()))
}

pub(crate) fn cut(config: &ExperimentConfig, l: usize) -> Result<Bipartition> {
    Bipartition::contiguous(l, config.cut_for(l)).context(|| format!("bipartition of {l} sites"))
}

/// Short label for file names, e.g. `1.2` or `0`.
pub(crate) fn label(x: f64) -> String {
    format!("{x}")
}
