//! Layered experiment configuration: recipe defaults, then a TOML file, then
//! command-line flags.

use std::path::{Path, PathBuf};

use clap::Args;
use nhchain::{ModelFamily, Preset, SpinChainParams};
use serde::{Deserialize, Serialize};

use crate::ensemble::EnsembleKind;
use crate::error::{ExperimentError, Result};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "NHCHAIN_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "nhchain-output";

/// Unresolved key-value settings; every field is optional so layers can be merged.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
pub struct RawConfig {
    /// Model family: hermitian, measurement_induced or isospectral.
    #[arg(long)]
    pub family: Option<String>,
    /// Coupling preset: integrable, chaotic or classical.
    #[arg(long)]
    pub preset: Option<String>,
    /// Chain length.
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub l: Option<usize>,
    /// Ising coupling (overrides the preset).
    #[arg(long = "J")]
    #[serde(rename = "J")]
    pub j: Option<f64>,
    /// Transverse field (overrides the preset).
    #[arg(long)]
    pub g: Option<f64>,
    /// Longitudinal field (overrides the preset).
    #[arg(long)]
    pub h: Option<f64>,
    /// Measurement rate of the measurement-induced family.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Deformation of the isospectral family.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Deformation values, one output per value.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// Chain lengths for length scans.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Option<Vec<usize>>,
    /// Leftmost-subsystem sizes for quenches.
    #[arg(long, value_delimiter = ',')]
    pub subsystem_sizes: Option<Vec<usize>>,
    /// End of the uniform time grid.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Step of the uniform time grid.
    #[arg(long)]
    pub t_step: Option<f64>,
    /// Explicit sample times.
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Start of the long-time averaging window.
    #[arg(long)]
    pub lta_t_min: Option<f64>,
    /// End of the long-time averaging window.
    #[arg(long)]
    pub lta_t_max: Option<f64>,
    /// Number of grid points in the averaging window.
    #[arg(long)]
    pub lta_points: Option<usize>,
    /// First deformation value of a sweep.
    #[arg(long)]
    pub sweep_start: Option<f64>,
    /// Last deformation value of a sweep (inclusive up to rounding).
    #[arg(long)]
    pub sweep_stop: Option<f64>,
    /// Sweep step.
    #[arg(long)]
    pub sweep_step: Option<f64>,
    /// Number of leftmost sites in subsystem A (default: ceil(L/2)).
    #[arg(long)]
    pub cut: Option<usize>,
    /// Site of the fixed OTOC operator (default: middle site).
    #[arg(long)]
    pub v_site: Option<usize>,
    /// OTOC value that marks lightcone onset.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Number of Haar samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Master seed; component seeds are derived from it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random-matrix ensemble replacing the chain: gue or ginibre.
    #[arg(long)]
    pub ensemble: Option<String>,
    /// Number of ensemble draws averaged per length.
    #[arg(long)]
    pub ensemble_samples: Option<usize>,
    /// Also compute numeric window averages in scans.
    #[arg(long)]
    pub numeric: Option<bool>,
    /// Diagonalization strategy: auto, hermitian, general or similarity.
    #[arg(long)]
    pub diagonalizer: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),+ $(,)?) => {
        RawConfig { $($field: $top.$field.clone().or_else(|| $base.$field.clone()),)+ }
    };
}

impl RawConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ExperimentError::ReadConfig { path: path.to_path_buf(), source })?;
        Self::from_toml_str(&text)
    }

    /// Fields set in `top` win over those in `self`.
    pub fn overlay(&self, top: &RawConfig) -> RawConfig {
        overlay!(
            self,
            top,
            family,
            preset,
            l,
            j,
            g,
            h,
            gamma,
            beta,
            values,
            lengths,
            subsystem_sizes,
            t_max,
            t_step,
            times,
            lta_t_min,
            lta_t_max,
            lta_points,
            sweep_start,
            sweep_stop,
            sweep_step,
            cut,
            v_site,
            threshold,
            samples,
            seed,
            ensemble,
            ensemble_samples,
            numeric,
            diagonalizer,
            output,
        )
    }
}

/// Uniform grid `0, step, ..., t_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t_max: f64,
    pub t_step: f64,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        nhchain::scrambling::uniform_grid(self.t_max, self.t_step)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LtaWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

/// Inclusive arithmetic sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

/// Fully resolved configuration, embedded verbatim in every output file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub recipe: String,
    pub preset: Option<Preset>,
    pub model: SpinChainParams,
    pub values: Vec<f64>,
    pub lengths: Vec<usize>,
    pub subsystem_sizes: Vec<usize>,
    pub grid: TimeGrid,
    pub times: Vec<f64>,
    pub lta: LtaWindow,
    pub sweep: Sweep,
    pub cut: Option<usize>,
    pub v_site: Option<usize>,
    pub threshold: f64,
    pub samples: usize,
    pub seed: u64,
    pub ensemble: Option<EnsembleKind>,
    pub ensemble_samples: usize,
    pub numeric: bool,
    pub diagonalizer: String,
    #[serde(skip)]
    pub output_dir: PathBuf,
}

fn parse_field<T: std::str::FromStr>(field: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ExperimentError::config(field, e.to_string()))
}

fn positive(field: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ExperimentError::config(field, format!("must be positive and finite, got {value}")))
    }
}

impl ExperimentConfig {
    /// Resolves `raw` over built-in defaults; `env_output` stands in for the
    /// output-directory environment variable.
    pub fn resolve(recipe: &str, raw: &RawConfig, env_output: Option<PathBuf>) -> Result<Self> {
        let family: ModelFamily = parse_field("family", raw.family.as_deref().unwrap_or("hermitian"))?;
        let preset: Option<Preset> = raw.preset.as_deref().map(|p| parse_field("preset", p)).transpose()?;
        let (j0, g0, h0) = preset.unwrap_or(Preset::Chaotic).couplings();
        let l = raw.l.unwrap_or(8);
        let model = SpinChainParams {
            family,
            l,
            j: raw.j.unwrap_or(j0),
            g: raw.g.unwrap_or(g0),
            h: raw.h.unwrap_or(h0),
            gamma: raw.gamma.unwrap_or(0.0),
            beta: raw.beta.unwrap_or(0.0),
        };
        model
            .validate(nhchain::hamiltonians::DEFAULT_MAX_SITES)
            .map_err(|e| ExperimentError::config("model", e.to_string()))?;

        let grid = TimeGrid {
            t_max: positive("t_max", raw.t_max.unwrap_or(10.0))?,
            t_step: positive("t_step", raw.t_step.unwrap_or(0.1))?,
        };
        let (lta_min, lta_max) = nhchain::lta::DEFAULT_WINDOW;
        let lta = LtaWindow {
            t_min: raw.lta_t_min.unwrap_or(lta_min),
            t_max: raw.lta_t_max.unwrap_or(lta_max),
            points: raw.lta_points.unwrap_or(nhchain::lta::DEFAULT_POINTS),
        };
        if !(lta.t_min >= 0.0 && lta.t_min < lta.t_max) {
            return Err(ExperimentError::config(
                "lta_t_min",
                format!("window [{}, {}] is empty", lta.t_min, lta.t_max),
            ));
        }
        if lta.points < 10 {
            return Err(ExperimentError::config("lta_points", format!("need at least 10, got {}", lta.points)));
        }
        let sweep = Sweep {
            start: raw.sweep_start.unwrap_or(0.0),
            stop: raw.sweep_stop.unwrap_or(2.0),
            step: positive("sweep_step", raw.sweep_step.unwrap_or(0.05))?,
        };
        if !(sweep.stop >= sweep.start) {
            return Err(ExperimentError::config("sweep_stop", "must not precede sweep_start"));
        }
        let lengths = raw.lengths.clone().unwrap_or_else(|| vec![l]);
        if let Some(bad) = lengths.iter().find(|&&n| n == 0 || n > nhchain::hamiltonians::DEFAULT_MAX_SITES) {
            return Err(ExperimentError::config("lengths", format!("length {bad} is outside 1..=14")));
        }
        let subsystem_sizes = raw.subsystem_sizes.clone().unwrap_or_else(|| vec![l / 2]);
        if let Some(bad) = subsystem_sizes.iter().find(|&&s| s > l) {
            return Err(ExperimentError::config("subsystem_sizes", format!("{bad} exceeds L = {l}")));
        }
        if let Some(cut) = raw.cut {
            if cut == 0 || cut >= l {
                return Err(ExperimentError::config("cut", format!("must lie in 1..{l}, got {cut}")));
            }
        }
        if let Some(site) = raw.v_site {
            if site == 0 || site > l {
                return Err(ExperimentError::config("v_site", format!("must lie in 1..={l}, got {site}")));
            }
        }
        let samples = raw.samples.unwrap_or(100);
        if samples < 2 {
            return Err(ExperimentError::config("samples", "need at least 2"));
        }
        let ensemble: Option<EnsembleKind> = raw.ensemble.as_deref().map(|e| parse_field("ensemble", e)).transpose()?;
        let diagonalizer = raw.diagonalizer.clone().unwrap_or_else(|| "auto".into());
        if !nhchain::spectral::DIAGONALIZER_NAMES.contains(&diagonalizer.as_str()) {
            return Err(ExperimentError::config(
                "diagonalizer",
                format!("unknown `{diagonalizer}`; expected one of {:?}", nhchain::spectral::DIAGONALIZER_NAMES),
            ));
        }
        let output_dir = raw.output.clone().or(env_output).unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));

        Ok(Self {
            recipe: recipe.to_string(),
            preset,
            values: raw.values.clone().unwrap_or_else(|| vec![model.deformation()]),
            model,
            lengths,
            subsystem_sizes,
            grid,
            times: raw.times.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0, 3.0, 5.0]),
            lta,
            sweep,
            cut: raw.cut,
            v_site: raw.v_site,
            threshold: raw.threshold.unwrap_or(nhchain::scrambling::DEFAULT_ONSET_THRESHOLD),
            samples,
            seed: raw.seed.unwrap_or(0),
            ensemble,
            ensemble_samples: raw.ensemble_samples.unwrap_or(1).max(1),
            numeric: raw.numeric.unwrap_or(true),
            diagonalizer,
            output_dir,
        })
    }

    /// Model at chain length `l` with the configured couplings.
    pub fn model_at(&self, l: usize) -> SpinChainParams {
        self.model.with_l(l)
    }

    /// Subsystem-A size for a chain of `l` sites.
    pub fn cut_for(&self, l: usize) -> usize {
        self.cut.filter(|&c| c < l).unwrap_or(l.div_ceil(2))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
