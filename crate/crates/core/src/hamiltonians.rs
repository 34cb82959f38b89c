//! Transverse-field Ising chains with open boundaries and their two
//! non-Hermitian deformations.
//!
//! All three families share the diagonal part `J sum Z_j Z_{j+1} + h sum Z_j`
//! and differ only in the single-site off-diagonal amplitudes
//! `<0|op|1>` (raising) and `<1|op|0>` (lowering):
//!
//! | family               | raising        | lowering        |
//! |----------------------|----------------|-----------------|
//! | Hermitian            | `g`            | `g`             |
//! | measurement-induced  | `g + gamma`    | `g - gamma`     |
//! | isospectral          | `g e^beta`     | `g e^-beta`     |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c64, DenseOperator};

pub const DEFAULT_MAX_SITES: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    Hermitian,
    MeasurementInduced,
    Isospectral,
}

impl ModelFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelFamily::Hermitian => "hermitian",
            ModelFamily::MeasurementInduced => "measurement_induced",
            ModelFamily::Isospectral => "isospectral",
        }
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "hermitian" | "tfim" => Ok(ModelFamily::Hermitian),
            "measurement_induced" | "measurement" | "mi" => Ok(ModelFamily::MeasurementInduced),
            "isospectral" | "iso" => Ok(ModelFamily::Isospectral),
            _ => Err(Error::Unknown { kind: "model family", name: s.to_string() }),
        }
    }
}

/// Named coupling points `(J, g, h)` of the Hermitian chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `J = 0.95, g = 1, h = 0`
    Integrable,
    /// `J = 0.95, g = 1, h = 0.5`
    Chaotic,
    /// `J = 0.95, g = 0, h = 0.5`
    Classical,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Integrable, Preset::Chaotic, Preset::Classical];

    pub fn couplings(self) -> (f64, f64, f64) {
        match self {
            Preset::Integrable => (0.95, 1.0, 0.0),
            Preset::Chaotic => (0.95, 1.0, 0.5),
            Preset::Classical => (0.95, 0.0, 0.5),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Integrable => "integrable",
            Preset::Chaotic => "chaotic",
            Preset::Classical => "classical",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unknown { kind: "preset", name: s.to_string() })
    }
}

/// Model family plus couplings; the single source of Hamiltonian identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinChainParams {
    pub family: ModelFamily,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "J")]
    pub j: f64,
    pub g: f64,
    pub h: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub beta: f64,
}

impl SpinChainParams {
    pub fn new(family: ModelFamily, l: usize, j: f64, g: f64, h: f64) -> Self {
        Self { family, l, j, g, h, gamma: 0.0, beta: 0.0 }
    }

    pub fn preset(preset: Preset, family: ModelFamily, l: usize) -> Self {
        let (j, g, h) = preset.couplings();
        Self::new(family, l, j, g, h)
    }

    pub fn hermitian(preset: Preset, l: usize) -> Self {
        Self::preset(preset, ModelFamily::Hermitian, l)
    }

    pub fn measurement(preset: Preset, l: usize, gamma: f64) -> Self {
        Self { gamma, ..Self::preset(preset, ModelFamily::MeasurementInduced, l) }
    }

    pub fn isospectral(preset: Preset, l: usize, beta: f64) -> Self {
        Self { beta, ..Self::preset(preset, ModelFamily::Isospectral, l) }
    }

    pub fn with_l(&self, l: usize) -> Self {
        Self { l, ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        1usize << self.l
    }

    /// The non-Hermiticity parameter of the family (`gamma`, `beta`, or 0).
    pub fn deformation(&self) -> f64 {
        match self.family {
            ModelFamily::Hermitian => 0.0,
            ModelFamily::MeasurementInduced => self.gamma,
            ModelFamily::Isospectral => self.beta,
        }
    }

    /// Copy with the family's non-Hermiticity parameter replaced.
    pub fn with_deformation(&self, value: f64) -> Self {
        let mut p = self.clone();
        match p.family {
            ModelFamily::Hermitian => {}
            ModelFamily::MeasurementInduced => p.gamma = value,
            ModelFamily::Isospectral => p.beta = value,
        }
        p
    }

    /// The Hermitian chain with the same `(L, J, g, h)`.
    pub fn hermitian_part(&self) -> Self {
        Self::new(ModelFamily::Hermitian, self.l, self.j, self.g, self.h)
    }

    pub fn validate(&self, max_sites: usize) -> Result<()> {
        if self.l == 0 {
            return Err(Error::EmptyChain);
        }
        if self.l > max_sites {
            return Err(Error::Capacity { l: self.l, cap: max_sites });
        }
        for (name, v) in [("J", self.j), ("g", self.g), ("h", self.h), ("gamma", self.gamma), ("beta", self.beta)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} is not finite")));
            }
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParams(format!("gamma = {} must be nonnegative", self.gamma)));
        }
        if self.gamma != 0.0 && self.family != ModelFamily::MeasurementInduced {
            return Err(Error::InvalidParams(format!(
                "gamma is only meaningful for the measurement-induced family, not {}",
                self.family
            )));
        }
        if self.beta != 0.0 && self.family != ModelFamily::Isospectral {
            return Err(Error::InvalidParams(format!(
                "beta is only meaningful for the isospectral family, not {}",
                self.family
            )));
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        format!(
            "{} L={} J={} g={} h={} gamma={} beta={}",
            self.family, self.l, self.j, self.g, self.h, self.gamma, self.beta
        )
    }
}

/// Dense Hamiltonian constructor with a site-count cap.
#[derive(Clone, Copy, Debug)]
pub struct ChainBuilder {
    pub max_sites: usize,
}

impl Default for ChainBuilder {
    fn default() -> Self {
        Self { max_sites: DEFAULT_MAX_SITES }
    }
}

impl ChainBuilder {
    pub fn with_max_sites(max_sites: usize) -> Self {
        Self { max_sites }
    }

    fn expect_family(&self, params: &SpinChainParams, family: ModelFamily) -> Result<()> {
        params.validate(self.max_sites)?;
        if params.family != family {
            return Err(Error::InvalidParams(format!("expected the {family} family, got {}", params.family)));
        }
        Ok(())
    }

    /// `J sum Z_j Z_{j+1} + g sum X_j + h sum Z_j`
    pub fn tfim(&self, params: &SpinChainParams) -> Result<DenseOperator> {
        self.expect_family(params, ModelFamily::Hermitian)?;
        let g = c64::new(params.g, 0.0);
        Ok(ising_chain(params.l, params.j, params.h, g, g))
    }

    /// Hermitian chain plus `i gamma sum Y_j`.
    pub fn measurement(&self, params: &SpinChainParams) -> Result<DenseOperator> {
        self.expect_family(params, ModelFamily::MeasurementInduced)?;
        let up = c64::new(params.g + params.gamma, 0.0);
        let down = c64::new(params.g - params.gamma, 0.0);
        Ok(ising_chain(params.l, params.j, params.h, up, down))
    }

    /// `J sum ZZ + h sum Z + g sum (e^beta S^+ + e^-beta S^-)`, equal to
    /// `S(beta) H S(beta)^-1` for the Hermitian chain `H`.
    pub fn isospectral(&self, params: &SpinChainParams) -> Result<DenseOperator> {
        self.expect_family(params, ModelFamily::Isospectral)?;
        let up = c64::new(params.g * params.beta.exp(), 0.0);
        let down = c64::new(params.g * (-params.beta).exp(), 0.0);
        Ok(ising_chain(params.l, params.j, params.h, up, down))
    }

    pub fn hamiltonian(&self, params: &SpinChainParams) -> Result<DenseOperator> {
        match params.family {
            ModelFamily::Hermitian => self.tfim(params),
            ModelFamily::MeasurementInduced => self.measurement(params),
            ModelFamily::Isospectral => self.isospectral(params),
        }
    }

    pub fn similarity(&self, beta: f64, l: usize) -> Result<DenseOperator> {
        check_sites(l, self.max_sites)?;
        let diag: Vec<c64> = similarity_diagonal(beta, l).into_iter().map(|x| c64::new(x, 0.0)).collect();
        Ok(DenseOperator::from_diagonal(&diag))
    }
}

fn check_sites(l: usize, max_sites: usize) -> Result<()> {
    match l {
        0 => Err(Error::EmptyChain),
        l if l > max_sites => Err(Error::Capacity { l, cap: max_sites }),
        _ => Ok(()),
    }
}

fn ising_chain(l: usize, j: f64, h: f64, up: c64, down: c64) -> DenseOperator {
    let dim = 1usize << l;
    let mut op = DenseOperator::zeros(dim).into_mat();
    let zero = c64::new(0.0, 0.0);
    for b in 0..dim {
        let spin = |site: usize| if (b >> (l - site)) & 1 == 0 { 1.0 } else { -1.0 };
        let zz: f64 = (1..l).map(|s| spin(s) * spin(s + 1)).sum();
        let z: f64 = (1..=l).map(spin).sum();
        op[(b, b)] = c64::new(j * zz + h * z, 0.0);
        for site in 1..=l {
            let mask = 1usize << (l - site);
            let flipped = b ^ mask;
            // column b, row flipped: b carries 1 at the site -> |0><1| amplitude.
            let amp = if b & mask != 0 { up } else { down };
            if amp != zero {
                op[(flipped, b)] += amp;
            }
        }
    }
    DenseOperator::from_square(op)
}

pub fn build_tfim(params: &SpinChainParams) -> Result<DenseOperator> {
    ChainBuilder::default().tfim(params)
}

pub fn build_measurement_tfim(params: &SpinChainParams) -> Result<DenseOperator> {
    ChainBuilder::default().measurement(params)
}

pub fn build_isospectral_tfim(params: &SpinChainParams) -> Result<DenseOperator> {
    ChainBuilder::default().isospectral(params)
}

pub fn build_hamiltonian(params: &SpinChainParams) -> Result<DenseOperator> {
    ChainBuilder::default().hamiltonian(params)
}

/// Diagonal of `S(beta) = prod_j exp(beta Z_j / 2)`:
/// `exp(beta (L - 2 popcount(b)) / 2)`.
pub fn similarity_diagonal(beta: f64, l: usize) -> Vec<f64> {
    (0..1usize << l).map(|b| (beta * (l as f64 - 2.0 * b.count_ones() as f64) / 2.0).exp()).collect()
}

pub fn build_similarity_s(beta: f64, l: usize) -> Result<DenseOperator> {
    ChainBuilder::default().similarity(beta, l)
}

/// `rho_ss = S(beta)^2 / Tr S(beta)^2`, stationary under normalized
/// isospectral evolution, with its purity read off the matrix.
#[derive(Clone, Debug)]
pub struct StationaryState {
    pub rho: DenseOperator,
    pub purity: f64,
}

pub fn stationary_state(beta: f64, l: usize) -> Result<StationaryState> {
    check_sites(l, DEFAULT_MAX_SITES)?;
    let sq: Vec<f64> = similarity_diagonal(beta, l).into_iter().map(|s| s * s).collect();
    let total: f64 = sq.iter().sum();
    let probs: Vec<f64> = sq.iter().map(|s| s / total).collect();
    let diag: Vec<c64> = probs.iter().map(|&p| c64::new(p, 0.0)).collect();
    let rho = DenseOperator::from_diagonal(&diag);
    let purity = (0..rho.dim()).map(|i| rho.get(i, i).norm_sqr()).sum();
    Ok(StationaryState { rho, purity })
}

/// `((1 + tanh^2 beta) / 2)^L`, i.e. `(2 cosh 2beta)^L / (2 cosh beta)^(2L)`.
pub fn stationary_purity_cosh_ratio(beta: f64, l: usize) -> f64 {
    let t = beta.tanh();
    ((1.0 + t * t) / 2.0).powi(l as i32)
}

/// `2^-L (1 - tanh^2 beta)^L`. Agrees with the stationary purity only at beta = 0.
pub fn stationary_purity_sech_form(beta: f64, l: usize) -> f64 {
    let t = beta.tanh();
    (0.5 * (1.0 - t * t)).powi(l as i32)
}
