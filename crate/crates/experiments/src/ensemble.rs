//! Random-matrix comparison ensembles.

use std::fmt;
use std::str::FromStr;

use nhchain::haar::{complex_gaussian, sample_rng};
use nhchain::DenseOperator;
use serde::{Deserialize, Serialize};

/// Entries of the underlying complex Gaussian matrix `A` satisfy
/// `E|A_ij|^2 = 1`; GUE draws are `(A + A^dagger) / 2`, Ginibre draws are `A`.
pub const VARIANCE_CONVENTION: &str = "E|A_ij|^2 = 1; GUE = (A + A^dagger)/2; Ginibre = A";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Gue,
    Ginibre,
}

impl EnsembleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::Gue => "gue",
            EnsembleKind::Ginibre => "ginibre",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gue" => Ok(EnsembleKind::Gue),
            "ginibre" => Ok(EnsembleKind::Ginibre),
            _ => Err(format!("unknown ensemble `{s}`; expected gue or ginibre")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomEnsemble {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub seed: u64,
}

impl RandomEnsemble {
    pub fn new(kind: EnsembleKind, dim: usize, seed: u64) -> Self {
        assert!(dim >= 2, "ensemble dimension must be at least 2");
        Self { kind, dim, seed }
    }

    /// Draw number `index`; deterministic in `(seed, index)`.
    pub fn sample(&self, index: u64) -> DenseOperator {
        let a = complex_gaussian(self.dim, self.dim, &mut sample_rng(self.seed, index));
        match self.kind {
            EnsembleKind::Gue => DenseOperator::from_fn(self.dim, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5),
            EnsembleKind::Ginibre => DenseOperator::from_fn(self.dim, |i, j| a[(i, j)]),
        }
    }
}
