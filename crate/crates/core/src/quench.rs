//! Neel-state quenches under normalized evolution and their subsystem
//! entanglement entropies.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::evolution::{QuantumState, SpectralEvolution};
use crate::hamiltonians::SpinChainParams;
use crate::opent::{entanglement_entropy, Bipartition};
use crate::spectral::decompose_model;

/// `|0101...>` with site 1 in state 0.
pub fn neel_state(l: usize) -> Result<QuantumState> {
    if l == 0 {
        return Err(Error::EmptyChain);
    }
    let index = (2..=l).step_by(2).fold(0usize, |acc, site| acc | 1 << (l - site));
    Ok(QuantumState::basis(1 << l, index))
}

#[derive(Clone, Debug)]
pub struct QuenchRun {
    pub params: SpinChainParams,
    pub subsystem_sizes: Vec<usize>,
    pub t_grid: Vec<f64>,
    /// Entropy of the leftmost `l` sites at each grid time.
    pub series: BTreeMap<usize, Vec<f64>>,
}

impl QuenchRun {
    /// CSV columns `t,l,entropy`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,l,entropy")?;
        for (k, t) in self.t_grid.iter().enumerate() {
            for (l, series) in &self.series {
                writeln!(w, "{t:.16e},{l},{:.16e}", series[k])?;
            }
        }
        Ok(())
    }

    pub fn saturation(&self, l: usize) -> Option<f64> {
        self.series.get(&l).map(|s| saturation_value(s))
    }
}

/// Mean over the final third of a series.
pub fn saturation_value(series: &[f64]) -> f64 {
    let start = series.len() - series.len() / 3;
    let tail = if start < series.len() { &series[start..] } else { series };
    tail.iter().sum::<f64>() / tail.len() as f64
}

/// Entropies of the leftmost `l` sites for each size in `subsystem_sizes`.
pub fn quench_entropy_series(params: &SpinChainParams, subsystem_sizes: &[usize], t_grid: &[f64]) -> Result<QuenchRun> {
    let l = params.l;
    if let Some(&bad) = subsystem_sizes.iter().find(|&&s| s > l) {
        return Err(Error::InvalidBipartition(format!("subsystem of {bad} sites in a chain of {l}")));
    }
    let cuts: Vec<(usize, Bipartition)> =
        subsystem_sizes.iter().map(|&s| Bipartition::contiguous(l, s).map(|b| (s, b))).collect::<Result<_>>()?;
    let spec = decompose_model(params)?;
    let evolution = SpectralEvolution::new(&spec, &neel_state(l)?)?;
    let mut series: BTreeMap<usize, Vec<f64>> =
        subsystem_sizes.iter().map(|&s| (s, Vec::with_capacity(t_grid.len()))).collect();
    for &t in t_grid {
        let state = evolution.state_at(t)?;
        let psi = state.as_pure()?;
        for (s, bi) in &cuts {
            let value = entanglement_entropy(psi, bi)?;
            series.get_mut(s).expect("size registered").push(value);
        }
    }
    Ok(QuenchRun { params: params.clone(), subsystem_sizes: subsystem_sizes.to_vec(), t_grid: t_grid.to_vec(), series })
}

/// Half-chain (`floor(L/2)` leftmost sites) entropy series for each chain length.
pub fn quench_bipartite_scaling(params: &SpinChainParams, lengths: &[usize], t_grid: &[f64]) -> Result<Vec<QuenchRun>> {
    lengths.iter().map(|&l| quench_entropy_series(&params.with_l(l), &[l / 2], t_grid)).collect()
}
