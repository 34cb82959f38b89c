//! Out-of-time-order correlators: the state-normalized OTOC, lightcone scans,
//! Haar-sampled bipartite averages and the Heisenberg-picture closed form.

use std::io::Write;

use crate::error::{Error, Result};
use crate::evolution::shifted_propagator;
use crate::haar::{haar_unitary, sample_rng};
use crate::hamiltonians::SpinChainParams;
use crate::opent::{linear_opent, Bipartition, Subsystem};
use crate::operator::{c64, inner, pauli, vec_norm, DenseOperator, SiteMatrix};
use crate::spectral::decompose_model;

/// Denominators below this drop the corresponding basis-state term.
pub const ZERO_DENOMINATOR: f64 = 1e-300;

/// Single-site operator placed on one site of the chain.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalObservable {
    pub site: usize,
    pub matrix: SiteMatrix,
    pub label: String,
}

impl LocalObservable {
    pub fn new(site: usize, matrix: SiteMatrix, label: impl Into<String>) -> Self {
        Self { site, matrix, label: label.into() }
    }

    pub fn pauli_x(site: usize) -> Self {
        Self::new(site, pauli::X, "X")
    }

    pub fn pauli_y(site: usize) -> Self {
        Self::new(site, pauli::Y, "Y")
    }

    pub fn pauli_z(site: usize) -> Self {
        Self::new(site, pauli::Z, "Z")
    }

    pub fn embed(&self, l: usize) -> Result<DenseOperator> {
        DenseOperator::single_site(&self.matrix, self.site, l)
    }
}

/// Normalized OTOC value and the number of basis-state terms dropped for a
/// vanishing denominator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OtocValue {
    pub value: f64,
    pub dropped: usize,
}

/// Average over computational basis states `|j>` of
/// `||V W_t|j>||^2 / ||W_t|j>||^2 - Re<V W_t j|W_t V j> / (||W_t|j>|| ||W_t V|j>||)`
/// with `W_t = U^dagger W U`. Dropped terms are excluded from the average.
pub fn otoc_normalized(u: &DenseOperator, v: &DenseOperator, w: &DenseOperator) -> Result<OtocValue> {
    let d = u.dim();
    for op in [v, w] {
        if op.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: op.dim() });
        }
    }
    let wt = &(&u.adjoint() * w) * u;
    let wt_v = &wt * v;
    let v_wt = v * &wt;
    let mut total = 0.0;
    let mut dropped = 0;
    for j in 0..d {
        let n1 = vec_norm(wt.column(j));
        let n2 = vec_norm(wt_v.column(j));
        if !(n1 >= ZERO_DENOMINATOR && n2 >= ZERO_DENOMINATOR) {
            dropped += 1;
            continue;
        }
        let a = v_wt.column(j);
        let b = wt_v.column(j);
        let first: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>() / (n1 * n1);
        let overlap = inner(a, b);
        total += first - overlap.re / (n1 * n2);
    }
    let kept = d - dropped;
    let value = if kept > 0 { total / kept as f64 } else { f64::NAN };
    Ok(OtocValue { value, dropped })
}

/// Heatmap of the normalized OTOC between a fixed `V` and `W` swept over every site.
#[derive(Clone, Debug)]
pub struct LightconeTable {
    pub v_site: usize,
    pub times: Vec<f64>,
    /// `values[site - 1][k]` at `times[k]`.
    pub values: Vec<Vec<f64>>,
    pub dropped: Vec<Vec<usize>>,
    pub threshold: f64,
}

impl LightconeTable {
    pub fn sites(&self) -> usize {
        self.values.len()
    }

    /// First grid time at which the value exceeds the threshold, per site.
    pub fn onsets(&self) -> Vec<Option<f64>> {
        self.values.iter().map(|row| row.iter().position(|&c| c > self.threshold).map(|k| self.times[k])).collect()
    }

    /// Onset grid index per site.
    pub fn onset_indices(&self) -> Vec<Option<usize>> {
        self.values.iter().map(|row| row.iter().position(|&c| c > self.threshold)).collect()
    }

    /// CSV columns `site,t,value,dropped_terms`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "site,t,value,dropped_terms")?;
        for (s, row) in self.values.iter().enumerate() {
            for (k, value) in row.iter().enumerate() {
                writeln!(w, "{},{:.16e},{:.16e},{}", s + 1, self.times[k], value, self.dropped[s][k])?;
            }
        }
        Ok(())
    }
}

pub const DEFAULT_ONSET_THRESHOLD: f64 = 0.1;

/// Uniform grid `0, step, 2 step, ...` up to and including `t_max`.
pub fn uniform_grid(t_max: f64, step: f64) -> Vec<f64> {
    let n = (t_max / step + 1e-9).floor() as usize;
    (0..=n).map(|k| k as f64 * step).collect()
}

/// `V = W = Z` with `V` on `v_site` and `W` on every site, for each time.
pub fn otoc_lightcone(
    params: &SpinChainParams,
    v_site: usize,
    t_grid: &[f64],
    threshold: f64,
) -> Result<LightconeTable> {
    let l = params.l;
    let spec = decompose_model(params)?;
    let v = LocalObservable::pauli_z(v_site).embed(l)?;
    let ws: Vec<DenseOperator> = (1..=l).map(|s| LocalObservable::pauli_z(s).embed(l)).collect::<Result<_>>()?;
    let mut values = vec![Vec::with_capacity(t_grid.len()); l];
    let mut dropped = vec![Vec::with_capacity(t_grid.len()); l];
    for &t in t_grid {
        let u = shifted_propagator(&spec, t)?;
        for (s, w) in ws.iter().enumerate() {
            let c = otoc_normalized(&u, &v, w)?;
            values[s].push(c.value);
            dropped[s].push(c.dropped);
        }
    }
    Ok(LightconeTable { v_site, times: t_grid.to_vec(), values, dropped, threshold })
}

/// `x` acting on subsystem `side` of the bipartition, identity on the rest.
pub fn embed_on(x: &DenseOperator, bi: &Bipartition, side: Subsystem) -> Result<DenseOperator> {
    let expected = match side {
        Subsystem::A => bi.d_a(),
        Subsystem::B => bi.d_b(),
    };
    if x.dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: x.dim() });
    }
    let zero = c64::new(0.0, 0.0);
    Ok(DenseOperator::from_fn(bi.dim(), |row, col| {
        let (a1, b1) = bi.split(row);
        let (a2, b2) = bi.split(col);
        match side {
            Subsystem::A if b1 == b2 => x.get(a1, a2),
            Subsystem::B if a1 == a2 => x.get(b1, b2),
            _ => zero,
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaarSampleReport {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n_samples)`.
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl HaarSampleReport {
    pub fn from_samples(samples: &[f64], seed: u64) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        Self { mean, stderr: (var / n as f64).sqrt(), n_samples: n, seed }
    }
}

/// Mean of the normalized OTOC over `n` Haar pairs `V = v (x) I_B`, `W = I_A (x) w`.
pub fn haar_bipartite_otoc(u: &DenseOperator, bi: &Bipartition, n: usize, seed: u64) -> Result<HaarSampleReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
    }
    let samples = (0..n as u64)
        .map(|k| {
            let mut rng = sample_rng(seed, k);
            let v = embed_on(&haar_unitary(bi.d_a(), &mut rng), bi, Subsystem::A)?;
            let w = embed_on(&haar_unitary(bi.d_b(), &mut rng), bi, Subsystem::B)?;
            Ok(otoc_normalized(u, &v, &w)?.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(HaarSampleReport::from_samples(&samples, seed))
}

/// Heisenberg-picture OTOC at infinite temperature,
/// `d / ||U||_2^4 [ ||V W_t||_2^2 - Re Tr(W_t^dagger V^dagger W_t V) ]`, `W_t = U^dagger W U`.
pub fn heisenberg_otoc(u: &DenseOperator, v: &DenseOperator, w: &DenseOperator) -> Result<f64> {
    let norm = u.hs_norm_sqr();
    if !(norm > 0.0) {
        return Err(Error::ZeroOperator);
    }
    let wt = &(&u.adjoint() * w) * u;
    let v_wt = v * &wt;
    let wt_v = &wt * v;
    let overlap: c64 = (0..u.dim()).map(|j| inner(v_wt.column(j), wt_v.column(j))).sum();
    Ok(u.dim() as f64 / (norm * norm) * (v_wt.hs_norm_sqr() - overlap.re))
}

/// `E_B(U U^dagger) = 1 - d_B Tr[(Tr_A U U^dagger)^2] / ||U||_2^4`.
pub fn subsystem_linear_entropy(u: &DenseOperator, bi: &Bipartition) -> Result<f64> {
    let norm = u.hs_norm_sqr();
    if !(norm > 0.0) {
        return Err(Error::ZeroOperator);
    }
    let p = u * &u.adjoint();
    let reduced = bi.partial_trace(&p, Subsystem::B)?;
    let purity = reduced.hs_norm_sqr();
    Ok(1.0 - bi.d_b() as f64 * purity / (norm * norm))
}

/// Closed-form Haar average `E_lin(U) - E_B(U U^dagger)` of [`heisenberg_otoc`],
/// with `W` Haar-random on subsystem `A` and `V` on subsystem `B`.
pub fn heisenberg_haar_otoc(u: &DenseOperator, bi: &Bipartition) -> Result<f64> {
    Ok(linear_opent(u, bi)? - subsystem_linear_entropy(u, bi)?)
}

/// Monte-Carlo estimate of [`heisenberg_haar_otoc`] over `n` Haar pairs.
pub fn heisenberg_haar_sampled(u: &DenseOperator, bi: &Bipartition, n: usize, seed: u64) -> Result<HaarSampleReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
    }
    let samples = (0..n as u64)
        .map(|k| {
            let mut rng = sample_rng(seed, k);
            let w = embed_on(&haar_unitary(bi.d_a(), &mut rng), bi, Subsystem::A)?;
            let v = embed_on(&haar_unitary(bi.d_b(), &mut rng), bi, Subsystem::B)?;
            heisenberg_otoc(u, &v, &w)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(HaarSampleReport::from_samples(&samples, seed))
}

/// Dense `d_A x d_B` Haar pair helper for callers that want raw samples.
pub fn haar_pair(bi: &Bipartition, seed: u64, index: u64) -> (DenseOperator, DenseOperator) {
    let mut rng = sample_rng(seed, index);
    let v = haar_unitary(bi.d_a(), &mut rng);
    let w = haar_unitary(bi.d_b(), &mut rng);
    (v, w)
}
