//! Biorthonormal eigendecompositions, the long-time eigenspace and
//! parameter sweeps of the spectrum.

use std::cmp::Ordering;
use std::io::Write;

use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::hamiltonians::{similarity_diagonal, ChainBuilder, ModelFamily, SpinChainParams};
use crate::operator::{c64, DenseOperator};

/// `||L^dagger R - I||_max` above which a decomposition is rejected.
pub const BIORTHONORMALITY_THRESHOLD: f64 = 1e-6;

/// Eigenvector systems whose rounding error `cond * eps` would exceed the
/// biorthonormality threshold are rejected even if the computed residual is
/// small, as happens for exact Jordan blocks.
const MAX_CONDITION: f64 = BIORTHONORMALITY_THRESHOLD / f64::EPSILON;

/// `H = sum_i lambda_i |r_i><l_i|` with `<l_i|r_j> = delta_ij` and unit-norm `r_i`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<c64>,
    right: Mat<c64>,
    left: Mat<c64>,
    residual: f64,
}

impl SpectralDecomposition {
    /// Sorts into canonical order and checks biorthonormality.
    fn assemble(eigenvalues: Vec<c64>, right: Mat<c64>, left: Mat<c64>) -> Result<Self> {
        let n = eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| canonical_order(eigenvalues[a], eigenvalues[b]).then(a.cmp(&b)));
        let eigenvalues: Vec<c64> = order.iter().map(|&i| eigenvalues[i]).collect();
        let right = Mat::from_fn(n, n, |i, j| right[(i, order[j])]);
        let left = Mat::from_fn(n, n, |i, j| left[(i, order[j])]);

        let overlap = left.adjoint() * &right;
        let residual = (0..n)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .map(|(i, j)| {
                let delta = if i == j { 1.0 } else { 0.0 };
                (overlap[(i, j)] - c64::new(delta, 0.0)).norm()
            })
            .fold(0.0, f64::max);
        if !(residual <= BIORTHONORMALITY_THRESHOLD) {
            return Err(Error::NearDefective { residual, threshold: BIORTHONORMALITY_THRESHOLD });
        }
        let out = Self { eigenvalues, right, left, residual };
        let condition = out.condition();
        if !(condition <= MAX_CONDITION) {
            return Err(Error::NearDefective {
                residual: condition * f64::EPSILON,
                threshold: BIORTHONORMALITY_THRESHOLD,
            });
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[c64] {
        &self.eigenvalues
    }

    /// Right eigenvectors as columns.
    pub fn right(&self) -> &Mat<c64> {
        &self.right
    }

    /// Left eigenvectors as columns.
    pub fn left(&self) -> &Mat<c64> {
        &self.left
    }

    pub fn right_vector(&self, i: usize) -> &[c64] {
        self.right.col_as_slice(i)
    }

    pub fn left_vector(&self, i: usize) -> &[c64] {
        self.left.col_as_slice(i)
    }

    /// `||L^dagger R - I||_max` measured at construction.
    pub fn biorthonormality_residual(&self) -> f64 {
        self.residual
    }

    /// `max_i ||l_i||`, the worst eigenvalue condition number given unit `r_i`.
    pub fn condition(&self) -> f64 {
        (0..self.dim()).map(|i| crate::operator::vec_norm(self.left_vector(i))).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `R diag(f) L^dagger`.
    pub fn apply_function(&self, f: impl Fn(c64) -> c64) -> DenseOperator {
        let n = self.dim();
        let weights: Vec<c64> = self.eigenvalues.iter().map(|&z| f(z)).collect();
        let scaled = Mat::from_fn(n, n, |i, j| self.right[(i, j)] * weights[j]);
        DenseOperator::from_square(scaled * self.left.adjoint())
    }

    pub fn reconstruct(&self) -> DenseOperator {
        self.apply_function(|z| z)
    }

    /// `||sum_i lambda_i |r_i><l_i| - H||_max / max(||H||_max, tiny)`.
    pub fn reconstruction_residual(&self, h: &DenseOperator) -> f64 {
        self.reconstruct().max_abs_diff(h) / h.max_abs().max(f64::MIN_POSITIVE)
    }
}

fn canonical_order(a: c64, b: c64) -> Ordering {
    b.im.total_cmp(&a.im).then(a.re.total_cmp(&b.re))
}

/// A strategy for producing biorthonormal eigensystems.
pub trait Diagonalizer: Send + Sync {
    fn name(&self) -> &'static str;
    fn decompose(&self, h: &DenseOperator) -> Result<SpectralDecomposition>;
}

/// Self-adjoint eigensolver; left and right vectors coincide.
#[derive(Clone, Copy, Debug, Default)]
pub struct HermitianDiagonalizer;

impl Diagonalizer for HermitianDiagonalizer {
    fn name(&self) -> &'static str {
        "hermitian"
    }

    fn decompose(&self, h: &DenseOperator) -> Result<SpectralDecomposition> {
        let tol = 1e-12 * h.max_abs().max(1.0);
        if !h.is_hermitian(tol) {
            return Err(Error::InvalidArgument("matrix is not Hermitian".into()));
        }
        let evd = h.as_mat().self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenFailure)?;
        let eigenvalues = evd.S().column_vector().iter().map(|z| c64::new(z.re, 0.0)).collect();
        let u = evd.U().to_owned();
        SpectralDecomposition::assemble(eigenvalues, u.clone(), u)
    }
}

/// General complex eigensolver, left vectors from `(R^-1)^dagger`.
#[derive(Clone, Copy, Debug, Default)]
pub struct GeneralDiagonalizer;

impl Diagonalizer for GeneralDiagonalizer {
    fn name(&self) -> &'static str {
        "general"
    }

    fn decompose(&self, h: &DenseOperator) -> Result<SpectralDecomposition> {
        if !h.is_finite() {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let evd = h.as_mat().eigen().map_err(|_| Error::EigenFailure)?;
        let eigenvalues: Vec<c64> = evd.S().column_vector().iter().copied().collect();
        let mut right = evd.U().to_owned();
        let n = right.nrows();
        for j in 0..n {
            let norm = crate::operator::vec_norm(right.col_as_slice(j));
            if !(norm > 0.0) {
                return Err(Error::NearDefective { residual: f64::INFINITY, threshold: BIORTHONORMALITY_THRESHOLD });
            }
            for i in 0..n {
                right[(i, j)] /= norm;
            }
        }
        let inverse = right.partial_piv_lu().inverse();
        // Defectiveness is judged on the raw inverse; one Newton-Schulz step
        // X <- X + (I - X R) X then restores biorthonormality to roundoff.
        let mut defect = -(&inverse * &right);
        for i in 0..n {
            defect[(i, i)] += c64::new(1.0, 0.0);
        }
        let raw_residual = defect.norm_max();
        if !(raw_residual <= BIORTHONORMALITY_THRESHOLD) {
            return Err(Error::NearDefective { residual: raw_residual, threshold: BIORTHONORMALITY_THRESHOLD });
        }
        let inverse = &inverse + &defect * &inverse;
        let left = inverse.adjoint().to_owned();
        if !left.as_ref().is_all_finite() {
            return Err(Error::NearDefective { residual: f64::INFINITY, threshold: BIORTHONORMALITY_THRESHOLD });
        }
        SpectralDecomposition::assemble(eigenvalues, right, left)
    }
}

/// Isospectral chains `S H_0 S^-1` with diagonal `S(beta)`: undo the similarity,
/// diagonalize the Hermitian core, then map `r = S v / ||S v||`, `l = S^-1 v ||S v||`.
#[derive(Clone, Copy, Debug)]
pub struct SimilarityDiagonalizer {
    pub beta: f64,
}

impl Diagonalizer for SimilarityDiagonalizer {
    fn name(&self) -> &'static str {
        "similarity"
    }

    fn decompose(&self, h: &DenseOperator) -> Result<SpectralDecomposition> {
        let n = h.dim();
        if !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("dimension {n} is not a power of two")));
        }
        let l = n.trailing_zeros() as usize;
        let s = similarity_diagonal(self.beta, l);
        let core = DenseOperator::from_fn(n, |i, j| h.get(i, j) * (s[j] / s[i]));
        let tol = 1e-10 * core.max_abs().max(1.0);
        if !core.is_hermitian(tol) {
            return Err(Error::InvalidArgument(format!(
                "matrix is not S(beta) H S(beta)^-1 for Hermitian H at beta = {}",
                self.beta
            )));
        }
        // Symmetrize away roundoff before the self-adjoint solver.
        let core = DenseOperator::from_fn(n, |i, j| (core.get(i, j) + core.get(j, i).conj()) * 0.5);
        let evd = core.as_mat().self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenFailure)?;
        let eigenvalues = evd.S().column_vector().iter().map(|z| c64::new(z.re, 0.0)).collect();
        let v = evd.U();
        let mut right = Mat::from_fn(n, n, |i, j| v[(i, j)] * s[i]);
        let mut left = Mat::from_fn(n, n, |i, j| v[(i, j)] / s[i]);
        for j in 0..n {
            let norm = crate::operator::vec_norm(right.col_as_slice(j));
            for i in 0..n {
                right[(i, j)] /= norm;
                left[(i, j)] *= norm;
            }
        }
        SpectralDecomposition::assemble(eigenvalues, right, left)
    }
}

pub const DIAGONALIZER_NAMES: [&str; 4] = ["auto", "hermitian", "general", "similarity"];

/// Looks up a strategy by name; `"auto"` picks the cheapest exact one for the family.
pub fn diagonalizer(name: &str, params: &SpinChainParams) -> Result<Box<dyn Diagonalizer>> {
    match name {
        "auto" => Ok(auto_diagonalizer(params)),
        "hermitian" => Ok(Box::new(HermitianDiagonalizer)),
        "general" => Ok(Box::new(GeneralDiagonalizer)),
        "similarity" => Ok(Box::new(SimilarityDiagonalizer { beta: params.beta })),
        other => Err(Error::Unknown { kind: "diagonalizer", name: other.to_string() }),
    }
}

pub fn auto_diagonalizer(params: &SpinChainParams) -> Box<dyn Diagonalizer> {
    match params.family {
        ModelFamily::Hermitian => Box::new(HermitianDiagonalizer),
        ModelFamily::MeasurementInduced if params.gamma == 0.0 => Box::new(HermitianDiagonalizer),
        ModelFamily::MeasurementInduced => Box::new(GeneralDiagonalizer),
        ModelFamily::Isospectral => Box::new(SimilarityDiagonalizer { beta: params.beta }),
    }
}

/// General-purpose entry point.
pub fn decompose(h: &DenseOperator) -> Result<SpectralDecomposition> {
    GeneralDiagonalizer.decompose(h)
}

/// Builds and decomposes the Hamiltonian described by `params`.
pub fn decompose_model(params: &SpinChainParams) -> Result<SpectralDecomposition> {
    let h = ChainBuilder::default().hamiltonian(params)?;
    auto_diagonalizer(params).decompose(&h)
}

/// Indices attaining the maximal imaginary part, and `eta_L = sum |l_i><l_i|` over them.
#[derive(Clone, Debug)]
pub struct LongTimeEigenspace {
    pub indices: Vec<usize>,
    pub eta_l: DenseOperator,
    pub tol_im: f64,
}

impl LongTimeEigenspace {
    pub fn degeneracy(&self) -> usize {
        self.indices.len()
    }
}

/// `1e-8 * max(1, |max Im lambda|)`
pub fn default_tol_im(spec: &SpectralDecomposition) -> f64 {
    1e-8 * spec.max_imag().abs().max(1.0)
}

/// Indices whose imaginary part is within `tol_im` of the maximum
/// (default `1e-8 * max(1, |max Im lambda|)`).
pub fn long_time_indices(eigenvalues: &[c64], tol_im: Option<f64>) -> Vec<usize> {
    let top = eigenvalues.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
    let tol_im = tol_im.unwrap_or(1e-8 * top.abs().max(1.0));
    (0..eigenvalues.len()).filter(|&i| top - eigenvalues[i].im <= tol_im).collect()
}

pub fn long_time_eigenspace(spec: &SpectralDecomposition, tol_im: Option<f64>) -> LongTimeEigenspace {
    let tol_im = tol_im.unwrap_or_else(|| default_tol_im(spec));
    let indices = long_time_indices(spec.eigenvalues(), Some(tol_im));
    let n = spec.dim();
    let sub = Mat::from_fn(n, indices.len(), |i, k| spec.left[(i, indices[k])]);
    let eta = &sub * sub.adjoint();
    LongTimeEigenspace { indices, eta_l: DenseOperator::from_square(eta), tol_im }
}

/// Spectrum at one sweep value, with branches aligned to the previous point.
#[derive(Clone, Debug)]
pub struct FlowPoint {
    pub value: f64,
    pub eigenvalues: Vec<c64>,
    pub near_defective: bool,
}

#[derive(Clone, Debug)]
pub struct FlowTable {
    pub template: SpinChainParams,
    pub points: Vec<FlowPoint>,
}

impl FlowTable {
    /// CSV columns `sweep_value,branch_index,re,im,near_defective_flag`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "sweep_value,branch_index,re,im,near_defective_flag")?;
        for p in &self.points {
            for (k, z) in p.eigenvalues.iter().enumerate() {
                writeln!(w, "{:.16e},{},{:.16e},{:.16e},{}", p.value, k, z.re, z.im, p.near_defective as u8)?;
            }
        }
        Ok(())
    }
}

/// Spectrum along a sweep of the family's deformation parameter.
///
/// Points that fail biorthonormalization keep their eigenvalues and carry the
/// near-defective flag.
pub fn spectral_flow(template: &SpinChainParams, sweep: &[f64]) -> Result<FlowTable> {
    if sweep.is_empty() {
        return Err(Error::InvalidArgument("sweep is empty".into()));
    }
    if sweep.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("sweep must be strictly ascending".into()));
    }
    let builder = ChainBuilder::default();
    let mut points: Vec<FlowPoint> = Vec::with_capacity(sweep.len());
    for &value in sweep {
        let params = template.with_deformation(value);
        let h = builder.hamiltonian(&params)?;
        let (mut eigenvalues, near_defective) = match auto_diagonalizer(&params).decompose(&h) {
            Ok(spec) => (spec.eigenvalues().to_vec(), false),
            Err(Error::NearDefective { .. }) => {
                let mut ev = h.as_mat().eigenvalues().map_err(|_| Error::EigenFailure)?;
                ev.sort_by(|a, b| canonical_order(*a, *b));
                (ev, true)
            }
            Err(e) => return Err(e),
        };
        if let Some(prev) = points.last() {
            eigenvalues = match_branches(&prev.eigenvalues, &eigenvalues);
        }
        points.push(FlowPoint { value, eigenvalues, near_defective });
    }
    Ok(FlowTable { template: template.clone(), points })
}

/// Greedy nearest-neighbour assignment of `next` onto the branches of `prev`.
fn match_branches(prev: &[c64], next: &[c64]) -> Vec<c64> {
    let n = prev.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, p) in prev.iter().enumerate() {
        for (j, q) in next.iter().enumerate() {
            pairs.push(((p - q).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut out = vec![None; n];
    let mut used = vec![false; n];
    for (_, i, j) in pairs {
        if out[i].is_none() && !used[j] {
            out[i] = Some(next[j]);
            used[j] = true;
        }
    }
    out.into_iter().map(|z| z.expect("complete matching")).collect()
}

/// Grid interval over which the number of complex eigenvalues increases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExceptionalOnset {
    pub lower: f64,
    pub upper: f64,
    pub complex_before: usize,
    pub complex_after: usize,
}

#[derive(Clone, Debug, Default)]
pub struct TransitionReport {
    /// Sweep values where the minimum level spacing of a real spectrum has a
    /// local minimum far below its typical size.
    pub degenerate_points: Vec<f64>,
    pub exceptional_onsets: Vec<ExceptionalOnset>,
}

/// Minimum spacing `|lambda_i - lambda_j|`, `i != j`.
pub fn min_gap(eigenvalues: &[c64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in eigenvalues.iter().enumerate() {
        for b in &eigenvalues[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// Locates exceptional onsets (`|Im lambda| > tol` count increases) and
/// degenerate points (gap collapses below `collapse * median gap` at a local
/// minimum while the spectrum stays real).
pub fn detect_transitions(flow: &FlowTable, tol: f64) -> TransitionReport {
    detect_transitions_with(flow, tol, 0.2)
}

pub fn detect_transitions_with(flow: &FlowTable, tol: f64, collapse: f64) -> TransitionReport {
    let complex_count = |p: &FlowPoint| p.eigenvalues.iter().filter(|z| z.im.abs() > tol).count();
    let counts: Vec<usize> = flow.points.iter().map(complex_count).collect();
    let exceptional_onsets = flow
        .points
        .windows(2)
        .zip(counts.windows(2))
        .filter(|(_, c)| c[1] > c[0])
        .map(|(p, c)| ExceptionalOnset {
            lower: p[0].value,
            upper: p[1].value,
            complex_before: c[0],
            complex_after: c[1],
        })
        .collect();

    let gaps: Vec<f64> = flow.points.iter().map(|p| min_gap(&p.eigenvalues)).collect();
    let mut sorted: Vec<f64> = gaps.iter().copied().filter(|g| g.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    let median = sorted.get(sorted.len() / 2).copied().unwrap_or(0.0);
    let mut degenerate_points = Vec::new();
    for k in 0..gaps.len() {
        if counts[k] != 0 {
            continue;
        }
        let left = if k > 0 { gaps[k - 1] } else { f64::INFINITY };
        let right = gaps.get(k + 1).copied().unwrap_or(f64::INFINITY);
        if gaps[k] <= left && gaps[k] < right && gaps[k] < collapse * median {
            degenerate_points.push(flow.points[k].value);
        }
    }
    TransitionReport { degenerate_points, exceptional_onsets }
}
