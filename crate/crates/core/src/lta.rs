//! Long-time averages of operator entanglement and the bipartite OTOC:
//! numeric window means, the closed forms built from long-time Gram
//! matrices, and non-resonance diagnostics.

use faer::Mat;

use crate::error::{Error, Result};
use crate::evolution::shifted_propagator;
use crate::opent::{linear_opent, renyi2_opent, Bipartition};
use crate::operator::{c64, vec_norm};
use crate::scrambling::subsystem_linear_entropy;
use crate::spectral::{LongTimeEigenspace, SpectralDecomposition};

/// Default averaging window and resolution.
pub const DEFAULT_WINDOW: (f64, f64) = (50.0, 150.0);
pub const DEFAULT_POINTS: usize = 200;

/// Left-Riemann grid `t_min + m (t_max - t_min) / n`, `m = 0..n`.
pub fn lta_grid(t_min: f64, t_max: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(t_min < t_max) {
        return Err(Error::InvalidArgument(format!("empty window [{t_min}, {t_max}]")));
    }
    if n_points < 10 {
        return Err(Error::InvalidArgument(format!("need at least 10 points, got {n_points}")));
    }
    let step = (t_max - t_min) / n_points as f64;
    Ok((0..n_points).map(|m| t_min + m as f64 * step).collect())
}

/// Uniform-grid mean of `f` over `[t_min, t_max)`.
pub fn numeric_lta<F>(mut f: F, t_min: f64, t_max: f64, n_points: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let grid = lta_grid(t_min, t_max, n_points)?;
    let mut total = 0.0;
    for &t in &grid {
        total += f(t)?;
    }
    Ok(total / grid.len() as f64)
}

/// `E_op(U_t)` at each time, with the shifted propagator.
pub fn opent_series(spec: &SpectralDecomposition, bi: &Bipartition, times: &[f64]) -> Result<Vec<f64>> {
    times.iter().map(|&t| renyi2_opent(&shifted_propagator(spec, t)?, bi)).collect()
}

/// Numeric LTAs of `E_op(U_t)`, `E_lin(U_t)` and `E_B(U_t U_t^dagger)` over one grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericLta {
    pub renyi2: f64,
    pub linear: f64,
    pub subsystem: f64,
}

pub fn numeric_lta_all(
    spec: &SpectralDecomposition,
    bi: &Bipartition,
    t_min: f64,
    t_max: f64,
    n_points: usize,
) -> Result<NumericLta> {
    let grid = lta_grid(t_min, t_max, n_points)?;
    let (mut r, mut l, mut s) = (0.0, 0.0, 0.0);
    for &t in &grid {
        let u = shifted_propagator(spec, t)?;
        let lin = linear_opent(&u, bi)?;
        r += -(1.0 - lin).log2();
        l += lin;
        s += subsystem_linear_entropy(&u, bi)?;
    }
    let n = grid.len() as f64;
    Ok(NumericLta { renyi2: r / n, linear: l / n, subsystem: s / n })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NrcReport {
    pub full_nrc: bool,
    pub longtime_nrc: bool,
    /// Smallest `|(lambda_i - lambda_j) - (lambda_k - lambda_l)|` over distinct ordered pairs.
    pub min_gap: f64,
}

/// `1e-8` times the spread of the spectrum in the complex plane.
pub fn default_nrc_tol(eigenvalues: &[c64]) -> f64 {
    let mut range: f64 = 0.0;
    for a in eigenvalues {
        for b in eigenvalues {
            range = range.max((a - b).norm());
        }
    }
    1e-8 * range.max(f64::MIN_POSITIVE)
}

/// Non-resonance of all pairwise differences, and of those within `longtime`.
pub fn check_nrc(eigenvalues: &[c64], longtime: &[usize], tol: Option<f64>) -> NrcReport {
    let tol = tol.unwrap_or_else(|| default_nrc_tol(eigenvalues));
    let all: Vec<usize> = (0..eigenvalues.len()).collect();
    let min_gap = min_difference_gap(eigenvalues, &all);
    let longtime_gap = min_difference_gap(eigenvalues, longtime);
    NrcReport { full_nrc: min_gap > tol, longtime_nrc: longtime_gap > tol, min_gap }
}

fn min_difference_gap(eigenvalues: &[c64], indices: &[usize]) -> f64 {
    let mut diffs: Vec<c64> = Vec::with_capacity(indices.len() * indices.len());
    for &i in indices {
        for &j in indices {
            if i != j {
                diffs.push(eigenvalues[i] - eigenvalues[j]);
            }
        }
    }
    diffs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut best = f64::INFINITY;
    for k in 0..diffs.len() {
        for next in &diffs[k + 1..] {
            if next.re - diffs[k].re >= best {
                break;
            }
            best = best.min((next - diffs[k]).norm());
        }
    }
    best
}

/// Overlap matrices of the long-time eigenvectors.
///
/// `R_ij = |<r_i|r_j>|^2`, `L_ij = |<l_i|l_j>|^2`, `(R_X)_ij = Tr[rho_i^X rho_j^X]`
/// with `rho_i^X` the reduction of `|r_i><r_i|` to `X`, likewise `L_X` from the
/// left vectors, and `(L_AB)_ij = <l_i|l_i><l_j|l_j>`.
#[derive(Clone, Debug)]
pub struct GramMatrices {
    pub r: Mat<f64>,
    pub l: Mat<f64>,
    pub r_a: Mat<f64>,
    pub l_a: Mat<f64>,
    pub r_b: Mat<f64>,
    pub l_b: Mat<f64>,
    pub l_ab: Mat<f64>,
    pub eta_l_trace: f64,
    pub n: usize,
}

pub fn gram_matrices(spec: &SpectralDecomposition, lte: &LongTimeEigenspace, bi: &Bipartition) -> Result<GramMatrices> {
    if spec.dim() != bi.dim() {
        return Err(Error::DimensionMismatch { expected: bi.dim(), found: spec.dim() });
    }
    let idx = &lte.indices;
    let n = idx.len();
    let d = spec.dim();
    let rs = Mat::from_fn(d, n, |i, k| spec.right()[(i, idx[k])]);
    let ls = Mat::from_fn(d, n, |i, k| spec.left()[(i, idx[k])]);

    let abs2 = |m: &Mat<c64>| Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].norm_sqr());
    let r = abs2(&(rs.adjoint() * &rs));
    let l = abs2(&(ls.adjoint() * &ls));
    let (r_a, r_b) = reduced_grams(&rs, bi)?;
    let (l_a, l_b) = reduced_grams(&ls, bi)?;
    let norms: Vec<f64> = (0..n).map(|k| vec_norm(ls.col_as_slice(k)).powi(2)).collect();
    let l_ab = Mat::from_fn(n, n, |i, j| norms[i] * norms[j]);
    let eta_l_trace = norms.iter().sum();
    Ok(GramMatrices { r, l, r_a, l_a, r_b, l_b, l_ab, eta_l_trace, n })
}

/// `(Tr[rho_i^A rho_j^A], Tr[rho_i^B rho_j^B])` for the columns of `vectors`.
fn reduced_grams(vectors: &Mat<c64>, bi: &Bipartition) -> Result<(Mat<f64>, Mat<f64>)> {
    let n = vectors.ncols();
    let (d_a, d_b) = (bi.d_a(), bi.d_b());
    let mut vec_a = Mat::<c64>::zeros(d_a * d_a, n);
    let mut vec_b = Mat::<c64>::zeros(d_b * d_b, n);
    for k in 0..n {
        let psi = bi.state_matrix(vectors.col_as_slice(k))?;
        let rho_a = &psi * psi.adjoint();
        let rho_b = psi.transpose() * psi.conjugate();
        for i in 0..d_a {
            for j in 0..d_a {
                vec_a[(i * d_a + j, k)] = rho_a[(i, j)];
            }
        }
        for i in 0..d_b {
            for j in 0..d_b {
                vec_b[(i * d_b + j, k)] = rho_b[(i, j)];
            }
        }
    }
    // Tr[rho sigma] = vec(rho)^dagger vec(sigma) for Hermitian rho.
    let real = |m: Mat<c64>| Mat::from_fn(n, n, |i, j| m[(i, j)].re);
    Ok((real(vec_a.adjoint() * &vec_a), real(vec_b.adjoint() * &vec_b)))
}

fn trace_product(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let n = a.nrows();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| a[(i, j)] * b[(j, i)]).sum()
}

fn diag_product(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    (0..a.nrows()).map(|i| a[(i, i)] * b[(i, i)]).sum()
}

impl GramMatrices {
    /// `Tr(R_A L_A) + Tr(R_B L_B) - sum_i (R_A)_ii (L_A)_ii`
    pub fn numerator(&self) -> f64 {
        trace_product(&self.r_a, &self.l_a) + trace_product(&self.r_b, &self.l_b) - diag_product(&self.r_a, &self.l_a)
    }

    /// `(Tr eta_L)^2 + Tr(R L) - Tr L`
    pub fn denominator(&self) -> f64 {
        let trace_l: f64 = (0..self.n).map(|i| self.l[(i, i)]).sum();
        self.eta_l_trace * self.eta_l_trace + trace_product(&self.r, &self.l) - trace_l
    }

    /// `Tr(R_B L_AB) + Tr(R_A L) - sum_i (R_A)_ii L_ii`
    pub fn subsystem_numerator(&self) -> f64 {
        trace_product(&self.r_b, &self.l_ab) + trace_product(&self.r_a, &self.l) - diag_product(&self.r_a, &self.l)
    }
}

fn positive(which: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { which, value })
    }
}

/// Closed-form long-time average of `E_op(U_t)`.
pub fn analytic_opent_lta(grams: &GramMatrices) -> Result<f64> {
    let num = positive("numerator", grams.numerator())?;
    let den = positive("denominator", grams.denominator())?;
    Ok(-(num / den).log2())
}

/// Closed-form long-time averages of `E_lin(U_t)` and `E_B(U_t U_t^dagger)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OtocLta {
    pub linear: f64,
    pub subsystem: f64,
}

impl OtocLta {
    /// Long-time average of the Haar-averaged Heisenberg OTOC.
    pub fn heisenberg(&self) -> f64 {
        self.linear - self.subsystem
    }
}

pub fn analytic_otoc_lta(grams: &GramMatrices, bi: &Bipartition) -> Result<OtocLta> {
    let num = positive("numerator", grams.numerator())?;
    let den = positive("denominator", grams.denominator())?;
    let sub = grams.subsystem_numerator();
    Ok(OtocLta { linear: 1.0 - num / den, subsystem: 1.0 - bi.d_b() as f64 * sub / den })
}

/// Everything needed to tabulate one analytic point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticLta {
    pub renyi2: f64,
    pub otoc: OtocLta,
    pub degeneracy: usize,
    pub nrc: NrcReport,
}

pub fn analytic_lta(spec: &SpectralDecomposition, lte: &LongTimeEigenspace, bi: &Bipartition) -> Result<AnalyticLta> {
    let grams = gram_matrices(spec, lte, bi)?;
    Ok(AnalyticLta {
        renyi2: analytic_opent_lta(&grams)?,
        otoc: analytic_otoc_lta(&grams, bi)?,
        degeneracy: lte.degeneracy(),
        nrc: check_nrc(spec.eigenvalues(), &lte.indices, None),
    })
}
