//! Propagators and normalized non-unitary evolution of pure and mixed states.

use faer::Mat;

use crate::error::{Error, Result};
use crate::operator::{c64, vec_norm, DenseOperator};
use crate::spectral::SpectralDecomposition;

/// Norms below this are treated as an annihilated state.
pub const ZERO_NORM: f64 = 1e-300;

/// Largest exponent handed to `exp` before the unshifted propagator overflows.
const MAX_EXPONENT: f64 = 700.0;

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(Vec<c64>),
    Mixed(DenseOperator),
}

impl QuantumState {
    /// Normalized pure state.
    pub fn pure(amplitudes: Vec<c64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if !(norm >= ZERO_NORM) {
            return Err(Error::ZeroNorm { norm });
        }
        Ok(Self::Pure(amplitudes.into_iter().map(|a| a / norm).collect()))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = vec![c64::new(0.0, 0.0); dim];
        v[index] = c64::new(1.0, 0.0);
        Self::Pure(v)
    }

    /// Trace-normalized density matrix; must be Hermitian to `1e-10`.
    pub fn mixed(rho: DenseOperator) -> Result<Self> {
        if !rho.is_hermitian(1e-10 * rho.max_abs().max(1.0)) {
            return Err(Error::InvalidArgument("density matrix is not Hermitian".into()));
        }
        let tr = rho.trace().re;
        if !(tr.abs() >= ZERO_NORM) {
            return Err(Error::ZeroNorm { norm: tr.abs() });
        }
        Ok(Self::Mixed(rho.scale(c64::new(1.0 / tr, 0.0))))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::Mixed(DenseOperator::identity(dim).scale(c64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Pure(v) => v.len(),
            Self::Mixed(rho) => rho.dim(),
        }
    }

    pub fn as_pure(&self) -> Result<&[c64]> {
        match self {
            Self::Pure(v) => Ok(v),
            Self::Mixed(_) => Err(Error::StateKind { expected: "pure" }),
        }
    }

    pub fn as_mixed(&self) -> Result<&DenseOperator> {
        match self {
            Self::Mixed(rho) => Ok(rho),
            Self::Pure(_) => Err(Error::StateKind { expected: "mixed" }),
        }
    }

    /// `|psi><psi|` for pure states, the state itself otherwise.
    pub fn density_matrix(&self) -> DenseOperator {
        match self {
            Self::Pure(v) => DenseOperator::from_fn(v.len(), |i, j| v[i] * v[j].conj()),
            Self::Mixed(rho) => rho.clone(),
        }
    }
}

/// `U_t = sum_i e^{-i lambda_i t} |r_i><l_i|`, unshifted.
pub fn propagator(spec: &SpectralDecomposition, t: f64) -> Result<DenseOperator> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time {t} is not finite")));
    }
    let exponent = spec.eigenvalues().iter().map(|z| z.im * t).fold(f64::NEG_INFINITY, f64::max);
    if exponent > MAX_EXPONENT {
        return Err(Error::Overflow { exponent });
    }
    Ok(spec.apply_function(|z| (c64::new(0.0, -t) * z).exp()))
}

/// Propagator of the spectrum shifted so that `max Im lambda = 0`; equal to
/// `e^{-max Im(lambda) t} U_t` and safe for any `t >= 0`.
pub fn shifted_propagator(spec: &SpectralDecomposition, t: f64) -> Result<DenseOperator> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time {t} is not finite")));
    }
    let shift = spec.max_imag();
    Ok(spec.apply_function(|z| (c64::new(0.0, -t) * z - shift * t).exp()))
}

/// `U psi / ||U psi||`.
pub fn evolve_pure(u: &DenseOperator, psi0: &QuantumState) -> Result<QuantumState> {
    let psi = psi0.as_pure()?;
    if psi.len() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: psi.len() });
    }
    normalize(u.apply(psi)).map(QuantumState::Pure)
}

/// `U rho U^dagger / Tr[U rho U^dagger]`, re-Hermitized against roundoff.
pub fn evolve_mixed(u: &DenseOperator, rho0: &QuantumState) -> Result<QuantumState> {
    let rho = rho0.as_mixed()?;
    if rho.dim() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: rho.dim() });
    }
    let out = &(u * rho) * &u.adjoint();
    let tr = out.trace().re;
    if !(tr >= ZERO_NORM) {
        return Err(Error::ZeroNorm { norm: tr });
    }
    let n = out.dim();
    let scale = 0.5 / tr;
    Ok(QuantumState::Mixed(DenseOperator::from_fn(n, |i, j| (out.get(i, j) + out.get(j, i).conj()) * scale)))
}

fn normalize(v: Vec<c64>) -> Result<Vec<c64>> {
    let norm = vec_norm(&v);
    if !(norm >= ZERO_NORM) {
        return Err(Error::ZeroNorm { norm });
    }
    Ok(v.into_iter().map(|a| a / norm).collect())
}

/// Normalized evolution of one pure state through the eigenbasis:
/// `psi(t) ~ R diag(e^{-i(lambda - i m) t}) L^dagger psi0`, `d^2` per time.
#[derive(Clone, Debug)]
pub struct SpectralEvolution<'a> {
    spec: &'a SpectralDecomposition,
    coefficients: Vec<c64>,
    shift: f64,
}

impl<'a> SpectralEvolution<'a> {
    pub fn new(spec: &'a SpectralDecomposition, psi0: &QuantumState) -> Result<Self> {
        let psi = psi0.as_pure()?;
        if psi.len() != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), found: psi.len() });
        }
        let v = Mat::from_fn(psi.len(), 1, |i, _| psi[i]);
        let c = spec.left().adjoint() * v;
        let coefficients = (0..spec.dim()).map(|i| c[(i, 0)]).collect();
        Ok(Self { spec, coefficients, shift: spec.max_imag() })
    }

    pub fn state_at(&self, t: f64) -> Result<QuantumState> {
        let n = self.spec.dim();
        let weighted: Vec<c64> = self
            .spec
            .eigenvalues()
            .iter()
            .zip(&self.coefficients)
            .map(|(&z, &c)| c * (c64::new(0.0, -t) * z - self.shift * t).exp())
            .collect();
        let right = self.spec.right();
        let mut out = vec![c64::new(0.0, 0.0); n];
        for (k, &w) in weighted.iter().enumerate() {
            if w == c64::new(0.0, 0.0) {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(right.col_as_slice(k)) {
                *o += r * w;
            }
        }
        normalize(out).map(QuantumState::Pure)
    }
}
