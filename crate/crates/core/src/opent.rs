//! Operator Schmidt decomposition, 2-Renyi and linear operator entanglement,
//! and subsystem entropies of pure states. Logarithms are base 2.

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::operator::{c64, DenseOperator};

/// Reduced-density eigenvalues below this count as zero in entropies.
pub const ENTROPY_CLIP: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Split of sites `1..=L` into `A` and its complement `B`.
///
/// Basis index `b` maps to `(a, b')` where `a` collects the bits of the sites
/// in `A` (in the given order, first site most significant) and `b'` those of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    l: usize,
    sites_a: Vec<usize>,
    sites_b: Vec<usize>,
    to_pair: Vec<(usize, usize)>,
    to_index: Vec<usize>,
}

impl Bipartition {
    pub fn new(l: usize, sites_a: &[usize]) -> Result<Self> {
        if l == 0 {
            return Err(Error::EmptyChain);
        }
        let mut seen = vec![false; l + 1];
        for &s in sites_a {
            if s == 0 || s > l {
                return Err(Error::InvalidBipartition(format!("site {s} outside 1..={l}")));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidBipartition(format!("site {s} listed twice")));
            }
        }
        let sites_b: Vec<usize> = (1..=l).filter(|&s| !seen[s]).collect();
        let extract =
            |b: usize, sites: &[usize]| sites.iter().fold(0usize, |acc, &s| (acc << 1) | ((b >> (l - s)) & 1));
        let dim = 1usize << l;
        let to_pair: Vec<(usize, usize)> = (0..dim).map(|b| (extract(b, sites_a), extract(b, &sites_b))).collect();
        let d_b = 1usize << sites_b.len();
        let mut to_index = vec![0; dim];
        for (b, &(x, y)) in to_pair.iter().enumerate() {
            to_index[x * d_b + y] = b;
        }
        Ok(Self { l, sites_a: sites_a.to_vec(), sites_b, to_pair, to_index })
    }

    /// Leftmost `len_a` sites against the rest.
    pub fn contiguous(l: usize, len_a: usize) -> Result<Self> {
        if len_a > l {
            return Err(Error::InvalidBipartition(format!("|A| = {len_a} exceeds L = {l}")));
        }
        Self::new(l, &(1..=len_a).collect::<Vec<_>>())
    }

    /// `ceil(L/2) | floor(L/2)`.
    pub fn half_cut(l: usize) -> Result<Self> {
        Self::contiguous(l, l.div_ceil(2))
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn sites_a(&self) -> &[usize] {
        &self.sites_a
    }

    pub fn sites_b(&self) -> &[usize] {
        &self.sites_b
    }

    pub fn d_a(&self) -> usize {
        1 << self.sites_a.len()
    }

    pub fn d_b(&self) -> usize {
        1 << self.sites_b.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.l
    }

    /// The same cut with the roles of `A` and `B` exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.l, &self.sites_b).expect("complement of a valid bipartition")
    }

    #[inline]
    pub fn split(&self, index: usize) -> (usize, usize) {
        self.to_pair[index]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.to_index[a * self.d_b() + b]
    }

    /// Short label such as `1,2,3|4,5`.
    pub fn label(&self) -> String {
        let fmt = |s: &[usize]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!("{}|{}", fmt(&self.sites_a), fmt(&self.sites_b))
    }

    fn check(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: dim });
        }
        Ok(())
    }

    /// `|psi>` as the `d_A x d_B` coefficient matrix.
    pub fn state_matrix(&self, psi: &[c64]) -> Result<Mat<c64>> {
        self.check(psi.len())?;
        Ok(Mat::from_fn(self.d_a(), self.d_b(), |a, b| psi[self.join(a, b)]))
    }

    /// Partial trace keeping `keep`.
    pub fn partial_trace(&self, x: &DenseOperator, keep: Subsystem) -> Result<DenseOperator> {
        self.check(x.dim())?;
        let (d_keep, d_drop) = match keep {
            Subsystem::A => (self.d_a(), self.d_b()),
            Subsystem::B => (self.d_b(), self.d_a()),
        };
        let index = |k: usize, t: usize| match keep {
            Subsystem::A => self.join(k, t),
            Subsystem::B => self.join(t, k),
        };
        Ok(DenseOperator::from_fn(d_keep, |i, j| (0..d_drop).map(|t| x.get(index(i, t), index(j, t))).sum()))
    }
}

/// `M[(a, a'), (b, b')] = X[(a, b), (a', b')]`, a `d_A^2 x d_B^2` matrix.
pub fn realign(x: &DenseOperator, bi: &Bipartition) -> Result<Mat<c64>> {
    bi.check(x.dim())?;
    let (d_a, d_b) = (bi.d_a(), bi.d_b());
    let mut m = Mat::<c64>::zeros(d_a * d_a, d_b * d_b);
    let xm = x.as_mat();
    for col in 0..x.dim() {
        let (a2, b2) = bi.split(col);
        for row in 0..x.dim() {
            let (a1, b1) = bi.split(row);
            m[(a1 * d_a + a2, b1 * d_b + b2)] = xm[(row, col)];
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    /// Nonincreasing squared singular values of the realigned operator.
    pub coefficients: Vec<f64>,
    /// Coefficients above `1e-12` times the largest.
    pub rank: usize,
}

impl SchmidtSpectrum {
    pub fn total(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    /// `sum lambda^2 / (sum lambda)^2`
    pub fn purity(&self) -> f64 {
        let total = self.total();
        self.coefficients.iter().map(|c| c * c).sum::<f64>() / (total * total)
    }
}

pub fn operator_schmidt(x: &DenseOperator, bi: &Bipartition) -> Result<SchmidtSpectrum> {
    let m = realign(x, bi)?;
    let mut coefficients: Vec<f64> =
        m.singular_values().map_err(|_| Error::EigenFailure)?.into_iter().map(|s| s * s).collect();
    coefficients.sort_by(|a, b| b.total_cmp(a));
    let top = coefficients.first().copied().unwrap_or(0.0);
    let rank = coefficients.iter().filter(|&&c| c > 1e-12 * top).count();
    Ok(SchmidtSpectrum { coefficients, rank })
}

/// `sum lambda_j^2 / (sum lambda_j)^2` from Gram moments of the realigned
/// operator: `sum lambda = ||X||_2^2`, `sum lambda^2 = ||M M^dagger||_2^2`.
pub fn schmidt_purity(x: &DenseOperator, bi: &Bipartition) -> Result<f64> {
    let m = realign(x, bi)?;
    let total = x.hs_norm_sqr();
    if !(total > 0.0) {
        return Err(Error::ZeroOperator);
    }
    let gram = if m.nrows() <= m.ncols() { &m * m.adjoint() } else { m.adjoint() * &m };
    let second = gram.squared_norm_l2();
    Ok(second / (total * total))
}

/// `-log2(sum lambda^2 / (sum lambda)^2)`
pub fn renyi2_opent(x: &DenseOperator, bi: &Bipartition) -> Result<f64> {
    Ok(-schmidt_purity(x, bi)?.log2())
}

/// `1 - sum lambda^2 / (sum lambda)^2 = 1 - 2^{-E_op}`
pub fn linear_opent(x: &DenseOperator, bi: &Bipartition) -> Result<f64> {
    Ok(1.0 - schmidt_purity(x, bi)?)
}

/// Same quantity as [`renyi2_opent`] through the singular values.
pub fn renyi2_opent_svd(x: &DenseOperator, bi: &Bipartition) -> Result<f64> {
    if !(x.hs_norm_sqr() > 0.0) {
        return Err(Error::ZeroOperator);
    }
    Ok(-operator_schmidt(x, bi)?.purity().log2())
}

/// Two-copy swap contraction
/// `sum X[a2 b1, a2' b1'] X[a1 b2, a1' b2'] conj(X[a1 b1, a1' b1']) conj(X[a2 b2, a2' b2'])`
/// divided by `||X||_2^4`. Costs `d^4`; intended as a reference for small chains.
pub fn swap_contraction_purity(x: &DenseOperator, bi: &Bipartition) -> Result<f64> {
    bi.check(x.dim())?;
    let norm = x.hs_norm_sqr();
    if !(norm > 0.0) {
        return Err(Error::ZeroOperator);
    }
    let (d_a, d_b) = (bi.d_a(), bi.d_b());
    let el = |a: usize, b: usize, ap: usize, bp: usize| x.get(bi.join(a, b), bi.join(ap, bp));
    let mut total = c64::new(0.0, 0.0);
    for a1 in 0..d_a {
        for a1p in 0..d_a {
            for a2 in 0..d_a {
                for a2p in 0..d_a {
                    for b1 in 0..d_b {
                        for b1p in 0..d_b {
                            let first = el(a2, b1, a2p, b1p) * el(a1, b1, a1p, b1p).conj();
                            for b2 in 0..d_b {
                                for b2p in 0..d_b {
                                    total += first * el(a1, b2, a1p, b2p) * el(a2, b2, a2p, b2p).conj();
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(total.re / (norm * norm))
}

/// Von Neumann entropy (base 2) of the reduced state on `sites`.
pub fn subsystem_entropy(psi: &[c64], l: usize, sites: &[usize]) -> Result<f64> {
    let bi = Bipartition::new(l, sites)?;
    entanglement_entropy(psi, &bi)
}

/// Von Neumann entropy (base 2) of `Tr_B |psi><psi|`.
pub fn entanglement_entropy(psi: &[c64], bi: &Bipartition) -> Result<f64> {
    let m = bi.state_matrix(psi)?;
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let probs = m.singular_values().map_err(|_| Error::EigenFailure)?;
    Ok(entropy_of(probs.into_iter().map(|s| s * s / norm)))
}

/// Von Neumann entropy (base 2) of a density matrix.
pub fn density_entropy(rho: &DenseOperator) -> Result<f64> {
    let ev = rho.as_mat().self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::EigenFailure)?;
    Ok(entropy_of(ev.into_iter()))
}

fn entropy_of(probs: impl Iterator<Item = f64>) -> f64 {
    let s: f64 = probs.filter(|&p| p > ENTROPY_CLIP).map(|p| -p * p.log2()).sum();
    s.max(0.0)
}

/// `Tr[rho_A^2]` of `|psi>`.
pub fn reduced_purity(psi: &[c64], bi: &Bipartition, keep: Subsystem) -> Result<f64> {
    let m = bi.state_matrix(psi)?;
    let rho = match keep {
        Subsystem::A => &m * m.adjoint(),
        Subsystem::B => m.transpose() * m.conjugate(),
    };
    Ok(rho.squared_norm_l2())
}
