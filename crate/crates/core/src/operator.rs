//! Dense complex operators over the qubit computational basis.
//!
//! Basis state `b` of an `L`-site chain assigns site `s` (1-based) the bit
//! `(b >> (L - s)) & 1`, so site 1 is the most significant bit. Every module in
//! the crate relies on this ordering when it embeds local operators, takes
//! partial traces or realigns operators across a bipartition.

use std::ops::{Add, Mul, Sub};

use faer::{Mat, MatRef};

use crate::error::{Error, Result};

pub use faer::c64;

/// 2x2 single-site matrices, row-major `[[<0|op|0>, <0|op|1>], [<1|op|0>, <1|op|1>]]`.
pub type SiteMatrix = [[c64; 2]; 2];

pub mod pauli {
    use super::{c64, SiteMatrix};

    const O: c64 = c64 { re: 0.0, im: 0.0 };
    const ONE: c64 = c64 { re: 1.0, im: 0.0 };
    const I_: c64 = c64 { re: 0.0, im: 1.0 };

    pub const IDENTITY: SiteMatrix = [[ONE, O], [O, ONE]];
    pub const X: SiteMatrix = [[O, ONE], [ONE, O]];
    pub const Y: SiteMatrix = [[O, c64 { re: 0.0, im: -1.0 }], [I_, O]];
    pub const Z: SiteMatrix = [[ONE, O], [O, c64 { re: -1.0, im: 0.0 }]];
    /// `(X + iY) / 2 = |0><1|`
    pub const RAISE: SiteMatrix = [[O, ONE], [O, O]];
    /// `(X - iY) / 2 = |1><0|`
    pub const LOWER: SiteMatrix = [[O, O], [ONE, O]];
}

/// Bit carried by `site` (1-based) of basis index `b` in an `l`-site chain.
#[inline]
pub fn site_bit(b: usize, site: usize, l: usize) -> usize {
    (b >> (l - site)) & 1
}

/// Square complex matrix acting on `C^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    mat: Mat<c64>,
}

impl DenseOperator {
    pub fn from_mat(mat: Mat<c64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch { expected: mat.nrows(), found: mat.ncols() });
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_square(mat: Mat<c64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { mat: Mat::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: Mat::identity(dim, dim) }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> c64) -> Self {
        Self { mat: Mat::from_fn(dim, dim, f) }
    }

    pub fn from_diagonal(diag: &[c64]) -> Self {
        let mut mat = Mat::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            mat[(i, i)] = v;
        }
        Self { mat }
    }

    /// Builds from row-major rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<c64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    /// Embeds a single-site matrix at `site` (1-based) of an `l`-site chain.
    pub fn single_site(op: &SiteMatrix, site: usize, l: usize) -> Result<Self> {
        if site == 0 || site > l {
            return Err(Error::InvalidArgument(format!("site {site} outside 1..={l}")));
        }
        let dim = 1usize << l;
        let mask = 1usize << (l - site);
        let mut mat = Mat::<c64>::zeros(dim, dim);
        for col in 0..dim {
            let bit = (col & mask != 0) as usize;
            for (out_bit, entries) in op.iter().enumerate() {
                let v = entries[bit];
                if v != c64::new(0.0, 0.0) {
                    let row = if out_bit == 1 { col | mask } else { col & !mask };
                    mat[(row, col)] += v;
                }
            }
        }
        Ok(Self { mat })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    #[inline]
    pub fn as_mat(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.mat
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> c64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint().to_owned() }
    }

    pub fn scale(&self, factor: c64) -> Self {
        Self { mat: Mat::from_fn(self.dim(), self.dim(), |i, j| self.mat[(i, j)] * factor) }
    }

    /// `Tr[X^dagger X]`
    pub fn hs_norm_sqr(&self) -> f64 {
        let n = self.mat.norm_l2();
        n * n
    }

    pub fn trace(&self) -> c64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.norm_max()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).norm_max()
    }

    pub fn is_finite(&self) -> bool {
        self.mat.is_all_finite()
    }

    /// Entrywise `|H_ij - conj(H_ji)| <= tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..=j).all(|i| (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm() <= tol))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.mat[(i, j)] == c64::new(0.0, 0.0)))
    }

    pub fn apply(&self, v: &[c64]) -> Vec<c64> {
        assert_eq!(v.len(), self.dim());
        let n = self.dim();
        let mut out = vec![c64::new(0.0, 0.0); n];
        for (j, &x) in v.iter().enumerate() {
            if x == c64::new(0.0, 0.0) {
                continue;
            }
            let col = self.mat.col_as_slice(j);
            for (o, &a) in out.iter_mut().zip(col) {
                *o += a * x;
            }
        }
        out
    }

    /// Column `j` as a contiguous slice.
    pub fn column(&self, j: usize) -> &[c64] {
        self.mat.col_as_slice(j)
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { mat: &self.mat * &rhs.mat }
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { mat: &self.mat + &rhs.mat }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator { mat: &self.mat - &rhs.mat }
    }
}

impl From<DenseOperator> for Mat<c64> {
    fn from(op: DenseOperator) -> Self {
        op.mat
    }
}

pub(crate) fn vec_norm(v: &[c64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn inner(a: &[c64], b: &[c64]) -> c64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
