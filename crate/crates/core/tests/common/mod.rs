//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use nhchain::c64;
use nhchain::DenseOperator;

pub fn cplx(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

/// Plain nested-loop Kronecker product of row-major square matrices.
pub fn kron(a: &[Vec<c64>], b: &[Vec<c64>]) -> Vec<Vec<c64>> {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![cplx(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn pauli(name: char) -> Vec<Vec<c64>> {
    let (o, one) = (cplx(0.0, 0.0), cplx(1.0, 0.0));
    match name {
        'I' => vec![vec![one, o], vec![o, one]],
        'X' => vec![vec![o, one], vec![one, o]],
        'Y' => vec![vec![o, cplx(0.0, -1.0)], vec![cplx(0.0, 1.0), o]],
        'Z' => vec![vec![one, o], vec![o, -one]],
        _ => panic!("unknown Pauli {name}"),
    }
}

/// Tensor product of single-site Paulis, the first character acting on site 1.
pub fn pauli_string(word: &str) -> Vec<Vec<c64>> {
    let mut out = vec![vec![cplx(1.0, 0.0)]];
    for c in word.chars() {
        out = kron(&out, &pauli(c));
    }
    out
}

fn word_with(l: usize, sites: &[(usize, char)]) -> String {
    (1..=l).map(|s| sites.iter().find(|(site, _)| *site == s).map(|(_, c)| *c).unwrap_or('I')).collect()
}

fn add_scaled(acc: &mut [Vec<c64>], term: &[Vec<c64>], c: c64) {
    for (row, trow) in acc.iter_mut().zip(term) {
        for (x, t) in row.iter_mut().zip(trow) {
            *x += c * t;
        }
    }
}

/// `J sum Z Z + h sum Z + cx sum X + cy sum Y` assembled from Pauli strings.
pub fn pauli_sum_chain(l: usize, j: f64, h: f64, cx: c64, cy: c64) -> DenseOperator {
    let d = 1 << l;
    let mut acc = vec![vec![cplx(0.0, 0.0); d]; d];
    for s in 1..l {
        add_scaled(&mut acc, &pauli_string(&word_with(l, &[(s, 'Z'), (s + 1, 'Z')])), cplx(j, 0.0));
    }
    for s in 1..=l {
        add_scaled(&mut acc, &pauli_string(&word_with(l, &[(s, 'Z')])), cplx(h, 0.0));
        add_scaled(&mut acc, &pauli_string(&word_with(l, &[(s, 'X')])), cx);
        add_scaled(&mut acc, &pauli_string(&word_with(l, &[(s, 'Y')])), cy);
    }
    DenseOperator::from_rows(&acc).unwrap()
}

/// Transverse-field chain with imaginary field `i gamma sum Y`.
pub fn measurement_oracle(l: usize, j: f64, g: f64, h: f64, gamma: f64) -> DenseOperator {
    pauli_sum_chain(l, j, h, cplx(g, 0.0), cplx(0.0, gamma))
}

/// Isospectral chain written as `g cosh(beta) sum X + i g sinh(beta) sum Y`.
pub fn isospectral_oracle(l: usize, j: f64, g: f64, h: f64, beta: f64) -> DenseOperator {
    pauli_sum_chain(l, j, h, cplx(g * beta.cosh(), 0.0), cplx(0.0, g * beta.sinh()))
}

fn matmul(a: &[Vec<c64>], b: &[Vec<c64>]) -> Vec<Vec<c64>> {
    let n = a.len();
    let mut out = vec![vec![cplx(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn rows(x: &DenseOperator) -> Vec<Vec<c64>> {
    (0..x.dim()).map(|i| (0..x.dim()).map(|j| x.get(i, j)).collect()).collect()
}

/// `exp(-i H t)` by Taylor series with scaling and squaring.
pub fn expm_oracle(h: &DenseOperator, t: f64) -> DenseOperator {
    let n = h.dim();
    let a: Vec<Vec<c64>> = rows(h).into_iter().map(|r| r.into_iter().map(|z| z * cplx(0.0, -t)).collect()).collect();
    let norm = a.iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scale = 0.5f64.powi(squarings);
    let a: Vec<Vec<c64>> = a.into_iter().map(|r| r.into_iter().map(|z| z * scale).collect()).collect();
    let mut result: Vec<Vec<c64>> =
        (0..n).map(|i| (0..n).map(|j| cplx(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    let mut term = result.clone();
    for k in 1..=30 {
        term = matmul(&term, &a);
        let inv = 1.0 / k as f64;
        for row in term.iter_mut() {
            for z in row.iter_mut() {
                *z *= inv;
            }
        }
        add_scaled(&mut result, &term, cplx(1.0, 0.0));
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    DenseOperator::from_rows(&result).unwrap()
}

/// Reduced operator on `keep` (sorted 1-based sites) by explicit index sums.
#[allow(clippy::needless_range_loop)]
pub fn partial_trace_oracle(x: &DenseOperator, l: usize, keep: &[usize]) -> Vec<Vec<c64>> {
    let traced: Vec<usize> = (1..=l).filter(|s| !keep.contains(s)).collect();
    let compose = |kept: usize, other: usize| {
        let mut index = 0;
        for (k, &s) in keep.iter().enumerate() {
            index |= ((kept >> (keep.len() - 1 - k)) & 1) << (l - s);
        }
        for (k, &s) in traced.iter().enumerate() {
            index |= ((other >> (traced.len() - 1 - k)) & 1) << (l - s);
        }
        index
    };
    let dk = 1 << keep.len();
    let dt = 1 << traced.len();
    let mut out = vec![vec![cplx(0.0, 0.0); dk]; dk];
    for i in 0..dk {
        for j in 0..dk {
            for e in 0..dt {
                let (row, col) = (compose(i, e), compose(j, e));
                out[i][j] += x.get(row, col);
            }
        }
    }
    out
}

/// `|v><w|` as a dense operator.
pub fn outer(v: &[c64], w: &[c64]) -> DenseOperator {
    DenseOperator::from_fn(v.len(), |i, j| v[i] * w[j].conj())
}

/// `Tr[X Y]` of two row-major matrices.
pub fn trace_product(x: &[Vec<c64>], y: &[Vec<c64>]) -> c64 {
    let n = x.len();
    let mut acc = cplx(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += x[i][k] * y[k][i];
        }
    }
    acc
}

pub fn trace(x: &[Vec<c64>]) -> c64 {
    (0..x.len()).map(|i| x[i][i]).sum()
}

/// Standard infinite-temperature OTOC `(1/d) ||[W_t, V]||_F^2 / 2` for unitary `U`.
pub fn standard_otoc(u: &DenseOperator, v: &DenseOperator, w: &DenseOperator) -> f64 {
    let wt = &(&u.adjoint() * w) * u;
    let comm = &(&wt * v) - &(v * &wt);
    comm.hs_norm_sqr() / (2.0 * u.dim() as f64)
}
