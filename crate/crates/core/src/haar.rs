//! Haar-random unitaries and complex Gaussian matrices.

use faer::Mat;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::operator::{c64, DenseOperator};

/// Generator for sample `index` of a run seeded with `seed`; streams are
/// independent so samples can be drawn in any order.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Entries with independent real and imaginary parts of variance `1/2`, so `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat<c64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64::new(re * scale, im * scale)
    })
}

/// QR of a complex Gaussian matrix with the phases of `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseOperator {
    let g = complex_gaussian(dim, dim, rng);
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let phases: Vec<c64> = (0..dim)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                c64::new(1.0, 0.0)
            }
        })
        .collect();
    DenseOperator::from_fn(dim, |i, j| q[(i, j)] * phases[j])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_and_deterministic() {
        let u = haar_unitary(16, &mut sample_rng(7, 3));
        assert!((&u.adjoint() * &u).max_abs_diff(&DenseOperator::identity(16)) < 1e-12);
        assert_eq!(u, haar_unitary(16, &mut sample_rng(7, 3)));
        assert_ne!(u, haar_unitary(16, &mut sample_rng(7, 4)));
    }

    #[test]
    fn first_moment_vanishes_and_second_matches() {
        // E[U_00] = 0 and E|U_00|^2 = 1/d for Haar U.
        let d = 4;
        let n = 4000;
        let (mut first, mut second) = (c64::new(0.0, 0.0), 0.0);
        for k in 0..n {
            let u = haar_unitary(d, &mut sample_rng(11, k));
            first += u.get(0, 0);
            second += u.get(0, 0).norm_sqr();
        }
        let first = first / n as f64;
        let second = second / n as f64;
        assert!(first.norm() < 0.05, "{first}");
        assert!((second - 0.25).abs() < 0.02, "{second}");
    }
}
