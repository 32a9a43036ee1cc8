//! Seeded random instances. All randomness in the crate flows through
//! ChaCha8 so results are reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Matrix, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vector {
    Vector::from_fn(len, |_, _| rng.sample(StandardNormal))
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vector {
    loop {
        let v = gaussian_vector(rng, len);
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// A `p x m` matrix with orthonormal columns, Haar-distributed up to the
/// sign convention of the QR factorization.
pub fn orthonormal_columns<R: Rng + ?Sized>(rng: &mut R, p: usize, m: usize) -> Matrix {
    assert!(m <= p, "cannot draw {m} orthonormal columns in dimension {p}");
    if m == 0 {
        return Matrix::zeros(p, 0);
    }
    let g = gaussian_matrix(rng, p, m);
    g.qr().q()
}

/// Gaussian matrix of the given shape and rank (product of two Gaussian
/// factors).
pub fn matrix_of_rank<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> Matrix {
    gaussian_matrix(rng, rows, rank) * gaussian_matrix(rng, rank, cols)
}
