//! Oracles and instance generators shared by the integration tests. The
//! oracles avoid the library's SVD and eigen routines: eigenvalues come
//! from a classical two-sided Jacobi iteration, and cover/expansion
//! decisions from sampling plus local search.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use widthlab::linalg::{Matrix, Vector};
use widthlab::random;
use widthlab::spectra::{self, Ellipsoid};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// nonincreasing.
pub fn jacobi_eigenvalues(s: &Matrix) -> Vec<f64> {
    let n = s.nrows();
    let mut a = (s + s.transpose()) * 0.5;
    for _sweep in 0..100 {
        let total = a.norm_squared();
        let diag: f64 = a.diagonal().norm_squared();
        let off = total - diag;
        if off <= 1e-32 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Singular values from the eigenvalues `±σ` of `[[0, A], [A^T, 0]]`.
pub fn oracle_singular_values(a: &Matrix) -> Vec<f64> {
    let (m, n) = a.shape();
    let mut aug = Matrix::zeros(m + n, m + n);
    aug.view_mut((0, m), (m, n)).copy_from(a);
    aug.view_mut((m, 0), (n, m)).copy_from(&a.transpose());
    jacobi_eigenvalues(&aug).into_iter().take(m.min(n)).map(|x| x.max(0.0)).collect()
}

fn perturb_on_sphere(rng: &mut ChaCha8Rng, u: &Vector, step: f64) -> Vector {
    let v = u + random::gaussian_vector(rng, u.len()) * step;
    let n = v.norm();
    if n == 0.0 {
        u.clone()
    } else {
        v / n
    }
}

/// Maximizes `score` over the unit sphere: best of `samples` random points,
/// then local random search from the best few.
fn sphere_search<F: Fn(&Vector) -> f64>(rng: &mut ChaCha8Rng, dim: usize, samples: usize, score: F) -> (Vector, f64) {
    let mut pool: Vec<(f64, Vector)> = (0..samples)
        .map(|_| {
            let u = random::unit_vector(rng, dim);
            (score(&u), u)
        })
        .collect();
    pool.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = (pool[0].1.clone(), pool[0].0);
    for (s0, u0) in pool.into_iter().take(4) {
        let (mut u, mut s) = (u0, s0);
        let mut step = 0.3;
        for _ in 0..400 {
            let cand = perturb_on_sphere(rng, &u, step);
            let sc = score(&cand);
            if sc > s {
                u = cand;
                s = sc;
            } else {
                step *= 0.97;
            }
            if step < 1e-9 {
                break;
            }
        }
        if s > best.1 {
            best = (u, s);
        }
    }
    best
}

/// Cover decision by sampling: every boundary point `A2 u` of `E2` must be
/// a member of the ellipsoid generated by `T A1`.
pub fn cover_by_sampling(rng: &mut ChaCha8Rng, t: &Matrix, a1: &Matrix, a2: &Matrix, samples: usize) -> bool {
    let img = Ellipsoid::new(t * a1).expect("finite image generator");
    let scale = 1.0 + a2.norm();
    let score = |u: &Vector| {
        let y = a2 * u;
        let (pre, residual) = spectra::preimage_norm(&img, &y).unwrap();
        if residual > 1e-9 * scale {
            1e3 + residual / scale
        } else {
            pre
        }
    };
    let (u, _) = sphere_search(rng, a2.ncols(), samples, score);
    spectra::ellipsoid_membership(&img, &(a2 * &u), 1e-9).unwrap()
}

/// Expansion decision by sampling: `|A T x|^2 - |A x|^2` must not go
/// negative on the unit sphere.
pub fn expanding_by_sampling(rng: &mut ChaCha8Rng, t: &Matrix, a: &Matrix, samples: usize) -> bool {
    let at = a * t;
    let scale = 1.0 + a.norm_squared() + at.norm_squared();
    let score = |x: &Vector| (a * x).norm_squared() - (&at * x).norm_squared();
    let (_, worst) = sphere_search(rng, a.ncols(), samples, score);
    worst <= 1e-9 * scale
}

/// Random `d x d` matrix, rank-deficient with probability `p_deficient`.
pub fn random_generator(rng: &mut ChaCha8Rng, d: usize, p_deficient: f64) -> Matrix {
    if d > 1 && rng.random::<f64>() < p_deficient {
        let r = rng.random_range(1..d);
        random::matrix_of_rank(rng, d, d, r)
    } else {
        random::gaussian_matrix(rng, d, d)
    }
}

/// Random matrix with prescribed singular values.
pub fn with_singular_values(rng: &mut ChaCha8Rng, values: &[f64]) -> Matrix {
    let d = values.len();
    let u = random::orthonormal_columns(rng, d, d);
    let v = random::orthonormal_columns(rng, d, d);
    u * Matrix::from_diagonal(&Vector::from_column_slice(values)) * v.transpose()
}

/// A random `(T, A1, A2)` cover instance with dimension at most `max_d`.
/// Half of them are built as `A2 = T A1 C` with `|C|` near 1, so both
/// verdicts occur often.
pub fn cover_instance(rng: &mut ChaCha8Rng, max_d: usize) -> (Matrix, Matrix, Matrix) {
    let d = rng.random_range(1..=max_d);
    let a1 = random_generator(rng, d, 0.1);
    let t = random::gaussian_matrix(rng, d, d) * 10f64.powf(rng.random_range(-0.5..0.5));
    let a2 = if rng.random::<bool>() {
        let c = random::gaussian_matrix(rng, d, d);
        let cn = widthlab::linalg::spectral_norm(&c).max(1e-12);
        &t * &a1 * (c * (rng.random_range(0.7..1.3) / cn))
    } else {
        random_generator(rng, d, 0.1)
    };
    (t, a1, a2)
}
