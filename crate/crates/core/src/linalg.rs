//! Dense real linear algebra used throughout the crate.
//!
//! The SVD here is a one-sided (Hestenes) Jacobi iteration. Right rotations
//! only mix columns, so rounding errors stay relative to each row's norm and
//! row-graded inputs such as `diag(a) * B` keep their small singular values
//! to high relative accuracy. Everything that needs singular values goes
//! through [`svd`] / [`full_svd`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Default relative rank cutoff: singular values below `RANK_CUTOFF * s_1`
/// are treated as zero.
pub const RANK_CUTOFF: f64 = 1e-12;

const MAX_SWEEPS: usize = 80;

/// Singular value decomposition `A = U diag(s) V^T`.
///
/// `values` are sorted nonincreasing; ties keep the original column order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub values: Vec<f64>,
    pub v: Matrix,
}

fn scaled_norm(col: &[f64]) -> f64 {
    let big = col.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if big == 0.0 || !big.is_finite() {
        return big;
    }
    let s: f64 = col.iter().map(|x| (x / big) * (x / big)).sum();
    big * s.sqrt()
}

/// One-sided Jacobi on a matrix with `rows >= cols`. Returns the rotated
/// columns `W = A V` and the accumulated rotation `V`.
fn jacobi_tall(a: &Matrix) -> (Matrix, Matrix) {
    let (m, n) = a.shape();
    let mut v = Matrix::identity(n, n);
    let scale = a.amax();
    if scale == 0.0 {
        return (a.clone(), v);
    }
    // column-major storage: column j is data[j*m .. (j+1)*m]
    let mut w: Vec<f64> = a.iter().map(|x| x / scale).collect();
    let mut vd: Vec<f64> = v.as_slice().to_vec();
    let tol = (m as f64).max(1.0) * f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let np = scaled_norm(&w[p * m..(p + 1) * m]);
                let nq = scaled_norm(&w[q * m..(q + 1) * m]);
                if np == 0.0 || nq == 0.0 {
                    continue;
                }
                let mut cos = 0.0;
                for i in 0..m {
                    cos += (w[p * m + i] / np) * (w[q * m + i] / nq);
                }
                if cos.abs() <= tol {
                    continue;
                }
                let zeta = (nq / np - np / nq) / (2.0 * cos);
                let t = zeta.signum() / (zeta.abs() + 1.0f64.hypot(zeta));
                if t == 0.0 || !t.is_finite() {
                    continue;
                }
                let c = 1.0 / 1.0f64.hypot(t);
                let s = c * t;
                for i in 0..m {
                    let xp = w[p * m + i];
                    let xq = w[q * m + i];
                    w[p * m + i] = c * xp - s * xq;
                    w[q * m + i] = s * xp + c * xq;
                }
                for i in 0..n {
                    let xp = vd[p * n + i];
                    let xq = vd[q * n + i];
                    vd[p * n + i] = c * xp - s * xq;
                    vd[q * n + i] = s * xp + c * xq;
                }
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }
    let w = Matrix::from_vec(m, n, w.into_iter().map(|x| x * scale).collect());
    v = Matrix::from_vec(n, n, vd);
    (w, v)
}

fn svd_tall(a: &Matrix) -> Svd {
    let (m, n) = a.shape();
    let (w, v) = jacobi_tall(a);
    let norms: Vec<f64> = (0..n)
        .map(|j| scaled_norm(w.column(j).as_slice()))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal values keep original index order
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut u = Matrix::zeros(m, n);
    let mut vs = Matrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        values.push(s);
        if s > 0.0 {
            u.set_column(k, &(w.column(j) / s));
        }
        vs.set_column(k, &v.column(j));
    }
    Svd { u, values, v: vs }
}

/// Thin SVD: `u` is `m x k`, `v` is `n x k` with `k = min(m, n)`.
///
/// Columns of `u` (or `v` for wide inputs) belonging to exactly zero
/// singular values are zero vectors; use [`full_svd`] when complete bases
/// are needed.
pub fn svd(a: &Matrix) -> Svd {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Svd {
            u: Matrix::zeros(m, 0),
            values: Vec::new(),
            v: Matrix::zeros(n, 0),
        };
    }
    if m >= n {
        svd_tall(a)
    } else {
        let t = svd_tall(&a.transpose());
        Svd {
            u: t.v,
            values: t.values,
            v: t.u,
        }
    }
}

/// SVD with square orthogonal factors: `u` is `m x m`, `v` is `n x n`.
pub fn full_svd(a: &Matrix) -> Svd {
    let (m, n) = a.shape();
    let thin = svd(a);
    let k = thin.values.len();
    let complete = |basis: &Matrix, dim: usize| -> Matrix {
        let live: Vec<usize> = (0..basis.ncols())
            .filter(|&j| basis.column(j).norm() > 0.5)
            .collect();
        let kept = basis.select_columns(&live);
        let rest = orthonormal_complement(&kept);
        let mut out = Matrix::zeros(dim, dim);
        for (c, j) in live.iter().enumerate() {
            out.set_column(c, &basis.column(*j));
        }
        for c in 0..rest.ncols() {
            out.set_column(live.len() + c, &rest.column(c));
        }
        out
    };
    let u = if thin.u.ncols() == m && (0..k).all(|j| thin.u.column(j).norm() > 0.5) {
        thin.u
    } else {
        complete(&thin.u, m)
    };
    let v = if thin.v.ncols() == n && (0..k).all(|j| thin.v.column(j).norm() > 0.5) {
        thin.v
    } else {
        complete(&thin.v, n)
    };
    Svd {
        u,
        values: thin.values,
        v,
    }
}

pub fn singular_values(a: &Matrix) -> Vec<f64> {
    svd(a).values
}

pub fn spectral_norm(a: &Matrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Number of values above `rel_cutoff * values[0]` (all positive values when
/// `rel_cutoff == 0`). `values` must be sorted nonincreasing.
pub fn numerical_rank(values: &[f64], rel_cutoff: f64) -> usize {
    let top = match values.first() {
        Some(&s) if s > 0.0 => s,
        _ => return 0,
    };
    let floor = rel_cutoff * top;
    values.iter().take_while(|&&s| s > floor && s > 0.0).count()
}

/// Orthonormal basis of the complement of the span of `q`, whose columns must
/// be orthonormal. Returns a `p x (p - m)` matrix.
pub fn orthonormal_complement(q: &Matrix) -> Matrix {
    let p = q.nrows();
    let m = q.ncols();
    if m == 0 {
        return Matrix::identity(p, p);
    }
    if m >= p {
        return Matrix::zeros(p, 0);
    }
    let qr = q.clone().qr();
    let mut full_t = Matrix::identity(p, p);
    qr.q_tr_mul(&mut full_t);
    let full = full_t.transpose();
    full.columns(m, p - m).into_owned()
}

/// Orthonormal basis for the column space of `a`.
pub fn column_space(a: &Matrix, rel_cutoff: f64) -> Matrix {
    let s = svd(a);
    let r = numerical_rank(&s.values, rel_cutoff);
    s.u.columns(0, r).into_owned()
}

/// Orthonormal basis for the kernel of `a`, an `n x (n - rank)` matrix.
pub fn null_space(a: &Matrix, rel_cutoff: f64) -> Matrix {
    let n = a.ncols();
    if a.nrows() == 0 {
        return Matrix::identity(n, n);
    }
    let s = full_svd(a);
    let r = numerical_rank(&s.values, rel_cutoff);
    s.v.columns(r, n - r).into_owned()
}

pub fn is_orthonormal(q: &Matrix, tol: f64) -> bool {
    let g = q.transpose() * q;
    let m = q.ncols();
    (g - Matrix::identity(m, m)).amax() <= tol
}

pub fn check_finite(a: &Matrix, what: &str) -> Result<()> {
    if let Some(pos) = a.iter().position(|x| !x.is_finite()) {
        let (r, c) = (pos % a.nrows(), pos / a.nrows());
        return Err(Error::invalid(format!(
            "{what}: non-finite entry at ({r}, {c})"
        )));
    }
    Ok(())
}

/// Smallest and largest eigenvalue of the symmetric part of `s`.
pub fn symmetric_extremes(s: &Matrix) -> (f64, f64) {
    if s.nrows() == 0 {
        return (0.0, 0.0);
    }
    let sym = (s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Moore-Penrose pseudo-inverse with the given relative cutoff.
pub fn pinv(a: &Matrix, rel_cutoff: f64) -> Matrix {
    let s = svd(a);
    let r = numerical_rank(&s.values, rel_cutoff);
    let mut out = Matrix::zeros(a.ncols(), a.nrows());
    for j in 0..r {
        out += s.v.column(j) * s.u.column(j).transpose() / s.values[j];
    }
    out
}

/// Rank of a list of matrices viewed as vectors in `R^{rows*cols}`.
pub fn vectorized_rank(ms: &[Matrix], rel_cutoff: f64) -> usize {
    if ms.is_empty() {
        return 0;
    }
    let len = ms[0].len();
    let stacked = Matrix::from_fn(len, ms.len(), |i, j| ms[j].as_slice()[i]);
    numerical_rank(&singular_values(&stacked), rel_cutoff)
}
