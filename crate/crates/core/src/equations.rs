//! The bilinear equation `XAY = B`: solvability, a canonical solution,
//! factorizations `XY = B` and the invertible matching that moves such
//! factorizations towards prescribed values on finitely many vectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, check_finite, column_space, singular_values, svd, Matrix, Vector, RANK_CUTOFF};
use crate::random;
use crate::report;
use crate::seqlab::{self, MajorizationVerdict, SequenceModel};

/// Acceptance threshold for `|XAY - B|_F / (1 + |B|_F)`.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolvabilityVerdict {
    pub solvable: bool,
    pub rank_a: usize,
    pub rank_b: usize,
    /// `majorizes(a, b)` when width models of `A` and `B` are supplied.
    pub asymptotic: Option<MajorizationVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionPair {
    #[serde(serialize_with = "report::matrix")]
    pub x: Matrix,
    #[serde(serialize_with = "report::matrix")]
    pub y: Matrix,
    /// `|X A Y - B|_F / (1 + |B|_F)`.
    #[serde(serialize_with = "report::real")]
    pub residual: f64,
}

fn rank(a: &Matrix) -> usize {
    linalg::numerical_rank(&singular_values(a), RANK_CUTOFF)
}

pub(crate) fn relative_residual(product: &Matrix, b: &Matrix) -> f64 {
    (product - b).norm() / (1.0 + b.norm())
}

fn check_square_pair(a: &Matrix, b: &Matrix) -> Result<()> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::shape(format!(
            "A is {}x{} and B is {}x{}; both must be square of equal size",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    check_finite(a, "A")?;
    check_finite(b, "B")
}

/// Finite criterion `rank B <= rank A`, plus the asymptotic criterion
/// `s_n(B) = O(s_n(A))` when both width models are given.
pub fn xay_solvable(
    a: &Matrix,
    b: &Matrix,
    a_model: Option<&SequenceModel>,
    b_model: Option<&SequenceModel>,
) -> Result<SolvabilityVerdict> {
    check_square_pair(a, b)?;
    let asymptotic = match (a_model, b_model) {
        (Some(am), Some(bm)) => Some(seqlab::majorizes(am, bm)?),
        (None, None) => None,
        _ => return Err(Error::invalid("supply both width models or neither")),
    };
    let (rank_a, rank_b) = (rank(a), rank(b));
    Ok(SolvabilityVerdict { solvable: rank_b <= rank_a, rank_a, rank_b, asymptotic })
}

/// Canonical solution of `XAY = B` built from both SVDs, with the factor
/// `S_A^{-1/2}` split evenly between `X` and `Y`.
pub fn solve_xay(a: &Matrix, b: &Matrix) -> Result<SolutionPair> {
    let verdict = xay_solvable(a, b, None, None)?;
    if !verdict.solvable {
        return Err(Error::Unsolvable(Box::new(verdict)));
    }
    let d = a.nrows();
    let r = verdict.rank_b;
    let (sa, sb) = (svd(a), svd(b));
    let mut x = Matrix::zeros(d, d);
    let mut y = Matrix::zeros(d, d);
    for k in 0..r {
        let half = sa.values[k].sqrt();
        y += sa.v.column(k) * sb.v.column(k).transpose() / half;
        x += sb.u.column(k) * sa.u.column(k).transpose() * (sb.values[k] / half);
    }
    let residual = relative_residual(&(&x * a * &y), b);
    if residual > RESIDUAL_TOL {
        return Err(Error::Numerical(format!("XAY = B solution residual {residual:e} above {RESIDUAL_TOL:e}")));
    }
    Ok(SolutionPair { x, y, residual })
}

/// Is the range of `B` contained in the range of `X A`?
pub fn first_component_member(x: &Matrix, a: &Matrix, b: &Matrix) -> Result<bool> {
    if x.ncols() != a.nrows() || x.nrows() != b.nrows() {
        return Err(Error::shape(format!(
            "X is {}x{}, A is {}x{}, B is {}x{}",
            x.nrows(),
            x.ncols(),
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let bnorm = b.norm();
    if bnorm == 0.0 {
        return Ok(true);
    }
    let q = column_space(&(x * a), RANK_CUTOFF);
    let outside = b - &q * (q.transpose() * b);
    Ok(outside.norm() <= 1e-8 * bnorm)
}

/// `Y = [I; 0]` and `X = [B | I]` on the doubled space `R^d ⊕ R^d`, so
/// that `XY = B`, `X` is onto and `Y` is injective.
pub fn factor_pair(b: &Matrix) -> Result<SolutionPair> {
    if !b.is_square() {
        return Err(Error::shape(format!("B must be square, found {}x{}", b.nrows(), b.ncols())));
    }
    check_finite(b, "B")?;
    let d = b.nrows();
    let mut y = Matrix::zeros(2 * d, d);
    y.view_mut((0, 0), (d, d)).fill_with_identity();
    let mut x = Matrix::zeros(d, 2 * d);
    x.view_mut((0, 0), (d, d)).copy_from(b);
    x.view_mut((0, d), (d, d)).fill_with_identity();
    let residual = relative_residual(&(&x * &y), b);
    Ok(SolutionPair { x, y, residual })
}

#[derive(Debug, Clone, Serialize)]
pub struct InvertibleMatch {
    #[serde(serialize_with = "report::matrix")]
    pub v: Matrix,
    #[serde(serialize_with = "report::real")]
    pub condition: f64,
    #[serde(serialize_with = "report::real")]
    pub sigma_min: f64,
    /// `|V x_i - x_i'|`.
    #[serde(serialize_with = "report::reals")]
    pub x_residuals: Vec<f64>,
    /// `|V^{-1} y_j - y_j'|`.
    #[serde(serialize_with = "report::reals")]
    pub y_residuals: Vec<f64>,
}

fn columns(vs: &[Vector]) -> Matrix {
    Matrix::from_columns(vs)
}

/// Replaces each target by itself or, when it lies within `eps/4` of the
/// span of `fixed` and the already chosen replacements, by itself plus
/// `eps/4` times a random unit vector orthogonal to that span.
fn separate<R: rand::Rng>(fixed: &[Vector], targets: &[Vector], eps: f64, rng: &mut R) -> Vec<Vector> {
    let mut span: Vec<Vector> = fixed.to_vec();
    let mut out = Vec::with_capacity(targets.len());
    for t in targets {
        let q = if span.is_empty() {
            Matrix::zeros(t.len(), 0)
        } else {
            column_space(&columns(&span), RANK_CUTOFF)
        };
        let residual = t - &q * (q.transpose() * t);
        let chosen = if residual.norm() >= eps / 4.0 {
            t.clone()
        } else {
            let mut u = random::gaussian_vector(rng, t.len());
            for _ in 0..2 {
                u -= &q * (q.transpose() * &u);
            }
            u /= u.norm();
            if u.dot(&residual) < 0.0 {
                u = -u;
            }
            t + u * (eps / 4.0)
        };
        span.push(chosen.clone());
        out.push(chosen);
    }
    out
}

fn check_family(vs: &[Vector], dim: usize, what: &str) -> Result<()> {
    for (i, v) in vs.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::shape(format!("{what} {i} has length {}, expected {dim}", v.len())));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("{what} {i} has non-finite entries")));
        }
    }
    Ok(())
}

/// Invertible `V` with `|V x_i - x_i'| < eps` and `|V^{-1} y_j - y_j'| < eps`.
///
/// Targets are first separated into families `z ≈ x'` and `w ≈ y'` such
/// that `(x, w)` and `(z, y)` are both independent; then `V` sends
/// `x_i ↦ z_i`, `w_j ↦ y_j` and an orthonormal complement of `(x, w)` onto
/// one of `(z, y)`.
pub fn match_invertible(
    xs: &[Vector],
    xs_target: &[Vector],
    ys: &[Vector],
    ys_target: &[Vector],
    eps: f64,
    seed: u64,
) -> Result<InvertibleMatch> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("eps = {eps} must be positive")));
    }
    if xs.len() != xs_target.len() || ys.len() != ys_target.len() {
        return Err(Error::invalid("each vector family needs one target per vector"));
    }
    let d = xs.first().or(ys.first()).map(|v| v.len()).ok_or_else(|| Error::invalid("no vectors given"))?;
    for (fam, name) in [(xs, "x"), (xs_target, "x target"), (ys, "y"), (ys_target, "y target")] {
        check_family(fam, d, name)?;
    }
    let k = xs.len() + ys.len();
    if k > d {
        return Err(Error::invalid(format!("dimension {d} is below |xs| + |ys| = {k}")));
    }
    for (fam, name) in [(xs, "xs"), (ys, "ys")] {
        if !fam.is_empty() && rank(&columns(fam)) < fam.len() {
            return Err(Error::invalid(format!("{name} are linearly dependent")));
        }
    }

    let mut rng = random::rng(seed);
    let w = separate(xs, ys_target, eps, &mut rng);
    let z = separate(ys, xs_target, eps, &mut rng);

    let mut src: Vec<Vector> = xs.iter().chain(&w).cloned().collect();
    let mut dst: Vec<Vector> = z.iter().chain(ys).cloned().collect();
    let complete = |vs: &[Vector]| -> Matrix {
        if vs.is_empty() {
            return Matrix::identity(d, d);
        }
        linalg::orthonormal_complement(&column_space(&columns(vs), 0.0))
    };
    let (c_src, c_dst) = (complete(&src), complete(&dst));
    src.extend(c_src.column_iter().map(|c| c.into_owned()));
    dst.extend(c_dst.column_iter().map(|c| c.into_owned()));
    if src.len() != d || dst.len() != d {
        return Err(Error::Numerical("separated families are not independent".into()));
    }
    let (s, t) = (columns(&src), columns(&dst));
    let s_inv = s.clone().try_inverse().ok_or_else(|| Error::Numerical("source basis is singular".into()))?;
    let t_inv = t.clone().try_inverse().ok_or_else(|| Error::Numerical("target basis is singular".into()))?;
    let v = &t * s_inv;
    let v_inv = &s * t_inv;

    let x_residuals: Vec<f64> = xs.iter().zip(xs_target).map(|(x, t)| (&v * x - t).norm()).collect();
    let y_residuals: Vec<f64> = ys.iter().zip(ys_target).map(|(y, t)| (&v_inv * y - t).norm()).collect();
    let sv = singular_values(&v);
    let sigma_min = *sv.last().expect("nonempty");
    let achieved = x_residuals.iter().chain(&y_residuals).copied().fold(0.0, f64::max);
    if achieved >= eps || sigma_min <= 0.0 {
        return Err(Error::Infeasible { achieved, eps });
    }
    Ok(InvertibleMatch { condition: sv[0] / sigma_min, sigma_min, v, x_residuals, y_residuals })
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxFactorization {
    pub pair: SolutionPair,
    /// `|(X V^{-1} U_1 - X0) v|` per test vector.
    #[serde(serialize_with = "report::reals")]
    pub x_residuals: Vec<f64>,
    /// `|(V Y - U_1 Y0) v|` per test vector.
    #[serde(serialize_with = "report::reals")]
    pub y_residuals: Vec<f64>,
    #[serde(serialize_with = "report::real")]
    pub v_condition: f64,
}

/// Moves the factorization `(X, Y) = factor_pair(B)` along `(X V^-1, V Y)`
/// so that, on the test vectors, `X V^-1` acts like `X0` on the first
/// summand and `V Y` like `Y0` followed by the embedding `U_1` of the first
/// summand. The product stays `B`.
pub fn approx_factorization(
    b: &Matrix,
    x0: &Matrix,
    y0: &Matrix,
    test_vectors: &[Vector],
    eps: f64,
    seed: u64,
) -> Result<ApproxFactorization> {
    let base = factor_pair(b)?;
    let d = b.nrows();
    for (m, name) in [(x0, "X0"), (y0, "Y0")] {
        if m.shape() != (d, d) {
            return Err(Error::shape(format!("{name} is {}x{}, expected {d}x{d}", m.nrows(), m.ncols())));
        }
        check_finite(m, name)?;
    }
    if test_vectors.is_empty() {
        return Err(Error::invalid("need at least one test vector"));
    }
    check_family(test_vectors, d, "test vector")?;
    if test_vectors.iter().any(|v| v.norm() == 0.0) {
        return Err(Error::invalid("test vectors must be nonzero"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("eps = {eps} must be positive")));
    }

    // reduce to an independent subfamily; other vectors are combinations
    let mut basis: Vec<Vector> = Vec::new();
    for v in test_vectors {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rank(&columns(&trial)) == trial.len() {
            basis = trial;
        }
    }
    let bm = columns(&basis);
    let coeffs = linalg::pinv(&bm, RANK_CUTOFF) * columns(test_vectors);
    let spread = coeffs.column_iter().map(|c| c.lp_norm(1)).fold(1.0, f64::max);

    let embed = |v: &Vector, second: bool| -> Vector {
        let mut out = Vector::zeros(2 * d);
        out.rows_mut(if second { d } else { 0 }, d).copy_from(v);
        out
    };
    let xnorm = linalg::spectral_norm(&base.x).max(1.0);
    let delta = eps / (2.0 * xnorm * spread);

    let xs: Vec<Vector> = basis.iter().map(|v| &base.y * v).collect();
    let xs_target: Vec<Vector> = basis.iter().map(|v| embed(&(y0 * v), false)).collect();
    let ys: Vec<Vector> = basis.iter().map(|v| embed(v, false)).collect();
    let ys_target: Vec<Vector> = basis.iter().map(|v| embed(&(x0 * v), true)).collect();
    let m = match_invertible(&xs, &xs_target, &ys, &ys_target, delta, seed)?;

    let v_inv = m
        .v
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("matched operator is singular".into()))?;
    let x = &base.x * v_inv;
    let y = &m.v * &base.y;
    let residual = relative_residual(&(&x * &y), b);

    let mut u1 = Matrix::zeros(2 * d, d);
    u1.view_mut((0, 0), (d, d)).fill_with_identity();
    let x_residuals: Vec<f64> = test_vectors.iter().map(|v| (&x * (&u1 * v) - x0 * v).norm()).collect();
    let y_residuals: Vec<f64> = test_vectors.iter().map(|v| (&y * v - &u1 * (y0 * v)).norm()).collect();
    let achieved = x_residuals.iter().chain(&y_residuals).copied().fold(residual, f64::max);
    if x_residuals.iter().chain(&y_residuals).any(|&r| r >= eps) || residual > RESIDUAL_TOL {
        return Err(Error::Infeasible { achieved, eps });
    }
    Ok(ApproxFactorization {
        pair: SolutionPair { x, y, residual },
        x_residuals,
        y_residuals,
        v_condition: m.condition,
    })
}
