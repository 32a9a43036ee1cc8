//! s-numbers, Kolmogorov widths and sections of ellipsoids `K = A(B)`.
//!
//! Indexing convention, used everywhere in the crate:
//!
//! * s-numbers are 1-indexed: `s_1 >= s_2 >= ...` ([`SingularSpectrum::s`]);
//! * widths are 0-indexed: `d_0 >= d_1 >= ...` ([`WidthSequence::d`]);
//! * for an ellipsoid, `d_n(A(B)) = s_{n+1}(A)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    self, check_finite, full_svd, numerical_rank, orthonormal_complement, svd, Matrix, Vector,
    RANK_CUTOFF,
};
use crate::report;

/// Orthonormality tolerance for subspace arguments.
pub const ORTHONORMAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularSpectrum {
    #[serde(serialize_with = "report::reals")]
    pub values: Vec<f64>,
    pub rank: usize,
}

impl SingularSpectrum {
    /// Builds a spectrum from nonincreasing values, counting the rank with a
    /// relative cutoff.
    pub fn from_values(values: Vec<f64>, rel_cutoff: f64) -> Self {
        let rank = numerical_rank(&values, rel_cutoff);
        SingularSpectrum { values, rank }
    }

    /// `s_n` for `n >= 1`; zero past the end and past the rank.
    pub fn s(&self, n: usize) -> f64 {
        assert!(n >= 1, "s-numbers are 1-indexed");
        if n > self.rank {
            0.0
        } else {
            self.values[n - 1]
        }
    }

    /// The values above the rank cutoff.
    pub fn positive(&self) -> &[f64] {
        &self.values[..self.rank]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthSequence {
    #[serde(serialize_with = "report::reals")]
    pub values: Vec<f64>,
}

impl WidthSequence {
    /// `d_n` for `n >= 0`; zero past the stored values.
    pub fn d(&self, n: usize) -> f64 {
        self.values.get(n).copied().unwrap_or(0.0)
    }
}

/// The ellipsoid `A(B)` for a generator `A: R^n -> R^p`.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    generator: Matrix,
    span_basis: Matrix,
    domain_basis: Matrix,
    spectrum: SingularSpectrum,
    rank_cutoff: f64,
}

impl Ellipsoid {
    pub fn new(generator: Matrix) -> Result<Self> {
        Self::with_rank_cutoff(generator, RANK_CUTOFF)
    }

    /// Like [`Ellipsoid::new`] with an explicit relative rank cutoff. A
    /// cutoff of zero counts every positive singular value, which is exact
    /// for diagonal generators.
    pub fn with_rank_cutoff(generator: Matrix, rank_cutoff: f64) -> Result<Self> {
        if generator.nrows() == 0 || generator.ncols() == 0 {
            return Err(Error::invalid("generator must have positive dimensions"));
        }
        check_finite(&generator, "generator")?;
        if !(0.0..1.0).contains(&rank_cutoff) {
            return Err(Error::invalid(format!("rank cutoff {rank_cutoff} outside [0, 1)")));
        }
        let s = svd(&generator);
        let spectrum = SingularSpectrum::from_values(s.values, rank_cutoff);
        let r = spectrum.rank;
        Ok(Ellipsoid {
            span_basis: s.u.columns(0, r).into_owned(),
            domain_basis: s.v.columns(0, r).into_owned(),
            generator,
            spectrum,
            rank_cutoff,
        })
    }

    /// `diag(values)(B)` with exact rank (every nonzero value counts).
    pub fn from_diagonal(values: &[f64]) -> Result<Self> {
        Self::with_rank_cutoff(Matrix::from_diagonal(&Vector::from_column_slice(values)), 0.0)
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn ambient_dim(&self) -> usize {
        self.generator.nrows()
    }

    /// Orthonormal basis of the linear span of the ellipsoid, ordered by
    /// decreasing semi-axis.
    pub fn span_basis(&self) -> &Matrix {
        &self.span_basis
    }

    pub fn spectrum(&self) -> &SingularSpectrum {
        &self.spectrum
    }

    pub fn rank(&self) -> usize {
        self.spectrum.rank
    }

    pub fn rank_cutoff(&self) -> f64 {
        self.rank_cutoff
    }

    /// The same ellipsoid scaled by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid(format!("scale factor {c} must be positive")));
        }
        let mut out = self.clone();
        out.generator *= c;
        for v in &mut out.spectrum.values {
            *v *= c;
        }
        Ok(out)
    }
}

pub fn singular_spectrum(a: &Matrix) -> Result<SingularSpectrum> {
    check_finite(a, "matrix")?;
    Ok(SingularSpectrum::from_values(linalg::singular_values(a), RANK_CUTOFF))
}

/// Widths `d_n = s_{n+1}` below the rank, zero from the rank on.
pub fn kolmogorov_widths(e: &Ellipsoid) -> WidthSequence {
    let spec = e.spectrum();
    let values = (0..spec.len())
        .map(|n| if n < spec.rank { spec.values[n] } else { 0.0 })
        .collect();
    WidthSequence { values }
}

/// The section `K ∩ Y^⊥`: its s-numbers and the orthonormal directions of
/// its semi-axes in the ambient space, in matching order.
#[derive(Debug, Clone)]
pub struct Section {
    pub spectrum: SingularSpectrum,
    pub directions: Matrix,
}

fn check_subspace(e: &Ellipsoid, y: &Matrix) -> Result<()> {
    if y.nrows() != e.ambient_dim() {
        return Err(Error::shape(format!(
            "subspace has {} rows, ellipsoid ambient dimension is {}",
            y.nrows(),
            e.ambient_dim()
        )));
    }
    check_finite(y, "subspace")?;
    if y.ncols() > 0 && !linalg::is_orthonormal(y, ORTHONORMAL_TOL) {
        return Err(Error::invalid("subspace columns are not orthonormal"));
    }
    Ok(())
}

/// Section of `e` by the orthogonal complement of the column space of `y`.
///
/// When `e` spans its whole ambient space the section is computed through
/// the inverse form `K ∩ Y^⊥ = { Z c : |S^-1 U^T Z c| <= 1 }` with `Z` an
/// orthonormal basis of `Y^⊥`; the matrix `S^-1 U^T Z` is row-graded, so
/// tiny semi-axes come out with full relative accuracy. Otherwise the
/// restriction of `A` to `ker(P_Y A)` is used directly.
pub fn section(e: &Ellipsoid, y: &Matrix) -> Result<Section> {
    check_subspace(e, y)?;
    let p = e.ambient_dim();
    let m = y.ncols();
    if m == 0 {
        return Ok(Section {
            spectrum: e.spectrum.clone(),
            directions: e.span_basis.clone(),
        });
    }
    if m > p {
        return Err(Error::invalid(format!("{m} columns exceed ambient dimension {p}")));
    }

    if e.rank() == p {
        let z = orthonormal_complement(y);
        let k = z.ncols();
        let inv_s = Vector::from_iterator(p, e.spectrum.values[..p].iter().map(|s| 1.0 / s));
        let g = Matrix::from_diagonal(&inv_s) * e.span_basis.transpose() * &z;
        let gs = svd(&g);
        let values: Vec<f64> = gs.values.iter().rev().map(|mu| 1.0 / mu).collect();
        let mut directions = Matrix::zeros(p, k);
        for n in 0..k {
            directions.set_column(n, &(&z * gs.v.column(k - 1 - n)));
        }
        return Ok(Section {
            spectrum: SingularSpectrum::from_values(values, e.rank_cutoff),
            directions,
        });
    }

    let a = &e.generator;
    let cutoff = e.rank_cutoff.max(RANK_CUTOFF);
    let s1 = e.spectrum.values.first().copied().unwrap_or(0.0);
    let constraint = y.transpose() * a;
    let cs = full_svd(&constraint);
    let crank = cs.values.iter().filter(|&&v| v > cutoff * s1).count();
    let n = a.ncols();
    let kernel = cs.v.columns(crank, n - crank).into_owned();
    let restricted = a * &kernel;
    let rs = svd(&restricted);
    let spectrum = SingularSpectrum::from_values(rs.values, cutoff);
    let directions = rs.u.columns(0, spectrum.rank).into_owned();
    Ok(Section {
        spectrum,
        directions,
    })
}

/// s-numbers of the restriction of the generator to `ker(P_Y A)`; these are
/// the widths of `K ∩ Y^⊥` shifted by one index.
pub fn section_spectrum(e: &Ellipsoid, y: &Matrix) -> Result<SingularSpectrum> {
    Ok(section(e, y)?.spectrum)
}

/// Ellipsoid generated by the rank-`r` truncated SVD of the generator.
pub fn truncate_ellipsoid(e: &Ellipsoid, r: usize) -> Result<Ellipsoid> {
    if r == 0 || r > e.rank() {
        return Err(Error::invalid(format!(
            "truncation rank {r} outside 1..={}",
            e.rank()
        )));
    }
    let u = e.span_basis.columns(0, r).into_owned();
    let v = e.domain_basis.columns(0, r).into_owned();
    let s = Vector::from_column_slice(&e.spectrum.values[..r]);
    let generator = &u * Matrix::from_diagonal(&s) * v.transpose();
    let mut values = e.spectrum.values[..r].to_vec();
    values.resize(e.spectrum.len(), 0.0);
    Ok(Ellipsoid {
        generator,
        span_basis: u,
        domain_basis: v,
        spectrum: SingularSpectrum { values, rank: r },
        rank_cutoff: e.rank_cutoff,
    })
}

/// Minimum-norm preimage norm `|A^+ y|` and the distance of `y` from the
/// span of `e`.
pub fn preimage_norm(e: &Ellipsoid, y: &Vector) -> Result<(f64, f64)> {
    if y.len() != e.ambient_dim() {
        return Err(Error::shape(format!(
            "vector has length {}, ambient dimension is {}",
            y.len(),
            e.ambient_dim()
        )));
    }
    let coords = e.span_basis.transpose() * y;
    let residual = (y - &e.span_basis * &coords).norm();
    let pre = coords
        .iter()
        .zip(e.spectrum.positive())
        .map(|(c, s)| (c / s) * (c / s))
        .sum::<f64>()
        .sqrt();
    Ok((pre, residual))
}

/// `y ∈ A(B)` up to `tol`: `y` lies in the range of `A` and `|A^+ y| <= 1 + tol`.
pub fn ellipsoid_membership(e: &Ellipsoid, y: &Vector, tol: f64) -> Result<bool> {
    let (pre, residual) = preimage_norm(e, y)?;
    let scale = e.spectrum.values.first().copied().unwrap_or(0.0).max(y.norm());
    Ok(residual <= tol * scale.max(1e-300) && pre <= 1.0 + tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use approx::assert_relative_eq;

    fn diag(v: &[f64]) -> Matrix {
        Matrix::from_diagonal(&Vector::from_column_slice(v))
    }

    #[test]
    fn spectrum_of_diagonal_and_permutation() {
        assert_eq!(singular_spectrum(&diag(&[3.0, 2.0, 1.0])).unwrap().values, vec![3.0, 2.0, 1.0]);
        let p = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let s = singular_spectrum(&p).unwrap();
        assert_relative_eq!(s.values[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(s.values[1], 1.0, epsilon = 1e-15);
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let mut a = diag(&[1.0, 2.0]);
        a[(1, 0)] = f64::NAN;
        assert!(matches!(singular_spectrum(&a), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn widths_shift_the_spectrum() {
        let e = Ellipsoid::new(diag(&[3.0, 2.0, 1.0])).unwrap();
        let w = kolmogorov_widths(&e);
        assert_eq!(w.values, vec![3.0, 2.0, 1.0]);
        assert_eq!(w.d(3), 0.0);
        assert_eq!(e.spectrum().s(1), w.d(0));

        let z = Ellipsoid::new(Matrix::zeros(3, 2)).unwrap();
        assert!(kolmogorov_widths(&z).values.iter().all(|&d| d == 0.0));
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn axis_section_drops_the_top_axis() {
        let e = Ellipsoid::new(diag(&[3.0, 2.0, 1.0])).unwrap();
        let y = Matrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]);
        let s = section_spectrum(&e, &y).unwrap();
        assert_relative_eq!(s.values[0], 2.0, epsilon = 1e-14);
        assert_relative_eq!(s.values[1], 1.0, epsilon = 1e-14);

        let empty = Matrix::zeros(3, 0);
        assert_eq!(section_spectrum(&e, &empty).unwrap(), e.spectrum().clone());
    }

    #[test]
    fn section_of_rank_deficient_generator_uses_kernel() {
        // A maps R^3 onto the plane z = 0 in R^3
        let a = Matrix::from_row_slice(3, 3, &[3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        let e = Ellipsoid::new(a).unwrap();
        let y = Matrix::from_column_slice(3, 1, &[0.0, 1.0, 0.0]);
        let s = section_spectrum(&e, &y).unwrap();
        assert_eq!(s.rank, 1);
        assert_relative_eq!(s.values[0], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn non_orthonormal_subspace_is_rejected() {
        let e = Ellipsoid::new(diag(&[3.0, 2.0])).unwrap();
        let y = Matrix::from_column_slice(2, 1, &[1.0, 1.0]);
        assert!(matches!(section_spectrum(&e, &y), Err(Error::InvalidInput(_))));
        let bad = Matrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]);
        assert!(matches!(section_spectrum(&e, &bad), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn section_directions_lie_in_the_complement() {
        let mut rng = random::rng(3);
        let a = random::gaussian_matrix(&mut rng, 5, 5);
        let e = Ellipsoid::new(a).unwrap();
        let y = random::orthonormal_columns(&mut rng, 5, 2);
        let s = section(&e, &y).unwrap();
        assert_eq!(s.directions.ncols(), 3);
        assert!((y.transpose() * &s.directions).amax() < 1e-12);
        assert!(linalg::is_orthonormal(&s.directions, 1e-12));
    }

    #[test]
    fn truncation_keeps_leading_values() {
        let e = Ellipsoid::new(diag(&[3.0, 2.0, 1.0])).unwrap();
        let t = truncate_ellipsoid(&e, 2).unwrap();
        assert_relative_eq!(t.generator().clone(), diag(&[3.0, 2.0, 0.0]), epsilon = 1e-15);
        assert_eq!(t.spectrum().values, vec![3.0, 2.0, 0.0]);
        assert_eq!(t.rank(), 2);
        assert!(truncate_ellipsoid(&e, 0).is_err());
        assert!(truncate_ellipsoid(&e, 4).is_err());
        let full = truncate_ellipsoid(&e, 3).unwrap();
        assert_eq!(full.spectrum(), e.spectrum());
    }

    #[test]
    fn membership_boundary_and_outside() {
        let e = Ellipsoid::new(diag(&[2.0, 1.0])).unwrap();
        assert!(ellipsoid_membership(&e, &Vector::from_vec(vec![2.0, 0.0]), 1e-9).unwrap());
        assert!(!ellipsoid_membership(&e, &Vector::from_vec(vec![0.0, 1.01]), 1e-9).unwrap());
        let flat = Ellipsoid::new(diag(&[2.0, 0.0])).unwrap();
        assert!(!ellipsoid_membership(&flat, &Vector::from_vec(vec![0.0, 0.1]), 1e-9).unwrap());
    }
}
