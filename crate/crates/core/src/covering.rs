//! Covering operators between ellipsoids and the classifications of the
//! covering semigroups they generate.
//!
//! `T·A1(B) ⊇ A2(B)` holds exactly when `A2 A2^T ≼ (T A1)(T A1)^T`
//! (range inclusion for contractions), so every cover decision is a single
//! symmetric eigenvalue computation.

mod dichotomy;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, column_space, svd, symmetric_extremes, vectorized_rank, Matrix, RANK_CUTOFF};
use crate::report;
use crate::seqlab::{self, LacunarityVerdict, SequenceModel, ShiftClassification};
use crate::spectra::{self, Ellipsoid};

pub use dichotomy::{wot_density_experiment, DichotomyReport};

/// Default PSD tolerance, relative to `1 + largest eigenvalue`.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct CoverCertificate {
    pub holds: bool,
    /// Smallest eigenvalue of `(T A1)(T A1)^T - A2 A2^T` divided by
    /// `1 + largest eigenvalue` of the two Gram matrices.
    #[serde(serialize_with = "report::real")]
    pub psd_margin: f64,
    #[serde(serialize_with = "report::opt_matrix")]
    pub witness: Option<Matrix>,
    #[serde(serialize_with = "report::opt_real")]
    pub norm: Option<f64>,
}

/// Scaled margin of `big - small` for two PSD matrices.
pub(crate) fn psd_margin(big: &Matrix, small: &Matrix) -> f64 {
    let (lo, _) = symmetric_extremes(&(big - small));
    let top = symmetric_extremes(big).1.max(symmetric_extremes(small).1).max(0.0);
    lo / (1.0 + top)
}

/// Does `T·E1 ⊇ E2` hold, up to `tol`?
pub fn covers(t: &Matrix, e1: &Ellipsoid, e2: &Ellipsoid, tol: f64) -> Result<CoverCertificate> {
    if t.nrows() != e2.ambient_dim() || t.ncols() != e1.ambient_dim() {
        return Err(Error::shape(format!(
            "operator is {}x{}, expected {}x{} (ambient of E2 by ambient of E1)",
            t.nrows(),
            t.ncols(),
            e2.ambient_dim(),
            e1.ambient_dim()
        )));
    }
    linalg::check_finite(t, "operator")?;
    let m = t * e1.generator();
    let a2 = e2.generator();
    let margin = psd_margin(&(&m * m.transpose()), &(a2 * a2.transpose()));
    Ok(CoverCertificate { holds: margin >= -tol, psd_margin: margin, witness: None, norm: None })
}

#[derive(Debug, Clone, Serialize)]
pub struct SchmidtCover {
    #[serde(serialize_with = "report::matrix")]
    pub operator: Matrix,
    /// `max_n s_n(A2) / s_n(A1)`, which is also the operator norm.
    #[serde(serialize_with = "report::real")]
    pub constant: f64,
}

/// Minimal-norm cover of `E2` by the image of `E1`: it sends the `n`-th
/// principal axis of `E1` onto the `n`-th axis of `E2`, scaled by the worst
/// axis ratio.
pub fn schmidt_cover(e1: &Ellipsoid, e2: &Ellipsoid) -> Result<SchmidtCover> {
    let (r1, r2) = (e1.rank(), e2.rank());
    if r2 > r1 {
        return Err(Error::NotCoverable(format!(
            "rank of target ({r2}) exceeds rank of source ({r1})"
        )));
    }
    let (s1, s2) = (e1.spectrum(), e2.spectrum());
    let constant = (1..=r2).map(|n| s2.s(n) / s1.s(n)).fold(0.0, f64::max);
    let u1 = e1.span_basis().columns(0, r2);
    let u2 = e2.span_basis().columns(0, r2);
    let operator = u2 * u1.transpose() * constant;
    Ok(SchmidtCover { operator, constant })
}

#[derive(Debug, Clone, Serialize)]
pub struct PrescribedCover {
    #[serde(serialize_with = "report::matrix")]
    pub operator: Matrix,
    /// Fraction of the rank-(r-m) truncation covered: `min_n σ_n / s_n`.
    #[serde(serialize_with = "report::real")]
    pub rho: f64,
    /// `max_i |D y_i - N y_i|` over the columns of `Y`.
    #[serde(serialize_with = "report::real")]
    pub constraint_residual: f64,
}

/// Builds `D` with `D y = N y` on `span(Y)` whose restriction to `Y^⊥` maps
/// the section `E ∩ Y^⊥` isometrically onto the axes of the rank-(r-m)
/// truncation of `E`, so `D·E ⊇ ρ·truncate(E, r-m)`.
///
/// `n` is either the `p x m` matrix of images of the columns of `y`, or a
/// `p x p` operator whose restriction to `span(Y)` is prescribed.
pub fn prescribed_cover(e: &Ellipsoid, y: &Matrix, n: &Matrix) -> Result<PrescribedCover> {
    let p = e.ambient_dim();
    let m = y.ncols();
    let r = e.rank();
    if m >= r {
        return Err(Error::invalid(format!(
            "constraint dimension {m} must be below the rank {r} of the ellipsoid"
        )));
    }
    if n.nrows() != p || (n.ncols() != m && n.ncols() != p) {
        return Err(Error::shape(format!(
            "prescribed values are {}x{}, expected {p}x{m} or {p}x{p}",
            n.nrows(),
            n.ncols()
        )));
    }
    linalg::check_finite(n, "prescribed values")?;
    let sec = spectra::section(e, y)?;
    let targets = if n.ncols() == m { n.clone() } else { n * y };

    let k = r - m;
    let spec = e.spectrum();
    let rho = (1..=k).map(|i| sec.spectrum.s(i) / spec.s(i)).fold(f64::INFINITY, f64::min);
    let h = e.span_basis().columns(0, k);
    let g = sec.directions.columns(0, k);
    let iso = h * g.transpose();
    let operator = &targets * y.transpose() + iso * (Matrix::identity(p, p) - y * y.transpose());

    let constraint_residual = (&operator * y - &targets)
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    Ok(PrescribedCover { operator, rho, constraint_residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictTag {
    /// The closure is the whole operator space.
    Everything,
    /// Operators leaving the span of the compact invariant.
    AlgebraAK,
    /// Quotient image of dimension at most `k`.
    KDim(usize),
    Empty,
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictTag::Everything => write!(f, "Everything"),
            VerdictTag::AlgebraAK => write!(f, "AlgebraAK"),
            VerdictTag::KDim(k) => write!(f, "KDim({k})"),
            VerdictTag::Empty => write!(f, "Empty"),
        }
    }
}

impl Serialize for VerdictTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationVerdict {
    pub tag: VerdictTag,
    /// The `k` of `KDim(k)`.
    pub k: Option<usize>,
    pub exact: bool,
    pub shifts: Option<ShiftClassification>,
    pub note: Option<String>,
}

impl ClassificationVerdict {
    pub(crate) fn new(tag: VerdictTag, exact: bool) -> Self {
        let k = match tag {
            VerdictTag::KDim(k) => Some(k),
            _ => None,
        };
        ClassificationVerdict { tag, k, exact, shifts: None, note: None }
    }
}

fn classify(a: &SequenceModel, b: &SequenceModel, k_max: usize, strict: bool) -> Result<ClassificationVerdict> {
    let base = if strict { seqlab::strictly_majorizes(a, b)? } else { seqlab::majorizes(a, b)? };
    if !base.holds {
        return Ok(ClassificationVerdict::new(VerdictTag::Empty, base.exact));
    }
    let (all, shifts) = seqlab::all_shifts(a, b, k_max, strict)?;
    let exact = base.exact && shifts.exact;
    let mut v = if all {
        ClassificationVerdict::new(VerdictTag::Everything, exact)
    } else {
        let k = shifts.k.expect("bounded shift search yields k");
        if k == 0 && !strict && seqlab::equivalent(a, b)? {
            let mut v = ClassificationVerdict::new(VerdictTag::AlgebraAK, exact);
            v.note = Some("equivalent width sequences: operators leaving the span invariant".into());
            v
        } else {
            ClassificationVerdict::new(VerdictTag::KDim(k), exact)
        }
    };
    v.shifts = Some(shifts);
    Ok(v)
}

/// Weak closure of the operators covering `K2` by `K1`, from the width
/// sequences `a` of `K1` and `b` of `K2`.
pub fn classify_wg(a: &SequenceModel, b: &SequenceModel, k_max: usize) -> Result<ClassificationVerdict> {
    classify(a, b, k_max, false)
}

/// As [`classify_wg`] for covers by compact operators, with strict
/// majorization throughout.
pub fn classify_wcg(a: &SequenceModel, b: &SequenceModel, k_max: usize) -> Result<ClassificationVerdict> {
    classify(a, b, k_max, true)
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparatingProjection {
    #[serde(serialize_with = "report::matrix")]
    pub projection: Matrix,
    pub rank: usize,
}

fn describe_dependency(ts: &[Matrix]) -> String {
    let len = ts[0].len();
    let stacked = Matrix::from_fn(len, ts.len(), |i, j| ts[j].as_slice()[i]);
    let null = linalg::null_space(&stacked, RANK_CUTOFF);
    if null.ncols() == 0 {
        return "inputs are numerically dependent".into();
    }
    let c = null.column(0);
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > 1e-12)
        .map(|(i, x)| format!("{x:+.6}*T{}", i + 1))
        .collect();
    format!("dependent combination {} = 0", terms.join(" "))
}

/// Orthogonal projection `P` of small rank with `{P T_i}` linearly
/// independent, grown greedily from the top singular directions of the
/// `T_i`, then their remaining left singular vectors, then the standard
/// basis. Minimality is not guaranteed.
pub fn find_separating_projection(ts: &[Matrix]) -> Result<SeparatingProjection> {
    let first = ts.first().ok_or_else(|| Error::invalid("need at least one matrix"))?;
    let (d, cols) = first.shape();
    for (i, t) in ts.iter().enumerate() {
        if t.shape() != (d, cols) {
            return Err(Error::shape(format!("matrix {} is {:?}, expected {:?}", i + 1, t.shape(), (d, cols))));
        }
        linalg::check_finite(t, "matrix")?;
    }
    let target = ts.len();
    if vectorized_rank(ts, RANK_CUTOFF) < target {
        return Err(Error::invalid(describe_dependency(ts)));
    }

    let svds: Vec<_> = ts.iter().map(svd).collect();
    let mut candidates: Vec<linalg::Vector> = Vec::new();
    for s in &svds {
        if s.values.first().is_some_and(|&v| v > 0.0) {
            candidates.push(s.u.column(0).into_owned());
        }
    }
    for s in &svds {
        let r = linalg::numerical_rank(&s.values, RANK_CUTOFF);
        candidates.extend((1..r).map(|j| s.u.column(j).into_owned()));
    }
    candidates.extend((0..d).map(|i| linalg::Vector::from_fn(d, |r, _| if r == i { 1.0 } else { 0.0 })));

    let mut basis: Vec<linalg::Vector> = Vec::new();
    let mut rank = 0;
    let projected = |basis: &[linalg::Vector]| -> Vec<Matrix> {
        let mut p = Matrix::zeros(d, d);
        for b in basis {
            p += b * b.transpose();
        }
        ts.iter().map(|t| &p * t).collect()
    };
    for c in candidates {
        if rank == target {
            break;
        }
        let mut v = c;
        for _ in 0..2 {
            for b in &basis {
                v -= b * b.dot(&v);
            }
        }
        let norm = v.norm();
        if norm < 1e-8 {
            continue;
        }
        basis.push(v / norm);
        let r = vectorized_rank(&projected(&basis), RANK_CUTOFF);
        if r > rank {
            rank = r;
        } else {
            basis.pop();
        }
    }
    if rank < target {
        return Err(Error::Numerical("greedy growth did not separate the inputs".into()));
    }
    let mut projection = Matrix::zeros(d, d);
    for b in &basis {
        projection += b * b.transpose();
    }
    Ok(SeparatingProjection { projection, rank: basis.len() })
}

#[derive(Debug, Clone, Serialize)]
pub struct RangeEquivalence {
    pub same_range: bool,
    #[serde(serialize_with = "report::opt_real")]
    pub c: Option<f64>,
    #[serde(rename = "C", serialize_with = "report::opt_real")]
    pub big_c: Option<f64>,
}

/// Whether `A1` and `A2` have the same range, and if so the constants with
/// `c·A1(B) ⊆ A2(B) ⊆ C·A1(B)`: the square roots of the extreme generalized
/// eigenvalues of `A2 A2^T` against `A1 A1^T` on the common range.
pub fn range_equiv(a1: &Matrix, a2: &Matrix) -> Result<RangeEquivalence> {
    if a1.nrows() != a2.nrows() {
        return Err(Error::shape(format!(
            "ambient dimensions differ: {} vs {}",
            a1.nrows(),
            a2.nrows()
        )));
    }
    linalg::check_finite(a1, "A1")?;
    linalg::check_finite(a2, "A2")?;
    let q1 = column_space(a1, RANK_CUTOFF);
    let q2 = column_space(a2, RANK_CUTOFF);
    let differ = RangeEquivalence { same_range: false, c: None, big_c: None };
    if q1.ncols() != q2.ncols() {
        return Ok(differ);
    }
    if q1.ncols() == 0 {
        return Ok(RangeEquivalence { same_range: true, c: Some(1.0), big_c: Some(1.0) });
    }
    if (&q2 - &q1 * (q1.transpose() * &q2)).amax() > 1e-8 {
        return Ok(differ);
    }
    let r1 = q1.transpose() * a1;
    let r2 = q1.transpose() * a2;
    let m1 = &r1 * r1.transpose();
    let m2 = &r2 * r2.transpose();
    let chol = m1
        .cholesky()
        .ok_or_else(|| Error::Numerical("Gram matrix on the common range is not positive definite".into()))?;
    let l = chol.l();
    let linv_m2 = l
        .solve_lower_triangular(&m2)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let w = l
        .solve_lower_triangular(&linv_m2.transpose())
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let (lo, hi) = symmetric_extremes(&w);
    Ok(RangeEquivalence { same_range: true, c: Some(lo.max(0.0).sqrt()), big_c: Some(hi.max(0.0).sqrt()) })
}

/// Codimension of the closure of an operator range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Codim {
    Finite(usize),
    Infinite,
}

impl std::str::FromStr for Codim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "infinite" => Ok(Codim::Infinite),
            t => t
                .parse()
                .map(Codim::Finite)
                .map_err(|_| Error::invalid(format!("codimension `{t}` is neither a count nor `inf`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakFullCase {
    /// Finite codimension of the range closure.
    FiniteCodim,
    /// Infinite codimension with non-lacunary widths.
    NonLacunary,
    /// Lacunary widths.
    Lacunary,
}

impl fmt::Display for WeakFullCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeakFullCase::FiniteCodim => "finite codimension",
            WeakFullCase::NonLacunary => "infinite codimension, non-lacunary",
            WeakFullCase::Lacunary => "infinite codimension, lacunary",
        })
    }
}

impl Serialize for WeakFullCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeaklyFullVerdict {
    pub weakly_full: bool,
    pub case: WeakFullCase,
    pub lacunarity: LacunarityVerdict,
}

/// Weak fullness of the algebra attached to an operator range whose
/// generating ellipsoid has widths `model` and whose closure has the given
/// codimension.
pub fn is_weakly_full(model: &SequenceModel, codim: Codim) -> Result<WeaklyFullVerdict> {
    let lacunarity = seqlab::is_lacunary(model)?;
    let (weakly_full, case) = match codim {
        Codim::Finite(_) => (true, WeakFullCase::FiniteCodim),
        Codim::Infinite if lacunarity.lacunary => (true, WeakFullCase::Lacunary),
        Codim::Infinite => (false, WeakFullCase::NonLacunary),
    };
    Ok(WeaklyFullVerdict { weakly_full, case, lacunarity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;
    use crate::random;
    use approx::assert_relative_eq;

    fn diag(v: &[f64]) -> Matrix {
        Matrix::from_diagonal(&Vector::from_column_slice(v))
    }
    fn ell(v: &[f64]) -> Ellipsoid {
        Ellipsoid::new(diag(v)).unwrap()
    }

    #[test]
    fn identity_covers_itself_with_zero_margin() {
        let e = ell(&[3.0, 1.0]);
        let c = covers(&Matrix::identity(2, 2), &e, &e, DEFAULT_TOL).unwrap();
        assert!(c.holds);
        assert!(c.psd_margin.abs() < 1e-15);
    }

    #[test]
    fn shrinking_map_does_not_cover_the_ball() {
        let b = ell(&[1.0, 1.0]);
        let c = covers(&diag(&[0.5, 1.0]), &b, &b, DEFAULT_TOL).unwrap();
        assert!(!c.holds);
        assert_relative_eq!(c.psd_margin, -0.75 / 2.0, epsilon = 1e-14);
        assert!(covers(&Matrix::identity(3, 2), &b, &b, DEFAULT_TOL).is_err());
    }

    #[test]
    fn schmidt_constant_is_worst_axis_ratio() {
        let e1 = ell(&[1.0, 0.5, 0.25]);
        let e2 = Ellipsoid::new(diag(&[0.5, 0.125])).unwrap();
        let s = schmidt_cover(&e1, &e2).unwrap();
        assert_relative_eq!(s.constant, 0.5, epsilon = 1e-15);
        assert_relative_eq!(linalg::spectral_norm(&s.operator), 0.5, epsilon = 1e-14);
        assert!(covers(&s.operator, &e1, &e2, DEFAULT_TOL).unwrap().holds);
        assert!(!covers(&(&s.operator * 0.999), &e1, &e2, DEFAULT_TOL).unwrap().holds);
        assert!(matches!(schmidt_cover(&e2, &e1), Err(Error::NotCoverable(_))));
    }

    #[test]
    fn schmidt_self_cover_is_orthogonal_on_span() {
        let mut rng = random::rng(11);
        let e = Ellipsoid::new(random::gaussian_matrix(&mut rng, 4, 4)).unwrap();
        let s = schmidt_cover(&e, &e).unwrap();
        assert_relative_eq!(s.constant, 1.0, epsilon = 1e-12);
        let g = s.operator.transpose() * &s.operator;
        assert!((g - Matrix::identity(4, 4)).amax() < 1e-12);
    }

    #[test]
    fn prescribed_cover_axis_aligned() {
        let e = ell(&[1.0, 0.5, 0.25]);
        let y = Matrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]);
        let pc = prescribed_cover(&e, &y, &Matrix::zeros(3, 1)).unwrap();
        assert_relative_eq!(pc.rho, 1.0, epsilon = 1e-14);
        assert!(pc.constraint_residual < 1e-15);
        let id = prescribed_cover(&e, &y, &Matrix::identity(3, 3)).unwrap();
        assert!(id.constraint_residual < 1e-15);
        assert!((&id.operator * &y - &y).amax() < 1e-15);
        assert!(prescribed_cover(&e, &Matrix::identity(3, 3), &Matrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn prescribed_cover_certifies_rho_truncation() {
        let mut rng = random::rng(5);
        let vals: Vec<f64> = (0..8).map(|n| 0.5f64.powi(n)).collect();
        let e = Ellipsoid::from_diagonal(&vals).unwrap();
        let y = random::orthonormal_columns(&mut rng, 8, 2);
        let n = random::gaussian_matrix(&mut rng, 8, 2);
        let pc = prescribed_cover(&e, &y, &n).unwrap();
        assert!(pc.rho >= 0.25 - 1e-9, "rho = {}", pc.rho);
        assert!(pc.constraint_residual < 1e-10);
        let t = spectra::truncate_ellipsoid(&e, 6).unwrap().scaled(pc.rho).unwrap();
        assert!(covers(&pc.operator, &e, &t, DEFAULT_TOL).unwrap().holds);
    }

    #[test]
    fn classification_examples() {
        let g = SequenceModel::geometric(0.5).unwrap();
        let g4 = SequenceModel::geometric(0.25).unwrap();
        let s = SequenceModel::super_geometric(2.0).unwrap();
        let s1 = s.clone().shifted(1);
        assert_eq!(classify_wg(&g, &g, 5).unwrap().tag, VerdictTag::Everything);
        assert_eq!(classify_wg(&g4, &g, 5).unwrap().tag, VerdictTag::Empty);
        assert_eq!(classify_wg(&s, &s1, 5).unwrap().tag, VerdictTag::KDim(1));
        assert_eq!(classify_wg(&s, &s, 5).unwrap().tag, VerdictTag::AlgebraAK);
        assert_eq!(classify_wcg(&g, &g4, 5).unwrap().tag, VerdictTag::Everything);
        assert_eq!(classify_wcg(&g, &g, 5).unwrap().tag, VerdictTag::Empty);
        assert_eq!(classify_wcg(&s, &s1, 5).unwrap().tag, VerdictTag::KDim(0));
    }

    #[test]
    fn separating_projection_for_matrix_units() {
        let e11 = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let e22 = Matrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let p = find_separating_projection(&[e11.clone(), e22.clone()]).unwrap();
        // the greedy order picks e1 then e2; the rank-one projection onto
        // (1,1)/sqrt(2) would also separate, so rank 2 is not minimal here
        assert_eq!(p.rank, 2);
        let err = find_separating_projection(&[e11.clone(), e11 * 2.0]).unwrap_err();
        assert!(err.to_string().contains("T1") && err.to_string().contains("T2"), "{err}");
    }

    #[test]
    fn range_equivalence_examples() {
        let a1 = diag(&[1.0, 0.5]);
        let r = range_equiv(&a1, &(&a1 * 3.0)).unwrap();
        assert!(r.same_range);
        assert_relative_eq!(r.c.unwrap(), 3.0, epsilon = 1e-12);
        assert_relative_eq!(r.big_c.unwrap(), 3.0, epsilon = 1e-12);
        let r = range_equiv(&a1, &Matrix::identity(2, 2)).unwrap();
        assert_relative_eq!(r.c.unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(r.big_c.unwrap(), 2.0, epsilon = 1e-12);
        assert!(!range_equiv(&diag(&[1.0, 0.0]), &Matrix::identity(2, 2)).unwrap().same_range);
    }

    #[test]
    fn weak_fullness_cases() {
        let g = SequenceModel::geometric(0.5).unwrap();
        let s = SequenceModel::super_geometric(2.0).unwrap();
        let v = is_weakly_full(&g, Codim::Finite(0)).unwrap();
        assert!(v.weakly_full && v.case == WeakFullCase::FiniteCodim);
        let v = is_weakly_full(&g, Codim::Infinite).unwrap();
        assert!(!v.weakly_full && v.case == WeakFullCase::NonLacunary);
        let v = is_weakly_full(&s, Codim::Infinite).unwrap();
        assert!(v.weakly_full && v.case == WeakFullCase::Lacunary);
        assert_eq!("inf".parse::<Codim>().unwrap(), Codim::Infinite);
        assert_eq!("3".parse::<Codim>().unwrap(), Codim::Finite(3));
    }
}
