//! A-expanding operators: `T` with `|A T x| >= |A x|` for every `x`.

use serde::Serialize;

use crate::covering::{self, psd_margin, ClassificationVerdict, VerdictTag};
use crate::error::{Error, Result};
use crate::linalg::{check_finite, Matrix};
use crate::report;
use crate::seqlab::{self, SequenceModel};
use crate::spectra::Ellipsoid;

/// Width of the band `|margin| <= BAND` in which verdicts are decided by
/// round-off and excluded from agreement statistics.
pub const BAND: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct ExpandVerdict {
    pub expanding: bool,
    /// Smallest eigenvalue of `T^T A^T A T - A^T A` divided by
    /// `1 + largest eigenvalue` of the two Gram matrices.
    #[serde(serialize_with = "report::real")]
    pub margin: f64,
}

fn check_pair(t: &Matrix, a: &Matrix) -> Result<()> {
    if !t.is_square() || t.shape() != a.shape() {
        return Err(Error::shape(format!(
            "T is {}x{} and A is {}x{}; both must be square of equal size",
            t.nrows(),
            t.ncols(),
            a.nrows(),
            a.ncols()
        )));
    }
    check_finite(t, "T")?;
    check_finite(a, "A")
}

/// `A^T A ≼ T^T A^T A T`, which is `|A T x| >= |A x|` for all `x` written
/// as quadratic forms.
pub fn is_expanding(t: &Matrix, a: &Matrix, tol: f64) -> Result<ExpandVerdict> {
    check_pair(t, a)?;
    let at = a * t;
    let margin = psd_margin(&(at.transpose() * &at), &(a.transpose() * a));
    Ok(ExpandVerdict { expanding: margin >= -tol, margin })
}

/// Compares [`is_expanding`] with the transposed covering test
/// `T^T·A^T(B) ⊇ A^T(B)`. Both reduce to the same matrix inequality, so
/// they agree outside the round-off band.
pub fn expanding_dual_check(t: &Matrix, a: &Matrix) -> Result<bool> {
    let direct = is_expanding(t, a, covering::DEFAULT_TOL)?;
    let e = Ellipsoid::new(a.transpose())?;
    let dual = covering::covers(&t.transpose(), &e, &e, covering::DEFAULT_TOL)?;
    Ok(direct.expanding == dual.holds || direct.margin.abs() <= BAND)
}

/// Weak closure of the A-expanding operators from the s-number model of
/// `A`: everything for non-lacunary models or injective `A`, otherwise the
/// operators preserving `ker A`.
pub fn classify_we(model: &SequenceModel, kernel_trivial: bool) -> Result<ClassificationVerdict> {
    let lac = seqlab::is_lacunary(model)?;
    if !lac.lacunary {
        return Ok(ClassificationVerdict::new(VerdictTag::Everything, lac.exact));
    }
    if kernel_trivial {
        let mut v = ClassificationVerdict::new(VerdictTag::Everything, lac.exact);
        v.note = Some("lacunary, but ker A = {0} is invariant under every operator".into());
        return Ok(v);
    }
    let mut v = ClassificationVerdict::new(VerdictTag::AlgebraAK, lac.exact);
    v.note = Some("operators preserving ker A".into());
    Ok(v)
}
