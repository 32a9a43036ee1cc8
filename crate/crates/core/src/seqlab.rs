//! Width-sequence models and the asymptotic predicates built on them:
//! lacunarity, majorization, strict majorization, left shifts, equivalence.
//!
//! Parametric families are decided exactly from closed forms. Every
//! parametric model reduces to
//!
//! ```text
//! log a_n = Q n^2 + L n + P ln(n + j) + K
//! ```
//!
//! so the log-ratio of two models is again of this shape (with two log
//! terms) and its behaviour at infinity is read off the leading nonzero
//! coefficient. Finite samples fall back to windowed surrogates that are
//! always reported with `exact = false`.

mod parse;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report;

pub use parse::{parse_model, parse_model_with};

/// Default number of terms examined by the windowed surrogates.
pub const DEFAULT_WINDOW: usize = 64;
/// Ratio threshold for the windowed surrogates.
pub const DEFAULT_TAU: f64 = 1e-3;
/// Terms below this are refused rather than flushed to zero.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// A nonincreasing positive sequence `a_0, a_1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceModel {
    Samples(Vec<f64>),
    /// `a_n = q^n`, `0 < q < 1`.
    Geometric(f64),
    /// `a_n = (n+1)^-p`, `p > 0`.
    Power(f64),
    /// `a_n = b^(-n^2)`, `b > 1`.
    SuperGeometric(f64),
    /// The `k`-th left shift: `a_n = inner_{n+k}`.
    Shifted(usize, Box<SequenceModel>),
    /// `a_n = c * inner_n`, `c > 0`.
    Scaled(f64, Box<SequenceModel>),
}

impl SequenceModel {
    pub fn samples(values: Vec<f64>) -> Result<Self> {
        let m = SequenceModel::Samples(values);
        m.validate()?;
        Ok(m)
    }

    pub fn geometric(q: f64) -> Result<Self> {
        let m = SequenceModel::Geometric(q);
        m.validate()?;
        Ok(m)
    }

    pub fn power(p: f64) -> Result<Self> {
        let m = SequenceModel::Power(p);
        m.validate()?;
        Ok(m)
    }

    pub fn super_geometric(b: f64) -> Result<Self> {
        let m = SequenceModel::SuperGeometric(b);
        m.validate()?;
        Ok(m)
    }

    pub fn shifted(self, k: usize) -> Self {
        SequenceModel::Shifted(k, Box::new(self))
    }

    pub fn scaled(self, c: f64) -> Result<Self> {
        let m = SequenceModel::Scaled(c, Box::new(self));
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceModel::Samples(v) => {
                if v.is_empty() {
                    return Err(Error::invalid("samples model needs at least one value"));
                }
                for (i, &x) in v.iter().enumerate() {
                    if !(x.is_finite() && x > 0.0) {
                        return Err(Error::invalid(format!("sample {i} = {x} is not positive")));
                    }
                    if i > 0 && x > v[i - 1] {
                        return Err(Error::invalid(format!(
                            "samples must be nonincreasing: value {i} = {x} exceeds {}",
                            v[i - 1]
                        )));
                    }
                }
                Ok(())
            }
            SequenceModel::Geometric(q) if !(*q > 0.0 && *q < 1.0) => {
                Err(Error::invalid(format!("geom({q}): ratio must lie in (0, 1)")))
            }
            SequenceModel::Power(p) if !(*p > 0.0 && p.is_finite()) => {
                Err(Error::invalid(format!("pow({p}): exponent must be positive")))
            }
            SequenceModel::SuperGeometric(b) if !(*b > 1.0 && b.is_finite()) => {
                Err(Error::invalid(format!("supergeom({b}): base must exceed 1")))
            }
            SequenceModel::Shifted(_, inner) => inner.validate(),
            SequenceModel::Scaled(c, inner) => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(Error::invalid(format!("scale({c}, ..): factor must be positive")));
                }
                inner.validate()
            }
            _ => Ok(()),
        }
    }

    /// True when the model has a closed form (no samples inside).
    pub fn is_parametric(&self) -> bool {
        match self {
            SequenceModel::Samples(_) => false,
            SequenceModel::Shifted(_, inner) | SequenceModel::Scaled(_, inner) => inner.is_parametric(),
            _ => true,
        }
    }

    /// Number of terms a samples model can provide; `None` for closed forms.
    pub fn available_terms(&self) -> Option<usize> {
        let n = normalize(self);
        match n.base {
            Base::Samples(v) => Some(v.len().saturating_sub(n.shift)),
            _ => None,
        }
    }
}

impl fmt::Display for SequenceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceModel::Samples(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
                write!(f, "samples({})", parts.join(", "))
            }
            SequenceModel::Geometric(q) => write!(f, "geom({q})"),
            SequenceModel::Power(p) => write!(f, "pow({p})"),
            SequenceModel::SuperGeometric(b) => write!(f, "supergeom({b})"),
            SequenceModel::Shifted(k, inner) => write!(f, "shift({k}, {inner})"),
            SequenceModel::Scaled(c, inner) => write!(f, "scale({c}, {inner})"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Base<'a> {
    Samples(&'a [f64]),
    Geometric(f64),
    Power(f64),
    SuperGeometric(f64),
}

/// `a_n = scale * base_{n + shift}`.
#[derive(Debug, Clone, Copy)]
struct Normal<'a> {
    scale: f64,
    shift: usize,
    base: Base<'a>,
}

fn normalize(m: &SequenceModel) -> Normal<'_> {
    match m {
        SequenceModel::Samples(v) => Normal { scale: 1.0, shift: 0, base: Base::Samples(v) },
        SequenceModel::Geometric(q) => Normal { scale: 1.0, shift: 0, base: Base::Geometric(*q) },
        SequenceModel::Power(p) => Normal { scale: 1.0, shift: 0, base: Base::Power(*p) },
        SequenceModel::SuperGeometric(b) => {
            Normal { scale: 1.0, shift: 0, base: Base::SuperGeometric(*b) }
        }
        SequenceModel::Shifted(k, inner) => {
            let mut n = normalize(inner);
            n.shift += k;
            n
        }
        SequenceModel::Scaled(c, inner) => {
            let mut n = normalize(inner);
            n.scale *= c;
            n
        }
    }
}

impl Normal<'_> {
    fn term(&self, n: usize) -> Option<f64> {
        let m = n + self.shift;
        let v = match self.base {
            Base::Samples(v) => *v.get(m)?,
            Base::Geometric(q) => match i32::try_from(m) {
                Ok(e) => q.powi(e),
                Err(_) => 0.0,
            },
            Base::Power(p) => (m as f64 + 1.0).powf(-p),
            Base::SuperGeometric(b) => {
                let mf = m as f64;
                b.powf(-(mf * mf))
            }
        };
        Some(self.scale * v)
    }

    fn shifted(&self, k: usize) -> Self {
        Normal { shift: self.shift + k, ..*self }
    }

    fn log_form(&self) -> Option<LogForm> {
        let ln_c = self.scale.ln();
        let s = self.shift as f64;
        Some(match self.base {
            Base::Samples(_) => return None,
            Base::Geometric(q) => LogForm { quad: 0.0, lin: q.ln(), pcoef: 0.0, pshift: 1.0, konst: ln_c + s * q.ln() },
            Base::Power(p) => LogForm { quad: 0.0, lin: 0.0, pcoef: -p, pshift: s + 1.0, konst: ln_c },
            Base::SuperGeometric(b) => {
                let lb = b.ln();
                LogForm { quad: -lb, lin: -2.0 * s * lb, pcoef: 0.0, pshift: 1.0, konst: ln_c - s * s * lb }
            }
        })
    }
}

/// `log a_n = quad n^2 + lin n + pcoef ln(n + pshift) + konst`.
#[derive(Debug, Clone, Copy)]
struct LogForm {
    quad: f64,
    lin: f64,
    pcoef: f64,
    pshift: f64,
    konst: f64,
}

/// `log(b_n / a_n)` for two closed forms.
#[derive(Debug, Clone, Copy)]
struct LogRatio {
    quad: f64,
    lin: f64,
    pb: f64,
    jb: f64,
    pa: f64,
    ja: f64,
    konst: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tail {
    /// The ratio tends to infinity.
    Unbounded,
    /// The ratio tends to a positive constant.
    Constant,
    /// The ratio tends to zero.
    Vanishing,
}

fn is_zero(x: f64, scale: f64) -> bool {
    x.abs() <= 1e-12 * scale.max(1.0)
}

impl LogRatio {
    fn new(a: &LogForm, b: &LogForm) -> Self {
        let quad = b.quad - a.quad;
        let lin = b.lin - a.lin;
        LogRatio {
            quad: if is_zero(quad, a.quad.abs().max(b.quad.abs())) { 0.0 } else { quad },
            lin: if is_zero(lin, a.lin.abs().max(b.lin.abs())) { 0.0 } else { lin },
            pb: b.pcoef,
            jb: b.pshift,
            pa: a.pcoef,
            ja: a.pshift,
            konst: b.konst - a.konst,
        }
    }

    fn pnet(&self) -> f64 {
        let p = self.pb - self.pa;
        if is_zero(p, self.pa.abs().max(self.pb.abs())) {
            0.0
        } else {
            p
        }
    }

    fn eval(&self, n: f64) -> f64 {
        self.quad * n * n + self.lin * n + self.pb * (n + self.jb).ln() - self.pa * (n + self.ja).ln()
            + self.konst
    }

    fn tail(&self) -> Tail {
        for c in [self.quad, self.lin, self.pnet()] {
            if c > 0.0 {
                return Tail::Unbounded;
            }
            if c < 0.0 {
                return Tail::Vanishing;
            }
        }
        Tail::Constant
    }

    /// `sup_n log(b_n / a_n)` over integers `n >= 0`, for bounded ratios.
    /// Past a computable point the derivative is negative, so a finite scan
    /// plus the limit suffices.
    fn sup(&self) -> Result<f64> {
        let s = self.pa.abs() + self.pb.abs();
        let pnet = self.pnet();
        let (stop, limit) = match self.tail() {
            Tail::Unbounded => return Ok(f64::INFINITY),
            Tail::Constant => {
                // both log coefficients agree, so the ratio is monotone
                return Ok(self.eval(0.0).max(self.konst));
            }
            Tail::Vanishing if self.quad < 0.0 => ((self.lin.abs() + s) / (2.0 * -self.quad), f64::NEG_INFINITY),
            Tail::Vanishing if self.lin < 0.0 => (s / -self.lin, f64::NEG_INFINITY),
            Tail::Vanishing => ((self.pb * self.ja - self.pa * self.jb).abs() / -pnet, f64::NEG_INFINITY),
        };
        let stop = stop.max(1.0).ceil() + 1.0;
        if stop > 1e8 {
            return Err(Error::Classification(format!(
                "closed-form ratio too flat to bound its maximum (scan length {stop:e})"
            )));
        }
        let mut best = limit;
        for n in 0..=(stop as u64) {
            best = best.max(self.eval(n as f64));
        }
        Ok(best)
    }
}

/// First `n` terms `a_0..a_{n-1}`.
pub fn sample(model: &SequenceModel, n: usize) -> Result<Vec<f64>> {
    model.validate()?;
    if n == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    let norm = normalize(model);
    (0..n)
        .map(|i| {
            let v = norm.term(i).ok_or_else(|| {
                Error::invalid(format!(
                    "samples model provides {} terms, {n} requested",
                    model.available_terms().unwrap_or(0)
                ))
            })?;
            if v < UNDERFLOW_FLOOR {
                return Err(Error::Underflow { index: i, value: v });
            }
            Ok(v)
        })
        .collect()
}

/// Up to `max` leading terms, stopping before the first term that is
/// unavailable or below the underflow floor.
fn window_terms(norm: &Normal, max: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(max);
    for i in 0..max {
        match norm.term(i) {
            Some(v) if v >= UNDERFLOW_FLOOR => out.push(v),
            Some(v) if i == 0 => return Err(Error::Underflow { index: 0, value: v }),
            _ => break,
        }
    }
    if out.is_empty() {
        return Err(Error::invalid("model has no terms to examine"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LacunarityVerdict {
    pub lacunary: bool,
    #[serde(serialize_with = "report::real")]
    pub witness_ratio: f64,
    pub exact: bool,
    /// Terms examined; zero for closed forms.
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationVerdict {
    pub holds: bool,
    #[serde(serialize_with = "report::opt_real")]
    pub constant: Option<f64>,
    pub window: usize,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftClassification {
    /// Largest majorizing shift; `None` when every tested shift majorizes.
    pub k: Option<usize>,
    pub exhausted_at: usize,
    pub exact: bool,
}

/// Liminf of `a_{n+1}/a_n` equal to zero. Exact for closed forms; for
/// samples, true when some ratio in the window drops below [`DEFAULT_TAU`].
pub fn is_lacunary(model: &SequenceModel) -> Result<LacunarityVerdict> {
    model.validate()?;
    let norm = normalize(model);
    let exact = |lacunary, witness_ratio| LacunarityVerdict { lacunary, witness_ratio, exact: true, window: 0 };
    match norm.base {
        Base::Geometric(q) => Ok(exact(false, q)),
        // ratios ((m+1)/(m+2))^p increase to 1, so the first one is the smallest
        Base::Power(p) => {
            let m = norm.shift as f64;
            Ok(exact(false, ((m + 1.0) / (m + 2.0)).powf(p)))
        }
        Base::SuperGeometric(_) => Ok(exact(true, 0.0)),
        Base::Samples(_) => {
            let terms = window_terms(&norm, DEFAULT_WINDOW)?;
            let witness = terms
                .windows(2)
                .map(|w| w[1] / w[0])
                .fold(1.0f64, f64::min);
            Ok(LacunarityVerdict {
                lacunary: witness < DEFAULT_TAU,
                witness_ratio: witness,
                exact: false,
                window: terms.len(),
            })
        }
    }
}

fn ratio_window(a: &Normal, b: &Normal) -> Result<Vec<f64>> {
    let ta = window_terms(a, DEFAULT_WINDOW)?;
    let tb = window_terms(b, DEFAULT_WINDOW)?;
    let w = ta.len().min(tb.len());
    Ok((0..w).map(|n| tb[n] / ta[n]).collect())
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn majorizes_normal(a: &Normal, b: &Normal) -> Result<MajorizationVerdict> {
    if let (Some(fa), Some(fb)) = (a.log_form(), b.log_form()) {
        let r = LogRatio::new(&fa, &fb);
        let sup = r.sup()?;
        let holds = sup.is_finite();
        return Ok(MajorizationVerdict {
            holds,
            constant: holds.then(|| sup.exp()),
            window: 0,
            exact: true,
        });
    }
    // windowed: the ratio must not keep growing between the two halves
    let ratios = ratio_window(a, b)?;
    let h = (ratios.len() / 2).max(1);
    let holds = max_of(&ratios[h.min(ratios.len() - 1)..]) <= max_of(&ratios[..h]) / DEFAULT_TAU;
    Ok(MajorizationVerdict {
        holds,
        constant: Some(max_of(&ratios)),
        window: ratios.len(),
        exact: false,
    })
}

fn strictly_majorizes_normal(a: &Normal, b: &Normal) -> Result<MajorizationVerdict> {
    if let (Some(fa), Some(fb)) = (a.log_form(), b.log_form()) {
        let r = LogRatio::new(&fa, &fb);
        let holds = r.tail() == Tail::Vanishing;
        let sup = r.sup()?;
        return Ok(MajorizationVerdict {
            holds,
            constant: sup.is_finite().then(|| sup.exp()),
            window: 0,
            exact: true,
        });
    }
    // windowed: the ratio over the last quarter must have dropped by tau
    let ratios = ratio_window(a, b)?;
    let w = ratios.len();
    let q = (w / 4).max(1);
    let holds = max_of(&ratios[w - q..]) <= DEFAULT_TAU * max_of(&ratios[..q]);
    Ok(MajorizationVerdict {
        holds,
        constant: Some(max_of(&ratios)),
        window: w,
        exact: false,
    })
}

/// `b_n <= C a_n` for all `n`, with the minimal `C` for closed forms.
pub fn majorizes(a: &SequenceModel, b: &SequenceModel) -> Result<MajorizationVerdict> {
    a.validate()?;
    b.validate()?;
    majorizes_normal(&normalize(a), &normalize(b))
}

/// `b_n / a_n -> 0`.
pub fn strictly_majorizes(a: &SequenceModel, b: &SequenceModel) -> Result<MajorizationVerdict> {
    a.validate()?;
    b.validate()?;
    strictly_majorizes_normal(&normalize(a), &normalize(b))
}

pub fn equivalent(a: &SequenceModel, b: &SequenceModel) -> Result<bool> {
    Ok(majorizes(a, b)?.holds && majorizes(b, a)?.holds)
}

type Predicate = fn(&Normal, &Normal) -> Result<MajorizationVerdict>;

/// Exact largest shift `k` with `pred(shift(k, a), b)`, or `None` when all
/// shifts satisfy it. Assumes shift 0 does.
///
/// Shifting a closed form only moves its constant and log offset unless
/// `a` is super-geometric, where shift `k` adds `-2k Q_a > 0` to the linear
/// coefficient of the log-ratio; that makes the search finite.
fn exact_max_shift(a: &Normal, b: &Normal, pred: Predicate) -> Result<Option<usize>> {
    let (fa, fb) = (a.log_form().expect("closed form"), b.log_form().expect("closed form"));
    if fa.quad == 0.0 || LogRatio::new(&fa, &fb).quad < 0.0 {
        return Ok(None);
    }
    let r0 = LogRatio::new(&fa, &fb);
    let bound = (r0.lin.abs() / (-2.0 * fa.quad)).ceil() as usize + 2;
    for k in 1..=bound {
        if !pred(&a.shifted(k), b)?.holds {
            return Ok(Some(k - 1));
        }
    }
    Err(Error::Classification("shift search did not terminate within its derived bound".into()))
}

fn max_shift(a: &SequenceModel, b: &SequenceModel, k_max: usize, pred: Predicate) -> Result<ShiftClassification> {
    a.validate()?;
    b.validate()?;
    let (na, nb) = (normalize(a), normalize(b));
    if !pred(&na, &nb)?.holds {
        return Err(Error::Classification("not even k=0: the shift-0 sequence does not majorize".into()));
    }
    if a.is_parametric() && b.is_parametric() {
        let k = exact_max_shift(&na, &nb, pred)?.filter(|&k| k <= k_max);
        return Ok(ShiftClassification { k, exhausted_at: k_max, exact: true });
    }
    for k in 1..=k_max {
        let shifted = na.shifted(k);
        if let Base::Samples(v) = shifted.base {
            if v.len() < shifted.shift + 2 {
                return Ok(ShiftClassification { k: None, exhausted_at: k - 1, exact: false });
            }
        }
        if !pred(&shifted, &nb)?.holds {
            return Ok(ShiftClassification { k: Some(k - 1), exhausted_at: k_max, exact: false });
        }
    }
    Ok(ShiftClassification { k: None, exhausted_at: k_max, exact: false })
}

/// Largest `k <= k_max` such that the `k`-th left shift of `a` majorizes `b`.
pub fn max_majorizing_shift(a: &SequenceModel, b: &SequenceModel, k_max: usize) -> Result<ShiftClassification> {
    max_shift(a, b, k_max, majorizes_normal)
}

/// As [`max_majorizing_shift`] with strict majorization.
pub fn max_strictly_majorizing_shift(
    a: &SequenceModel,
    b: &SequenceModel,
    k_max: usize,
) -> Result<ShiftClassification> {
    max_shift(a, b, k_max, strictly_majorizes_normal)
}

/// Whether every left shift of `a` majorizes (or strictly majorizes) `b`,
/// decided exactly for closed forms and up to `k_max` for samples. Returns
/// the shift classification as witness.
pub(crate) fn all_shifts(
    a: &SequenceModel,
    b: &SequenceModel,
    k_max: usize,
    strict: bool,
) -> Result<(bool, ShiftClassification)> {
    let pred: Predicate = if strict { strictly_majorizes_normal } else { majorizes_normal };
    if a.is_parametric() && b.is_parametric() {
        a.validate()?;
        b.validate()?;
        let (na, nb) = (normalize(a), normalize(b));
        if !pred(&na, &nb)?.holds {
            return Err(Error::Classification("not even k=0".into()));
        }
        let k = exact_max_shift(&na, &nb, pred)?;
        let exhausted_at = k.map_or(k_max, |k| k_max.max(k + 1));
        return Ok((k.is_none(), ShiftClassification { k, exhausted_at, exact: true }));
    }
    let s = max_shift(a, b, k_max, pred)?;
    Ok((s.k.is_none(), s))
}
