//! Dimension-tower experiment: for growing truncations of a width model,
//! how much of the truncated ellipsoid can a cover with prescribed values
//! on a random subspace still reach? Non-lacunary models keep `ρ(d)`
//! bounded below; lacunary ones let it collapse.

use rayon::prelude::*;
use serde::Serialize;

use super::prescribed_cover;
use crate::error::{Error, Result};
use crate::random;
use crate::report;
use crate::seqlab::{self, SequenceModel};
use crate::spectra::Ellipsoid;

#[derive(Debug, Clone, Serialize)]
pub struct DichotomyReport {
    pub model: String,
    pub m: usize,
    pub seed: u64,
    pub dims: Vec<usize>,
    #[serde(serialize_with = "report::reals")]
    pub rho: Vec<f64>,
    #[serde(serialize_with = "report::reals")]
    pub constraint_residuals: Vec<f64>,
    pub model_lacunary: bool,
    /// Dimensions skipped because the model underflows there.
    pub refused: Vec<usize>,
}

impl DichotomyReport {
    /// `dimension,rho,residual` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dimension,rho,constraint_residual\n");
        for ((d, r), e) in self.dims.iter().zip(&self.rho).zip(&self.constraint_residuals) {
            out.push_str(&format!("{d},{r:.16e},{e:.16e}\n"));
        }
        out
    }
}

enum Outcome {
    Done { rho: f64, residual: f64 },
    Refused,
}

fn run_dimension(model: &SequenceModel, m: usize, d: usize, seed: u64) -> Result<Outcome> {
    let terms = match seqlab::sample(model, d) {
        Ok(t) => t,
        Err(Error::Underflow { .. }) => return Ok(Outcome::Refused),
        Err(e) => return Err(e),
    };
    let e = Ellipsoid::from_diagonal(&terms)?;
    let mut rng = random::rng_stream(seed, d as u64);
    let y = random::orthonormal_columns(&mut rng, d, m);
    let n = random::gaussian_matrix(&mut rng, d, m);
    let pc = prescribed_cover(&e, &y, &n)?;
    Ok(Outcome::Done { rho: pc.rho, residual: pc.constraint_residual })
}

/// Runs [`prescribed_cover`] on `diag(a_0..a_{d-1})` for every `d` in `dims`
/// with a random `m`-dimensional constraint subspace and random prescribed
/// values. Each dimension draws from its own stream of the seeded
/// generator, so the report does not depend on scheduling.
pub fn wot_density_experiment(
    model: &SequenceModel,
    m: usize,
    dims: &[usize],
    seed: u64,
) -> Result<DichotomyReport> {
    model.validate()?;
    if dims.is_empty() {
        return Err(Error::invalid("dimension list is empty"));
    }
    if let Some(&d) = dims.iter().find(|&&d| d <= m) {
        return Err(Error::invalid(format!("dimension {d} must exceed the constraint dimension {m}")));
    }
    let model_lacunary = seqlab::is_lacunary(model)?.lacunary;
    let outcomes: Vec<Result<Outcome>> = dims.par_iter().map(|&d| run_dimension(model, m, d, seed)).collect();

    let mut report = DichotomyReport {
        model: model.to_string(),
        m,
        seed,
        dims: Vec::new(),
        rho: Vec::new(),
        constraint_residuals: Vec::new(),
        model_lacunary,
        refused: Vec::new(),
    };
    for (&d, outcome) in dims.iter().zip(outcomes) {
        match outcome? {
            Outcome::Done { rho, residual } => {
                report.dims.push(d);
                report.rho.push(rho);
                report.constraint_residuals.push(residual);
            }
            Outcome::Refused => report.refused.push(d),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_constraints_give_full_cover() {
        let g = SequenceModel::geometric(0.5).unwrap();
        let r = wot_density_experiment(&g, 0, &[4, 8], 1).unwrap();
        assert_eq!(r.rho, vec![1.0, 1.0]);
    }

    #[test]
    fn geometric_stays_above_q_to_the_m() {
        let g = SequenceModel::geometric(0.5).unwrap();
        let r = wot_density_experiment(&g, 2, &[8, 16, 32, 64], 3).unwrap();
        assert!(r.rho.iter().all(|&x| x >= 0.25 - 1e-9), "{:?}", r.rho);
        assert!(r.constraint_residuals.iter().all(|&x| x <= 1e-10));
        assert!(!r.model_lacunary);
    }

    #[test]
    fn supergeometric_collapses() {
        let s = SequenceModel::super_geometric(2.0).unwrap();
        let r = wot_density_experiment(&s, 1, &[4, 8, 16], 7).unwrap();
        assert!(r.rho.windows(2).all(|w| w[1] < w[0]), "{:?}", r.rho);
        assert!(r.rho[2] / r.rho[0] < 1e-6, "{:?}", r.rho);
        assert!(r.model_lacunary);
    }

    #[test]
    fn underflowing_dimensions_are_refused() {
        let s = SequenceModel::super_geometric(2.0).unwrap();
        let r = wot_density_experiment(&s, 1, &[4, 40], 7).unwrap();
        assert_eq!(r.dims, vec![4]);
        assert_eq!(r.refused, vec![40]);
    }

    #[test]
    fn bad_dimensions_are_rejected() {
        let g = SequenceModel::geometric(0.5).unwrap();
        assert!(wot_density_experiment(&g, 2, &[2, 8], 0).is_err());
        assert!(wot_density_experiment(&g, 2, &[], 0).is_err());
    }

    #[test]
    fn report_is_deterministic() {
        let g = SequenceModel::power(1.0).unwrap();
        let a = wot_density_experiment(&g, 2, &[5, 9, 13], 42).unwrap();
        let b = wot_density_experiment(&g, 2, &[5, 9, 13], 42).unwrap();
        assert_eq!(a.rho, b.rho);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
