//! A non-convex compact `K = {0} ∪ {α_k e_k} ∪ {α_k β_k e_k}` whose only
//! covering operator is the identity, with an exhaustive search that
//! certifies this at truncation size `n`.
//!
//! `D K ⊇ K` for a finite set forces `D` to permute the nonzero points, so
//! the search enumerates bijections between them. Every source point lies
//! on a coordinate axis, hence an assignment fixes whole columns of `D`:
//! sending `s e_k` to `t e_n` sets column `k` to `(t/s) e_n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, Matrix, Vector};
use crate::report;

/// Largest truncation size the search accepts.
pub const MAX_N: usize = 7;
const CONSISTENCY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidCompactSpec {
    pub n: usize,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl RigidCompactSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if self.alphas.len() != n || self.betas.len() != n {
            return Err(Error::invalid(format!(
                "need {n} alphas and {n} betas, found {} and {}",
                self.alphas.len(),
                self.betas.len()
            )));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::invalid(format!("alpha {a} is not positive")));
        }
        let ratios: Vec<f64> = self.alphas.windows(2).map(|w| w[1] / w[0]).collect();
        if ratios.windows(2).any(|r| r[1] >= r[0]) {
            return Err(Error::invalid("consecutive alpha ratios must be strictly decreasing"));
        }
        if let Some(b) = self.betas.iter().find(|b| !(**b > 0.5 && **b < 1.0)) {
            return Err(Error::invalid(format!("beta {b} is outside (1/2, 1)")));
        }
        for i in 0..n {
            for j in 0..i {
                if self.betas[i] == self.betas[j] {
                    return Err(Error::invalid(format!(
                        "betas must be distinct: beta {} = beta {} = {}",
                        j + 1,
                        i + 1,
                        self.betas[i]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `max_k α_k/α_{k+1} · min_{i≠j} |β_i/β_j - 1|`: a non-identity cover
    /// must move some point between axes by roughly this factor.
    pub fn threshold(&self) -> f64 {
        let ratio = self.alphas.windows(2).map(|w| w[0] / w[1]).fold(1.0, f64::max);
        let mut gap = f64::INFINITY;
        for (i, bi) in self.betas.iter().enumerate() {
            for (j, bj) in self.betas.iter().enumerate() {
                if i != j {
                    gap = gap.min((bi / bj - 1.0).abs());
                }
            }
        }
        if gap.is_finite() {
            ratio * gap
        } else {
            ratio
        }
    }

    /// Scalar of nonzero point `p`: points `2k` and `2k+1` are `α_k e_k`
    /// and `α_k β_k e_k`.
    fn scalar(&self, p: usize) -> f64 {
        let k = p / 2;
        if p.is_multiple_of(2) {
            self.alphas[k]
        } else {
            self.alphas[k] * self.betas[k]
        }
    }
}

/// The `2n+1` points of `K`, in the order `0, α_1 e_1, α_1 β_1 e_1, ...`.
pub fn build_rigid_compact(spec: &RigidCompactSpec) -> Result<Vec<Vector>> {
    spec.validate()?;
    let n = spec.n;
    let mut pts = vec![Vector::zeros(n)];
    for p in 0..2 * n {
        let mut v = Vector::zeros(n);
        v[p / 2] = spec.scalar(p);
        pts.push(v);
    }
    Ok(pts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeGraphStats {
    /// Smallest out-degree over vertices of `M` whose two points both have
    /// assigned preimages; `None` if no such vertex was ever seen.
    pub out_degree_min: Option<usize>,
    pub in_degree_max: usize,
    /// Linearly consistent states the statistics were taken over.
    pub states: u64,
    pub observation_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverSearchReport {
    pub identity_only: bool,
    /// Complete assignments with a consistent linear `D` of norm within the bound.
    pub admissible_maps: usize,
    /// Complete assignments with a consistent linear `D`, any norm.
    pub consistent_maps: usize,
    #[serde(serialize_with = "report::real")]
    pub max_norm_bound: f64,
    #[serde(serialize_with = "report::real")]
    pub threshold: f64,
    pub edge_graph_stats: EdgeGraphStats,
    pub nodes_visited: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Column {
    axis: usize,
    coef: f64,
}

#[derive(Default)]
struct Tally {
    consistent: usize,
    admissible: usize,
    identity_seen: bool,
    nodes: u64,
    states: u64,
    out_min: Option<usize>,
    in_max: usize,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.consistent += o.consistent;
        self.admissible += o.admissible;
        self.identity_seen |= o.identity_seen;
        self.nodes += o.nodes;
        self.states += o.states;
        self.out_min = match (self.out_min, o.out_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.in_max = self.in_max.max(o.in_max);
        self
    }
}

struct Search<'a> {
    spec: &'a RigidCompactSpec,
    norm_bound: f64,
    /// `source[t]`: preimage of target point `t`.
    source: Vec<Option<usize>>,
    /// `target[p]`: image of source point `p`.
    target: Vec<Option<usize>>,
    columns: Vec<Option<Column>>,
    tally: Tally,
}

impl Search<'_> {
    fn points(&self) -> usize {
        2 * self.spec.n
    }

    fn moved(&self, k: usize) -> Option<bool> {
        self.columns[k].map(|c| c.axis != k || (c.coef - 1.0).abs() > CONSISTENCY_TOL)
    }

    /// Degrees of the oriented graph on `M`: edge `n → m` when a point on
    /// axis `n` has its preimage on axis `m`. Returns false if the partial
    /// state already violates the degree bounds.
    fn record_graph(&mut self) -> bool {
        let n = self.spec.n;
        let in_m: Vec<bool> = (0..n).map(|k| self.moved(k) == Some(true)).collect();
        let mut edge = vec![vec![false; n]; n];
        for t in 0..self.points() {
            if let Some(p) = self.source[t] {
                let (a, b) = (t / 2, p / 2);
                if in_m[a] && in_m[b] {
                    edge[a][b] = true;
                }
            }
        }
        let mut ok = true;
        for m in (0..n).filter(|&m| in_m[m]) {
            let indeg = (0..n).filter(|&a| edge[a][m]).count();
            self.tally.in_max = self.tally.in_max.max(indeg);
            ok &= indeg <= 1;
        }
        for a in (0..n).filter(|&a| in_m[a]) {
            if self.source[2 * a].is_some() && self.source[2 * a + 1].is_some() {
                let outdeg = edge[a].iter().filter(|&&e| e).count();
                self.tally.out_min = Some(self.tally.out_min.map_or(outdeg, |o| o.min(outdeg)));
                ok &= outdeg >= 2;
            }
        }
        self.tally.states += 1;
        ok
    }

    fn assign(&mut self, t: usize, p: usize) -> Option<Option<Column>> {
        let col = Column { axis: t / 2, coef: self.spec.scalar(t) / self.spec.scalar(p) };
        let k = p / 2;
        let previous = self.columns[k];
        if let Some(c) = previous {
            if c.axis != col.axis || (c.coef - col.coef).abs() > CONSISTENCY_TOL * c.coef.abs() {
                return None;
            }
        }
        self.columns[k] = Some(col);
        self.source[t] = Some(p);
        self.target[p] = Some(t);
        Some(previous)
    }

    fn unassign(&mut self, t: usize, p: usize, previous: Option<Column>) {
        self.columns[p / 2] = previous;
        self.source[t] = None;
        self.target[p] = None;
    }

    fn leaf(&mut self) {
        let n = self.spec.n;
        let mut d = Matrix::zeros(n, n);
        for (k, c) in self.columns.iter().enumerate() {
            let c = c.expect("complete assignment fixes every column");
            d[(c.axis, k)] = c.coef;
        }
        self.tally.consistent += 1;
        if spectral_norm(&d) <= self.norm_bound {
            self.tally.admissible += 1;
        }
        if (0..n).all(|k| self.moved(k) == Some(false)) {
            self.tally.identity_seen = true;
        }
    }

    fn dfs(&mut self, t: usize) {
        self.tally.nodes += 1;
        if t == self.points() {
            self.leaf();
            return;
        }
        for p in 0..self.points() {
            if self.target[p].is_some() {
                continue;
            }
            self.step(t, p);
        }
    }

    fn step(&mut self, t: usize, p: usize) {
        let Some(previous) = self.assign(t, p) else {
            return;
        };
        if self.record_graph() {
            self.dfs(t + 1);
        }
        self.unassign(t, p, previous);
    }
}

/// Exhaustive search over all point bijections of `K \ {0}` that extend to
/// a linear map, reporting those with operator norm at most `norm_bound`.
pub fn rigid_cover_search(spec: &RigidCompactSpec, norm_bound: f64) -> Result<CoverSearchReport> {
    spec.validate()?;
    if !(norm_bound >= 1.0 && norm_bound.is_finite()) {
        return Err(Error::invalid(format!("norm bound {norm_bound} must be at least 1")));
    }
    if spec.n > MAX_N {
        return Err(Error::BudgetExceeded(format!(
            "truncation size {} exceeds the search cap n <= {MAX_N}",
            spec.n
        )));
    }
    let size = 2 * spec.n;
    let fresh = || Search {
        spec,
        norm_bound,
        source: vec![None; size],
        target: vec![None; size],
        columns: vec![None; spec.n],
        tally: Tally::default(),
    };
    let tally = (0..size)
        .into_par_iter()
        .map(|p| {
            let mut s = fresh();
            s.step(0, p);
            s.tally
        })
        .reduce(Tally::default, Tally::merge);
    let tally = Tally { nodes: tally.nodes + 1, ..tally };

    let observation_holds = tally.out_min.is_none_or(|o| o >= 2) && tally.in_max <= 1;
    Ok(CoverSearchReport {
        identity_only: tally.identity_seen && tally.admissible == 1,
        admissible_maps: tally.admissible,
        consistent_maps: tally.consistent,
        max_norm_bound: norm_bound,
        threshold: spec.threshold(),
        edge_graph_stats: EdgeGraphStats {
            out_degree_min: tally.out_min,
            in_degree_max: tally.in_max,
            states: tally.states,
            observation_holds,
        },
        nodes_visited: tally.nodes,
    })
}
