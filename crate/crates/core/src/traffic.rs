//! Traffic matrices: product and permutation flows, two-stage routing and
//! the permutation time-sharing deficit.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{check_feasible_with, FlowOptions};
use crate::graph::{CapGraph, NodeId, WeightVector};
use crate::rng::stream_rng;

/// Dense `n x n` demand matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct TrafficMatrix {
    n: usize,
    lam: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    lam: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for TrafficMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.lam.len() != j.n {
            return Err(Error::domain(format!("expected {} rows, got {}", j.n, j.lam.len())));
        }
        TrafficMatrix::from_rows(&j.lam)
    }
}

impl From<TrafficMatrix> for MatrixJson {
    fn from(t: TrafficMatrix) -> Self {
        MatrixJson { n: t.n, lam: t.lam.chunks(t.n.max(1)).map(<[f64]>::to_vec).collect() }
    }
}

impl TrafficMatrix {
    pub fn zeros(n: usize) -> Self {
        TrafficMatrix { n, lam: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut t = TrafficMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if i == j && v != 0.0 {
                    return Err(Error::domain(format!("diagonal entry ({i}, {i}) is {v}, must be 0")));
                }
                t.set(i, j, v);
            }
        }
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (k, &v) in self.lam.iter().enumerate() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(format!("entry ({}, {}) is {v}", k / self.n, k % self.n)));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: NodeId, j: NodeId) -> f64 {
        self.lam[i * self.n + j]
    }

    /// Sets `λ_ij`; writes to the diagonal are ignored.
    pub fn set(&mut self, i: NodeId, j: NodeId, v: f64) {
        if i != j {
            self.lam[i * self.n + j] = v;
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lam
    }

    pub fn is_zero(&self) -> bool {
        self.lam.iter().all(|&v| v == 0.0)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.n).map(|k| self.get(i, k)).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.n).map(|j| (0..self.n).map(|k| self.get(k, j)).sum()).collect()
    }

    pub fn total(&self) -> f64 {
        self.lam.iter().sum()
    }

    pub fn max_entry(&self) -> f64 {
        self.lam.iter().fold(0.0, |a, &b| a.max(b))
    }

    pub fn add(&self, other: &TrafficMatrix) -> TrafficMatrix {
        assert_eq!(self.n, other.n);
        TrafficMatrix { n: self.n, lam: self.lam.iter().zip(&other.lam).map(|(a, b)| a + b).collect() }
    }

    pub fn scaled(&self, c: f64) -> TrafficMatrix {
        TrafficMatrix { n: self.n, lam: self.lam.iter().map(|v| v * c).collect() }
    }

    /// Entrywise `self <= other + tol`.
    pub fn dominated_by(&self, other: &TrafficMatrix, tol: f64) -> bool {
        self.n == other.n && self.lam.iter().zip(&other.lam).all(|(a, b)| *a <= *b + tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfSpec {
    pub f: f64,
    pub w: WeightVector,
}

impl PmfSpec {
    pub fn new(f: f64, w: WeightVector) -> Result<Self> {
        if !(f.is_finite() && f >= 0.0) {
            return Err(Error::domain(format!("flow rate must be a nonnegative real, got {f}")));
        }
        Ok(PmfSpec { f, w })
    }
}

/// `λ_ij = f π(i) π(j)` off the diagonal.
pub fn pmf_matrix(spec: &PmfSpec) -> TrafficMatrix {
    let n = spec.w.len();
    let mut t = TrafficMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            t.set(i, j, spec.f * spec.w.get(i) * spec.w.get(j));
        }
    }
    t
}

/// Uniform multicommodity flow `U(f)` on `n` nodes.
pub fn umf_matrix(n: usize, f: f64) -> TrafficMatrix {
    pmf_matrix(&PmfSpec { f, w: WeightVector::uniform(n) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationFlow {
    pub perm: Vec<NodeId>,
    pub f: f64,
    #[serde(default)]
    pub allow_fixed_points: bool,
}

impl PermutationFlow {
    pub fn new(perm: Vec<NodeId>, f: f64, allow_fixed_points: bool) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::domain(format!("{perm:?} is not a permutation of 0..{n}")));
            }
        }
        if !allow_fixed_points {
            if let Some(i) = (0..n).find(|&i| perm[i] == i) {
                return Err(Error::domain(format!("permutation fixes node {i}")));
            }
        }
        if !(f.is_finite() && f >= 0.0) {
            return Err(Error::domain(format!("flow rate must be a nonnegative real, got {f}")));
        }
        Ok(PermutationFlow { perm, f, allow_fixed_points })
    }

    /// `λ_{i, σ(i)} = f`; fixed points contribute nothing.
    pub fn matrix(&self) -> TrafficMatrix {
        let mut t = TrafficMatrix::zeros(self.perm.len());
        for (i, &j) in self.perm.iter().enumerate() {
            t.set(i, j, self.f);
        }
        t
    }
}

/// `ρ(λ) = max_i max(Σ_k λ_ik, Σ_k λ_ki)`.
pub fn rho(lam: &TrafficMatrix) -> f64 {
    lam.row_sums().into_iter().chain(lam.col_sums()).fold(0.0, f64::max)
}

/// Valiant's two-stage split of `λ`: every source spreads its traffic evenly
/// over all `n` nodes, then each intermediate forwards to the destinations.
/// Self-shares are delivered in place and dropped from the diagonal.
pub fn two_stage_route(lam: &TrafficMatrix, f: f64) -> Result<(TrafficMatrix, TrafficMatrix)> {
    let n = lam.n();
    let r = rho(lam);
    let cap = n as f64 * f / 2.0;
    if r > cap * (1.0 + 1e-12) {
        return Err(Error::domain(format!("rho(lambda) = {r} exceeds n f / 2 = {cap}")));
    }
    let rows = lam.row_sums();
    let cols = lam.col_sums();
    let mut s1 = TrafficMatrix::zeros(n);
    let mut s2 = TrafficMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            s1.set(i, j, rows[i] / n as f64);
            s2.set(i, j, cols[j] / n as f64);
        }
    }
    Ok((s1, s2))
}

/// Bound `(1 - feasible/total) n f` on the distance between `U_n(f)` and the
/// time-shared average of feasible permutation flows.
pub fn time_share_deficit(n: usize, feasible_count: u64, total_perms: u64, f: f64) -> Result<f64> {
    if total_perms == 0 || feasible_count > total_perms {
        return Err(Error::domain(format!(
            "need 0 <= feasible ({feasible_count}) <= total ({total_perms}) and total >= 1"
        )));
    }
    Ok((1.0 - feasible_count as f64 / total_perms as f64) * n as f64 * f)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PermutationCount {
    pub feasible: u64,
    pub total: u64,
    /// All `n!` permutations were checked rather than a sample.
    pub exhaustive: bool,
}

/// Counts permutation flows `f Σ` routable on `g`: all `n!` for `n <= 5`,
/// otherwise `samples` uniform draws from the stream `(seed, n)`.
pub fn permutation_feasibility(
    g: &CapGraph,
    f: f64,
    samples: u64,
    seed: u64,
    opts: &FlowOptions,
) -> Result<PermutationCount> {
    let n = g.n();
    let check = |perm: Vec<NodeId>| -> Result<bool> {
        let lam = PermutationFlow::new(perm, f, true)?.matrix();
        Ok(check_feasible_with(g, &lam, opts)?.is_feasible())
    };
    if n <= 5 {
        let mut feasible = 0;
        let mut total = 0;
        for perm in permutations(n) {
            total += 1;
            feasible += u64::from(check(perm)?);
        }
        return Ok(PermutationCount { feasible, total, exhaustive: true });
    }
    let mut rng = stream_rng(seed, n as u64);
    let mut feasible = 0;
    for _ in 0..samples {
        let mut perm: Vec<NodeId> = (0..n).collect();
        perm.shuffle(&mut rng);
        feasible += u64::from(check(perm)?);
    }
    Ok(PermutationCount { feasible, total: samples, exhaustive: false })
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    let mut p: Vec<NodeId> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}
