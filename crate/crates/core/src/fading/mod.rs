//! Gaussian fading channels: per-link rates, capacitated graphs and PMF bounds
//! with channel knowledge at the receivers only, at both ends, or without
//! fading (AWGN).

pub mod quadrature;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{max_concurrent_pmf_with, FlowOptions, FlowSolution, FlowStatus};
use crate::geometry::{connectivity_radius, DistanceMatrix};
use crate::graph::{for_each_cut, sparsest_cut, CapGraph, Cut, Edge, NodeId, WeightVector};
use crate::network::Network;
use crate::report::{BoundReport, LowerWitness};
use crate::rng::stream_rng;

const ABS_TOL: f64 = 1e-10;
const REL_TOL: f64 = 1e-10;

/// `E[log(1 + s X)]` for `X ~ Exp(1)`, the ergodic rate of a Rayleigh-faded
/// link at mean SNR `s`.
pub fn expected_log_capacity(s: f64) -> f64 {
    assert!(s >= 0.0, "SNR must be nonnegative, got {s}");
    if s == 0.0 {
        return 0.0;
    }
    quadrature::integrate_half_line(|x| (s * x).ln_1p() * (-x).exp(), ABS_TOL, REL_TOL).0
}

/// `E[log(1 + a R)]` for `R` Rayleigh with `E[R^2] = 1` (density `2r e^{-r^2}`).
pub fn expected_log_rayleigh(a: f64) -> f64 {
    assert!(a >= 0.0, "amplitude must be nonnegative, got {a}");
    if a == 0.0 {
        return 0.0;
    }
    quadrature::integrate_half_line(|r| (a * r).ln_1p() * 2.0 * r * (-r * r).exp(), ABS_TOL, REL_TOL).0
}

/// One realization of the squared channel magnitudes `|H_ij|^2 = g(r_ij) |Ĥ_ij|^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDraw {
    pub n: usize,
    /// Row-major, zero diagonal.
    pub gains2: Vec<f64>,
    pub seed: u64,
}

impl ChannelDraw {
    pub fn sample(net: &Network, seed: u64, stream: u64) -> ChannelDraw {
        let n = net.n();
        let g = net.gain_matrix();
        let mut rng = stream_rng(seed, stream);
        let gains2 = g
            .iter()
            .map(|&gij| {
                let x: f64 = rng.sample(Exp1);
                gij * x
            })
            .collect();
        ChannelDraw { n, gains2, seed }
    }

    pub fn get(&self, i: NodeId, j: NodeId) -> f64 {
        self.gains2[i * self.n + j]
    }
}

/// Both sides of `Σ log(1 + √x_i) <= √(2N) √(Σ log(1 + x_i))` for `x_i ∈ (0, 1)`.
pub fn ineq1_sides(x: &[f64]) -> (f64, f64) {
    let lhs = x.iter().map(|v| v.sqrt().ln_1p()).sum();
    let rhs = (2.0 * x.len() as f64).sqrt() * x.iter().map(|v| v.ln_1p()).sum::<f64>().sqrt();
    (lhs, rhs)
}

/// Both sides of `(1/α) log(1 + α x) >= log(1 + x)` for `x >= 0`, `α ∈ (0, 1)`.
pub fn ineq2_sides(x: f64, alpha: f64) -> (f64, f64) {
    ((alpha * x).ln_1p() / alpha, x.ln_1p())
}

/// Upper-bound graph with channel knowledge at the receivers: the complete
/// directed graph with `c_ij = E log(1 + P |H_ij|^2)`.
pub fn build_upper_graph_rx_csi(net: &Network) -> Result<CapGraph> {
    net.validate()?;
    let d = net.distances();
    CapGraph::complete(net.n(), |i, j| expected_log_capacity(net.power * net.gain(d.get(i, j))))
}

/// `δ(r) = max_i Σ_{j: r_ij >= r} P g(r_ij)`, the worst far-field power at a node.
pub fn residual_interference(net: &Network, d: &DistanceMatrix, r: f64) -> f64 {
    let n = net.n();
    (0..n)
        .map(|i| {
            (0..n).filter(|&j| j != i && d.get(i, j) >= r).fold(0.0, |acc, j| acc + net.power * net.gain(d.get(i, j)))
        })
        .fold(0.0, f64::max)
}

/// Smallest pairwise distance `r` with `δ(r) <= delta`. `δ` is constant on each
/// interval between consecutive distances, so the right endpoints suffice;
/// when only the empty far field qualifies the result lies just above the
/// largest distance.
pub fn r_of_delta(net: &Network, d: &DistanceMatrix, delta: f64) -> f64 {
    let cands = d.sorted_distances();
    let k = cands.partition_point(|&r| residual_interference(net, d, r) > delta);
    match cands.get(k) {
        Some(&r) => r,
        None => cands.last().map_or(0.0, |&r| r.next_up()),
    }
}

/// Diagnostic radius `r_ε`: the smallest distance with `δ(r) <= n^{-1-ε}`,
/// together with whether `G_{r_ε}` is connected.
pub fn r_epsilon(net: &Network, eps: f64) -> Result<(f64, bool)> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!("epsilon must be positive, got {eps}")));
    }
    let d = net.distances();
    let r = r_of_delta(net, &d, (net.n() as f64).powf(-1.0 - eps));
    Ok((r, d.connected_at(r)))
}

fn require_radius(net: &Network, r: f64) -> Result<f64> {
    let r_star = connectivity_radius(&net.points, net.region.metric())?;
    if !(r >= r_star * (1.0 - 1e-12)) {
        return Err(Error::domain(format!("r = {r} is below the connectivity radius r* = {r_star}")));
    }
    Ok(r_star)
}

fn edges_within(n: usize, d: &DistanceMatrix, r: f64, mut cap: impl FnMut(NodeId, NodeId) -> f64) -> Vec<Edge> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && d.get(i, j) <= r {
                edges.push(Edge { tail: i, head: j, capacity: cap(i, j) });
            }
        }
    }
    edges
}

/// Lower-bound graph for the scheme that silences every node within
/// `r(1 + η)` of an active receiver: the edges of `G_r` with capacity
/// `E log(1 + P |H_ij|^2 / (1 + n P g(r(1+η)))) / (1 + Δ(r) Δ(r(1+η)))`.
pub fn build_lower_graph_rx_csi(net: &Network, r: f64, eta: f64) -> Result<(CapGraph, BoundMeta)> {
    net.validate()?;
    if !(eta >= 0.0) {
        return Err(Error::domain(format!("eta must be nonnegative, got {eta}")));
    }
    require_radius(net, r)?;
    let n = net.n();
    let d = net.distances();
    let r_eta = r * (1.0 + eta);
    let delta_r = d.max_degree(r) as f64;
    let delta_r_eta = d.max_degree(r_eta) as f64;
    let denominator = 1.0 + n as f64 * net.power * net.gain(r_eta);
    let alpha = 1.0 + delta_r * delta_r_eta;
    let edges =
        edges_within(n, &d, r, |i, j| expected_log_capacity(net.power * net.gain(d.get(i, j)) / denominator) / alpha);
    let meta = vec![
        ("Delta_r".to_string(), delta_r),
        ("Delta_r_eta".to_string(), delta_r_eta),
        ("interference_denominator".to_string(), denominator),
        ("tdma_alpha".to_string(), alpha),
    ];
    Ok((CapGraph::new(n, edges)?, meta))
}

/// Named scalars attached to a constructed graph.
pub type BoundMeta = Vec<(String, f64)>;

/// `γ(r) = max_S far(S) / near(S)`: the largest ratio of cut capacity carried
/// by pairs farther than `r` to that carried by pairs within `r`. Exhaustive
/// up to `limit` nodes, otherwise a maximum over sampled cuts (a lower
/// estimate, flagged by the returned `bool`).
pub fn far_near_ratio(near: &CapGraph, far: &CapGraph, limit: usize, seed: u64) -> (f64, bool) {
    let n = near.n();
    let (a, b) = (near.capacity_matrix(), far.capacity_matrix());
    let ratio = |num: f64, den: f64| {
        if num <= 0.0 {
            0.0
        } else if den <= 0.0 {
            f64::INFINITY
        } else {
            num / den
        }
    };
    if n <= limit.min(63) {
        let mut best: f64 = 0.0;
        let ones = vec![1.0; n];
        for_each_cut(n, &[&a, &b], &ones, |_, _, _, vals| best = best.max(ratio(vals[1], vals[0])));
        return (best, false);
    }
    let mut rng = stream_rng(seed, n as u64);
    let mut best: f64 = 0.0;
    let mut side = vec![false; n];
    for _ in 0..4096 {
        for s in side.iter_mut() {
            *s = rng.random::<bool>();
        }
        if side.iter().all(|&s| s) || side.iter().all(|&s| !s) {
            continue;
        }
        let (mut num, mut den) = (0.0, 0.0);
        for i in (0..n).filter(|&i| side[i]) {
            for j in (0..n).filter(|&j| !side[j]) {
                num += b[i * n + j];
                den += a[i * n + j];
            }
        }
        best = best.max(ratio(num, den));
    }
    (best, true)
}

fn lower_flow(g: &CapGraph, w: &WeightVector, opts: &FlowOptions) -> Result<FlowSolution> {
    let sol = max_concurrent_pmf_with(g, w, opts)?;
    if sol.status == FlowStatus::LimitExceeded {
        return Err(Error::Capability {
            what: "concurrent-flow LP rows",
            limit: opts.limits.lp_rows,
            got: opts.limits.lp_rows + 1,
        });
    }
    Ok(sol)
}

fn split(g: &CapGraph, keep: impl Fn(&Edge) -> bool) -> Result<CapGraph> {
    g.with_capacities(|e| if keep(e) { e.capacity } else { 0.0 })
}

/// Bounds with channel knowledge at the receivers only.
///
/// Upper: `(1 + γ(r)) Υ`, with `Υ` the sparsest cut of the expected-capacity
/// graph restricted to pairs within `r`. Lower: the exact PMF of `G_r` with
/// capacities `E log(1 + P |H_ij|^2 / (1 + δ(r))) / (1 + Δ(r)^2)`.
/// `upper_theorem` in the metadata is the unrestricted sparsest cut.
pub fn pmf_bounds_rx_csi(net: &Network, w: &WeightVector, r: f64, opts: &FlowOptions) -> Result<BoundReport> {
    net.validate()?;
    let n = net.n();
    w.require_pmf(n)?;
    let r_star = require_radius(net, r)?;
    let limit = opts.limits.enumeration;
    let d = net.distances();
    let full = build_upper_graph_rx_csi(net)?;
    let near = split(&full, |e| d.get(e.tail, e.head) <= r)?;
    let far = split(&full, |e| d.get(e.tail, e.head) > r)?;

    let upsilon = sparsest_cut(&near, w, limit)?;
    let theorem = sparsest_cut(&full, w, limit)?;
    let (gamma, gamma_sampled) = far_near_ratio(&near, &far, limit, 0);
    let upper = (1.0 + gamma) * upsilon.sparsity;

    let delta = residual_interference(net, &d, r);
    let big_delta = d.max_degree(r) as f64;
    let tdma = 1.0 + big_delta * big_delta;
    let lower_g = CapGraph::new(
        n,
        edges_within(n, &d, r, |i, j| expected_log_capacity(net.power * net.gain(d.get(i, j)) / (1.0 + delta)) / tdma),
    )?;
    let sol = lower_flow(&lower_g, w, opts)?;

    let mut report = BoundReport::new(sol.f, upper, upsilon.side_s.clone())
        .with("r", r)
        .with("r_star", r_star)
        .with("delta_r", delta)
        .with("gamma_r", gamma)
        .with("Delta_r", big_delta)
        .with("upsilon", upsilon.sparsity)
        .with("upper_theorem", theorem.sparsity)
        .with("log_p_pi", (w.p_pi() as f64).ln());
    report.heuristic = upsilon.heuristic || theorem.heuristic || gamma_sampled || !sol.is_optimal();
    report.lower_witness = Some(LowerWitness { capacities: Some(lower_g), flow: Some(sol) });
    Ok(report)
}

/// Bounds for deterministic channels at low SNR (`P g(r_ij) <= 1` for every pair).
///
/// Upper: `min_S 2 Σ log(1 + √(P g(r_ij))) / (π(S) π(S^c))` over the complete
/// graph. Lower: the exact PMF of `G_r` for `r = max(r(δ), r*)` with capacities
/// `log(1 + P g(r_ij) / (1 + δ)) / (1 + Δ(r)^2)`.
pub fn pmf_bounds_awgn(net: &Network, w: &WeightVector, delta: f64, opts: &FlowOptions) -> Result<BoundReport> {
    net.validate()?;
    let n = net.n();
    w.require_pmf(n)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!("delta must be positive, got {delta}")));
    }
    let d = net.distances();
    let snr = |i: NodeId, j: NodeId| net.power * net.gain(d.get(i, j));
    let hot: Vec<(NodeId, NodeId)> =
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).filter(|&(i, j)| snr(i, j) > 1.0).collect();
    if !hot.is_empty() {
        let shown: Vec<String> =
            hot.iter().take(10).map(|&(i, j)| format!("({i}, {j}): P g = {:.4}", snr(i, j))).collect();
        return Err(Error::domain(format!(
            "low-SNR bound needs P g(r_ij) <= 1 for all pairs; {} pair(s) violate it: {}{}",
            hot.len(),
            shown.join(", "),
            if hot.len() > 10 { ", ..." } else { "" }
        )));
    }
    let limit = opts.limits.enumeration;
    let r_star = connectivity_radius(&net.points, net.region.metric())?;
    let r_delta = r_of_delta(net, &d, delta);
    let r = r_delta.max(r_star);

    let half = CapGraph::complete(n, |i, j| snr(i, j).sqrt().ln_1p())?;
    let theorem = sparsest_cut(&half.scaled(2.0), w, limit)?;
    let truncated = split(&half, |e| d.get(e.tail, e.head) <= r_delta)?;
    let upsilon = sparsest_cut(&truncated, w, limit)?;

    let big_delta = d.max_degree(r) as f64;
    let tdma = 1.0 + big_delta * big_delta;
    let lower_g = CapGraph::new(n, edges_within(n, &d, r, |i, j| (snr(i, j) / (1.0 + delta)).ln_1p() / tdma))?;
    let sol = lower_flow(&lower_g, w, opts)?;

    let mut report = BoundReport::new(sol.f, theorem.sparsity, theorem.side_s.clone())
        .with("delta", delta)
        .with("I_r_delta", residual_interference(net, &d, r_delta))
        .with("r_delta", r_delta)
        .with("r_star", r_star)
        .with("r", r)
        .with("Delta_r_delta", d.max_degree(r_delta) as f64)
        .with("Delta_r", big_delta)
        .with("upsilon_truncated", upsilon.sparsity)
        .with("log_p_pi", (w.p_pi() as f64).ln());
    report.heuristic = upsilon.heuristic || theorem.heuristic || !sol.is_optimal();
    report.lower_witness = Some(LowerWitness { capacities: Some(lower_g), flow: Some(sol) });
    Ok(report)
}

/// Upper bound with channel knowledge at both ends: the sparsest cut of the
/// complete graph with `c_ij = 2 E log(1 + √(P g(r_ij)) |Ĥ|)`.
pub fn upper_bound_txrx_csi(net: &Network, w: &WeightVector, limit: usize) -> Result<(f64, Cut)> {
    net.validate()?;
    w.require_pmf(net.n())?;
    let d = net.distances();
    let g =
        CapGraph::complete(net.n(), |i, j| 2.0 * expected_log_rayleigh((net.power * net.gain(d.get(i, j))).sqrt()))?;
    let cut = sparsest_cut(&g, w, limit)?;
    Ok((cut.sparsity, cut))
}
