//! Combinatorial interference: protocol and SINR-threshold conflict models,
//! greedy scheduling of the conflict graph, and the resulting flow and cut
//! bounds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{max_concurrent_pmf_with, FlowOptions, FlowSolution, FlowStatus};
use crate::graph::{sparsest_cut_exact, CapGraph, Edge, NodeId, WeightVector};
use crate::limits::Limits;
use crate::network::Network;
use crate::report::{BoundReport, LowerWitness};

/// Links with unit capacity and, for each link, the links that interfere
/// with it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub struct ConflictModel {
    graph: CapGraph,
    interferes: Vec<Vec<usize>>,
    /// Links sharing an endpoint also conflict.
    pub half_duplex: bool,
    /// Set by the SINR model: whether the rate-W sufficiency condition holds.
    pub valid_rate_w: Option<bool>,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    graph: CapGraph,
    interferes: BTreeMap<String, Vec<[NodeId; 2]>>,
    #[serde(default = "yes")]
    half_duplex: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    valid_rate_w: Option<bool>,
}

fn yes() -> bool {
    true
}

fn link_key(e: &Edge) -> String {
    format!("{},{}", e.tail, e.head)
}

impl TryFrom<ModelJson> for ConflictModel {
    type Error = Error;
    fn try_from(j: ModelJson) -> Result<Self> {
        let index: BTreeMap<(NodeId, NodeId), usize> =
            j.graph.edges().iter().enumerate().map(|(k, e)| ((e.tail, e.head), k)).collect();
        let mut interferes = vec![Vec::new(); j.graph.edges().len()];
        for (key, list) in &j.interferes {
            let parsed: Option<(NodeId, NodeId)> =
                key.split_once(',').and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
            let k = parsed
                .and_then(|p| index.get(&p).copied())
                .ok_or_else(|| Error::domain(format!("interference key {key:?} is not a link")))?;
            for &[a, b] in list {
                let other =
                    index.get(&(a, b)).ok_or_else(|| Error::domain(format!("interferer ({a}, {b}) is not a link")))?;
                interferes[k].push(*other);
            }
        }
        let mut m = ConflictModel::new(j.graph, interferes, j.half_duplex)?;
        m.valid_rate_w = j.valid_rate_w;
        Ok(m)
    }
}

impl From<ConflictModel> for ModelJson {
    fn from(m: ConflictModel) -> Self {
        let edges = m.graph.edges();
        let interferes = m
            .interferes
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(k, l)| (link_key(&edges[k]), l.iter().map(|&o| [edges[o].tail, edges[o].head]).collect()))
            .collect();
        ModelJson { graph: m.graph, interferes, half_duplex: m.half_duplex, valid_rate_w: m.valid_rate_w }
    }
}

impl ConflictModel {
    /// Capacities in `graph` are reset to 1.
    pub fn new(graph: CapGraph, mut interferes: Vec<Vec<usize>>, half_duplex: bool) -> Result<Self> {
        let graph = graph.with_capacities(|_| 1.0)?;
        let m = graph.edges().len();
        if interferes.len() != m {
            return Err(Error::domain(format!("{} interference lists for {m} links", interferes.len())));
        }
        let index: std::collections::HashSet<(NodeId, NodeId)> =
            graph.edges().iter().map(|e| (e.tail, e.head)).collect();
        if let Some(e) = graph.edges().iter().find(|e| !index.contains(&(e.head, e.tail))) {
            return Err(Error::domain(format!("link ({}, {}) lacks its reverse", e.tail, e.head)));
        }
        for (k, list) in interferes.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.iter().any(|&o| o >= m) {
                return Err(Error::domain(format!("link {k} lists an unknown interferer")));
            }
            if list.contains(&k) {
                return Err(Error::domain(format!("link {k} interferes with itself")));
            }
        }
        Ok(ConflictModel { graph, interferes, half_duplex, valid_rate_w: None })
    }

    pub fn graph(&self) -> &CapGraph {
        &self.graph
    }

    pub fn links(&self) -> &[Edge] {
        self.graph.edges()
    }

    /// Indices of the links in `I(e)`.
    pub fn interferers(&self, e: usize) -> &[usize] {
        &self.interferes[e]
    }

    pub fn max_interference(&self) -> usize {
        self.interferes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Symmetrised conflict graph on links, adjacency lists sorted.
    pub fn dual_graph(&self) -> Vec<Vec<usize>> {
        let edges = self.links();
        let m = edges.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (e, list) in self.interferes.iter().enumerate() {
            for &o in list {
                adj[e].push(o);
                adj[o].push(e);
            }
        }
        if self.half_duplex {
            let mut at: Vec<Vec<usize>> = vec![Vec::new(); self.graph.n()];
            for (k, e) in edges.iter().enumerate() {
                at[e.tail].push(k);
                at[e.head].push(k);
            }
            for list in &at {
                for &a in list {
                    adj[a].extend(list.iter().copied().filter(|&b| b != a));
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}

/// Links `(i, j)` with `r_ij <= r`, each interfered with by every link whose
/// transmitter is a third node within `(1 + eta) r_ij` of `j` (standard) or
/// `(1 + eta) r` (restricted). A receiver that is itself transmitting is a
/// half-duplex conflict, governed by `half_duplex`.
pub fn protocol_model(net: &Network, r: f64, eta: f64, restricted: bool, half_duplex: bool) -> Result<ConflictModel> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(Error::domain(format!("eta must be nonnegative, got {eta}")));
    }
    let d = net.distances();
    let n = net.n();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && d.get(i, j) <= r {
                triples.push((i, j, 1.0));
            }
        }
    }
    let graph = CapGraph::from_triples(n, &triples)?;
    let edges = graph.edges();
    let interferes = edges
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let reach = (1.0 + eta) * if restricted { r } else { d.get(e.tail, e.head) };
            edges
                .iter()
                .enumerate()
                .filter(|&(o, other)| {
                    o != k && other.tail != e.tail && other.tail != e.head && d.get(other.tail, e.head) <= reach
                })
                .map(|(o, _)| o)
                .collect()
        })
        .collect();
    ConflictModel::new(graph, interferes, half_duplex)
}

/// Largest `beta` for which every link of `E_gamma` sustains rate `w`:
/// `(1 / (n P)) (P gamma / (2^w - 1) - N0B)`.
pub fn sinr_beta_star(n: usize, power: f64, gamma: f64, w: f64, n0b: f64) -> f64 {
    (power * gamma / (2f64.powf(w) - 1.0) - n0b) / (n as f64 * power)
}

#[derive(Debug, Clone, Copy)]
pub struct SinrParams {
    pub gamma: f64,
    pub beta: f64,
    pub w: f64,
    pub n0b: f64,
}

/// SINR threshold model on the network's pathloss gains.
pub fn sinr_threshold_model(net: &Network, params: SinrParams, half_duplex: bool) -> Result<ConflictModel> {
    sinr_threshold_model_gains(&net.gain_matrix(), net.n(), net.power, params, half_duplex)
}

/// `E_γ = {(i, j) : h_ji >= γ}`; `I(e) = {ê ∈ E_γ : h_{e⁻ ê⁺} >= β}` where
/// `gains[a * n + b] = h_ab` is the gain from transmitter `b` to receiver `a`.
pub fn sinr_threshold_model_gains(
    gains: &[f64],
    n: usize,
    power: f64,
    p: SinrParams,
    half_duplex: bool,
) -> Result<ConflictModel> {
    for (name, v) in [("gamma", p.gamma), ("beta", p.beta), ("W", p.w), ("N0B", p.n0b)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    if gains.len() != n * n {
        return Err(Error::domain("gain matrix has the wrong size"));
    }
    if let Some(k) = gains.iter().position(|&h| !(h.is_finite() && h >= 0.0)) {
        return Err(Error::domain(format!("negative gain h({}, {})", k / n, k % n)));
    }
    let h = |a: usize, b: usize| gains[a * n + b];
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && h(j, i) >= p.gamma {
                triples.push((i, j, 1.0));
            }
        }
    }
    // Keep the edge set symmetric even for asymmetric gain tables.
    let set: std::collections::HashSet<_> = triples.iter().map(|t| (t.0, t.1)).collect();
    triples.retain(|t| set.contains(&(t.1, t.0)));
    let graph = CapGraph::from_triples(n, &triples)?;
    let edges = graph.edges();
    let interferes = edges
        .iter()
        .enumerate()
        .map(|(k, e)| {
            edges
                .iter()
                .enumerate()
                .filter(|&(o, other)| o != k && h(e.head, other.tail) >= p.beta)
                .map(|(o, _)| o)
                .collect()
        })
        .collect();
    let mut model = ConflictModel::new(graph, interferes, half_duplex)?;
    model.valid_rate_w = Some(p.beta <= sinr_beta_star(n, power, p.gamma, p.w, p.n0b));
    Ok(model)
}

/// Partition of the links into conflict-free activation classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub classes: Vec<Vec<usize>>,
    pub kappa_hat: usize,
    /// Maximum degree of the symmetrised conflict graph.
    pub delta_dual: usize,
}

impl Schedule {
    /// Time-shared capacity `1 / κ̂` on every link.
    pub fn cap_graph(&self, model: &ConflictModel) -> Result<CapGraph> {
        let c = if self.kappa_hat == 0 { 0.0 } else { 1.0 / self.kappa_hat as f64 };
        model.graph().with_capacities(|_| c)
    }
}

/// Greedy colouring of the conflict graph, highest degree first, each link
/// taking the lowest colour unused by its neighbours.
pub fn conflict_coloring(model: &ConflictModel) -> Schedule {
    let adj = model.dual_graph();
    let m = adj.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| adj[b].len().cmp(&adj[a].len()).then(a.cmp(&b)));
    let mut color = vec![usize::MAX; m];
    let mut used = Vec::new();
    let mut kappa = 0;
    for &e in &order {
        used.clear();
        used.resize(adj[e].len() + 1, false);
        for &o in &adj[e] {
            if color[o] < used.len() {
                used[color[o]] = true;
            }
        }
        let c = used.iter().position(|&u| !u).expect("degree + 1 slots");
        color[e] = c;
        kappa = kappa.max(c + 1);
    }
    let mut classes = vec![Vec::new(); kappa];
    for (e, &c) in color.iter().enumerate() {
        classes[c].push(e);
    }
    Schedule { classes, kappa_hat: kappa, delta_dual: adj.iter().map(Vec::len).max().unwrap_or(0) }
}

fn flow_or_limit(g: &CapGraph, w: &WeightVector, opts: &FlowOptions) -> Result<FlowSolution> {
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

/// `f₂*` (capacities `1/κ̂`, achievable) below and `f₁*` (unit capacities)
/// above. In the approximate flow mode the lower side is a feasible flow and
/// the upper side a dual bound.
pub fn umf_bounds_combinatorial(model: &ConflictModel, w: &WeightVector, opts: &FlowOptions) -> Result<BoundReport> {
    let sched = conflict_coloring(model);
    if sched.kappa_hat == 0 {
        return Ok(BoundReport::new(0.0, 0.0, Vec::new()).with("kappa_hat", 0.0).with("delta_dual", 0.0));
    }
    let ones = model.graph().clone();
    let shared = sched.cap_graph(model)?;
    let f1 = flow_or_limit(&ones, w, opts)?;
    let f2 = flow_or_limit(&shared, w, opts)?;
    let approximate = f1.status == FlowStatus::Approximate || f2.status == FlowStatus::Approximate;
    let upper = if approximate { f1.f_upper.unwrap_or(f1.f) } else { f1.f };
    let mut report = BoundReport::new(f2.f, upper, Vec::new())
        .with("f1", f1.f)
        .with("f2", f2.f)
        .with("kappa_hat", sched.kappa_hat as f64)
        .with("delta_dual", sched.delta_dual as f64)
        .with("max_interference", model.max_interference() as f64);
    if approximate {
        report = report.with("approximate", 1.0);
    }
    report.lower_witness = Some(LowerWitness { capacities: Some(shared), flow: Some(f2) });
    Ok(report)
}

/// Brackets `Ψ*` between `Ψ_π(1/κ̂)` and `Ψ_π(1)`, and carries `f₂*` and
/// `f₁*` when the LP fits.
pub fn psi_bounds(model: &ConflictModel, w: &WeightVector, limits: &Limits) -> Result<BoundReport> {
    let sched = conflict_coloring(model);
    if sched.kappa_hat == 0 {
        return Ok(BoundReport::new(0.0, 0.0, Vec::new()).with("kappa_hat", 0.0));
    }
    let upper = sparsest_cut_exact(model.graph(), w, limits.enumeration)?;
    let shared = sched.cap_graph(model)?;
    let lower = sparsest_cut_exact(&shared, w, limits.enumeration)?;
    let mut report = BoundReport::new(lower.sparsity, upper.sparsity, upper.side_s.clone())
        .with("psi_lower", lower.sparsity)
        .with("psi_upper", upper.sparsity)
        .with("kappa_hat", sched.kappa_hat as f64)
        .with("delta_dual", sched.delta_dual as f64);
    let opts = FlowOptions::with_limits(*limits);
    let f1 = max_concurrent_pmf_with(model.graph(), w, &opts)?;
    let f2 = max_concurrent_pmf_with(&shared, w, &opts)?;
    if f1.is_optimal() && f2.is_optimal() {
        report = report.with("f1", f1.f).with("f2", f2.f);
    }
    report.lower_witness = Some(LowerWitness { capacities: Some(shared), flow: None });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, Region};
    use crate::network::Pathloss;

    fn line(xs: &[f64]) -> Network {
        let pts = xs.iter().map(|&x| Point::new(x, 0.0)).collect();
        Network::new(Region::Square { side: 10.0 }, pts, 1.0, Pathloss::default()).unwrap()
    }

    fn link(m: &ConflictModel, a: usize, b: usize) -> usize {
        m.links().iter().position(|e| e.tail == a && e.head == b).unwrap()
    }

    #[test]
    fn two_nodes_no_interference() {
        let m = protocol_model(&line(&[0.0, 0.5]), 1.0, 0.1, false, false).unwrap();
        assert_eq!(m.links().len(), 2);
        assert!(m.interferers(0).is_empty() && m.interferers(1).is_empty());
    }

    #[test]
    fn collinear_protocol() {
        let net = line(&[0.0, 1.0, 2.0]);
        let std = protocol_model(&net, 1.2, 0.1, false, false).unwrap();
        assert_eq!(std.links().len(), 4);
        let e01 = link(&std, 0, 1);
        assert!(std.interferers(e01).contains(&link(&std, 2, 1)));
        let res = protocol_model(&net, 1.2, 0.1, true, false).unwrap();
        for k in 0..std.links().len() {
            let s: Vec<_> = std.interferers(k).to_vec();
            assert!(s.iter().all(|o| res.interferers(k).contains(o)));
        }
    }

    #[test]
    fn sinr_threshold_examples() {
        assert!((sinr_beta_star(10, 1.0, 1.0, 1.0, 0.1) - 0.09).abs() < 1e-15);
        let gains = vec![0.0, 1.0, 1.0, 0.0];
        let p = SinrParams { gamma: 1.0, beta: 2.0, w: 1.0, n0b: 0.1 };
        let m = sinr_threshold_model_gains(&gains, 2, 1.0, p, false).unwrap();
        assert_eq!(m.links().len(), 2);
        assert!(m.interferers(0).is_empty());
        assert_eq!(m.valid_rate_w, Some(false));
        let neg = vec![0.0, -1.0, 1.0, 0.0];
        assert!(sinr_threshold_model_gains(&neg, 2, 1.0, p, false).is_err());
    }

    /// Bidirected path on `k + 1` nodes with `I(e_i) = {e_{i+1}}` along the
    /// edge order, so the conflict graph is a path.
    fn dual_path(nodes: usize) -> ConflictModel {
        let mut t = Vec::new();
        for i in 0..nodes - 1 {
            t.push((i, i + 1, 1.0));
            t.push((i + 1, i, 1.0));
        }
        let g = CapGraph::from_triples(nodes, &t).unwrap();
        let m = g.edges().len();
        let inter = (0..m).map(|k| if k + 1 < m { vec![k + 1] } else { vec![] }).collect();
        ConflictModel::new(g, inter, false).unwrap()
    }

    #[test]
    fn coloring_examples() {
        let free = protocol_model(&line(&[0.0, 0.5]), 1.0, 0.0, false, false).unwrap();
        let free = ConflictModel::new(free.graph().clone(), vec![vec![], vec![]], false).unwrap();
        assert_eq!(conflict_coloring(&free).kappa_hat, 1);

        let g = CapGraph::from_triples(3, &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0)]).unwrap();
        let all: Vec<Vec<usize>> = (0..4).map(|k| (0..4).filter(|&o| o != k).collect()).collect();
        assert_eq!(conflict_coloring(&ConflictModel::new(g, all, false).unwrap()).kappa_hat, 4);

        let s = conflict_coloring(&dual_path(4));
        assert_eq!(s.kappa_hat, 2);
        assert!(s.kappa_hat <= s.delta_dual + 1);
    }

    #[test]
    fn half_duplex_adds_shared_endpoints() {
        let g = CapGraph::from_triples(3, &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0)]).unwrap();
        let m = ConflictModel::new(g, vec![vec![]; 4], true).unwrap();
        assert_eq!(conflict_coloring(&m).kappa_hat, 4);
    }

    #[test]
    fn combinatorial_bounds_on_dual_path() {
        let m = dual_path(4);
        let w = WeightVector::uniform(4);
        let r = umf_bounds_combinatorial(&m, &w, &FlowOptions::default()).unwrap();
        assert_eq!(r.meta("kappa_hat"), Some(2.0));
        assert!((r.upper - 0.25).abs() < 1e-10);
        assert!((r.lower - 0.125).abs() < 1e-10);
        let p = psi_bounds(&m, &w, &Limits::default()).unwrap();
        assert!((p.lower - 0.125).abs() < 1e-12);
        assert!((p.upper - 2.0 * p.lower).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let m = protocol_model(&line(&[0.0, 1.0, 2.0]), 1.2, 0.1, true, true).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains(r#""0,1":[["#));
        let back: ConflictModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
