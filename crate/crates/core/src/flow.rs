//! Maximum concurrent multicommodity flow, traffic feasibility and the
//! wireline cut/flow bound report.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    dense_cut, for_each_cut, mask_to_nodes, sparsest_cut_exact, BestCut, CapGraph, Cut, NodeId, WeightVector,
};
use crate::limits::Limits;
use crate::lp::{LinearProgram, LpStatus, RowKind, SimplexOptions};
use crate::report::{BoundReport, LowerWitness};
use crate::traffic::TrafficMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowStatus {
    Optimal,
    /// Feasible concurrent flow from the multiplicative-weights mode; `f`
    /// is a certified lower bound and `f_upper` a certified upper bound.
    Approximate,
    Infeasible,
    LimitExceeded,
}

/// Flow of the commodity rooted at `source` on edge `tail -> head`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeFlow {
    pub source: NodeId,
    pub tail: NodeId,
    pub head: NodeId,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSolution {
    pub f: f64,
    pub status: FlowStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f_upper: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub flows: Vec<EdgeFlow>,
}

impl FlowSolution {
    fn empty(f: f64, status: FlowStatus) -> Self {
        FlowSolution { f, status, f_upper: None, flows: Vec::new() }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == FlowStatus::Optimal
    }

    /// Total flow per edge, indexed like `g.edges()`.
    pub fn edge_totals(&self, g: &CapGraph) -> Vec<f64> {
        let mut index = std::collections::HashMap::new();
        for (k, e) in g.edges().iter().enumerate() {
            index.insert((e.tail, e.head), k);
        }
        let mut total = vec![0.0; g.edges().len()];
        for fl in &self.flows {
            total[index[&(fl.tail, fl.head)]] += fl.value;
        }
        total
    }

    /// Net inflow minus outflow of `source`'s commodity at every node.
    pub fn net_inflow(&self, n: usize, source: NodeId) -> Vec<f64> {
        let mut net = vec![0.0; n];
        for fl in self.flows.iter().filter(|fl| fl.source == source) {
            net[fl.head] += fl.value;
            net[fl.tail] -= fl.value;
        }
        net
    }

    pub fn scaled(&self, factor: f64) -> FlowSolution {
        FlowSolution {
            f: self.f * factor,
            status: self.status,
            f_upper: self.f_upper.map(|u| u * factor),
            flows: self.flows.iter().map(|fl| EdgeFlow { value: fl.value * factor, ..*fl }).collect(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct FlowOptions {
    pub limits: Limits,
    /// Accuracy of the multiplicative-weights mode used when the LP exceeds
    /// `limits.lp_rows`; `None` reports `LimitExceeded` instead.
    pub approximate: Option<f64>,
    pub simplex: SimplexOptions,
}

impl FlowOptions {
    pub fn with_limits(limits: Limits) -> Self {
        FlowOptions { limits, ..Default::default() }
    }

    pub fn approximate(mut self, eps: f64) -> Self {
        self.approximate = Some(eps);
        self
    }
}

/// Exact `f*_π(C)`: the largest `f` such that demands `f π(i) π(j)` between all
/// ordered pairs route simultaneously within the capacities.
pub fn max_concurrent_pmf(g: &CapGraph, w: &WeightVector) -> Result<FlowSolution> {
    max_concurrent_pmf_with(g, w, &FlowOptions::default())
}

pub fn max_concurrent_pmf_with(g: &CapGraph, w: &WeightVector, opts: &FlowOptions) -> Result<FlowSolution> {
    if g.n() < 2 {
        return Err(Error::domain("flow needs at least 2 nodes"));
    }
    w.require_pmf(g.n())?;
    let pi = w.values();
    let n = g.n();
    let demand: Vec<f64> = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { pi[k / n] * pi[k % n] }).collect();
    max_concurrent_dense(g, &demand, opts)
}

/// Largest `t` such that `t λ` is routable.
pub fn max_concurrent(g: &CapGraph, lam: &TrafficMatrix, opts: &FlowOptions) -> Result<FlowSolution> {
    if lam.n() != g.n() {
        return Err(Error::domain(format!("traffic matrix has {} nodes, graph has {}", lam.n(), g.n())));
    }
    max_concurrent_dense(g, lam.as_slice(), opts)
}

/// Source-aggregated concurrent-flow instance with reachability pruning.
struct Instance {
    n: usize,
    /// Active edges `(tail, head, capacity)`.
    edges: Vec<(NodeId, NodeId, f64)>,
    sources: Vec<NodeId>,
    reach: Vec<Vec<bool>>,
    demand: Vec<f64>,
}

impl Instance {
    /// `None` when some positive demand has no directed path.
    fn build(g: &CapGraph, demand: &[f64]) -> Option<Self> {
        let n = g.n();
        let edges: Vec<_> = g.active_edges().map(|e| (e.tail, e.head, e.capacity)).collect();
        let mut sources = Vec::new();
        let mut reach = Vec::new();
        for s in 0..n {
            if (0..n).all(|j| demand[s * n + j] <= 0.0) {
                continue;
            }
            let r = g.reachable_from(s);
            if (0..n).any(|j| demand[s * n + j] > 0.0 && !r[j]) {
                return None;
            }
            sources.push(s);
            reach.push(r);
        }
        Some(Instance { n, edges, sources, reach, demand: demand.to_vec() })
    }

    fn lp_rows(&self) -> usize {
        self.reach.iter().map(|r| r.iter().filter(|&&b| b).count() - 1).sum::<usize>() + self.edges.len()
    }
}

fn max_concurrent_dense(g: &CapGraph, demand: &[f64], opts: &FlowOptions) -> Result<FlowSolution> {
    if let Some((k, v)) = demand.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::domain(format!("demand entry {k} is {v}")));
    }
    if demand.iter().all(|&v| v == 0.0) {
        return Err(Error::domain("demand matrix is identically zero"));
    }
    let Some(inst) = Instance::build(g, demand) else {
        return Ok(FlowSolution::empty(0.0, FlowStatus::Optimal));
    };
    let rows = inst.lp_rows();
    if rows > opts.limits.lp_rows {
        return match opts.approximate {
            Some(eps) => Ok(approximate_concurrent(&inst, eps)),
            None => Ok(FlowSolution::empty(f64::NAN, FlowStatus::LimitExceeded)),
        };
    }
    Ok(solve_lp(&inst, &opts.simplex))
}

fn solve_lp(inst: &Instance, simplex: &SimplexOptions) -> FlowSolution {
    let n = inst.n;
    let cap_scale = inst.edges.iter().fold(0.0f64, |a, e| a.max(e.2));
    let dem_scale = inst.demand.iter().fold(0.0f64, |a, &v| a.max(v));
    let mut lp = LinearProgram::new();
    let t = lp.add_var(1.0);
    // (source index, edge index, variable) for every flow variable.
    let mut vars: Vec<(usize, usize, usize)> = Vec::new();
    let mut in_rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut row_of = vec![vec![usize::MAX; n]; inst.sources.len()];
    let mut next_row = 0;
    for (si, &s) in inst.sources.iter().enumerate() {
        for v in 0..n {
            if v != s && inst.reach[si][v] {
                row_of[si][v] = next_row;
                next_row += 1;
            }
        }
    }
    in_rows.resize(next_row, Vec::new());
    let mut cap_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); inst.edges.len()];
    let mut parent_var = vec![vec![usize::MAX; n]; inst.sources.len()];
    for (si, &s) in inst.sources.iter().enumerate() {
        let tree = bfs_tree(inst, s);
        for (k, &(a, b, _)) in inst.edges.iter().enumerate() {
            if !inst.reach[si][a] || b == s {
                continue;
            }
            let x = lp.add_var(0.0);
            vars.push((si, k, x));
            in_rows[row_of[si][b]].push((x, 1.0));
            if a != s {
                in_rows[row_of[si][a]].push((x, -1.0));
            }
            cap_rows[k].push((x, 1.0));
            if tree[b] == Some(k) {
                parent_var[si][b] = x;
            }
        }
        for v in 0..n {
            let d = inst.demand[s * n + v] / dem_scale;
            if row_of[si][v] != usize::MAX && d > 0.0 {
                in_rows[row_of[si][v]].push((t, -d));
            }
        }
    }
    for coefs in in_rows {
        lp.add_row(coefs, RowKind::Eq, 0.0);
    }
    for (k, coefs) in cap_rows.into_iter().enumerate() {
        lp.add_row(coefs, RowKind::Le, inst.edges[k].2 / cap_scale);
    }
    for (si, &s) in inst.sources.iter().enumerate() {
        for v in 0..n {
            if v != s && inst.reach[si][v] && parent_var[si][v] != usize::MAX {
                lp.hint_basic(row_of[si][v], parent_var[si][v]);
            }
        }
    }
    let sol = lp.solve(simplex);
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return FlowSolution::empty(0.0, FlowStatus::Infeasible),
        _ => return FlowSolution::empty(f64::NAN, FlowStatus::LimitExceeded),
    }
    let f = sol.x[t] * cap_scale / dem_scale;
    let flows = vars
        .iter()
        .filter(|&&(_, _, x)| sol.x[x] > 0.0)
        .map(|&(si, k, x)| EdgeFlow {
            source: inst.sources[si],
            tail: inst.edges[k].0,
            head: inst.edges[k].1,
            value: sol.x[x] * cap_scale,
        })
        .collect();
    FlowSolution { f, status: FlowStatus::Optimal, f_upper: None, flows }
}

/// Parent edge of every node in a breadth-first tree from `s`.
fn bfs_tree(inst: &Instance, s: NodeId) -> Vec<Option<usize>> {
    let mut out: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); inst.n];
    for (k, &(a, b, _)) in inst.edges.iter().enumerate() {
        out[a].push((b, k));
    }
    let mut parent = vec![None; inst.n];
    let mut seen = vec![false; inst.n];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(v, k) in &out[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(k);
                queue.push_back(v);
            }
        }
    }
    parent
}

/// Multiplicative-weights concurrent flow. Demands are first scaled by the
/// value `f0` of routing everything on capacity-weighted shortest paths, then
/// each source pushes its demand along shortest-path trees under exponential
/// edge lengths. The returned `f` is the least routed fraction of any
/// commodity divided by the worst congestion, so it is feasible; `f_upper` is
/// the best length-function dual bound seen.
fn approximate_concurrent(inst: &Instance, eps: f64) -> FlowSolution {
    let n = inst.n;
    let m = inst.edges.len();
    let eps = eps.clamp(1e-4, 0.5);
    let mut out: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); n];
    for (k, &(a, b, _)) in inst.edges.iter().enumerate() {
        out[a].push((b, k));
    }
    let cap: Vec<f64> = inst.edges.iter().map(|e| e.2).collect();
    let mut len: Vec<f64> = cap.iter().map(|c| 1.0 / c).collect();

    let tree_load = |len: &[f64], s: NodeId, rem: &[f64]| {
        let (_, parent) = dijkstra(&out, len, s);
        let mut edge_load = vec![0.0; m];
        for j in (0..n).filter(|&j| rem[j] > 0.0) {
            let mut v = j;
            while let Some(k) = parent[v] {
                edge_load[k] += rem[j];
                v = inst.edges[k].0;
            }
        }
        edge_load
    };
    let mut base = vec![0.0; m];
    for &s in &inst.sources {
        let rem = &inst.demand[s * n..(s + 1) * n];
        for (b, l) in base.iter_mut().zip(tree_load(&len, s, rem)) {
            *b += l;
        }
    }
    let f0 = 1.0 / base.iter().zip(&cap).fold(0.0f64, |a, (l, c)| a.max(l / c));
    let demand: Vec<f64> = inst.demand.iter().map(|d| d * f0).collect();

    let mut load = vec![0.0; m];
    let mut flow: Vec<Vec<f64>> = vec![vec![0.0; m]; inst.sources.len()];
    let mut routed = vec![0.0; inst.sources.len()];
    let mut best_upper = f64::INFINITY;
    let mut best_lower = 0.0;
    let max_phases = (40.0 / (eps * eps)).ceil() as usize;
    for phase in 1..=max_phases {
        for (si, &s) in inst.sources.iter().enumerate() {
            let mut rem = demand[s * n..(s + 1) * n].to_vec();
            let mut left = 1.0;
            for _ in 0..4 * m + 8 {
                let edge_load = tree_load(&len, s, &rem);
                let sigma =
                    edge_load.iter().zip(&cap).filter(|(l, _)| **l > 0.0).fold(1.0f64, |a, (l, c)| a.min(c / l));
                for k in 0..m {
                    if edge_load[k] > 0.0 {
                        let add = sigma * edge_load[k];
                        flow[si][k] += add;
                        load[k] += add;
                        len[k] *= 1.0 + eps * add / cap[k];
                    }
                }
                rem.iter_mut().for_each(|r| *r *= 1.0 - sigma);
                left *= 1.0 - sigma;
                if sigma >= 1.0 || left <= 1e-12 {
                    break;
                }
            }
            routed[si] += 1.0 - left;
            let top = len.iter().fold(0.0f64, |a, &b| a.max(b));
            len.iter_mut().for_each(|l| *l /= top);
        }
        let congestion = load.iter().zip(&cap).fold(0.0f64, |a, (l, c)| a.max(l / c));
        let least = routed.iter().copied().fold(f64::INFINITY, f64::min);
        best_lower = f0 * least / congestion;
        if phase % 4 == 0 || phase == max_phases {
            let num: f64 = len.iter().zip(&cap).map(|(l, c)| l * c).sum();
            let mut den = 0.0;
            for &s in &inst.sources {
                let (dist, _) = dijkstra(&out, &len, s);
                den += (0..n).map(|j| demand[s * n + j] * dist[j]).sum::<f64>();
            }
            best_upper = best_upper.min(f0 * num / den);
            if best_upper <= best_lower * (1.0 + 2.0 * eps) {
                break;
            }
        }
    }
    // Source si routed routed[si] copies of f0 times its demand.
    let flows = flow
        .iter()
        .enumerate()
        .flat_map(|(si, fl)| {
            let scale = best_lower / (f0 * routed[si].max(f64::MIN_POSITIVE));
            fl.iter().enumerate().filter(|(_, v)| **v > 0.0).map(move |(k, v)| (si, k, *v * scale))
        })
        .map(|(si, k, v)| EdgeFlow { source: inst.sources[si], tail: inst.edges[k].0, head: inst.edges[k].1, value: v })
        .collect();
    FlowSolution { f: best_lower, status: FlowStatus::Approximate, f_upper: Some(best_upper.max(best_lower)), flows }
}

fn dijkstra(out: &[Vec<(NodeId, usize)>], len: &[f64], s: NodeId) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = out.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    dist[s] = 0.0;
    let mut heap = BinaryHeap::from([(Reverse(OrdF64(0.0)), s)]);
    while let Some((Reverse(OrdF64(d)), u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, k) in &out[u] {
            let nd = d + len[k];
            if nd < dist[v] {
                dist[v] = nd;
                parent[v] = Some(k);
                heap.push((Reverse(OrdF64(nd)), v));
            }
        }
    }
    (dist, parent)
}

struct OrdF64(f64);
impl PartialEq for OrdF64 {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for OrdF64 {}
impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Outcome of a traffic-feasibility query.
#[derive(Debug, Clone)]
pub enum Feasibility {
    /// A routing of exactly `λ`.
    Feasible(FlowSolution),
    /// `scaling` is the largest routable multiple of `λ`; `cut` is a cut whose
    /// capacity is below the demand crossing it, when one exists and the
    /// graph is small enough to search.
    Infeasible { scaling: f64, cut: Option<Cut> },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Whether `λ` lies in the region routable with capacities `g`.
pub fn check_feasible(g: &CapGraph, lam: &TrafficMatrix) -> Result<Feasibility> {
    check_feasible_with(g, lam, &FlowOptions::default())
}

pub fn check_feasible_with(g: &CapGraph, lam: &TrafficMatrix, opts: &FlowOptions) -> Result<Feasibility> {
    if lam.is_zero() {
        return Ok(Feasibility::Feasible(FlowSolution::empty(0.0, FlowStatus::Optimal)));
    }
    let sol = max_concurrent(g, lam, &FlowOptions { approximate: None, ..opts.clone() })?;
    if sol.status == FlowStatus::LimitExceeded {
        return Err(Error::Capability {
            what: "concurrent-flow LP rows",
            limit: opts.limits.lp_rows,
            got: Instance::build(g, lam.as_slice()).map_or(0, |i| i.lp_rows()),
        });
    }
    if sol.status == FlowStatus::Optimal && sol.f >= 1.0 - 1e-9 {
        let routing = sol.scaled(1.0 / sol.f);
        return Ok(Feasibility::Feasible(FlowSolution { f: 1.0, ..routing }));
    }
    let cut = if g.n() <= opts.limits.enumeration.min(63) { violated_cut(g, lam) } else { None };
    Ok(Feasibility::Infeasible { scaling: sol.f, cut })
}

/// Cut minimising capacity over crossing demand, if that ratio is below 1.
fn violated_cut(g: &CapGraph, lam: &TrafficMatrix) -> Option<Cut> {
    let n = g.n();
    let cap = g.capacity_matrix();
    let dem = lam.as_slice();
    let ones = vec![1.0; n];
    let mut best = BestCut::new();
    for_each_cut(n, &[&cap, dem], &ones, |mask, _, _, vals| {
        if vals[1] <= 0.0 {
            return;
        }
        best.offer(mask, vals[0] / vals[1], || dense_cut(&cap, n, mask) / dense_cut(dem, n, mask));
    });
    (best.value < 1.0 - 1e-9).then(|| Cut {
        side_s: mask_to_nodes(best.mask),
        cut_capacity: dense_cut(&cap, n, best.mask),
        sparsity: best.value,
        heuristic: false,
    })
}

/// Lower bound `f*_π` from the LP and upper bound `Υ(G, π)` from exact
/// enumeration, with their ratio and `log p_π` in the metadata.
pub fn pmf_bounds_wireline(g: &CapGraph, w: &WeightVector, limits: &Limits) -> Result<BoundReport> {
    let cut = sparsest_cut_exact(g, w, limits.enumeration)?;
    let sol = max_concurrent_pmf_with(g, w, &FlowOptions::with_limits(*limits))?;
    if sol.status == FlowStatus::LimitExceeded {
        return Err(Error::Capability {
            what: "concurrent-flow LP rows",
            limit: limits.lp_rows,
            got: limits.lp_rows + 1,
        });
    }
    let mut report = BoundReport::new(sol.f, cut.sparsity, cut.side_s.clone())
        .with("cut_capacity", cut.cut_capacity)
        .with("ratio", if sol.f > 0.0 { cut.sparsity / sol.f } else { f64::INFINITY })
        .with("log_p_pi", (w.p_pi() as f64).ln())
        .with("p_pi", w.p_pi() as f64);
    report.lower_witness = Some(LowerWitness { capacities: None, flow: Some(sol) });
    Ok(report)
}
