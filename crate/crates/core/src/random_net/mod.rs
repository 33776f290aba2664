//! Random geometric networks, grid embeddings and hop-count delay.

mod experiment;

pub use experiment::*;

use std::collections::{HashMap, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Metric, Point, Region};
use crate::graph::{grid_graph, grid_points, NodeId};
use crate::network::{Network, Pathloss};
use crate::rng::stream_rng;
use crate::traffic::TrafficMatrix;

/// `n` i.i.d. uniform points in `region`, drawn from stream `stream` of `seed`.
pub fn sample_points(n: usize, region: Region, seed: u64, stream: u64) -> Result<Vec<Point>> {
    if n < 2 {
        return Err(Error::domain(format!("need at least 2 nodes, got {n}")));
    }
    region.validate()?;
    let side = region.side();
    let mut rng = stream_rng(seed, stream);
    Ok((0..n).map(|_| Point::new(side * rng.random::<f64>(), side * rng.random::<f64>())).collect())
}

/// Uniform random network with unit power and the default pathloss. The
/// placement depends only on `(n, region, seed)`.
pub fn sample_geometric(n: usize, region: Region, seed: u64) -> Result<Network> {
    let points = sample_points(n, region, seed, n as u64)?;
    Network::new(region, points, 1.0, Pathloss::default())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChernoffMode {
    /// Relative deviation `δ ∈ (0, 1)`.
    Delta(f64),
    /// Tail exponent `L > 0`: probability `2 / n^L`.
    L(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChernoffBound {
    /// Bound on `P(|Σ X_i - np| >= deviation)`.
    pub probability: f64,
    pub deviation: f64,
}

/// Two-sided Chernoff bound for a sum of `n` i.i.d. Bernoulli(`p`) variables.
pub fn chernoff_bound(n: usize, p: f64, mode: ChernoffMode) -> Result<ChernoffBound> {
    if n == 0 {
        return Err(Error::domain("chernoff bound needs n >= 1"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p must lie in (0, 1), got {p}")));
    }
    let np = n as f64 * p;
    match mode {
        ChernoffMode::Delta(delta) => {
            if !(delta > 0.0 && delta < 1.0) {
                return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
            }
            Ok(ChernoffBound { probability: 2.0 * (-delta * delta * np / 2.0).exp(), deviation: delta * np })
        }
        ChernoffMode::L(l) => {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::domain(format!("L must be positive, got {l}")));
            }
            let nf = n as f64;
            Ok(ChernoffBound { probability: 2.0 * nf.powf(-l), deviation: (2.0 * l * np * nf.ln()).sqrt() })
        }
    }
}

/// Hopcroft-Karp on a bipartite graph with `adj[a]` listing the `b` vertices.
/// Returns `mate[a]`.
fn hopcroft_karp(adj: &[Vec<usize>], nb: usize) -> Vec<Option<usize>> {
    let na = adj.len();
    let mut mate_a: Vec<Option<usize>> = vec![None; na];
    let mut mate_b: Vec<Option<usize>> = vec![None; nb];
    let mut dist = vec![usize::MAX; na];
    loop {
        let mut queue = VecDeque::new();
        for a in 0..na {
            if mate_a[a].is_none() {
                dist[a] = 0;
                queue.push_back(a);
            } else {
                dist[a] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                match mate_b[b] {
                    None => found = true,
                    Some(a2) if dist[a2] == usize::MAX => {
                        dist[a2] = dist[a] + 1;
                        queue.push_back(a2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            return mate_a;
        }
        let mut next = vec![0usize; na];
        for a in 0..na {
            if mate_a[a].is_none() {
                augment(a, adj, &mut mate_a, &mut mate_b, &mut dist, &mut next);
            }
        }
    }
}

fn augment(
    a: usize,
    adj: &[Vec<usize>],
    mate_a: &mut [Option<usize>],
    mate_b: &mut [Option<usize>],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    while next[a] < adj[a].len() {
        let b = adj[a][next[a]];
        next[a] += 1;
        let ok = match mate_b[b] {
            None => true,
            Some(a2) => dist[a2] == dist[a] + 1 && augment(a2, adj, mate_a, mate_b, dist, next),
        };
        if ok {
            mate_a[a] = Some(b);
            mate_b[b] = Some(a);
            return true;
        }
    }
    dist[a] = usize::MAX;
    false
}

fn matching_at(d: &[f64], n: usize, r: f64) -> Option<Vec<usize>> {
    let adj: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&b| d[a * n + b] <= r).collect()).collect();
    hopcroft_karp(&adj, n).into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BottleneckMatching {
    /// `b` index matched to each `a` index.
    pub assignment: Vec<usize>,
    pub r_star: f64,
    /// Largest candidate distance below `r_star` (none when `r_star` is the
    /// smallest), at which no perfect matching exists.
    pub below: Option<f64>,
}

/// Perfect matching between equal-size point sets minimising the longest
/// matched distance. Binary search over the sorted pair distances with a
/// Hopcroft-Karp feasibility test.
pub fn bottleneck_matching(a: &[Point], b: &[Point], metric: Metric) -> Result<BottleneckMatching> {
    if a.len() != b.len() {
        return Err(Error::domain(format!("point sets differ in size: {} vs {}", a.len(), b.len())));
    }
    let n = a.len();
    if n == 0 {
        return Ok(BottleneckMatching { assignment: Vec::new(), r_star: 0.0, below: None });
    }
    let d: Vec<f64> = (0..n * n).map(|k| metric.distance(a[k / n], b[k % n])).collect();
    let mut cands = d.clone();
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let (mut lo, mut hi) = (0, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matching_at(&d, n, cands[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let assignment = matching_at(&d, n, cands[lo]).expect("the largest distance admits a perfect matching");
    Ok(BottleneckMatching { assignment, r_star: cands[lo], below: lo.checked_sub(1).map(|k| cands[k]) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEmbedding {
    pub m: usize,
    /// Network node standing in for grid vertex `row * m + col`.
    pub node_of: Vec<NodeId>,
    /// Directed grid adjacency carried over to network nodes.
    pub edges: Vec<(NodeId, NodeId)>,
    pub r_star: f64,
    pub r_used: f64,
}

/// Matches the network's `m^2` nodes to the cell-centred `m x m` grid of its
/// region and carries the grid adjacency over. With grid spacing
/// `s = side / m`, neighbours end up at most `2 r* + s` apart; `r_used` is
/// `max(r* + 2s, 2 r* + s)`.
pub fn grid_embedding(net: &Network, m: usize) -> Result<GridEmbedding> {
    if m < 2 || m * m != net.n() {
        return Err(Error::domain(format!(
            "grid embedding needs m^2 nodes with m >= 2; got {} nodes, m = {m}",
            net.n()
        )));
    }
    let side = net.region.side();
    let s = side / m as f64;
    let grid = grid_points(m, side);
    let metric = net.region.metric();
    let bm = bottleneck_matching(&grid, &net.points, metric)?;
    let node_of = bm.assignment;
    let edges = grid_graph(m)?.edges().iter().map(|e| (node_of[e.tail], node_of[e.head])).collect();
    let r_used = (bm.r_star + 2.0 * s).max(2.0 * bm.r_star + s);
    Ok(GridEmbedding { m, node_of, edges, r_star: bm.r_star, r_used })
}

/// Node count of the perfect square `n`, if it is one.
pub fn grid_side(n: usize) -> Option<usize> {
    let m = (n as f64).sqrt().round() as usize;
    (m * m == n).then_some(m)
}

/// A route carrying `flow` along `nodes` (first node is the source, last the
/// destination).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathFlow {
    pub nodes: Vec<NodeId>,
    pub flow: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayReport {
    /// Transmissions per unit time, counted along paths.
    pub s_n: f64,
    /// The same count gathered per transmitting node.
    pub s_n_nodes: f64,
    pub lambda_bar: f64,
    /// Average hops per packet, `s_n / lambda_bar`.
    pub d_n: f64,
}

/// Hop-count delay of a path decomposition of `lam`.
pub fn delay_report(paths: &[PathFlow], lam: &TrafficMatrix) -> Result<DelayReport> {
    let n = lam.n();
    let mut per_pair: HashMap<(NodeId, NodeId), f64> = HashMap::new();
    for (k, p) in paths.iter().enumerate() {
        if p.nodes.len() < 2 || p.nodes.iter().any(|&v| v >= n) {
            return Err(Error::domain(format!("path {k} must list at least two valid nodes")));
        }
        if !(p.flow.is_finite() && p.flow >= 0.0) {
            return Err(Error::domain(format!("path {k} carries invalid flow {}", p.flow)));
        }
        let (s, t) = (p.nodes[0], p.nodes[p.nodes.len() - 1]);
        if s == t {
            return Err(Error::domain(format!("path {k} starts and ends at node {s}")));
        }
        *per_pair.entry((s, t)).or_default() += p.flow;
    }
    for i in 0..n {
        for j in 0..n {
            let routed = per_pair.get(&(i, j)).copied().unwrap_or(0.0);
            let want = if i == j { 0.0 } else { lam.get(i, j) };
            if (routed - want).abs() > 1e-8 {
                return Err(Error::domain(format!("pair ({i}, {j}) routes {routed} but demands {want}")));
            }
        }
    }
    let s_n: f64 = paths.iter().map(|p| (p.nodes.len() - 1) as f64 * p.flow).sum();
    let mut sends = vec![0.0; n];
    for p in paths {
        for &v in &p.nodes[..p.nodes.len() - 1] {
            sends[v] += p.flow;
        }
    }
    let s_n_nodes = sends.iter().sum();
    let lambda_bar = lam.total();
    if !(lambda_bar > 0.0) {
        return Err(Error::domain("traffic matrix carries no demand"));
    }
    Ok(DelayReport { s_n, s_n_nodes, lambda_bar, d_n: s_n / lambda_bar })
}

/// Row-then-column routes on the `m x m` grid carrying `f` between every
/// ordered pair of grid vertices.
pub fn grid_xy_paths(m: usize, f: f64) -> Vec<PathFlow> {
    let n = m * m;
    let mut out = Vec::with_capacity(n * (n - 1));
    for s in 0..n {
        for t in (0..n).filter(|&t| t != s) {
            let (mut row, mut col) = (s / m, s % m);
            let mut nodes = vec![s];
            while col != t % m {
                col = if col < t % m { col + 1 } else { col - 1 };
                nodes.push(row * m + col);
            }
            while row != t / m {
                row = if row < t / m { row + 1 } else { row - 1 };
                nodes.push(row * m + col);
            }
            out.push(PathFlow { nodes, flow: f });
        }
    }
    out
}
