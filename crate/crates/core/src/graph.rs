//! Directed capacitated graphs, cuts, sparsest cut and conductance.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: f64,
}

/// Directed graph with nonnegative edge capacities. An absent edge and an
/// edge of capacity zero are interchangeable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct CapGraph {
    n: usize,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(NodeId, NodeId, f64)>,
}

impl TryFrom<GraphJson> for CapGraph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Self> {
        CapGraph::new(j.n, j.edges.into_iter().map(|(t, h, c)| Edge { tail: t, head: h, capacity: c }))
    }
}

impl From<CapGraph> for GraphJson {
    fn from(g: CapGraph) -> Self {
        GraphJson { n: g.n, edges: g.edges.iter().map(|e| (e.tail, e.head, e.capacity)).collect() }
    }
}

impl CapGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let edges: Vec<Edge> = edges.into_iter().collect();
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.tail >= n || e.head >= n {
                return Err(Error::domain(format!("edge ({}, {}) references a node outside [0, {n})", e.tail, e.head)));
            }
            if e.tail == e.head {
                return Err(Error::domain(format!("self-loop at node {}", e.tail)));
            }
            if !(e.capacity.is_finite() && e.capacity >= 0.0) {
                return Err(Error::domain(format!(
                    "edge ({}, {}) has invalid capacity {}",
                    e.tail, e.head, e.capacity
                )));
            }
            if !seen.insert((e.tail, e.head)) {
                return Err(Error::domain(format!("duplicate edge ({}, {})", e.tail, e.head)));
            }
        }
        Ok(CapGraph { n, edges })
    }

    /// Builds a graph from `(tail, head, capacity)` triples.
    pub fn from_triples(n: usize, triples: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        CapGraph::new(n, triples.iter().map(|&(tail, head, capacity)| Edge { tail, head, capacity }))
    }

    /// Complete directed graph with capacity `cap(i, j)` on every ordered pair.
    pub fn complete(n: usize, mut cap: impl FnMut(NodeId, NodeId) -> f64) -> Result<Self> {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1));
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    edges.push(Edge { tail: i, head: j, capacity: cap(i, j) });
                }
            }
        }
        CapGraph::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges with strictly positive capacity.
    pub fn active_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.capacity > 0.0)
    }

    pub fn capacity(&self, tail: NodeId, head: NodeId) -> f64 {
        self.edges.iter().find(|e| e.tail == tail && e.head == head).map_or(0.0, |e| e.capacity)
    }

    /// Row-major `n x n` capacity matrix.
    pub fn capacity_matrix(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.n * self.n];
        for e in &self.edges {
            m[e.tail * self.n + e.head] = e.capacity;
        }
        m
    }

    pub fn scaled(&self, factor: f64) -> CapGraph {
        CapGraph { n: self.n, edges: self.edges.iter().map(|e| Edge { capacity: e.capacity * factor, ..*e }).collect() }
    }

    pub fn with_capacities(&self, mut cap: impl FnMut(&Edge) -> f64) -> Result<CapGraph> {
        CapGraph::new(self.n, self.edges.iter().map(|e| Edge { capacity: cap(e), ..*e }))
    }

    /// Weakly connected components of the positive-capacity support, each
    /// sorted, listed by smallest member.
    pub fn weak_components(&self) -> Vec<Vec<NodeId>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.active_edges() {
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: Vec<Vec<NodeId>> = Vec::new();
        let mut index = vec![usize::MAX; self.n];
        for v in 0..self.n {
            let r = find(&mut parent, v);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[index[r]].push(v);
        }
        comps
    }

    /// Nodes reachable from `source` along positive-capacity edges.
    pub fn reachable_from(&self, source: NodeId) -> Vec<bool> {
        let adj = self.out_adjacency();
        let mut seen = vec![false; self.n];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Out-neighbours with the index of the connecting edge, positive
    /// capacities only.
    pub fn out_adjacency(&self) -> Vec<Vec<(NodeId, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (k, e) in self.edges.iter().enumerate() {
            if e.capacity > 0.0 {
                adj[e.tail].push((e.head, k));
            }
        }
        adj
    }
}

/// Node weights for a product multicommodity flow.
///
/// Values are stored as given; [`WeightVector::normalized`] rescales them so
/// that they sum to the number of positive entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector {
    pi: Vec<f64>,
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.pi
    }
}

impl WeightVector {
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = pi.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!("weight pi({i}) = {v} is not a nonnegative real")));
        }
        Ok(WeightVector { pi })
    }

    pub fn uniform(n: usize) -> Self {
        WeightVector { pi: vec![1.0; n] }
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.pi
    }

    pub fn get(&self, i: NodeId) -> f64 {
        self.pi[i]
    }

    /// Number of strictly positive weights.
    pub fn p_pi(&self) -> usize {
        self.pi.iter().filter(|&&v| v > 0.0).count()
    }

    pub fn total(&self) -> f64 {
        self.pi.iter().sum()
    }

    /// Copy rescaled so the entries sum to `p_pi`, and whether any entry
    /// changed.
    pub fn normalized(&self) -> (WeightVector, bool) {
        let p = self.p_pi() as f64;
        let total = self.total();
        if p == 0.0 || total == 0.0 {
            return (self.clone(), false);
        }
        let scale = p / total;
        let changed = (scale - 1.0).abs() > 1e-12;
        (WeightVector { pi: self.pi.iter().map(|v| v * scale).collect() }, changed)
    }

    /// `pi(S)` for a node bitmask.
    pub fn mass(&self, mask: u64) -> f64 {
        self.pi.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).sum()
    }

    pub(crate) fn require_pmf(&self, n: usize) -> Result<()> {
        if self.pi.len() != n {
            return Err(Error::domain(format!("weight vector has {} entries for a {n}-node graph", self.pi.len())));
        }
        if self.pi.iter().all(|&v| v == 0.0) {
            return Err(Error::domain("weight vector is identically zero"));
        }
        if self.p_pi() < 2 {
            return Err(Error::domain(format!("product flow needs at least 2 positive weights, got {}", self.p_pi())));
        }
        Ok(())
    }
}

/// A directed cut `S -> S^c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub side_s: Vec<NodeId>,
    pub cut_capacity: f64,
    /// Ratio objective of whichever minimisation produced the cut.
    pub sparsity: f64,
    #[serde(default)]
    pub heuristic: bool,
}

impl Cut {
    pub fn mask(&self) -> u64 {
        nodes_to_mask(&self.side_s)
    }
}

pub fn mask_to_nodes(mask: u64) -> Vec<NodeId> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn nodes_to_mask(nodes: &[NodeId]) -> u64 {
    nodes.iter().fold(0u64, |m, &v| m | 1 << v)
}

/// Capacity of the directed cut `S -> S^c`.
pub fn cut_capacity(g: &CapGraph, side: &[NodeId]) -> f64 {
    let mut in_s = vec![false; g.n()];
    for &v in side {
        in_s[v] = true;
    }
    g.edges().iter().filter(|e| in_s[e.tail] && !in_s[e.head]).map(|e| e.capacity).sum()
}

/// `Σ_{i∈S, j∉S} C(i,j) / (π(S) π(S^c))`; infinite when the denominator is 0.
pub fn cut_sparsity(g: &CapGraph, w: &WeightVector, side: &[NodeId]) -> f64 {
    let ps: f64 = side.iter().map(|&v| w.get(v)).sum();
    let den = ps * (w.total() - ps);
    if den <= 0.0 {
        return f64::INFINITY;
    }
    cut_capacity(g, side) / den
}

/// Lexicographic order of the sorted member lists of two node sets.
pub fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let k = (a ^ b).trailing_zeros();
    let above = if k >= 63 { 0 } else { !0u64 << (k + 1) };
    if a >> k & 1 == 1 {
        if b & above != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    } else if a & above != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

pub(crate) fn dense_cut(mat: &[f64], n: usize, mask: u64) -> f64 {
    let mut total = 0.0;
    for i in 0..n {
        if mask >> i & 1 == 0 {
            continue;
        }
        let row = &mat[i * n..(i + 1) * n];
        for (j, &w) in row.iter().enumerate() {
            if mask >> j & 1 == 0 {
                total += w;
            }
        }
    }
    total
}

/// Visits every source side `S` (nonempty, proper) of an `n`-node vertex set.
///
/// For each matrix in `mats` the callback receives the directed crossing
/// weight `Σ_{i∈S, j∉S} w_ij`, maintained incrementally along a Gray code;
/// `node_w` supplies `(w(S), w(S^c))`. Values drift by rounding, so callers
/// that break ties should recompute with [`dense_cut`].
pub(crate) fn for_each_cut<F>(n: usize, mats: &[&[f64]], node_w: &[f64], mut visit: F)
where
    F: FnMut(u64, f64, f64, &[f64]),
{
    assert!((2..=63).contains(&n), "cut enumeration needs 2..=63 nodes");
    let k = mats.len();
    let full = (1u64 << n) - 1;
    let total_w: f64 = node_w.iter().sum();
    let mut in_s = vec![false; n];
    let mut out = vec![0.0; k];
    let mut inn = vec![0.0; k];
    let mut w_s = 0.0;
    let mut mask = 0u64;
    // Node n-1 stays on the complement side; each step yields S and S^c.
    let steps: u64 = 1 << (n - 1);
    for step in 1..steps {
        let v = step.trailing_zeros() as usize;
        let adding = !in_s[v];
        for (t, m) in mats.iter().enumerate() {
            let (mut to_s, mut from_s, mut to_rest, mut from_rest) = (0.0, 0.0, 0.0, 0.0);
            for u in 0..n {
                if u == v {
                    continue;
                }
                if in_s[u] {
                    to_s += m[v * n + u];
                    from_s += m[u * n + v];
                } else {
                    to_rest += m[v * n + u];
                    from_rest += m[u * n + v];
                }
            }
            if adding {
                out[t] += to_rest - from_s;
                inn[t] += from_rest - to_s;
            } else {
                out[t] += from_s - to_rest;
                inn[t] += to_s - from_rest;
            }
        }
        in_s[v] = adding;
        mask ^= 1 << v;
        if adding {
            w_s += node_w[v];
        } else {
            w_s -= node_w[v];
        }
        // Recompute the running mass exactly now and then to bound drift.
        if step & 0xFFF == 0 {
            w_s = (0..n).filter(|&u| in_s[u]).map(|u| node_w[u]).sum();
        }
        let w_c = total_w - w_s;
        visit(mask, w_s, w_c, &out);
        visit(full ^ mask, w_c, w_s, &inn);
    }
}

/// Running minimum over cuts with deterministic lexicographic tie-breaking.
pub(crate) struct BestCut {
    pub value: f64,
    pub mask: u64,
}

impl BestCut {
    pub fn new() -> Self {
        BestCut { value: f64::INFINITY, mask: 0 }
    }

    /// Offers a candidate whose approximate value is `approx`; `exact`
    /// recomputes it when it could matter.
    pub fn offer(&mut self, mask: u64, approx: f64, exact: impl FnOnce() -> f64) {
        if !(approx <= self.value * (1.0 + 1e-9) + 1e-300) {
            return;
        }
        let value = exact();
        let tol = 1e-12 * self.value.abs().max(f64::MIN_POSITIVE);
        if value < self.value - tol
            || ((value - self.value).abs() <= tol && lex_cmp(mask, self.mask) == Ordering::Less)
            || !self.value.is_finite()
        {
            self.value = value;
            self.mask = mask;
        }
    }
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit.min(63) {
        return Err(Error::Capability { what: "node count for exact cut enumeration", limit, got: n });
    }
    Ok(())
}

/// Minimises `cut_capacity(S) / (π(S) π(S^c))` over every directed cut with a
/// positive denominator. Ties go to the lexicographically smallest `S`.
pub fn sparsest_cut_exact(g: &CapGraph, w: &WeightVector, limit: usize) -> Result<Cut> {
    let n = g.n();
    check_limit(n, limit)?;
    w.require_pmf(n)?;
    let cap = g.capacity_matrix();
    let mut best = BestCut::new();
    for_each_cut(n, &[&cap], w.values(), |mask, ws, wc, vals| {
        let den = ws * wc;
        if den <= 0.0 || ws <= 0.0 || wc <= 0.0 {
            return;
        }
        best.offer(mask, vals[0] / den, || {
            let ps = w.mass(mask);
            dense_cut(&cap, n, mask) / (ps * (w.total() - ps))
        });
    });
    let side_s = mask_to_nodes(best.mask);
    Ok(Cut { cut_capacity: dense_cut(&cap, n, best.mask), side_s, sparsity: best.value, heuristic: false })
}

/// Spectral sweep: order nodes by the Fiedler vector of the symmetrised
/// capacity Laplacian and return the best prefix cut. An upper bound on the
/// sparsest-cut value, flagged `heuristic`.
pub fn sparsest_cut_sweep(g: &CapGraph, w: &WeightVector) -> Result<Cut> {
    let n = g.n();
    w.require_pmf(n)?;
    let cap = g.capacity_matrix();
    let mut lap = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let s = 0.5 * (cap[i * n + j] + cap[j * n + i]);
                lap[(i, j)] -= s;
                lap[(i, i)] += s;
            }
        }
    }
    let eig = lap.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let fiedler = eig.eigenvectors.column(idx[1.min(n - 1)]).into_owned();
    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_by(|&a, &b| fiedler[a].total_cmp(&fiedler[b]).then(a.cmp(&b)));

    let mut in_s = vec![false; n];
    let total = w.total();
    let mut best: Option<(f64, Vec<NodeId>)> = None;
    for k in 0..n - 1 {
        in_s[order[k]] = true;
        let ws: f64 = order[..=k].iter().map(|&v| w.get(v)).sum();
        let den = ws * (total - ws);
        if den <= 0.0 {
            continue;
        }
        let (mut out, mut inn) = (0.0, 0.0);
        for e in g.edges() {
            match (in_s[e.tail], in_s[e.head]) {
                (true, false) => out += e.capacity,
                (false, true) => inn += e.capacity,
                _ => {}
            }
        }
        let mut side: Vec<NodeId> = order[..=k].to_vec();
        let mut rest: Vec<NodeId> = order[k + 1..].to_vec();
        side.sort_unstable();
        rest.sort_unstable();
        for (val, s) in [(out / den, side), (inn / den, rest)] {
            if best.as_ref().is_none_or(|(b, _)| val < *b) {
                best = Some((val, s));
            }
        }
    }
    let (sparsity, side_s) = best.ok_or_else(|| Error::domain("no cut separates positive weights"))?;
    Ok(Cut { cut_capacity: cut_capacity(g, &side_s), side_s, sparsity, heuristic: true })
}

/// Exact enumeration when `n <= limit`, spectral sweep otherwise.
pub fn sparsest_cut(g: &CapGraph, w: &WeightVector, limit: usize) -> Result<Cut> {
    if g.n() <= limit.min(63) {
        sparsest_cut_exact(g, w, limit)
    } else {
        sparsest_cut_sweep(g, w)
    }
}

/// Conductance `min_{1<=|U|<=n/2} #{(i,j) ∈ E : i∈U, j∉U} / |U|`, counting
/// positive-capacity edges rather than their capacities. A disconnected
/// support yields 0 with its smallest component as witness.
pub fn conductance(g: &CapGraph, limit: usize) -> Result<(Cut, f64)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::domain("conductance needs at least 2 nodes"));
    }
    let comps = g.weak_components();
    if comps.len() > 1 {
        let witness = comps
            .iter()
            .min_by(|a, b| a.len().cmp(&b.len()).then(a[0].cmp(&b[0])))
            .expect("at least two components")
            .clone();
        let cap = cut_capacity(g, &witness);
        return Ok((Cut { side_s: witness, cut_capacity: cap, sparsity: 0.0, heuristic: false }, 0.0));
    }
    check_limit(n, limit)?;
    let mut ind = vec![0.0; n * n];
    for e in g.active_edges() {
        ind[e.tail * n + e.head] = 1.0;
    }
    let sizes = vec![1.0; n];
    let half = n / 2;
    let mut best = BestCut::new();
    for_each_cut(n, &[&ind], &sizes, |mask, size, _, vals| {
        let size = size.round();
        if size < 1.0 || size as usize > half {
            return;
        }
        best.offer(mask, vals[0] / size, || dense_cut(&ind, n, mask) / mask.count_ones() as f64);
    });
    let side_s = mask_to_nodes(best.mask);
    let cut = Cut { cut_capacity: cut_capacity(g, &side_s), side_s, sparsity: best.value, heuristic: false };
    Ok((cut, best.value))
}

/// `m x m` grid with 4-neighbour bidirectional unit-capacity edges. Node
/// `row * m + col` sits at [`grid_points`]`[row * m + col]`.
pub fn grid_graph(m: usize) -> Result<CapGraph> {
    if m < 2 {
        return Err(Error::domain(format!("grid side must be at least 2, got {m}")));
    }
    let mut edges = Vec::with_capacity(4 * m * (m - 1));
    for u in 0..m * m {
        let (row, col) = (u / m, u % m);
        let mut nbrs = Vec::with_capacity(4);
        if row > 0 {
            nbrs.push(u - m);
        }
        if col > 0 {
            nbrs.push(u - 1);
        }
        if col + 1 < m {
            nbrs.push(u + 1);
        }
        if row + 1 < m {
            nbrs.push(u + m);
        }
        edges.extend(nbrs.into_iter().map(|v| Edge { tail: u, head: v, capacity: 1.0 }));
    }
    CapGraph::new(m * m, edges)
}

/// Cell-centred grid positions `((col + 1/2) s/m, (row + 1/2) s/m)` in a square
/// of side `s`.
pub fn grid_points(m: usize, side: f64) -> Vec<Point> {
    let h = side / m as f64;
    (0..m * m).map(|u| Point::new((u % m) as f64 * h + 0.5 * h, (u / m) as f64 * h + 0.5 * h)).collect()
}
