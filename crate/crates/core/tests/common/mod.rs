#![allow(dead_code)]

use pmflab::flow::FlowSolution;
use pmflab::geometry::{Metric, Point};
use pmflab::graph::{CapGraph, WeightVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random digraph: each ordered pair present with probability `density`,
/// capacity uniform in `[0.1, 2)`, with a bidirectional spanning path so the
/// support is strongly connected.
pub fn random_graph(r: &mut ChaCha8Rng, n: usize, density: f64) -> CapGraph {
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let chain = j == i + 1 || i == j + 1;
            if chain || r.random::<f64>() < density {
                triples.push((i, j, r.random_range(0.1..2.0)));
            }
        }
    }
    CapGraph::from_triples(n, &triples).unwrap()
}

/// Random weights with at least two positive entries, rescaled to sum to p_pi.
pub fn random_weights(r: &mut ChaCha8Rng, n: usize) -> WeightVector {
    loop {
        let pi: Vec<f64> =
            (0..n).map(|_| if r.random::<f64>() < 0.2 { 0.0 } else { r.random_range(0.2..3.0) }).collect();
        if pi.iter().filter(|&&v| v > 0.0).count() >= 2 {
            return WeightVector::new(pi).unwrap().normalized().0;
        }
    }
}

pub fn dense_caps(g: &CapGraph) -> Vec<f64> {
    let n = g.n();
    let mut c = vec![0.0; n * n];
    for e in g.edges() {
        c[e.tail * n + e.head] += e.capacity;
    }
    c
}

/// Sparsity of the cut `mask`, or `None` when `pi(S) pi(S^c) = 0`.
pub fn cut_ratio(g: &CapGraph, w: &WeightVector, mask: u64) -> Option<f64> {
    let n = g.n();
    let c = dense_caps(g);
    let inside = |v: usize| mask >> v & 1 == 1;
    let mut cap = 0.0;
    for i in (0..n).filter(|&i| inside(i)) {
        for j in (0..n).filter(|&j| !inside(j)) {
            cap += c[i * n + j];
        }
    }
    let ps: f64 = (0..n).filter(|&i| inside(i)).map(|i| w.get(i)).sum();
    let pc: f64 = (0..n).filter(|&i| !inside(i)).map(|i| w.get(i)).sum();
    (ps * pc > 0.0).then(|| cap / (ps * pc))
}

/// Minimum sparsity over every nonempty proper subset, by direct loop.
pub fn brute_sparsest(g: &CapGraph, w: &WeightVector) -> f64 {
    let n = g.n();
    (1..(1u64 << n) - 1).filter_map(|m| cut_ratio(g, w, m)).fold(f64::INFINITY, f64::min)
}

/// Checks a concurrent flow routes `f pi(s) pi(t)` for every pair within the
/// capacities; returns the worst violation.
pub fn flow_violation(g: &CapGraph, w: &WeightVector, sol: &FlowSolution) -> f64 {
    let n = g.n();
    let mut worst: f64 = 0.0;
    for (k, total) in sol.edge_totals(g).iter().enumerate() {
        worst = worst.max(total - g.edges()[k].capacity);
    }
    for fl in &sol.flows {
        worst = worst.max(-fl.value);
    }
    for s in 0..n {
        let inflow = sol.net_inflow(n, s);
        for (t, got) in inflow.iter().enumerate() {
            let want = if t == s {
                -(0..n).filter(|&j| j != s).map(|j| sol.f * w.get(s) * w.get(j)).sum::<f64>()
            } else {
                sol.f * w.get(s) * w.get(t)
            };
            worst = worst.max((got - want).abs());
        }
    }
    worst
}

/// Smallest `r` with the distance-`r` graph connected, by Kruskal.
pub fn mst_radius(points: &[Point], metric: Metric) -> f64 {
    let n = points.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((metric.distance(points[i], points[j]), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut joined = 1;
    for (d, i, j) in pairs {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            joined += 1;
            if joined == n {
                return d;
            }
        }
    }
    0.0
}

/// Every permutation of `0..n` (Heap's algorithm).
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// Minimax matching length over all `n!` assignments.
pub fn brute_bottleneck(a: &[Point], b: &[Point], metric: Metric) -> f64 {
    all_perms(a.len())
        .iter()
        .map(|p| p.iter().enumerate().map(|(i, &j)| metric.distance(a[i], b[j])).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// `e E_1(1)` from the convergent series `E_1(x) = -γ - ln x - Σ (-x)^k/(k k!)`.
pub fn e_times_e1_at_1() -> f64 {
    let euler_gamma = 0.577_215_664_901_532_9;
    let mut sum = 0.0;
    let mut fact = 1.0;
    for k in 1..30 {
        fact *= k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / (k as f64 * fact);
    }
    std::f64::consts::E * (-euler_gamma - sum)
}

/// Monte Carlo mean and standard error of `f(X)`, `X ~ Exp(1)` by inversion.
pub fn mc_exp_mean(samples: usize, seed: u64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut r = rng(seed);
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let u: f64 = r.random();
        let v = f(-(1.0 - u).ln());
        s += v;
        s2 += v * v;
    }
    let m = s / samples as f64;
    let var = (s2 / samples as f64 - m * m).max(0.0);
    (m, (var / samples as f64).sqrt())
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
