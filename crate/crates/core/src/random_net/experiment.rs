//! Scaling-law experiments over random placements.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{delay_report, grid_embedding, grid_side, grid_xy_paths, sample_points};
use crate::error::{Error, Result};
use crate::fading::expected_log_capacity;
use crate::flow::{max_concurrent_pmf_with, FlowOptions, FlowStatus};
use crate::geometry::{connectivity_radius, Region};
use crate::graph::{CapGraph, Edge, WeightVector};
use crate::interference::{conflict_coloring, protocol_model, ConflictModel};
use crate::limits::Limits;
use crate::network::{Network, Pathloss};
use crate::rng::trial_stream;
use crate::traffic::TrafficMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CombinatorialConfig {
    /// `r = c_r log^{3/4}(n) / √n`.
    pub c_r: f64,
    pub eta: f64,
    pub half_duplex: bool,
    /// Accuracy of the approximate flow used once the LP exceeds its row cap.
    pub flow_eps: f64,
    pub limits: Limits,
}

impl Default for CombinatorialConfig {
    fn default() -> Self {
        CombinatorialConfig { c_r: 1.0, eta: 0.5, half_duplex: true, flow_eps: 0.5, limits: Limits::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FadingConfig {
    /// TDMA radius `r = c log n`.
    pub c: f64,
    pub flow_eps: f64,
    pub limits: Limits,
}

impl Default for FadingConfig {
    fn default() -> Self {
        FadingConfig { c: 1.0, flow_eps: 0.5, limits: Limits::default() }
    }
}

/// Which slope fits a row contributes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeGroup {
    Both,
    Upper,
    None,
}

impl SlopeGroup {
    fn as_str(self) -> &'static str {
        match self {
            SlopeGroup::Both => "both",
            SlopeGroup::Upper => "upper",
            SlopeGroup::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub trial: usize,
    /// RNG stream the placement was drawn from.
    pub stream: u64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub kappa_hat: Option<f64>,
    pub delta_r: Option<f64>,
    pub slope_group: SlopeGroup,
    pub status: String,
    pub metadata: BTreeMap<String, f64>,
}

impl ExperimentRow {
    fn failed(n: usize, trial: usize, stream: u64, status: String) -> Self {
        ExperimentRow {
            n,
            trial,
            stream,
            lower: None,
            upper: None,
            kappa_hat: None,
            delta_r: None,
            slope_group: SlopeGroup::None,
            status,
            metadata: BTreeMap::new(),
        }
    }
}

/// Least-squares fit of `log(mean bound)` against `log n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// 95% confidence half-width of the slope; absent with two points.
    pub half_width: Option<f64>,
    /// `(n, mean)` pairs the fit used.
    pub points: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub n: usize,
    pub trials: usize,
    pub included_upper: usize,
    pub included_lower: usize,
    pub mean_upper: Option<f64>,
    pub mean_lower: Option<f64>,
    pub diagnostics: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub rows: Vec<ExperimentRow>,
    pub sizes: Vec<SizeSummary>,
    pub fits: BTreeMap<String, SlopeFit>,
    /// Rows left out of every fit.
    pub excluded: usize,
}

const T_975: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
    2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
];

/// Ordinary least squares of `ln y` on `ln n`. `None` with fewer than two
/// distinct sizes or a nonpositive value.
pub fn fit_slope(points: &[(usize, f64)]) -> Option<SlopeFit> {
    if points.len() < 2 || points.iter().any(|&(n, y)| !(y > 0.0) || n == 0) {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let half_width = (points.len() > 2).then(|| {
        let df = points.len() - 2;
        let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        let t = T_975.get(df - 1).copied().unwrap_or(1.96);
        t * (sse / df as f64 / sxx).sqrt()
    });
    Some(SlopeFit { slope, intercept, half_width, points: points.to_vec() })
}

impl ExperimentResult {
    fn assemble(
        experiment: &str,
        seed: u64,
        config: serde_json::Value,
        ns: &[usize],
        rows: Vec<ExperimentRow>,
    ) -> Self {
        let mut sizes = Vec::new();
        let (mut up_pts, mut lo_pts) = (Vec::new(), Vec::new());
        for &n in ns {
            let these: Vec<&ExperimentRow> = rows.iter().filter(|r| r.n == n).collect();
            let ups: Vec<f64> =
                these.iter().filter(|r| r.slope_group != SlopeGroup::None).filter_map(|r| r.upper).collect();
            let los: Vec<f64> =
                these.iter().filter(|r| r.slope_group == SlopeGroup::Both).filter_map(|r| r.lower).collect();
            let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
            let (mean_upper, mean_lower) = (mean(&ups), mean(&los));
            if let Some(m) = mean_upper {
                up_pts.push((n, m));
            }
            if let Some(m) = mean_lower {
                lo_pts.push((n, m));
            }
            let mut diagnostics = BTreeMap::new();
            let mut keys: Vec<&String> = these.iter().flat_map(|r| r.metadata.keys()).collect();
            keys.sort();
            keys.dedup();
            for key in keys {
                let vals: Vec<f64> = these.iter().filter_map(|r| r.metadata.get(key).copied()).collect();
                diagnostics.insert(format!("mean_{key}"), vals.iter().sum::<f64>() / vals.len() as f64);
            }
            sizes.push(SizeSummary {
                n,
                trials: these.len(),
                included_upper: ups.len(),
                included_lower: los.len(),
                mean_upper,
                mean_lower,
                diagnostics,
            });
        }
        let mut fits = BTreeMap::new();
        if let Some(f) = fit_slope(&up_pts) {
            fits.insert("upper".to_string(), f);
        }
        if let Some(f) = fit_slope(&lo_pts) {
            fits.insert("lower".to_string(), f);
        }
        let excluded = rows.iter().filter(|r| r.slope_group == SlopeGroup::None).count();
        ExperimentResult { experiment: experiment.to_string(), seed, config, rows, sizes, fits, excluded }
    }

    /// Rows as CSV with header `n,trial,lower,upper,kappa_hat,delta_r,slope_group,status`.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        let mut out = String::from("n,trial,lower,upper,kappa_hat,delta_r,slope_group,status\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.n,
                r.trial,
                opt(r.lower),
                opt(r.upper),
                opt(r.kappa_hat),
                opt(r.delta_r),
                r.slope_group.as_str(),
                r.status.replace([',', '\n'], ";")
            ));
        }
        out
    }

    pub fn fit(&self, group: &str) -> Option<&SlopeFit> {
        self.fits.get(group)
    }

    pub fn all_failed(&self) -> bool {
        self.rows.iter().all(|r| r.upper.is_none() && r.lower.is_none())
    }
}

fn check_sizes(ns: &[usize], trials: usize) -> Result<()> {
    if ns.is_empty() || trials == 0 {
        return Err(Error::domain("experiments need at least one size and one trial"));
    }
    if let Some(&n) = ns.iter().find(|&&n| grid_side(n).is_none_or(|m| m < 2)) {
        return Err(Error::domain(format!("sizes must be perfect squares >= 4, got {n}")));
    }
    Ok(())
}

fn run_trials(ns: &[usize], trials: usize, trial: impl Fn(usize, usize) -> ExperimentRow + Sync) -> Vec<ExperimentRow> {
    let tasks: Vec<(usize, usize)> = ns.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    tasks.par_iter().map(|&(n, t)| trial(n, t)).collect()
}

/// Largest activation set among `links` is at most the number of cliques in
/// any clique cover of their conflict graph; this builds one greedily.
pub fn greedy_clique_cover(model: &ConflictModel, links: &[usize]) -> usize {
    let edges = model.links();
    let chosen: HashSet<usize> = links.iter().copied().collect();
    let mut conflicts: BTreeMap<usize, HashSet<usize>> = links.iter().map(|&k| (k, HashSet::new())).collect();
    for &k in links {
        for &o in model.interferers(k) {
            if chosen.contains(&o) {
                conflicts.get_mut(&k).unwrap().insert(o);
                conflicts.get_mut(&o).unwrap().insert(k);
            }
        }
    }
    if model.half_duplex {
        for &a in links {
            for &b in links {
                let (ea, eb) = (&edges[a], &edges[b]);
                let shared = ea.tail == eb.tail || ea.tail == eb.head || ea.head == eb.tail || ea.head == eb.head;
                if a != b && shared {
                    conflicts.get_mut(&a).unwrap().insert(b);
                }
            }
        }
    }
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for &k in links {
        let c = &conflicts[&k];
        match cliques.iter_mut().find(|cl| cl.iter().all(|o| c.contains(o))) {
            Some(cl) => cl.push(k),
            None => cliques.push(vec![k]),
        }
    }
    cliques.len()
}

fn comb_trial(n: usize, t: usize, seed: u64, cfg: &CombinatorialConfig) -> Result<ExperimentRow> {
    let stream = trial_stream(n, t);
    let pts = sample_points(n, Region::UNIT, seed, stream)?;
    let net = Network::new(Region::UNIT, pts, 1.0, Pathloss::default())?;
    let r = cfg.c_r * (n as f64).ln().powf(0.75) / (n as f64).sqrt();
    let r_star = connectivity_radius(&net.points, net.region.metric())?;
    let mut row = ExperimentRow::failed(n, t, stream, String::new());
    row.metadata.insert("r".into(), r);
    row.metadata.insert("r_star".into(), r_star);
    if r < r_star {
        row.status = "disconnected".into();
        return Ok(row);
    }
    let inside = |i: usize| {
        let p = net.points[i];
        (1.0 / 3.0..=2.0 / 3.0).contains(&p.x) && (1.0 / 3.0..=2.0 / 3.0).contains(&p.y)
    };
    let s_size = (0..n).filter(|&i| inside(i)).count();
    row.metadata.insert("s_size".into(), s_size as f64);
    if s_size == 0 || s_size == n {
        row.status = "empty_square".into();
        return Ok(row);
    }
    let model = protocol_model(&net, r, cfg.eta, true, cfg.half_duplex)?;
    let crossing: Vec<usize> =
        model.links().iter().enumerate().filter(|(_, e)| inside(e.tail) && !inside(e.head)).map(|(k, _)| k).collect();
    let cover = greedy_clique_cover(&model, &crossing);
    let upper = cover as f64 / (s_size * (n - s_size)) as f64;

    let sched = conflict_coloring(&model);
    let opts = FlowOptions::with_limits(cfg.limits).approximate(cfg.flow_eps);
    let f1 = max_concurrent_pmf_with(model.graph(), &WeightVector::uniform(n), &opts)?;
    let lower = f1.f / sched.kappa_hat as f64;

    row.lower = Some(lower);
    row.upper = Some(upper);
    row.kappa_hat = Some(sched.kappa_hat as f64);
    row.slope_group = SlopeGroup::Both;
    row.status = "ok".into();
    row.metadata.insert("crossing_links".into(), crossing.len() as f64);
    row.metadata.insert("clique_cover".into(), cover as f64);
    row.metadata.insert("delta_dual".into(), sched.delta_dual as f64);
    row.metadata.insert("f1".into(), f1.f);
    row.metadata.insert("lower_exact".into(), if f1.status == FlowStatus::Optimal { 1.0 } else { 0.0 });
    Ok(row)
}

/// Hop-count delay of row-then-column UMF routing on the `√n x √n` grid.
pub fn grid_routed_delay(n: usize) -> Result<f64> {
    let m = grid_side(n).ok_or_else(|| Error::domain(format!("{n} is not a perfect square")))?;
    let mut lam = TrafficMatrix::zeros(n);
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            lam.set(i, j, 1.0);
        }
    }
    Ok(delay_report(&grid_xy_paths(m, 1.0), &lam)?.d_n)
}

/// Random placements in the unit square under the restricted protocol model
/// with `r = c_r log^{3/4}(n) / √n`. Lower: `f₂* = f₁*/κ̂`. Upper: the greedy
/// clique-cover number of the links leaving the central square `[1/3, 2/3]^2`
/// over `|S| |S^c|`, which bounds `Ψ(S)`.
pub fn scaling_experiment_combinatorial(
    ns: &[usize],
    trials: usize,
    seed: u64,
    cfg: &CombinatorialConfig,
) -> Result<ExperimentResult> {
    check_sizes(ns, trials)?;
    let rows = run_trials(ns, trials, |n, t| {
        comb_trial(n, t, seed, cfg)
            .unwrap_or_else(|e| ExperimentRow::failed(n, t, trial_stream(n, t), format!("error: {e}")))
    });
    let mut result = ExperimentResult::assemble(
        "scaling-comb",
        seed,
        serde_json::to_value(cfg).expect("config serializes"),
        ns,
        rows,
    );
    for size in &mut result.sizes {
        let d = grid_routed_delay(size.n)?;
        let nf = size.n as f64;
        size.diagnostics.insert("D_n".into(), d);
        size.diagnostics.insert("D_over_sqrt_n_log_n".into(), d / (nf.sqrt() * nf.ln()));
    }
    Ok(result)
}

/// Grid-embedded lower-bound graph of the randomized TDMA scheme.
#[derive(Debug, Clone)]
pub struct TdmaGraph {
    pub graph: CapGraph,
    /// Radius actually used: the requested one, raised to the longest embedded edge.
    pub r: f64,
    pub delta_2r: usize,
    pub p: f64,
    /// Annulus bound on the expected far-field interference at each node.
    pub interference: Vec<f64>,
}

/// Capacities `(a_u / outdeg(u)) E log(1 + g(r_uv) X / (p (1 + I_v)))` on the
/// embedded grid edges, where `a_u = p (1-p)^{deg_{2r}(u)}` is the chance that
/// u alone is active in its `2r` neighbourhood and `p = min(1/Δ(2r), 1/2)`.
/// Assumes unit power.
pub fn tdma_grid_graph(net: &Network, emb: &super::GridEmbedding, r: f64) -> Result<TdmaGraph> {
    let n = net.n();
    let d = net.distances();
    let longest = emb.edges.iter().map(|&(a, b)| d.get(a, b)).fold(0.0, f64::max);
    let r = r.max(longest);
    let delta_2r = d.max_degree(2.0 * r);
    let p = if delta_2r == 0 { 0.5 } else { (1.0 / delta_2r as f64).min(0.5) };
    let interference: Vec<f64> = (0..n)
        .map(|v| (0..n).filter(|&j| j != v && d.get(v, j) > r).fold(0.0, |acc, j| acc + net.gain(d.get(v, j).floor())))
        .collect();
    let mut outdeg = vec![0usize; n];
    for &(a, _) in &emb.edges {
        outdeg[a] += 1;
    }
    let edges: Vec<Edge> = emb
        .edges
        .iter()
        .map(|&(a, b)| {
            let deg = (0..n).filter(|&j| j != a && d.get(a, j) <= 2.0 * r).count();
            let active = p * (1.0 - p).powi(deg as i32);
            let snr = net.gain(d.get(a, b)) / (p * (1.0 + interference[b]));
            Edge { tail: a, head: b, capacity: active / outdeg[a] as f64 * expected_log_capacity(snr) }
        })
        .collect();
    Ok(TdmaGraph { graph: CapGraph::new(n, edges)?, r, delta_2r, p, interference })
}

fn fading_trial(n: usize, t: usize, alpha: f64, seed: u64, cfg: &FadingConfig) -> Result<ExperimentRow> {
    let stream = trial_stream(n, t);
    let side = (n as f64).sqrt();
    let region = Region::Torus { side };
    let pts = sample_points(n, region, seed, stream)?;
    let net = Network::new(region, pts, 1.0, Pathloss::InversePoly { alpha })?;
    let d = net.distances();
    let mut row = ExperimentRow::failed(n, t, stream, String::new());

    let top: Vec<bool> = net.points.iter().map(|p| p.y < side / 2.0).collect();
    let u = top.iter().filter(|&&b| b).count();
    row.metadata.insert("u_size".into(), u as f64);
    if u == 0 || u == n {
        row.status = "degenerate_split".into();
        return Ok(row);
    }
    let mut cut = 0.0;
    for i in (0..n).filter(|&i| top[i]) {
        for j in (0..n).filter(|&j| !top[j]) {
            cut += expected_log_capacity(net.gain(d.get(i, j)));
        }
    }
    let upper = cut / (u * (n - u)) as f64;

    let m = grid_side(n).expect("sizes are checked");
    let emb = grid_embedding(&net, m)?;
    let tdma = tdma_grid_graph(&net, &emb, cfg.c * (n as f64).ln())?;
    let (g, interference) = (tdma.graph, tdma.interference);
    let (r, delta_2r, p) = (tdma.r, tdma.delta_2r, tdma.p);
    let opts = FlowOptions::with_limits(cfg.limits).approximate(cfg.flow_eps);
    let sol = max_concurrent_pmf_with(&g, &WeightVector::uniform(n), &opts)?;

    let i_max = interference.iter().copied().fold(0.0, f64::max);
    row.lower = Some(sol.f);
    row.upper = Some(upper);
    row.delta_r = Some(i_max);
    row.slope_group = SlopeGroup::Both;
    row.status = "ok".into();
    row.metadata.insert("r".into(), r);
    row.metadata.insert("r_match".into(), emb.r_star);
    row.metadata.insert("Delta_2r".into(), delta_2r as f64);
    row.metadata.insert("p".into(), p);
    row.metadata.insert("I_v_mean".into(), interference.iter().fold(0.0, |a, b| a + b) / n as f64);
    row.metadata.insert("I_v_max".into(), i_max);
    row.metadata.insert("lower_exact".into(), if sol.status == FlowStatus::Optimal { 1.0 } else { 0.0 });
    Ok(row)
}

/// Random placements on the torus of area `n` with `P = 1` and
/// `g(x) = (1 + x)^{-alpha}`. Upper: the horizontal half-split cut of the
/// expected-capacity graph over `|U| |U^c|`. Lower: the PMF of the
/// grid-embedded subgraph under randomized TDMA with `r = c log n`, activation
/// probability `p = min(1/Δ(2r), 1/2)` at power `1/p`, and far-field
/// interference bounded by `Σ_{r_vj > r} g(⌊r_vj⌋)`.
pub fn scaling_experiment_fading(
    ns: &[usize],
    alpha: f64,
    trials: usize,
    seed: u64,
    cfg: &FadingConfig,
) -> Result<ExperimentResult> {
    check_sizes(ns, trials)?;
    if !(alpha > 3.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("pathloss exponent must exceed 3, got {alpha}")));
    }
    let rows = run_trials(ns, trials, |n, t| {
        fading_trial(n, t, alpha, seed, cfg)
            .unwrap_or_else(|e| ExperimentRow::failed(n, t, trial_stream(n, t), format!("error: {e}")))
    });
    let mut config = serde_json::to_value(cfg).expect("config serializes");
    config["alpha"] = serde_json::json!(alpha);
    Ok(ExperimentResult::assemble("scaling-fading", seed, config, ns, rows))
}
