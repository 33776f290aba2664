//! Two-stage routing of an arbitrary traffic matrix through uniform flow.

use pmflab::flow::{check_feasible, max_concurrent, FlowOptions};
use pmflab::graph::grid_graph;
use pmflab::traffic::{rho, two_stage_route, umf_matrix, TrafficMatrix};

fn main() -> pmflab::Result<()> {
    let g = grid_graph(3)?;
    let n = g.n();
    let f_star = max_concurrent(&g, &umf_matrix(n, 1.0), &FlowOptions::default())?.f;
    println!("uniform flow f* = {f_star:.6}");

    let mut lam = TrafficMatrix::zeros(n);
    for i in 0..n {
        lam.set(i, (i + 4) % n, 1.0);
    }
    let scale = 0.5 * n as f64 * f_star * (1.0 - 1e-6) / rho(&lam);
    let lam = lam.scaled(scale);
    println!("rho(lambda) = {:.6} <= n f*/2 = {:.6}", rho(&lam), 0.5 * n as f64 * f_star);

    let (stage1, stage2) = two_stage_route(&lam, f_star)?;
    println!("stage maxima {:.6} {:.6}  (rho/n = {:.6})", stage1.max_entry(), stage2.max_entry(), rho(&lam) / n as f64);
    let routed = stage1.add(&stage2);
    println!("summed stages feasible: {}", check_feasible(&g, &routed)?.is_feasible());
    Ok(())
}
