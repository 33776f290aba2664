//! The multiplicative-weights flow mode next to the exact LP.

use pmflab::flow::{max_concurrent_pmf_with, FlowOptions};
use pmflab::graph::{grid_graph, WeightVector};

fn main() -> pmflab::Result<()> {
    let g = grid_graph(5)?;
    let w = WeightVector::uniform(g.n());
    let exact = max_concurrent_pmf_with(&g, &w, &FlowOptions::default())?;
    println!("exact        f = {:.6}", exact.f);
    for eps in [0.5, 0.2, 0.1] {
        let mut opts = FlowOptions::default().approximate(eps);
        opts.limits.lp_rows = 0;
        let approx = max_concurrent_pmf_with(&g, &w, &opts)?;
        println!(
            "eps = {eps:<4} f = {:.6}  dual bound = {:.6}  status {:?}",
            approx.f,
            approx.f_upper.unwrap_or(f64::NAN),
            approx.status
        );
    }
    Ok(())
}
