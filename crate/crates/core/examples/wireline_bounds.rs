//! Maximum concurrent product flow and its sparsest-cut upper bound on a
//! wireline graph.

use pmflab::flow::{max_concurrent_pmf, pmf_bounds_wireline};
use pmflab::graph::{grid_graph, sparsest_cut_exact, CapGraph, WeightVector};
use pmflab::limits::Limits;

fn main() -> pmflab::Result<()> {
    let path =
        CapGraph::from_triples(4, &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0), (2, 3, 1.0), (3, 2, 1.0)])?;
    let w = WeightVector::uniform(4);
    let sol = max_concurrent_pmf(&path, &w)?;
    let cut = sparsest_cut_exact(&path, &w, 22)?;
    println!("path-4   f* = {:.6}  sparsest cut = {:.6}  side {:?}", sol.f, cut.sparsity, cut.side_s);

    let grid = grid_graph(3)?;
    let weights = WeightVector::new(vec![2.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 2.0])?.normalized().0;
    let report = pmf_bounds_wireline(&grid, &weights, &Limits::default())?;
    println!(
        "grid-3x3 lower = {:.6}  upper = {:.6}  gap = {:.3}  log p_pi = {:.3}",
        report.lower,
        report.upper,
        report.gap_factor,
        report.meta("log_p_pi").unwrap_or(f64::NAN)
    );
    Ok(())
}
