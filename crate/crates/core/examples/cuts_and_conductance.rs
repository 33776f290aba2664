//! Exact sparsest cut, the spectral sweep heuristic, and conductance.

use pmflab::graph::{conductance, grid_graph, sparsest_cut_exact, sparsest_cut_sweep, WeightVector};

fn main() -> pmflab::Result<()> {
    for m in [3, 4] {
        let g = grid_graph(m)?;
        let w = WeightVector::uniform(m * m);
        let exact = sparsest_cut_exact(&g, &w, 22)?;
        let sweep = sparsest_cut_sweep(&g, &w)?;
        let (cond_cut, cond) = conductance(&g, 22)?;
        println!("grid {m}x{m}");
        println!("  exact sparsest  {:.6}  |S| = {}", exact.sparsity, exact.side_s.len());
        println!("  sweep sparsest  {:.6}  |S| = {}", sweep.sparsity, sweep.side_s.len());
        println!("  conductance     {:.6}  |U| = {}", cond, cond_cut.side_s.len());
    }
    Ok(())
}
