//! Product, uniform and permutation traffic, and the time-sharing deficit of
//! permutation flows against uniform flow.

use pmflab::flow::FlowOptions;
use pmflab::graph::{grid_graph, WeightVector};
use pmflab::traffic::{permutation_feasibility, pmf_matrix, time_share_deficit, PermutationFlow, PmfSpec};

fn main() -> pmflab::Result<()> {
    let w = WeightVector::new(vec![1.5, 1.5, 0.0])?;
    let lam = pmf_matrix(&PmfSpec::new(0.4, w)?);
    println!(
        "product traffic, f = 0.4, pi = (1.5, 1.5, 0): total {:.3}, lambda_01 = {:.3}",
        lam.total(),
        lam.get(0, 1)
    );

    let perm = PermutationFlow::new(vec![1, 2, 3, 0], 0.5, false)?;
    println!("cyclic permutation rows: {:?}", perm.matrix().row_sums());

    let g = grid_graph(2)?;
    for f in [0.5, 1.0, 2.0] {
        let count = permutation_feasibility(&g, f, 0, 0, &FlowOptions::default())?;
        let deficit = time_share_deficit(g.n(), count.feasible, count.total, f)?;
        println!("f = {f}: {}/{} permutations routable, deficit bound {deficit:.3}", count.feasible, count.total);
    }
    Ok(())
}
