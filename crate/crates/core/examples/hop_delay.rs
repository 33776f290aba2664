//! Hop-count delay of a routed uniform flow.

use pmflab::random_net::{delay_report, grid_xy_paths, PathFlow};
use pmflab::traffic::{umf_matrix, TrafficMatrix};

fn main() -> pmflab::Result<()> {
    for m in [2, 4, 8] {
        let n = m * m;
        let rep = delay_report(&grid_xy_paths(m, 1.0), &umf_matrix(n, 1.0))?;
        println!("grid {m}x{m}: S(n) = {}, D(n) = {:.4}", rep.s_n, rep.d_n);
    }

    let mut lam = TrafficMatrix::zeros(3);
    lam.set(0, 2, 1.0);
    let direct = vec![PathFlow { nodes: vec![0, 2], flow: 1.0 }];
    let split = vec![PathFlow { nodes: vec![0, 2], flow: 0.75 }, PathFlow { nodes: vec![0, 1, 2], flow: 0.25 }];
    println!("direct D = {}", delay_report(&direct, &lam)?.d_n);
    println!("split  D = {}", delay_report(&split, &lam)?.d_n);
    Ok(())
}
