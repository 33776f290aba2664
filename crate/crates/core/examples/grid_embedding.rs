//! Bottleneck matching of random points to a grid, the embedded grid's
//! certificate radius, and the Chernoff bound for cell counts.

use pmflab::geometry::Region;
use pmflab::network::{Network, Pathloss};
use pmflab::random_net::{chernoff_bound, grid_embedding, sample_points, ChernoffMode};

fn main() -> pmflab::Result<()> {
    for m in [3, 4, 6] {
        let n = m * m;
        let region = Region::Torus { side: (n as f64).sqrt() };
        let net = Network::new(region, sample_points(n, region, 2, n as u64)?, 1.0, Pathloss::default())?;
        let emb = grid_embedding(&net, m)?;
        let d = net.distances();
        let longest = emb.edges.iter().map(|&(a, b)| d.get(a, b)).fold(0.0, f64::max);
        println!(
            "m = {m}: bottleneck r* = {:.3}, longest embedded edge = {:.3} <= r_used = {:.3}",
            emb.r_star, longest, emb.r_used
        );
    }
    let n = 1000;
    let b = chernoff_bound(n, 1.0 / 9.0, ChernoffMode::Delta(0.3))?;
    println!("P(|count - n/9| >= {:.2}) <= {:.3e} for n = {n}", b.deviation, b.probability);
    let b = chernoff_bound(n, 1.0 / 9.0, ChernoffMode::L(1.0))?;
    println!("deviation {:.2} at probability {:.3e}", b.deviation, b.probability);
    Ok(())
}
