//! Reproducible random and grid placements, serialized as the CLI writes them.

use pmflab::geometry::{connectivity_radius, Region};
use pmflab::graph::grid_points;
use pmflab::network::{Network, Pathloss};
use pmflab::random_net::{sample_geometric, sample_points};

fn main() -> pmflab::Result<()> {
    let a = sample_geometric(16, Region::UNIT, 7)?;
    let b = sample_geometric(16, Region::UNIT, 7)?;
    assert_eq!(a, b);
    println!("16 uniform points, r* = {:.4}", connectivity_radius(&a.points, a.region.metric())?);

    let torus = Region::Torus { side: 5.0 };
    let net = Network::new(torus, sample_points(25, torus, 7, 25)?, 1.0, Pathloss::InversePoly { alpha: 4.0 })?;
    println!("25 points on the area-25 torus, r* = {:.4}", connectivity_radius(&net.points, net.region.metric())?);

    let grid = Network::new(Region::UNIT, grid_points(3, 1.0), 1.0, Pathloss::default())?;
    println!("{}", serde_json::to_string_pretty(&grid)?);
    Ok(())
}
