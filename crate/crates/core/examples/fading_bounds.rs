//! Receiver-CSI, transmitter-and-receiver-CSI and low-SNR AWGN bounds on a
//! random network.

use pmflab::fading::{pmf_bounds_awgn, pmf_bounds_rx_csi, r_epsilon, upper_bound_txrx_csi};
use pmflab::flow::FlowOptions;
use pmflab::geometry::{connectivity_radius, Region};
use pmflab::graph::WeightVector;
use pmflab::network::{Network, Pathloss};
use pmflab::random_net::sample_points;

fn main() -> pmflab::Result<()> {
    let n = 9;
    let region = Region::Square { side: 3.0 };
    let net = Network::new(region, sample_points(n, region, 11, 0)?, 1.0, Pathloss::InversePoly { alpha: 3.5 })?;
    let w = WeightVector::uniform(n);
    let opts = FlowOptions::default();
    let r_star = connectivity_radius(&net.points, net.region.metric())?;

    let rx = pmf_bounds_rx_csi(&net, &w, r_star, &opts)?;
    println!("rx-CSI   r = r* = {r_star:.3}: [{:.4e}, {:.4e}]", rx.lower, rx.upper);
    let (eps_r, _) = r_epsilon(&net, 0.1)?;
    println!("         r(0.1) = {eps_r:.3}");

    let (txrx, cut) = upper_bound_txrx_csi(&net, &w, 22)?;
    println!("txrx-CSI upper {:.4e}, cut side {:?}", txrx, cut.side_s);

    let awgn = pmf_bounds_awgn(&net, &w, 0.2, &opts)?;
    println!("AWGN     delta = 0.2: [{:.4e}, {:.4e}]", awgn.lower, awgn.upper);
    Ok(())
}
