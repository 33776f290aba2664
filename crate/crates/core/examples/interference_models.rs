//! Protocol and SINR-threshold conflict models, greedy link colouring and the
//! resulting uniform-flow bounds.

use pmflab::flow::FlowOptions;
use pmflab::geometry::{connectivity_radius, Region};
use pmflab::graph::WeightVector;
use pmflab::interference::{
    conflict_coloring, protocol_model, psi_bounds, sinr_beta_star, sinr_threshold_model, umf_bounds_combinatorial,
    SinrParams,
};
use pmflab::limits::Limits;
use pmflab::network::{Network, Pathloss};
use pmflab::random_net::sample_points;

fn main() -> pmflab::Result<()> {
    let n = 10;
    let net = Network::new(Region::UNIT, sample_points(n, Region::UNIT, 3, 0)?, 1.0, Pathloss::default())?;
    let w = WeightVector::uniform(n);
    let r = connectivity_radius(&net.points, net.region.metric())? * 1.2;

    for restricted in [true, false] {
        let model = protocol_model(&net, r, 0.5, restricted, true)?;
        let sched = conflict_coloring(&model);
        let report = umf_bounds_combinatorial(&model, &w, &FlowOptions::default())?;
        println!(
            "{} protocol: {} links, kappa_hat = {}, dual degree = {}, f2* = {:.3e}, f1* = {:.3e}",
            if restricted { "restricted" } else { "standard  " },
            model.links().len(),
            sched.kappa_hat,
            sched.delta_dual,
            report.lower,
            report.upper
        );
    }

    let model = protocol_model(&net, r, 0.5, true, true)?;
    let psi = psi_bounds(&model, &w, &Limits::default())?;
    println!("Psi bracket [{:.4}, {:.4}]", psi.lower, psi.upper);

    let gamma = net.gain(r);
    let n0b = 1e-3;
    let beta = sinr_beta_star(n, net.power, gamma, 1.0, n0b);
    let sinr = sinr_threshold_model(&net, SinrParams { gamma, beta, w: 1.0, n0b }, true)?;
    let report = umf_bounds_combinatorial(&sinr, &w, &FlowOptions::default())?;
    println!(
        "SINR threshold (beta* = {beta:.3e}): {} links, bounds [{:.3e}, {:.3e}]",
        sinr.links().len(),
        report.lower,
        report.upper
    );
    Ok(())
}
