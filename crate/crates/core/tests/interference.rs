mod common;

use common::*;
use pmflab::flow::FlowOptions;
use pmflab::geometry::{Point, Region};
use pmflab::graph::{sparsest_cut_exact, CapGraph, WeightVector};
use pmflab::interference::{
    conflict_coloring, protocol_model, psi_bounds, sinr_beta_star, sinr_threshold_model_gains,
    umf_bounds_combinatorial, ConflictModel, SinrParams,
};
use pmflab::limits::Limits;
use pmflab::network::{Network, Pathloss};
use pmflab::random_net::sample_points;
use proptest::prelude::*;

fn line(xs: &[f64]) -> Network {
    let pts = xs.iter().map(|&x| Point::new(x, 0.0)).collect();
    Network::new(Region::Square { side: 10.0 }, pts, 1.0, Pathloss::default()).unwrap()
}

fn link(m: &ConflictModel, a: usize, b: usize) -> usize {
    m.links().iter().position(|e| e.tail == a && e.head == b).unwrap()
}

fn path4() -> CapGraph {
    CapGraph::from_triples(4, &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0), (2, 3, 1.0), (3, 2, 1.0)]).unwrap()
}

/// Path-4 links where each hop conflicts with the next hop in both directions.
fn path4_adjacent_conflicts() -> ConflictModel {
    let g = path4();
    let idx = |a: usize, b: usize| g.edges().iter().position(|e| (e.tail, e.head) == (a, b)).unwrap();
    let mut inter = vec![Vec::new(); 6];
    for (a, b) in [(0, 1), (1, 0)] {
        inter[idx(a, b)] = vec![idx(1, 2), idx(2, 1)];
    }
    for (a, b) in [(1, 2), (2, 1)] {
        inter[idx(a, b)] = vec![idx(2, 3), idx(3, 2)];
    }
    ConflictModel::new(g, inter, false).unwrap()
}

fn random_net(seed: u64, n: usize) -> Network {
    Network::new(Region::UNIT, sample_points(n, Region::UNIT, seed, 0).unwrap(), 1.0, Pathloss::default()).unwrap()
}

fn assert_proper(model: &ConflictModel) {
    let sched = conflict_coloring(model);
    let dual = model.dual_graph();
    let mut class_of = vec![usize::MAX; model.links().len()];
    for (c, class) in sched.classes.iter().enumerate() {
        for &e in class {
            assert_eq!(class_of[e], usize::MAX, "link {e} coloured twice");
            class_of[e] = c;
        }
    }
    assert!(class_of.iter().all(|&c| c != usize::MAX), "uncoloured link");
    for class in &sched.classes {
        for &a in class {
            for &b in class {
                assert!(!model.interferers(a).contains(&b), "{a} and {b} share a class");
                assert!(!dual[a].contains(&b));
            }
        }
    }
    let delta = dual.iter().map(Vec::len).max().unwrap_or(0);
    assert_eq!(sched.delta_dual, delta);
    assert!(sched.kappa_hat <= delta + 1);
}

#[test]
fn protocol_examples() {
    let two = protocol_model(&line(&[0.0, 0.5]), 1.0, 0.0, false, false).unwrap();
    assert_eq!(two.links().len(), 2);
    assert!(two.interferers(0).is_empty() && two.interferers(1).is_empty());

    let net = line(&[0.0, 1.0, 2.0]);
    let std = protocol_model(&net, 1.2, 0.1, false, true).unwrap();
    assert!(std.interferers(link(&std, 0, 1)).contains(&link(&std, 2, 1)));
    let res = protocol_model(&net, 1.2, 0.1, true, true).unwrap();
    for e in 0..std.links().len() {
        for o in std.interferers(e) {
            assert!(res.interferers(e).contains(o));
        }
    }
    assert!(protocol_model(&net, 0.0, 0.1, false, true).is_err());
    assert!(protocol_model(&net, 1.0, -0.1, false, true).is_err());
    assert!(protocol_model(&net, 0.5, 0.1, false, true).unwrap().links().is_empty());
}

#[test]
fn half_duplex_flag_controls_shared_endpoint_conflicts() {
    let net = line(&[0.0, 1.0, 2.0]);
    let on = protocol_model(&net, 1.0, 0.0, false, true).unwrap();
    let off = protocol_model(&net, 1.0, 0.0, false, false).unwrap();
    let (a, b) = (link(&on, 0, 1), link(&on, 1, 2));
    assert!(on.dual_graph()[a].contains(&b));
    assert!(!off.dual_graph()[link(&off, 0, 1)].contains(&link(&off, 1, 0)));
    assert!(conflict_coloring(&on).kappa_hat >= conflict_coloring(&off).kappa_hat);
    assert_proper(&on);
    assert_proper(&off);
}

#[test]
fn sinr_examples() {
    assert!((sinr_beta_star(10, 1.0, 1.0, 1.0, 0.1) - 0.09).abs() < 1e-15);
    let h = 0.4;
    let gains = [0.0, h, h, 0.0];
    let p = SinrParams { gamma: h, beta: 1.0, w: 1.0, n0b: 0.1 };
    let m = sinr_threshold_model_gains(&gains, 2, 1.0, p, false).unwrap();
    assert_eq!(m.links().len(), 2);
    assert!(m.interferers(0).is_empty() && m.interferers(1).is_empty());
    assert_eq!(m.valid_rate_w, Some(1.0 <= sinr_beta_star(2, 1.0, h, 1.0, 0.1)));
    let bad = [0.0, -1.0, 0.5, 0.0];
    assert!(sinr_threshold_model_gains(&bad, 2, 1.0, p, false).is_err());
}

#[test]
fn coloring_examples() {
    let free = ConflictModel::new(path4(), vec![Vec::new(); 6], false).unwrap();
    assert_eq!(conflict_coloring(&free).kappa_hat, 1);

    let all: Vec<Vec<usize>> = (0..4).map(|e| (0..4).filter(|&o| o != e).collect()).collect();
    let g = CapGraph::from_triples(3, &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0)]).unwrap();
    let complete = ConflictModel::new(g, all, false).unwrap();
    assert_eq!(conflict_coloring(&complete).kappa_hat, 4);

    let mut chain = vec![Vec::new(); 6];
    for (e, list) in chain.iter_mut().take(4).enumerate() {
        list.push(e + 1);
    }
    let path = ConflictModel::new(path4(), chain, false).unwrap();
    assert_eq!(conflict_coloring(&path).kappa_hat, 2);
    assert_proper(&path);
}

#[test]
fn combinatorial_bound_examples() {
    let w = WeightVector::uniform(4);
    let opts = FlowOptions::default();
    let free = ConflictModel::new(path4(), vec![Vec::new(); 6], false).unwrap();
    let r = umf_bounds_combinatorial(&free, &w, &opts).unwrap();
    assert!((r.lower - r.upper).abs() < 1e-12);

    let r = umf_bounds_combinatorial(&path4_adjacent_conflicts(), &w, &opts).unwrap();
    assert_eq!(r.meta("kappa_hat"), Some(2.0));
    assert!((r.upper - 0.25).abs() < 1e-8);
    assert!((r.lower - 0.125).abs() < 1e-8);

    let all: Vec<Vec<usize>> = (0..4).map(|e| (0..4).filter(|&o| o != e).collect()).collect();
    let g = CapGraph::from_triples(3, &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0)]).unwrap();
    let complete = ConflictModel::new(g, all, false).unwrap();
    let r = umf_bounds_combinatorial(&complete, &WeightVector::uniform(3), &opts).unwrap();
    assert!(rel_close(r.lower * 4.0, r.upper, 1e-8));
}

#[test]
fn psi_examples() {
    let w = WeightVector::uniform(4);
    let lim = Limits::default();
    let free = ConflictModel::new(path4(), vec![Vec::new(); 6], false).unwrap();
    let r = psi_bounds(&free, &w, &lim).unwrap();
    assert_eq!(r.lower, r.upper);

    let r = psi_bounds(&path4_adjacent_conflicts(), &w, &lim).unwrap();
    assert!((r.upper - 2.0 * r.lower).abs() < 1e-15);
    assert!((r.lower - 0.125).abs() < 1e-15);
    let f2 = r.meta("f2").unwrap();
    assert!(f2 <= r.lower + 1e-9);
}

#[test]
fn conflict_model_json_round_trip() {
    let m = protocol_model(&line(&[0.0, 1.0, 2.0]), 1.2, 0.1, false, true).unwrap();
    let json = serde_json::to_string(&m).unwrap();
    assert!(json.contains("\"0,1\""));
    let back: ConflictModel = serde_json::from_str(&json).unwrap();
    assert_eq!(back.dual_graph(), m.dual_graph());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_protocol_models(seed in any::<u64>(), n in 3usize..11, r in 0.25f64..0.7, eta in 0.0f64..1.0, half in any::<bool>()) {
        let net = random_net(seed, n);
        let std = protocol_model(&net, r, eta, false, half).unwrap();
        let res = protocol_model(&net, r, eta, true, half).unwrap();
        prop_assert_eq!(std.links(), res.links());
        for (k, e) in std.links().iter().enumerate() {
            prop_assert!(std.links().iter().any(|o| o.tail == e.head && o.head == e.tail));
            prop_assert!(!std.interferers(k).contains(&k));
            for o in std.interferers(k) {
                prop_assert!(res.interferers(k).contains(o));
            }
        }
        assert_proper(&std);
        assert_proper(&res);
        let w = WeightVector::uniform(n);
        for model in [&std, &res] {
            let rep = umf_bounds_combinatorial(model, &w, &FlowOptions::default()).unwrap();
            let k = rep.meta("kappa_hat").unwrap();
            prop_assert!(rep.lower <= rep.upper + 1e-12);
            if k > 0.0 {
                prop_assert!(rel_close(rep.upper, k * rep.lower, 1e-8) || rep.upper == 0.0);
            }
        }
    }

    #[test]
    fn cut_value_is_linear_in_capacities(seed in any::<u64>(), c in 0.01f64..10.0) {
        let net = random_net(seed, 7);
        let model = protocol_model(&net, 0.6, 0.2, true, true).unwrap();
        let w = WeightVector::uniform(7);
        let base = sparsest_cut_exact(model.graph(), &w, 22).unwrap().sparsity;
        let scaled = sparsest_cut_exact(&model.graph().scaled(c), &w, 22).unwrap().sparsity;
        prop_assert!(rel_close(scaled, c * base, 1e-12) || base == 0.0);
    }
}
