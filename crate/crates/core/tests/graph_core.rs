mod common;

use common::*;
use pmflab::geometry::{connectivity_radius, DistanceMatrix, Metric, Point};
use pmflab::graph::{
    conductance, cut_sparsity, grid_graph, mask_to_nodes, sparsest_cut, sparsest_cut_exact, sparsest_cut_sweep,
    CapGraph, WeightVector,
};
use pmflab::Error;
use proptest::prelude::*;
use rand::Rng;

fn path4() -> CapGraph {
    CapGraph::from_triples(4, &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0), (2, 3, 1.0), (3, 2, 1.0)]).unwrap()
}

fn complete(n: usize) -> CapGraph {
    CapGraph::complete(n, |_, _| 1.0).unwrap()
}

#[test]
fn sparsest_cut_examples() {
    let k4 = sparsest_cut_exact(&complete(4), &WeightVector::uniform(4), 22).unwrap();
    assert!((k4.sparsity - 1.0).abs() < 1e-12);

    let p = sparsest_cut_exact(&path4(), &WeightVector::uniform(4), 22).unwrap();
    assert_eq!(p.side_s, vec![0, 1]);
    assert!((p.sparsity - 0.25).abs() < 1e-12);

    let ends = WeightVector::new(vec![1.0, 0.0, 0.0, 1.0]).unwrap();
    let c = sparsest_cut_exact(&path4(), &ends, 22).unwrap();
    assert!((c.sparsity - 1.0).abs() < 1e-12);
}

#[test]
fn ties_break_to_lexicographically_smallest_side() {
    // Every cut of K4 has sparsity 1; the smallest side listing wins.
    let cut = sparsest_cut_exact(&complete(4), &WeightVector::uniform(4), 22).unwrap();
    assert_eq!(cut.side_s, vec![0]);
}

#[test]
fn enumeration_limit_and_zero_weights_are_errors() {
    let g = grid_graph(5).unwrap();
    match sparsest_cut_exact(&g, &WeightVector::uniform(25), 22) {
        Err(Error::Capability { limit: 22, got: 25, .. }) => {}
        other => panic!("expected capability error, got {other:?}"),
    }
    let zero = WeightVector::new(vec![0.0; 4]).unwrap();
    assert!(matches!(sparsest_cut_exact(&path4(), &zero, 22), Err(Error::Domain(_))));
}

#[test]
fn sweep_is_flagged_and_never_below_exact() {
    let g = grid_graph(4).unwrap();
    let w = WeightVector::uniform(16);
    let exact = sparsest_cut_exact(&g, &w, 22).unwrap();
    let sweep = sparsest_cut_sweep(&g, &w).unwrap();
    assert!(sweep.heuristic);
    assert!(sweep.sparsity >= exact.sparsity - 1e-12);
    let big = grid_graph(5).unwrap();
    let auto = sparsest_cut(&big, &WeightVector::uniform(25), 22).unwrap();
    assert!(auto.heuristic);
    assert!((cut_sparsity(&big, &WeightVector::uniform(25), &auto.side_s) - auto.sparsity).abs() < 1e-12);
}

#[test]
fn conductance_examples() {
    let two = CapGraph::from_triples(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
    assert_eq!(conductance(&two, 22).unwrap().1, 1.0);
    assert_eq!(conductance(&complete(4), 22).unwrap().1, 2.0);
    let (cut, phi) = conductance(&grid_graph(4).unwrap(), 22).unwrap();
    assert_eq!(phi, 0.5);
    assert_eq!(cut.side_s.len(), 8);
}

#[test]
fn conductance_of_disconnected_and_complete_graphs() {
    let g = CapGraph::from_triples(4, &[(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)]).unwrap();
    let (cut, phi) = conductance(&g, 22).unwrap();
    assert_eq!(phi, 0.0);
    assert_eq!(cut.side_s.len(), 2);
    for n in 2usize..=9 {
        let want = n.div_ceil(2) as f64;
        assert_eq!(conductance(&complete(n), 22).unwrap().1, want, "K_{n}");
    }
}

#[test]
fn grid_graph_counts() {
    let g2 = grid_graph(2).unwrap();
    assert_eq!((g2.n(), g2.edges().len()), (4, 8));
    let g3 = grid_graph(3).unwrap();
    assert_eq!((g3.n(), g3.edges().len()), (9, 24));
    assert!(grid_graph(1).is_err());
}

#[test]
fn grid_sparsest_cut_shrinks_like_n_to_minus_three_halves() {
    // The half split cuts m edges each way against (n/2)^2 pairs.
    for m in [2usize, 4] {
        let n = m * m;
        let cut = sparsest_cut_exact(&grid_graph(m).unwrap(), &WeightVector::uniform(n), 22).unwrap();
        let half = m as f64 / (n as f64 / 2.0).powi(2);
        assert!((cut.sparsity - half).abs() < 1e-12, "m = {m}: {}", cut.sparsity);
    }
}

#[test]
fn connectivity_radius_examples() {
    let e = Metric::Euclidean;
    assert_eq!(connectivity_radius(&[Point::new(0.0, 0.0), Point::new(0.3, 0.4)], e).unwrap(), 0.5);
    let line = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(3.0, 0.0)];
    assert_eq!(connectivity_radius(&line, e).unwrap(), 2.0);
    let torus = Metric::Torus { side: 10.0 };
    assert_eq!(connectivity_radius(&[Point::new(1.0, 0.0), Point::new(9.0, 0.0)], torus).unwrap(), 2.0);
    assert!(connectivity_radius(&[Point::new(0.0, 0.0)], e).is_err());
}

fn points_strategy(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 2..max)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sparsest_cut_matches_brute_force_and_beats_random_cuts(seed in any::<u64>(), n in 2usize..9) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.4);
        let w = random_weights(&mut r, n);
        let cut = sparsest_cut_exact(&g, &w, 22).unwrap();
        let oracle = brute_sparsest(&g, &w);
        prop_assert!(rel_close(cut.sparsity, oracle, 1e-12));
        prop_assert!(rel_close(cut_ratio(&g, &w, cut.mask()).unwrap(), cut.sparsity, 1e-12));
        for _ in 0..100 {
            let mask = r.random_range(1..(1u64 << n) - 1);
            if let Some(v) = cut_ratio(&g, &w, mask) {
                prop_assert!(cut.sparsity <= v + 1e-12, "{:?} beats the optimum", mask_to_nodes(mask));
            }
        }
    }

    #[test]
    fn sparsest_cut_scales_with_capacities(seed in any::<u64>(), c in 0.01f64..100.0) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 6, 0.5);
        let w = WeightVector::uniform(6);
        let base = sparsest_cut_exact(&g, &w, 22).unwrap().sparsity;
        let scaled = sparsest_cut_exact(&g.scaled(c), &w, 22).unwrap().sparsity;
        prop_assert!(rel_close(scaled, c * base, 1e-12));
    }

    #[test]
    fn connectivity_radius_certificate(pts in points_strategy(14)) {
        let e = Metric::Euclidean;
        let r = connectivity_radius(&pts, e).unwrap();
        prop_assert_eq!(r, mst_radius(&pts, e));
        let d = DistanceMatrix::new(&pts, e);
        prop_assert!(d.connected_at(r));
        if r > 0.0 {
            prop_assert!(!d.connected_at(r - 1e-9 * r));
        }
    }

    #[test]
    fn adding_a_point_respects_the_nearest_neighbour_bound(pts in points_strategy(12), x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let e = Metric::Euclidean;
        let old = connectivity_radius(&pts, e).unwrap();
        let p = Point::new(x, y);
        let nn = pts.iter().map(|&q| e.distance(p, q)).fold(f64::INFINITY, f64::min);
        let mut more = pts.clone();
        more.push(p);
        prop_assert!(connectivity_radius(&more, e).unwrap() <= old.max(nn) + 1e-15);
    }

    #[test]
    fn torus_radius_matches_kruskal(v in prop::collection::vec((0.0..5.0f64, 0.0..5.0f64), 2..12)) {
        let pts: Vec<Point> = v.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        let t = Metric::Torus { side: 5.0 };
        prop_assert_eq!(connectivity_radius(&pts, t).unwrap(), mst_radius(&pts, t));
    }
}
