mod common;

use common::*;
use pmflab::geometry::{Metric, Point, Region};
use pmflab::graph::grid_points;
use pmflab::network::{Network, Pathloss};
use pmflab::random_net::{
    bottleneck_matching, chernoff_bound, delay_report, grid_embedding, grid_routed_delay, grid_xy_paths,
    sample_geometric, sample_points, scaling_experiment_combinatorial, scaling_experiment_fading, ChernoffMode,
    CombinatorialConfig, FadingConfig, PathFlow, SlopeGroup,
};
use pmflab::traffic::TrafficMatrix;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn pts(v: &[(f64, f64)]) -> Vec<Point> {
    v.iter().map(|&(x, y)| Point::new(x, y)).collect()
}

#[test]
fn sampling_examples() {
    for seed in 0..10 {
        let net = sample_geometric(2, Region::UNIT, seed).unwrap();
        assert_eq!(net.n(), 2);
        assert!(net.points.iter().all(|&p| Region::UNIT.contains(p)));
    }
    let torus = Region::Torus { side: 4.0 };
    assert_eq!(sample_points(50, torus, 3, 1).unwrap(), sample_points(50, torus, 3, 1).unwrap());
    assert_ne!(sample_points(50, torus, 3, 1).unwrap(), sample_points(50, torus, 3, 2).unwrap());
    assert!(sample_points(50, torus, 3, 1).unwrap().iter().all(|&p| torus.contains(p)));
}

#[test]
fn central_square_count_respects_the_chernoff_window() {
    let np = 1000.0 / 9.0;
    let window = (2.0 * 4.0 * np * 1000f64.ln()).sqrt();
    let bound = chernoff_bound(1000, 1.0 / 9.0, ChernoffMode::L(4.0)).unwrap();
    assert!((bound.deviation - window).abs() < 1e-9);
    for seed in 0..20 {
        let net = sample_geometric(1000, Region::UNIT, seed).unwrap();
        let inside = |c: f64| (1.0 / 3.0..=2.0 / 3.0).contains(&c);
        let count = net.points.iter().filter(|p| inside(p.x) && inside(p.y)).count() as f64;
        assert!((count - np).abs() <= window, "seed {seed}: {count}");
    }
}

#[test]
fn chernoff_examples() {
    let b = chernoff_bound(100, 0.5, ChernoffMode::Delta(0.2)).unwrap();
    assert!((b.probability - 0.7358).abs() < 1e-4);
    let b = chernoff_bound(100, 0.5, ChernoffMode::L(2.0)).unwrap();
    assert!((b.probability - 2e-4).abs() < 1e-18);
    assert!((b.deviation - (2.0 * 2.0 * 50.0 * 100f64.ln()).sqrt()).abs() < 1e-12);
    assert!((chernoff_bound(100, 0.5, ChernoffMode::Delta(1e-12)).unwrap().probability - 2.0).abs() < 1e-12);
    assert!(chernoff_bound(100, 0.0, ChernoffMode::Delta(0.5)).is_err());
    assert!(chernoff_bound(100, 0.5, ChernoffMode::Delta(1.0)).is_err());
    assert!(chernoff_bound(100, 0.5, ChernoffMode::L(0.0)).is_err());
}

#[test]
fn bottleneck_examples() {
    let a = pts(&[(0.0, 0.0), (1.0, 0.0)]);
    assert_eq!(bottleneck_matching(&a, &a, Metric::Euclidean).unwrap().r_star, 0.0);
    let b = pts(&[(0.0, 0.1), (1.0, 0.1)]);
    let m = bottleneck_matching(&a, &b, Metric::Euclidean).unwrap();
    assert_eq!(m.r_star, 0.1);
    assert_eq!(m.assignment, vec![0, 1]);
    assert!(bottleneck_matching(&a, &b[..1], Metric::Euclidean).is_err());

    let grid = grid_points(3, 1.0);
    let uniform = sample_points(9, Region::UNIT, 5, 0).unwrap();
    let m = bottleneck_matching(&grid, &uniform, Metric::Euclidean).unwrap();
    assert_eq!(m.r_star, brute_bottleneck(&grid, &uniform, Metric::Euclidean));
}

#[test]
fn bottleneck_certificate_and_brute_force() {
    let mut r = rng(8);
    for _ in 0..50 {
        let n = r.random_range(1..=8);
        let mut draw = || (0..n).map(|_| Point::new(r.random(), r.random())).collect::<Vec<_>>();
        let (a, b) = (draw(), draw());
        let m = bottleneck_matching(&a, &b, Metric::Euclidean).unwrap();
        assert_eq!(m.r_star, brute_bottleneck(&a, &b, Metric::Euclidean));
        let mut seen = m.assignment.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..n).collect::<Vec<_>>());
        let longest =
            m.assignment.iter().enumerate().map(|(i, &j)| Metric::Euclidean.distance(a[i], b[j])).fold(0.0, f64::max);
        assert_eq!(longest, m.r_star);
        if let Some(below) = m.below {
            assert!(below < m.r_star);
        }
    }
}

#[test]
fn grid_embedding_examples() {
    let m = 4;
    let exact = Network::new(Region::UNIT, grid_points(m, 1.0), 1.0, Pathloss::default()).unwrap();
    let emb = grid_embedding(&exact, m).unwrap();
    assert_eq!(emb.r_star, 0.0);
    assert_eq!(emb.r_used, 2.0 / m as f64);
    assert_eq!(emb.node_of, (0..16).collect::<Vec<_>>());
    assert_eq!(emb.edges.len(), 48);

    let mut r = rng(3);
    let jitter = grid_points(m, 1.0)
        .into_iter()
        .map(|p| Point::new(p.x + r.random_range(-0.06..0.06), p.y + r.random_range(-0.06..0.06)))
        .collect();
    let net = Network::new(Region::UNIT, jitter, 1.0, Pathloss::default()).unwrap();
    let emb = grid_embedding(&net, m).unwrap();
    assert_eq!(emb.node_of, (0..16).collect::<Vec<_>>());
    assert!(emb.r_used <= 2.0 / (4.0 * m as f64) + 2.0 / m as f64);

    assert!(grid_embedding(&sample_geometric(10, Region::UNIT, 0).unwrap(), 3).is_err());
}

#[test]
fn grid_embedding_certificate() {
    for seed in 0..20u64 {
        let m = 3 + (seed % 2) as usize;
        let net = sample_geometric(m * m, Region::UNIT, seed).unwrap();
        let emb = grid_embedding(&net, m).unwrap();
        assert_eq!(emb.edges.len(), 4 * m * (m - 1));
        for &(u, v) in &emb.edges {
            assert!(net.region.metric().distance(net.points[u], net.points[v]) <= emb.r_used * (1.0 + 1e-12));
        }
    }
}

#[test]
fn delay_examples() {
    let mut lam = TrafficMatrix::zeros(4);
    lam.set(0, 3, 1.0);
    let one = [PathFlow { nodes: vec![0, 1, 2, 3], flow: 1.0 }];
    assert_eq!(delay_report(&one, &lam).unwrap().d_n, 3.0);

    lam.set(1, 2, 1.0);
    let two = [one[0].clone(), PathFlow { nodes: vec![1, 2], flow: 1.0 }];
    let rep = delay_report(&two, &lam).unwrap();
    assert_eq!(rep.d_n, 2.0);
    assert_eq!(rep.s_n, rep.s_n_nodes);

    assert!(delay_report(&one, &lam).is_err());
    assert!(delay_report(&[PathFlow { nodes: vec![0], flow: 1.0 }], &lam).is_err());
    assert!(grid_routed_delay(10).is_err());
}

#[test]
fn grid_routed_delay_is_the_mean_manhattan_distance() {
    for m in 2..6usize {
        let n = m * m;
        let mut total = 0.0;
        for s in 0..n {
            for t in 0..n {
                total += ((s / m).abs_diff(t / m) + (s % m).abs_diff(t % m)) as f64;
            }
        }
        let want = total / (n * (n - 1)) as f64;
        assert!((grid_routed_delay(n).unwrap() - want).abs() < 1e-12);
        assert_eq!(grid_xy_paths(m, 1.0).len(), n * (n - 1));
    }
    let d: Vec<f64> = [16, 36, 64, 100, 144, 196].iter().map(|&n| grid_routed_delay(n).unwrap()).collect();
    assert!(d.windows(2).all(|p| p[0] < p[1]));
}

/// Random decomposition: each active pair gets one to three simple paths
/// through random intermediate nodes.
fn random_decomposition(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> (Vec<PathFlow>, TrafficMatrix) {
    let mut lam = TrafficMatrix::zeros(n);
    let mut paths = Vec::new();
    for s in 0..n {
        for t in (0..n).filter(|&t| t != s) {
            if r.random::<f64>() < 0.5 {
                continue;
            }
            for _ in 0..r.random_range(1..4) {
                let mut mid: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
                mid.shuffle(r);
                mid.truncate(r.random_range(0..=mid.len()));
                let mut nodes = vec![s];
                nodes.extend(mid);
                nodes.push(t);
                let flow = r.random_range(0.01..2.0);
                lam.set(s, t, lam.get(s, t) + flow);
                paths.push(PathFlow { nodes, flow });
            }
        }
    }
    (paths, lam)
}

#[test]
fn delay_double_count_identity_and_monotonicity() {
    let mut r = rng(11);
    let mut checked = 0;
    while checked < 100 {
        let n = r.random_range(3..9);
        let (mut paths, lam) = random_decomposition(&mut r, n);
        if paths.is_empty() {
            continue;
        }
        checked += 1;
        let rep = delay_report(&paths, &lam).unwrap();
        assert!((rep.s_n - rep.s_n_nodes).abs() <= 1e-9 * rep.s_n.max(1.0));
        assert_eq!(rep.d_n, rep.s_n / rep.lambda_bar);

        // Shift part of the shortest path's flow onto a strictly longer route
        // for the same pair.
        let k = (0..paths.len()).min_by_key(|&k| paths[k].nodes.len()).unwrap();
        let (s, t) = (paths[k].nodes[0], *paths[k].nodes.last().unwrap());
        let mut longer = vec![s];
        longer.extend((0..n).filter(|&v| v != s && v != t));
        longer.push(t);
        if longer.len() <= paths[k].nodes.len() {
            continue;
        }
        let moved = paths[k].flow / 2.0;
        paths[k].flow -= moved;
        paths.push(PathFlow { nodes: longer, flow: moved });
        let after = delay_report(&paths, &lam).unwrap();
        assert!(after.d_n > rep.d_n);
    }
}

#[test]
fn small_combinatorial_experiment() {
    let res = scaling_experiment_combinatorial(&[16], 1, 0, &CombinatorialConfig::default()).unwrap();
    assert_eq!(res.rows.len(), 1);
    let row = &res.rows[0];
    if row.slope_group == SlopeGroup::Both {
        assert!(row.lower.unwrap() <= row.upper.unwrap() + 1e-6);
    }
    assert!(res.sizes[0].diagnostics["D_n"] > 0.0);
    let again = scaling_experiment_combinatorial(&[16], 1, 0, &CombinatorialConfig::default()).unwrap();
    assert_eq!(res.to_csv(), again.to_csv());
    assert!(scaling_experiment_combinatorial(&[15], 1, 0, &CombinatorialConfig::default()).is_err());
}

#[test]
fn small_fading_experiment() {
    let res = scaling_experiment_fading(&[16, 36], 3.5, 2, 1, &FadingConfig::default()).unwrap();
    assert_eq!(res.rows.len(), 4);
    for row in &res.rows {
        let up = row.upper.unwrap();
        assert!(up.is_finite() && up > 0.0);
        if let Some(lo) = row.lower {
            assert!(lo <= up + 1e-6 * up.max(1.0));
        }
    }
    assert!(scaling_experiment_fading(&[16], 3.0, 1, 1, &FadingConfig::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chernoff_decreases_in_delta_and_n(n in 1usize..500, p in 0.01f64..0.99, d1 in 0.01f64..0.98, bump in 0.001f64..0.01) {
        let d2 = d1 + bump;
        let a = chernoff_bound(n, p, ChernoffMode::Delta(d1)).unwrap().probability;
        let b = chernoff_bound(n, p, ChernoffMode::Delta(d2)).unwrap().probability;
        let c = chernoff_bound(n + 1, p, ChernoffMode::Delta(d1)).unwrap().probability;
        prop_assert!(b <= a && c <= a);
    }

    #[test]
    fn sampling_is_a_pure_function(n in 2usize..40, seed in any::<u64>(), side in 0.5f64..20.0) {
        let region = Region::Torus { side };
        let a = sample_geometric(n, region, seed).unwrap();
        prop_assert_eq!(&a, &sample_geometric(n, region, seed).unwrap());
        prop_assert!(a.points.iter().all(|&p| region.contains(p)));
    }
}
