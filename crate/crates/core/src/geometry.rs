//! Planar point sets, regions and the distance metrics used throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Deployment region. Points live in `[0, side)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    UnitSquare {},
    Square { side: f64 },
    Torus { side: f64 },
}

impl Region {
    pub const UNIT: Region = Region::UnitSquare {};

    pub fn side(&self) -> f64 {
        match *self {
            Region::UnitSquare {} => 1.0,
            Region::Square { side } | Region::Torus { side } => side,
        }
    }

    pub fn metric(&self) -> Metric {
        match *self {
            Region::Torus { side } => Metric::Torus { side },
            _ => Metric::Euclidean,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let side = self.side();
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::domain(format!("region side must be positive, got {side}")));
        }
        Ok(())
    }

    pub fn contains(&self, p: Point) -> bool {
        let s = self.side();
        (0.0..=s).contains(&p.x) && (0.0..=s).contains(&p.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Euclidean,
    /// Flat torus: per-axis wraparound distance, combined euclidean.
    Torus {
        side: f64,
    },
}

impl Metric {
    pub fn distance(&self, a: Point, b: Point) -> f64 {
        let (mut dx, mut dy) = ((a.x - b.x).abs(), (a.y - b.y).abs());
        if let Metric::Torus { side } = *self {
            dx = dx.min(side - dx);
            dy = dy.min(side - dy);
        }
        dx.hypot(dy)
    }
}

/// Points together with the region they were placed in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub region: Region,
    pub points: Vec<Point>,
}

/// Dense symmetric matrix of pairwise distances.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(points: &[Point], metric: Metric) -> Self {
        let n = points.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = metric.distance(points[i], points[j]);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        DistanceMatrix { n, d }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Maximum vertex degree of the graph joining pairs at distance `<= r`.
    pub fn max_degree(&self, r: f64) -> usize {
        (0..self.n).map(|i| (0..self.n).filter(|&j| j != i && self.get(i, j) <= r).count()).max().unwrap_or(0)
    }

    /// Sorted, deduplicated off-diagonal distances.
    pub fn sorted_distances(&self) -> Vec<f64> {
        let mut v: Vec<f64> =
            (0..self.n).flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Longest edge of a minimum spanning tree (Prim, O(n^2)).
    pub fn mst_bottleneck(&self) -> f64 {
        let n = self.n;
        if n < 2 {
            return 0.0;
        }
        let mut in_tree = vec![false; n];
        let mut best = vec![f64::INFINITY; n];
        best[0] = 0.0;
        let mut longest: f64 = 0.0;
        for _ in 0..n {
            let u = (0..n)
                .filter(|&v| !in_tree[v])
                .min_by(|&a, &b| best[a].total_cmp(&best[b]))
                .expect("a vertex remains outside the tree");
            in_tree[u] = true;
            longest = longest.max(best[u]);
            for v in 0..n {
                if !in_tree[v] {
                    best[v] = best[v].min(self.get(u, v));
                }
            }
        }
        longest
    }

    /// Whether the graph joining pairs at distance `<= r` is connected.
    pub fn connected_at(&self, r: f64) -> bool {
        let n = self.n;
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if !seen[v] && self.get(u, v) <= r {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }
}

/// Smallest radius `r` for which the distance-`r` graph is connected.
pub fn connectivity_radius(points: &[Point], metric: Metric) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::domain(format!("connectivity radius needs at least 2 points, got {}", points.len())));
    }
    Ok(DistanceMatrix::new(points, metric).mst_bottleneck())
}
