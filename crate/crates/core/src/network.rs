//! Wireless networks: node placements with transmit power and pathloss.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DistanceMatrix, Point, Region};

/// Pathloss `g(x)`: nonincreasing with `g(x) <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pathloss {
    /// `g(x) = (1 + x)^{-alpha}`.
    InversePoly { alpha: f64 },
    /// Piecewise-linear interpolation through `(distances[k], gains[k])`,
    /// constant beyond either end.
    Table { distances: Vec<f64>, gains: Vec<f64> },
}

impl Default for Pathloss {
    fn default() -> Self {
        Pathloss::InversePoly { alpha: 3.5 }
    }
}

impl Pathloss {
    pub fn gain(&self, x: f64) -> f64 {
        match self {
            Pathloss::InversePoly { alpha } => (1.0 + x).powf(-alpha),
            Pathloss::Table { distances, gains } => {
                let k = distances.partition_point(|&d| d <= x);
                if k == 0 {
                    gains[0]
                } else if k == distances.len() {
                    gains[k - 1]
                } else {
                    let (d0, d1) = (distances[k - 1], distances[k]);
                    let t = (x - d0) / (d1 - d0);
                    gains[k - 1] + t * (gains[k] - gains[k - 1])
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Pathloss::InversePoly { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(Error::domain(format!("pathloss exponent must be positive, got {alpha}")));
                }
            }
            Pathloss::Table { distances, gains } => {
                if distances.is_empty() || distances.len() != gains.len() {
                    return Err(Error::domain("pathloss table needs equal-length nonempty columns"));
                }
                if distances.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(Error::domain("pathloss table distances must increase strictly"));
                }
                if gains.windows(2).any(|w| w[1] > w[0]) {
                    return Err(Error::domain("pathloss table gains must not increase"));
                }
                if gains.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                    return Err(Error::domain("pathloss table gains must lie in [0, 1]"));
                }
            }
        }
        Ok(())
    }
}

fn default_power() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub region: Region,
    pub points: Vec<Point>,
    #[serde(rename = "P", default = "default_power")]
    pub power: f64,
    #[serde(default)]
    pub pathloss: Pathloss,
    #[serde(rename = "N0B", default, skip_serializing_if = "Option::is_none")]
    pub n0b: Option<f64>,
}

impl Network {
    pub fn new(region: Region, points: Vec<Point>, power: f64, pathloss: Pathloss) -> Result<Self> {
        let net = Network { region, points, power, pathloss, n0b: None };
        net.validate()?;
        Ok(net)
    }

    pub fn validate(&self) -> Result<()> {
        self.region.validate()?;
        self.pathloss.validate()?;
        if !(self.power.is_finite() && self.power >= 0.0) {
            return Err(Error::domain(format!("power must be nonnegative, got {}", self.power)));
        }
        if let Some(p) = self.points.iter().find(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::domain(format!("non-finite point {p:?}")));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn distances(&self) -> DistanceMatrix {
        DistanceMatrix::new(&self.points, self.region.metric())
    }

    pub fn gain(&self, x: f64) -> f64 {
        self.pathloss.gain(x)
    }

    /// Row-major `g(r_ij)` with zero diagonal.
    pub fn gain_matrix(&self) -> Vec<f64> {
        let d = self.distances();
        let n = self.n();
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    g[i * n + j] = self.gain(d.get(i, j));
                }
            }
        }
        g
    }
}
