//! Paired lower/upper bound reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::flow::FlowSolution;
use crate::graph::{CapGraph, NodeId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerWitness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub capacities: Option<CapGraph>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flow: Option<FlowSolution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lower: f64,
    pub upper: f64,
    #[serde(with = "inf_as_null")]
    pub gap_factor: f64,
    pub upper_witness: Vec<NodeId>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower_witness: Option<LowerWitness>,
    /// Set when either side came from a heuristic or approximate method.
    #[serde(default)]
    pub heuristic: bool,
    pub metadata: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(lower: f64, upper: f64, upper_witness: Vec<NodeId>) -> Self {
        BoundReport {
            lower,
            upper,
            gap_factor: gap(lower, upper),
            upper_witness,
            lower_witness: None,
            heuristic: false,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }

    pub fn meta(&self, key: &str) -> Option<f64> {
        self.metadata.get(key).copied()
    }

    /// `lower <= upper + 1e-6 max(1, upper)`.
    pub fn is_sandwiched(&self) -> bool {
        self.lower <= self.upper + 1e-6 * self.upper.max(1.0)
    }
}

fn gap(lower: f64, upper: f64) -> f64 {
    if lower > 0.0 {
        upper / lower
    } else {
        f64::INFINITY
    }
}

/// JSON has no infinity; an unbounded gap is written as `null`.
mod inf_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}
