//! Size caps for the exact methods.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest node count for exhaustive cut enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 22;

/// Largest constraint-row count handed to the exact simplex solver.
pub const DEFAULT_LP_ROW_LIMIT: usize = 1600;

/// Environment variable consulted by [`Limits::from_env`].
pub const LIMITS_ENV: &str = "PMFLAB_LIMITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub enumeration: usize,
    pub lp_rows: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enumeration: DEFAULT_ENUMERATION_LIMIT, lp_rows: DEFAULT_LP_ROW_LIMIT }
    }
}

impl Limits {
    /// Parses `enumeration=20,lp_rows=900`. Unknown keys are rejected; missing
    /// keys keep their defaults.
    pub fn parse(spec: &str) -> Result<Limits> {
        let mut limits = Limits::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) =
                part.split_once('=').ok_or_else(|| Error::domain(format!("malformed limit entry `{part}`")))?;
            let value: usize =
                value.trim().parse().map_err(|_| Error::domain(format!("limit `{key}` is not an integer")))?;
            match key.trim() {
                "enumeration" | "enum" => limits.enumeration = value,
                "lp_rows" | "lp" => limits.lp_rows = value,
                other => return Err(Error::domain(format!("unknown limit `{other}`"))),
            }
        }
        // 64-bit masks bound the enumeration regardless of configuration.
        if limits.enumeration > 40 {
            return Err(Error::domain("enumeration limit must be at most 40"));
        }
        Ok(limits)
    }

    pub fn from_env() -> Result<Limits> {
        match std::env::var(LIMITS_ENV) {
            Ok(spec) => Limits::parse(&spec),
            Err(_) => Ok(Limits::default()),
        }
    }
}
