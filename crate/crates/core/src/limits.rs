//! Work ceilings for the exhaustive searches.

use crate::error::{Error, Result};

/// Environment variable overriding [`Limits::max_profiles`].
pub const MAX_PROFILES_ENV: &str = "REGEN_MAX_PROFILES";

pub const DEFAULT_MAX_PROFILES: u64 = 10_000_000;
pub const DEFAULT_MAX_VECTORS: u64 = 10_000_000;
pub const DEFAULT_MAX_ORACLE_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Ceiling on enumerated y-profiles and on memoized permutation states.
    pub max_profiles: u64,
    /// Ceiling on node vectors visited by the stationary lower bound.
    pub max_vectors: u64,
    /// Largest `n` accepted by the failure-order oracles.
    pub max_oracle_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_profiles: DEFAULT_MAX_PROFILES,
            max_vectors: DEFAULT_MAX_VECTORS,
            max_oracle_n: DEFAULT_MAX_ORACLE_N,
        }
    }
}

impl Limits {
    /// Defaults, with `REGEN_MAX_PROFILES` applied when set.
    pub fn from_env() -> Result<Self> {
        let mut l = Limits::default();
        if let Ok(v) = std::env::var(MAX_PROFILES_ENV) {
            let cap: u64 = v.trim().parse().map_err(|_| {
                Error::Parse(format!(
                    "{MAX_PROFILES_ENV}={v:?} is not a positive integer"
                ))
            })?;
            if cap == 0 {
                return Err(Error::Parse(format!("{MAX_PROFILES_ENV} must be positive")));
            }
            l.max_profiles = cap;
        }
        Ok(l)
    }
}
