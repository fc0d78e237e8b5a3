//! Numerical tolerances and combinatorial caps shared by all operations.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Feasibility tolerance: residuals of equalities, sign constraints, normalisation.
    pub feas: f64,
    /// Comparison tolerance for values produced by different LPs.
    pub cmp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            feas: 1e-9,
            cmp: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest ambient dimension accepted by the extreme-ray enumeration.
    pub max_dim: usize,
    /// Largest ensemble accepted by the exhaustive degradability search.
    pub max_ensemble: usize,
    /// Largest number of vertex subsets enumerated by a single `IS_n` computation.
    pub max_subsets: u64,
    /// Largest `n` examined when listing advantage ranges.
    pub max_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_dim: 8,
            max_ensemble: 10,
            max_subsets: 1_000_000,
            max_n: 64,
        }
    }
}

/// Which route(s) `IS_n` is computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IsAlgorithm {
    /// Run both routes and require agreement.
    #[default]
    Both,
    /// Effect-coordinate encoding-power LP over vertex subsets.
    EffectLp,
    /// Extreme-ray LP weighted by subset maxima.
    RayLp,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Settings {
    pub tol: Tolerances,
    pub caps: Caps,
    pub is_algorithm: IsAlgorithm,
}

impl Settings {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.tol.feas > 0.0 && self.tol.cmp > 0.0) {
            return Err(crate::Error::input("tolerances must be positive"));
        }
        if self.caps.max_dim == 0
            || self.caps.max_ensemble == 0
            || self.caps.max_subsets == 0
            || self.caps.max_n == 0
        {
            return Err(crate::Error::input("caps must be positive"));
        }
        Ok(())
    }
}
