use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resource caps. Every operation that can blow up checks one of these and
/// fails with [`Error::ResourceLimit`] instead of degrading.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest degree for which quotient spaces are built.
    pub degree_cap: usize,
    /// Largest total degree swept by the wheeling verifier.
    pub wheeling_cap: usize,
    /// Largest truncation degree for Ω.
    pub omega_cap: usize,
    /// Largest X-degree for Lie algebra series.
    pub x_degree_cap: usize,
    /// Largest leg count for which χ enumerates all orderings.
    pub chi_leg_cap: usize,
    /// Largest Lie algebra dimension.
    pub lie_dim_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            degree_cap: 6,
            wheeling_cap: 4,
            omega_cap: 12,
            x_degree_cap: 8,
            chi_leg_cap: 10,
            lie_dim_cap: 24,
        }
    }
}

impl Limits {
    pub fn check(what: &str, requested: usize, cap: usize) -> Result<()> {
        if requested > cap {
            Err(Error::ResourceLimit {
                what: what.to_string(),
                requested,
                cap,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        Self::check("degree", degree, self.degree_cap)
    }
}
