//! Vertex-count caps for the exponential-time exact routines.

use serde::Serialize;

use crate::error::{Error, Result};

pub const PERMANENT_CAP: usize = 28;
pub const ENUMERATION_CAP: usize = 16;
pub const HAMILTON_CAP: usize = 24;
pub const MATCHING_CAP: usize = 30;
pub const PHI_CAP: usize = 14;
pub const NEAR_HAMILTON_CAP: usize = 12;
/// Each Monte Carlo sample is counted exactly.
pub const MONTE_CARLO_CAP: usize = 14;

/// Environment variable that may lower (never raise) every cap.
pub const SIZE_CAP_ENV: &str = "NDL_SIZE_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SizeCaps {
    pub permanent: usize,
    pub enumeration: usize,
    pub hamilton: usize,
    pub matching: usize,
    pub phi: usize,
    pub near_hamilton: usize,
    pub monte_carlo: usize,
}

impl Default for SizeCaps {
    fn default() -> Self {
        SizeCaps {
            permanent: PERMANENT_CAP,
            enumeration: ENUMERATION_CAP,
            hamilton: HAMILTON_CAP,
            matching: MATCHING_CAP,
            phi: PHI_CAP,
            near_hamilton: NEAR_HAMILTON_CAP,
            monte_carlo: MONTE_CARLO_CAP,
        }
    }
}

impl SizeCaps {
    /// Clamps every cap to at most `limit`.
    pub fn lowered_to(self, limit: usize) -> Self {
        SizeCaps {
            permanent: self.permanent.min(limit),
            enumeration: self.enumeration.min(limit),
            hamilton: self.hamilton.min(limit),
            matching: self.matching.min(limit),
            phi: self.phi.min(limit),
            near_hamilton: self.near_hamilton.min(limit),
            monte_carlo: self.monte_carlo.min(limit),
        }
    }

    /// Defaults lowered by `NDL_SIZE_CAP` when it is set to an integer.
    pub fn from_env() -> Result<Self> {
        match std::env::var(SIZE_CAP_ENV) {
            Ok(v) => {
                let limit = v.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidParameters(format!("{SIZE_CAP_ENV}={v:?} is not an integer"))
                })?;
                Ok(SizeCaps::default().lowered_to(limit))
            }
            Err(_) => Ok(SizeCaps::default()),
        }
    }
}

/// `TooLarge` when `n` exceeds `cap`.
pub fn check_cap(op: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::TooLarge { op, n, cap })
    } else {
        Ok(())
    }
}
