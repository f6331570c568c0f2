//! Special functions needed by the closed-form densities.

mod erf;
mod fresnel;

pub use erf::{erf, erf_diff, erf_family, erfc};
pub use fresnel::{fresnel, FresnelPair, FRESNEL_SERIES_CUTOFF};

use crate::error::{invalid, Result};

pub(crate) fn require_finite(name: &'static str, u: f64) -> Result<()> {
    if u.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, u, "special function argument must be finite"))
    }
}
