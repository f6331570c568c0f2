//! Error function and its complement.
//!
//! `|u| < 2`: the positive-term series
//! `erf(u) = (2/√π) e^{−u²} Σ 2ⁿ u^{2n+1} / (1·3·…·(2n+1))`.
//! `|u| ≥ 2`: `erfc` from its continued fraction, evaluated by modified Lentz.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use super::require_finite;
use crate::error::Result;

const SERIES_CUTOFF: f64 = 2.0;

/// `(erf(u), erfc(u))`.
pub fn erf_family(u: f64) -> Result<(f64, f64)> {
    require_finite("u", u)?;
    Ok((erf_unchecked(u), erfc_unchecked(u)))
}

pub fn erf(u: f64) -> Result<f64> {
    require_finite("u", u)?;
    Ok(erf_unchecked(u))
}

pub fn erfc(u: f64) -> Result<f64> {
    require_finite("u", u)?;
    Ok(erfc_unchecked(u))
}

/// `erf(a) − erf(b)` without cancellation when both arguments sit in the same tail.
pub fn erf_diff(a: f64, b: f64) -> Result<f64> {
    require_finite("a", a)?;
    require_finite("b", b)?;
    Ok(if a >= SERIES_CUTOFF && b >= SERIES_CUTOFF {
        erfc_unchecked(b) - erfc_unchecked(a)
    } else if a <= -SERIES_CUTOFF && b <= -SERIES_CUTOFF {
        erfc_unchecked(-a) - erfc_unchecked(-b)
    } else {
        erf_unchecked(a) - erf_unchecked(b)
    })
}

pub(crate) fn erf_unchecked(u: f64) -> f64 {
    let a = u.abs();
    let v = if a < SERIES_CUTOFF {
        series(a)
    } else {
        1.0 - erfc_tail(a)
    };
    v.copysign(u)
}

pub(crate) fn erfc_unchecked(u: f64) -> f64 {
    let a = u.abs();
    let tail = if a < SERIES_CUTOFF {
        1.0 - series(a)
    } else {
        erfc_tail(a)
    };
    if u < 0.0 {
        2.0 - tail
    } else {
        tail
    }
}

fn series(a: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let a2 = a * a;
    let mut term = a;
    let mut sum = a;
    for n in 1..200 {
        term *= 2.0 * a2 / (2 * n + 1) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-a2).exp() * sum
}

/// `erfc(a) = e^{−a²}/√π · 1/(a + (1/2)/(a + 1/(a + (3/2)/(a + …))))` for `a ≥ 2`.
fn erfc_tail(a: f64) -> f64 {
    if a > 27.3 {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let mut f = a;
    let mut c = a;
    let mut d = 0.0;
    for n in 1..5000 {
        let an = 0.5 * n as f64;
        d = a + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = a + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-a * a).exp() / (PI.sqrt() * f)
}
