//! Diffraction in time behind a suddenly opened shutter.
//!
//! The initial state is a plane wave `e^{ipx/ħ̃}` confined to one side of an
//! absorbing wall at `x = 0`, which is removed at `t = 0`. With the
//! dissipative time `τ(t) = (1 − e^{−γt})/γ` the density at `x` is
//!
//! ```text
//! ρ = ½[C(ξ) + ½]² + ½[S(ξ) + ½]²,   ξ = √(m/(πħ̃τ)) (pτ/m − x)
//! ```
//!
//! and for `ħ̃ = 0` it becomes a step at the classical arrival time.

use super::extract::{argmin_from, first_local_max, first_local_min, parabolic_refine};
use super::{check_stride, ExperimentKind, ExperimentResult, Table};
use crate::dynamics::{relaxation_time, TimeGrid};
use crate::error::{invalid, Result};
use crate::params::SystemParams;
use crate::specfun::fresnel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffractionConfig {
    pub params: SystemParams,
    /// Real friction coefficient.
    pub gamma: f64,
    /// Beam momentum.
    pub p: f64,
    /// Observation point.
    pub x_obs: f64,
    pub t_end: f64,
    pub dt: f64,
    pub record_every: usize,
}

impl Default for DiffractionConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::default(),
            gamma: 0.0,
            p: 1.0,
            x_obs: 1.0,
            t_end: 40.0,
            dt: 0.01,
            record_every: 1,
        }
    }
}

/// Classical arrival time `−(1/γ)ln(1 − γmx/p)`, `mx/p` for `γ = 0`.
///
/// `None` when `γmx/p ≥ 1`: a damped classical particle stops before `x`.
pub fn zero_argument_time(mass: f64, gamma: f64, p: f64, x: f64) -> Option<f64> {
    if gamma == 0.0 {
        let t = mass * x / p;
        return (t >= 0.0).then_some(t);
    }
    let r = gamma * mass * x / p;
    if r >= 1.0 || x < 0.0 {
        None
    } else {
        Some(-(-r).ln_1p() / gamma)
    }
}

/// Fresnel argument `ξ(x, t)`. At `t = 0`, or for `ħ̃ = 0`, it is `±∞` (or 0)
/// by the sign of `pτ/m − x`.
pub fn diffraction_xi(params: &SystemParams, gamma: f64, p: f64, x: f64, t: f64) -> f64 {
    let m = params.mass;
    let h = params.hbar_tilde();
    let tau = relaxation_time(gamma, t);
    let lead = p * tau / m - x;
    if tau <= 0.0 || h == 0.0 {
        return if lead == 0.0 { 0.0 } else { f64::INFINITY.copysign(lead) };
    }
    (m / (std::f64::consts::PI * h * tau)).sqrt() * lead
}

/// `ρ = ½[(C(ξ) + ½)² + (S(ξ) + ½)²]`, with the limits 0 and 1 for `ξ = ∓∞`.
pub fn diffraction_density(xi: f64) -> Result<f64> {
    if xi == f64::INFINITY {
        return Ok(1.0);
    }
    if xi == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let f = fresnel(xi)?;
    Ok(0.5 * ((f.c + 0.5).powi(2) + (f.s + 0.5).powi(2)))
}

/// Density at `x_obs` versus time.
///
/// Columns `t`, `xi`, `rho`. Scalars: `t0` (classical arrival time, absent
/// if the particle never arrives), `rho_at_t0`, `rho_inf`, `t_first_max`,
/// `rho_first_max`, `t_first_min`, `rho_first_min`, `amplitude`,
/// `visibility` and `contrast`.
///
/// The first maximum and the following minimum are taken from the `rho`
/// column and refined parabolically. `amplitude = I_max − I_min`, with two
/// fallbacks so that it always exists: without a following minimum the lowest
/// later sample is used, and without any maximum it is 0. `visibility` is the
/// same difference, measured against the unit incident density, but is only
/// reported when a genuine maximum/minimum pair exists; `contrast` is
/// `(I_max − I_min)/(I_max + I_min)` under the same condition.
pub fn run_diffraction(cfg: &DiffractionConfig) -> Result<ExperimentResult> {
    let DiffractionConfig {
        params,
        gamma,
        p,
        x_obs,
        t_end,
        dt,
        record_every,
    } = *cfg;
    params.validate()?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(invalid("gamma_r", gamma, "must be nonnegative and finite"));
    }
    if !(p.is_finite() && p > 0.0) {
        return Err(invalid("p", p, "beam momentum must be positive"));
    }
    if !x_obs.is_finite() {
        return Err(invalid("x_obs", x_obs, "must be finite"));
    }
    let fine = TimeGrid::new(0.0, t_end, dt)?;
    check_stride(record_every, fine.n_steps())?;
    let grid = fine.decimate(record_every)?;

    let ts: Vec<f64> = grid.times().collect();
    let xi: Vec<f64> = ts.iter().map(|&t| diffraction_xi(&params, gamma, p, x_obs, t)).collect();
    let rho = xi.iter().map(|&x| diffraction_density(x)).collect::<Result<Vec<_>>>()?;

    let m = params.mass;
    let h = params.hbar_tilde();
    let t0 = zero_argument_time(m, gamma, p, x_obs);
    let rho_t0 = match t0 {
        Some(t) if h > 0.0 => Some(diffraction_density(diffraction_xi(&params, gamma, p, x_obs, t))?),
        _ => None,
    };
    let rho_inf = if gamma == 0.0 || h == 0.0 {
        let lead = if gamma == 0.0 { 1.0 } else { p / (m * gamma) - x_obs };
        diffraction_density(if lead > 0.0 { f64::INFINITY } else if lead < 0.0 { f64::NEG_INFINITY } else { 0.0 })?
    } else {
        let xi_inf = (m / (std::f64::consts::PI * h * gamma)).sqrt() * (p / (m * gamma) - x_obs);
        diffraction_density(xi_inf)?
    };

    let first_max = first_local_max(&rho, 0).map(|k| parabolic_refine(&ts, &rho, k));
    let first_min = first_max.and_then(|mx| first_local_min(&rho, mx.index + 1)).map(|k| parabolic_refine(&ts, &rho, k));
    let amplitude = match (first_max, first_min) {
        (Some(mx), Some(mn)) => mx.value - mn.value,
        (Some(mx), None) => argmin_from(&rho, mx.index + 1).map_or(0.0, |k| mx.value - rho[k]),
        (None, _) => 0.0,
    };
    let (visibility, contrast) = match (first_max, first_min) {
        (Some(mx), Some(mn)) => (Some(mx.value - mn.value), Some((mx.value - mn.value) / (mx.value + mn.value))),
        _ => (None, None),
    };

    let mut table = Table::new();
    table.push("t", ts)?;
    table.push("xi", xi)?;
    table.push("rho", rho)?;
    let mut out = ExperimentResult::new(ExperimentKind::Diffraction, table);
    out.set_scalar("t0", t0);
    out.set_scalar("rho_at_t0", rho_t0);
    out.set_scalar("rho_inf", Some(rho_inf));
    out.set_scalar("t_first_max", first_max.map(|e| e.x));
    out.set_scalar("rho_first_max", first_max.map(|e| e.value));
    out.set_scalar("t_first_min", first_min.map(|e| e.x));
    out.set_scalar("rho_first_min", first_min.map(|e| e.value));
    out.set_scalar("amplitude", Some(amplitude));
    out.set_scalar("visibility", visibility);
    out.set_scalar("contrast", contrast);
    out.meta("epsilon", params.epsilon);
    out.meta("hbar_tilde", h);
    out.meta("gamma_r", gamma);
    Ok(out)
}
