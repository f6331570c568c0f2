//! Coupled center and width for a complex friction coefficient.
//!
//! With `γ_I ≠ 0` the center no longer follows a classical trajectory:
//!
//! ```text
//! A q̈ + B q̇ = −(V₁/m) C
//! A = 1 + γ_I(3mσ²/ħ + 2m²γ_Iσ⁴/ħ²)
//! B = γ_R + γ_I(4mγ_Rσ²/ħ + 4m²γ_Iγ_Rσ⁴/ħ² − 6mσσ̇/ħ − 8m²γ_Iσ³σ̇/ħ²)
//! C = 1 + γ_I(5mσ²/ħ + 8m²γ_Iσ⁴/ħ² + 4m³γ_I²σ⁶/ħ³)
//! ```
//!
//! where `V₁ = ∂V/∂x` at `x = q(t)`. The width obeys the generalized
//! dissipative Pinney equation of [`WidthVariant::ComplexFriction`].
//!
//! [`WidthVariant::ComplexFriction`]: super::WidthVariant::ComplexFriction

use super::grid::{Path, TimeGrid};
use super::rk4::{columns, rk4_solve};
use super::width::{complex_friction_width_accel, ComplexCoefficients, SIGMA_FLOOR, SINGULAR_TOLERANCE};
use crate::error::{Error, Result};
use crate::params::{Friction, GaussianState, SystemParams};
use crate::potential::QuadraticPotential;

/// Center and width paths integrated together.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPath {
    pub center: Path,
    pub width: Path,
}

/// `(A, B, C)` of the complex-friction center equation.
pub(crate) fn center_coefficients(c: &ComplexCoefficients, sigma: f64, sigma_dot: f64) -> (f64, f64, f64) {
    let ComplexCoefficients { m, h, gr, gi } = *c;
    if gi == 0.0 {
        return (1.0, gr, 1.0);
    }
    let u = m * sigma * sigma / h; // mσ²/ħ
    let w = m * sigma * sigma_dot / h; // mσσ̇/ħ
    let a = 1.0 + gi * (3.0 * u + 2.0 * gi * u * u);
    let b = gr + gi * (4.0 * gr * u + 4.0 * gi * gr * u * u - 6.0 * w - 8.0 * gi * u * w);
    let cc = 1.0 + gi * (5.0 * u + 8.0 * gi * u * u + 4.0 * gi * gi * u * u * u);
    (a, b, cc)
}

/// Simultaneous RK4 of the complex-friction center and width equations.
///
/// Aborts with [`Error::SingularCoefficient`] when either leading bracket
/// vanishes. This happens for example for a free soliton, where `A = 0`
/// identically.
pub fn integrate_complex_friction_system(
    params: &SystemParams,
    friction: &Friction,
    pot: &QuadraticPotential,
    state0: &GaussianState,
    grid: &TimeGrid,
) -> Result<CoupledPath> {
    params.validate()?;
    friction.validate()?;
    state0.validate()?;
    let coef = ComplexCoefficients::new(params, friction)?;
    let m = params.mass;
    let y0 = [state0.q, state0.q_dot, state0.sigma, state0.sigma_dot];
    let ys = rk4_solve(grid, y0, |t, y| {
        let [q, q_dot, sigma, sigma_dot] = *y;
        if !(sigma > SIGMA_FLOOR) {
            return Err(Error::WidthCollapse {
                t,
                sigma,
                floor: SIGMA_FLOOR,
            });
        }
        let (a, b, c) = center_coefficients(&coef, sigma, sigma_dot);
        if a.abs() < SINGULAR_TOLERANCE {
            return Err(Error::SingularCoefficient {
                equation: "complex-friction center",
                t,
                value: a,
            });
        }
        let v1 = pot.gradient(q, t);
        let q_ddot = (-v1 / m * c - b * q_dot) / a;
        let s_ddot = complex_friction_width_accel(&coef, pot.v2(t), sigma, sigma_dot, t)?;
        Ok([q_dot, q_ddot, sigma_dot, s_ddot])
    })?;
    let [q, q_dot, sigma, sigma_dot] = columns(&ys);
    if let Some(k) = sigma.iter().position(|s| !(*s > SIGMA_FLOOR)) {
        return Err(Error::WidthCollapse {
            t: grid.time(k),
            sigma: sigma[k],
            floor: SIGMA_FLOOR,
        });
    }
    Ok(CoupledPath {
        center: Path::new(*grid, q, Some(q_dot))?,
        width: Path::new(*grid, sigma, Some(sigma_dot))?,
    })
}
