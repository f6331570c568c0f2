//! Deterministic center equation `q̈ = −γq̇ − V'(q, t)/m`.

use super::grid::{Path, TimeGrid};
use super::rk4::{columns, rk4_solve};
use crate::error::Result;
use crate::params::{Friction, GaussianState, SystemParams};
use crate::potential::QuadraticPotential;

/// RK4 solution for the packet center with real friction.
///
/// The returned [`Path`] holds `q` as values and `q̇` as derivatives.
///
/// ```
/// use qtraj::dynamics::{integrate_center_deterministic, TimeGrid};
/// use qtraj::{Friction, GaussianState, QuadraticPotential, SystemParams};
///
/// let grid = TimeGrid::new(0.0, 2.0, 1e-3).unwrap();
/// let state = GaussianState::new(0.0, 1.0, 1.0, 0.0).unwrap();
/// let path = integrate_center_deterministic(
///     &SystemParams::default(),
///     &Friction::none(),
///     &QuadraticPotential::free(),
///     &state,
///     &grid,
/// )
/// .unwrap();
/// assert!((path.last() - 2.0).abs() < 1e-12);
/// ```
pub fn integrate_center_deterministic(
    params: &SystemParams,
    friction: &Friction,
    pot: &QuadraticPotential,
    state0: &GaussianState,
    grid: &TimeGrid,
) -> Result<Path> {
    params.validate()?;
    friction.validate()?;
    friction.require_real()?;
    state0.validate()?;
    let m = params.mass;
    let gamma = friction.gamma_r;
    let ys = rk4_solve(grid, [state0.q, state0.q_dot], |t, y| {
        Ok([y[1], -gamma * y[1] - pot.gradient(y[0], t) / m])
    })?;
    let [q, q_dot] = columns(&ys);
    Path::new(*grid, q, Some(q_dot))
}
