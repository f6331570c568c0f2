//! Stochastic center equation `q̈ = −γq̇ − V'(q, t)/m + F_r(t)/m`, with
//! `⟨F_r(0)F_r(t)⟩ = 2mγ k_B T δ(t)`.
//!
//! Each step is split as O-B-A-B-O: an exact Ornstein-Uhlenbeck half step for
//! friction and noise, then a velocity-Verlet kick-drift-kick, then another
//! exact OU half step. The OU substeps leave the Maxwell-Boltzmann velocity
//! distribution invariant, so for `V = 0` the stationary velocity variance is
//! exactly `k_B T/m` at any `dt`.

use rand::Rng;
use rand_distr::StandardNormal;

use super::center::integrate_center_deterministic;
use super::grid::{Path, TimeGrid};
use super::rk4::ensure_finite;
use crate::error::{invalid, Result};
use crate::params::{Bath, Friction, GaussianState, SystemParams};
use crate::potential::QuadraticPotential;

/// One-trajectory OBABO integrator with fixed `dt`.
#[derive(Debug, Clone)]
pub struct LangevinStepper<'a> {
    pot: &'a QuadraticPotential,
    mass: f64,
    dt: f64,
    /// `e^{−γ dt/2}`
    decay: f64,
    /// `√(k_B T/m · (1 − decay²))`
    kick: f64,
}

impl<'a> LangevinStepper<'a> {
    pub fn new(
        params: &SystemParams,
        friction: &Friction,
        pot: &'a QuadraticPotential,
        bath: &Bath,
        dt: f64,
    ) -> Result<Self> {
        params.validate()?;
        friction.validate()?;
        bath.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid("dt", dt, "must be positive"));
        }
        let kt = bath.effective_kt();
        let gamma = friction.gamma_r;
        if kt > 0.0 && gamma == 0.0 {
            return Err(invalid(
                "gamma_r",
                gamma,
                "thermal noise needs nonzero friction (its intensity is 2mγkT)",
            ));
        }
        let decay = (-0.5 * gamma * dt).exp();
        // 1 − e^{−γdt} without cancellation for small γdt
        let one_minus = -(-gamma * dt).exp_m1();
        Ok(Self {
            pot,
            mass: params.mass,
            dt,
            decay,
            kick: (kt / params.mass * one_minus).sqrt(),
        })
    }

    fn accel(&self, q: f64, t: f64) -> f64 {
        -self.pot.gradient(q, t) / self.mass
    }

    fn ou<R: Rng + ?Sized>(&self, v: f64, rng: &mut R) -> f64 {
        if self.kick == 0.0 {
            self.decay * v
        } else {
            let xi: f64 = rng.sample(StandardNormal);
            self.decay * v + self.kick * xi
        }
    }

    /// Advance `(q, q̇)` from `t` to `t + dt`.
    pub fn step<R: Rng + ?Sized>(&self, q: f64, v: f64, t: f64, rng: &mut R) -> (f64, f64) {
        let h = self.dt;
        let mut v = self.ou(v, rng);
        v += 0.5 * h * self.accel(q, t);
        let q = q + h * v;
        v += 0.5 * h * self.accel(q, t + h);
        (q, self.ou(v, rng))
    }
}

/// One realization of the Langevin center on `grid`.
///
/// Without active noise (`kT = 0` or noise kind `None`) the deterministic RK4
/// path is returned, so switching the bath off reproduces
/// [`integrate_center_deterministic`] exactly. Only `γ_R` enters; `γ_I` plays
/// no role in the center equation.
pub fn integrate_center_langevin<R: Rng + ?Sized>(
    params: &SystemParams,
    friction: &Friction,
    pot: &QuadraticPotential,
    bath: &Bath,
    state0: &GaussianState,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<Path> {
    integrate_center_langevin_sampled(params, friction, pot, bath, state0, grid, 1, rng)
}

/// Like [`integrate_center_langevin`] but keeps only every `stride`-th point,
/// so long ensembles do not have to store the fine grid.
#[allow(clippy::too_many_arguments)]
pub fn integrate_center_langevin_sampled<R: Rng + ?Sized>(
    params: &SystemParams,
    friction: &Friction,
    pot: &QuadraticPotential,
    bath: &Bath,
    state0: &GaussianState,
    grid: &TimeGrid,
    stride: usize,
    rng: &mut R,
) -> Result<Path> {
    state0.validate()?;
    let stepper = LangevinStepper::new(params, friction, pot, bath, grid.dt())?;
    let coarse = grid.decimate(stride)?;
    if !bath.is_active() {
        let real = Friction::real(friction.gamma_r)?;
        let full = integrate_center_deterministic(params, &real, pot, state0, grid)?;
        return if stride == 1 { Ok(full) } else { full.decimate(stride) };
    }
    let mut qs = Vec::with_capacity(coarse.len());
    let mut vs = Vec::with_capacity(coarse.len());
    let (mut q, mut v) = (state0.q, state0.q_dot);
    qs.push(q);
    vs.push(v);
    for k in 0..coarse.n_steps() * stride {
        let t = grid.time(k);
        (q, v) = stepper.step(q, v, t, rng);
        if (k + 1) % stride == 0 {
            ensure_finite(grid.time(k + 1), &[q, v])?;
            qs.push(q);
            vs.push(v);
        }
    }
    Path::new(coarse, qs, Some(vs))
}
