//! Time evolution of the Gaussian state.
//!
//! Deterministic equations are integrated with fixed-step RK4, the stochastic
//! center with an OBABO Langevin splitting. Closed-form solutions live in
//! [`analytic`] and double as test oracles.

pub mod analytic;
mod center;
mod complex;
mod grid;
mod langevin;
pub mod rk4;
mod width;

pub use analytic::{
    center_analytic_driven, center_analytic_static, center_velocity_static, damped_frequency,
    damped_kernel, relaxation_excess, relaxation_time, soliton_gamma_i, width_analytic_classical,
    width_analytic_frictionless,
};
pub use center::integrate_center_deterministic;
pub use complex::{integrate_complex_friction_system, CoupledPath};
pub use grid::{Path, TimeGrid};
pub use langevin::{integrate_center_langevin, integrate_center_langevin_sampled, LangevinStepper};
pub use width::{integrate_width, WidthVariant, SIGMA_FLOOR, SINGULAR_TOLERANCE};

/// Default step for the deterministic integrators.
pub const DEFAULT_DT: f64 = 1e-3;
