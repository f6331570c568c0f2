//! Dissipative and stochastic Bohmian trajectories of Gaussian wave packets.
//!
//! For potentials of at most quadratic order a Gaussian wave packet stays
//! Gaussian, and its whole evolution reduces to two ordinary differential
//! equations: a (possibly stochastic) classical equation for the center `q(t)`
//! and a Pinney-type equation for the width `σ(t)`. Every Bohmian or scaled
//! trajectory is then obtained by the dressing rule
//!
//! ```text
//! x(t) = q(t) + (x⁰ − q(0)) σ(t) / σ(0)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`params`] and [`potential`]: validated physical parameters and the
//!   quadratic potential families.
//! * [`specfun`]: Fresnel integrals and the error function family.
//! * [`dynamics`]: RK4 and Langevin integrators for the center and width,
//!   together with every closed-form solution available for them.
//! * [`trajectories`]: dressing, velocity fields, Born-rule sampling, mean
//!   square displacement and diffusion coefficients.
//! * [`experiments`]: drivers for Brownian-Bohmian diffusion, diffraction in
//!   time, dissipative tunnelling and early arrivals.
//! * [`oracle`]: independent reference routines (quadrature, series) used to
//!   check the fast paths.
//!
//! The guide in `book/` walks through the physics; its code listings are
//! compiled and run as doctests of this crate.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod params;
pub mod potential;
pub mod rng;
pub mod specfun;
pub mod trajectories;

pub use error::{Error, Result};
pub use params::{validate_params, Bath, Friction, GaussianState, NoiseKind, SystemParams, Validated};
pub use potential::{PotentialKind, PotentialValue, QuadraticPotential};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gaussian-ansatz.md")]
    mod gaussian_ansatz {}
    #[doc = include_str!("../../../book/src/widths.md")]
    mod widths {}
    #[doc = include_str!("../../../book/src/langevin.md")]
    mod langevin {}
    #[doc = include_str!("../../../book/src/brownian.md")]
    mod brownian {}
    #[doc = include_str!("../../../book/src/diffraction.md")]
    mod diffraction {}
    #[doc = include_str!("../../../book/src/tunneling.md")]
    mod tunneling {}
    #[doc = include_str!("../../../book/src/early-arrivals.md")]
    mod early_arrivals {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
