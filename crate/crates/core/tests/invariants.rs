//! Cross-module invariants checked through the public API.

use proptest::prelude::*;
use qtraj::dynamics::{
    center_analytic_static, integrate_center_deterministic, integrate_width, width_analytic_frictionless, TimeGrid,
    WidthVariant,
};
use qtraj::oracle::{erf_quadrature, fresnel_quadrature};
use qtraj::rng::StreamFactory;
use qtraj::specfun::{erf, erfc, fresnel};
use qtraj::trajectories::{dressing_trajectory, velocity_field, TrajectoryEnsemble};
use qtraj::{Friction, GaussianState, QuadraticPotential, SystemParams};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn erf_agrees_with_quadrature(u in -6.0f64..6.0) {
        let fast = erf(u).unwrap();
        prop_assert!((fast - erf_quadrature(u, 1e-14)).abs() < 1e-12);
        prop_assert!((fast + erfc(u).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fresnel_agrees_with_quadrature(u in -8.0f64..8.0) {
        let f = fresnel(u).unwrap();
        let (c, s) = fresnel_quadrature(u, 1e-13);
        prop_assert!((f.c - c).abs() < 1e-10 && (f.s - s).abs() < 1e-10);
    }

    #[test]
    fn rk4_center_tracks_the_closed_form(
        q0 in -5.0f64..5.0,
        v0 in -2.0f64..2.0,
        v1 in -1.0f64..1.0,
        v2 in -0.3f64..0.3,
        gamma in 0.0f64..0.5,
    ) {
        let grid = TimeGrid::new(0.0, 10.0, 1e-3).unwrap();
        let pot = QuadraticPotential::constant(0.0, v1, v2).unwrap();
        let state = GaussianState::new(q0, v0, 1.0, 0.0).unwrap();
        let path = integrate_center_deterministic(&SystemParams::default(), &Friction::real(gamma).unwrap(), &pot, &state, &grid).unwrap();
        let exact = center_analytic_static(q0, v0, v1, v2, gamma, 1.0, 10.0).unwrap();
        prop_assert!((path.last() - exact).abs() <= 1e-8 * exact.abs().max(1.0));
    }

    #[test]
    fn frictionless_repeller_width_tracks_the_closed_form(omega in 0.0f64..0.5, sigma0 in 0.5f64..2.0, eps in 0.0f64..1.0) {
        let params = SystemParams::new(1.0, 1.0, eps).unwrap();
        let grid = TimeGrid::new(0.0, 5.0, 1e-3).unwrap();
        let pot = QuadraticPotential::repeller(1.0, omega).unwrap();
        let state = GaussianState::new(0.0, 0.0, sigma0, 0.0).unwrap();
        let sigma = integrate_width(WidthVariant::KostinScaled, &params, &Friction::none(), &pot, &state, &grid).unwrap();
        let exact = width_analytic_frictionless(sigma0, -omega * omega, params.hbar_tilde(), 1.0, 5.0).unwrap();
        prop_assert!((sigma.last() - exact).abs() / exact < 1e-7);
    }

    #[test]
    fn dressed_trajectories_follow_the_velocity_field(x0 in -3.0f64..3.0, gamma in 0.0f64..0.5) {
        let grid = TimeGrid::new(0.0, 4.0, 1e-3).unwrap();
        let friction = Friction::real(gamma).unwrap();
        let pot = QuadraticPotential::harmonic(1.0, 0.4).unwrap();
        let state = GaussianState::new(0.5, 1.0, 1.0, 0.0).unwrap();
        let params = SystemParams::default();
        let q = integrate_center_deterministic(&params, &friction, &pot, &state, &grid).unwrap();
        let s = integrate_width(WidthVariant::KostinScaled, &params, &friction, &pot, &state, &grid).unwrap();
        let x = dressing_trajectory(x0, &q, &s).unwrap();
        let k = 2000;
        let v = velocity_field(x.values()[k], grid.time(k), &q, &s).unwrap();
        prop_assert!((v - x.derivatives().unwrap()[k]).abs() < 1e-9);
    }

    #[test]
    fn born_ensembles_never_cross(seed in any::<u64>(), omega in 0.0f64..0.3) {
        let grid = TimeGrid::new(0.0, 10.0, 1e-2).unwrap();
        let pot = QuadraticPotential::repeller(1.0, omega).unwrap();
        let state = GaussianState::new(-2.0, 0.5, 1.0, 0.0).unwrap();
        let params = SystemParams::default();
        let friction = Friction::real(0.1).unwrap();
        let q = integrate_center_deterministic(&params, &friction, &pot, &state, &grid).unwrap();
        let s = integrate_width(WidthVariant::KostinScaled, &params, &friction, &pot, &state, &grid).unwrap();
        let e = TrajectoryEnsemble::sample(50, &q, &s, &StreamFactory::new(seed)).unwrap();
        prop_assert!(e.is_non_crossing());
    }
}
