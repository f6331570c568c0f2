//! Oracle suite behind the `selftest` subcommand.
//!
//! Every check compares a production code path against an independent route:
//! RK4 against closed forms, the special functions against quadrature, and
//! the dressing rule against its ordering property. Parameters are drawn from
//! a fixed seed so the suite is reproducible.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qtraj::dynamics::{
    center_analytic_driven, center_analytic_static, integrate_center_deterministic, integrate_complex_friction_system,
    integrate_width, soliton_gamma_i, width_analytic_classical, width_analytic_frictionless, Path, TimeGrid,
    WidthVariant,
};
use qtraj::oracle::{erf_quadrature, fresnel_quadrature};
use qtraj::potential::{DrivenField, QuadraticPotential};
use qtraj::rng::{StreamFactory, Substream};
use qtraj::specfun::{erf, fresnel};
use qtraj::trajectories::{sample_initial_positions, TrajectoryEnsemble};
use qtraj::{Friction, GaussianState, Result, SystemParams};

const SEED: u64 = 20_240_601;
const DRAWS: usize = 50;
const ENSEMBLES: usize = 1000;

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed error (or failure count) against its tolerance.
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn below(name: &'static str, worst: f64, tol: f64) -> Check {
    Check {
        name,
        passed: worst < tol,
        detail: format!("max error {worst:.3e} (tolerance {tol:e})"),
    }
}

fn errored(name: &'static str, e: qtraj::Error) -> Check {
    Check {
        name,
        passed: false,
        detail: format!("error: {e}"),
    }
}

fn rng(k: u64) -> ChaCha8Rng {
    StreamFactory::new(SEED).stream(k, Substream::Auxiliary)
}

fn grid(t_end: f64) -> TimeGrid {
    TimeGrid::new(0.0, t_end, 1e-3).expect("valid grid")
}

/// Largest deviation along the path, relative to the largest magnitude of
/// the reference. Pointwise relative errors are meaningless near the zeros
/// of an oscillating center.
fn path_error(path: &Path, exact: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (k, v) in path.values().iter().enumerate() {
        let e = exact(path.grid().time(k))?;
        worst = worst.max((v - e).abs());
        scale = scale.max(e.abs());
    }
    Ok(worst / scale.max(f64::MIN_POSITIVE))
}

/// Largest pointwise relative deviation of a positive path.
fn relative_error(path: &Path, exact: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    for (k, v) in path.values().iter().enumerate() {
        let e = exact(path.grid().time(k))?;
        worst = worst.max(((v - e) / e).abs());
    }
    Ok(worst)
}

fn center_static() -> Result<f64> {
    let mut r = rng(0);
    let g = grid(30.0);
    let mut worst = 0.0f64;
    for _ in 0..DRAWS {
        let m = r.random_range(0.5..2.0);
        let x0 = r.random_range(-5.0..5.0);
        let v0 = r.random_range(-2.0..2.0);
        let v1 = r.random_range(-0.5..0.5);
        let v2 = r.random_range(-0.05..1.0) * m;
        let gamma = r.random_range(0.0..0.5);
        let params = SystemParams::new(m, 1.0, 1.0)?;
        let pot = QuadraticPotential::constant(0.0, v1, v2)?;
        let s0 = GaussianState::new(x0, v0, 1.0, 0.0)?;
        let path = integrate_center_deterministic(&params, &Friction::real(gamma)?, &pot, &s0, &g)?;
        worst = worst.max(path_error(&path, |t| center_analytic_static(x0, v0, v1, v2, gamma, m, t))?);
    }
    Ok(worst)
}

fn center_driven() -> Result<f64> {
    let mut r = rng(1);
    let g = grid(30.0);
    let mut worst = 0.0f64;
    for _ in 0..DRAWS {
        let field = DrivenField {
            charge: if r.random_bool(0.5) { -1.0 } else { 1.0 },
            e0: r.random_range(0.0..0.2),
            omega0: r.random_range(0.0..1.0),
            phi: r.random_range(-PI..PI),
            omega: r.random_range(0.05..0.3),
        };
        let gamma = r.random_range(0.0..0.3);
        let x0 = r.random_range(-10.0..0.0);
        let v0 = r.random_range(0.0..2.0);
        let params = SystemParams::default();
        let pot = QuadraticPotential::driven_repeller(1.0, field)?;
        let s0 = GaussianState::new(x0, v0, 1.0, 0.0)?;
        let path = integrate_center_deterministic(&params, &Friction::real(gamma)?, &pot, &s0, &g)?;
        worst = worst.max(path_error(&path, |t| center_analytic_driven(x0, v0, &field, gamma, 1.0, t))?);
    }
    Ok(worst)
}

fn width_classical() -> Result<f64> {
    let mut r = rng(2);
    let g = grid(30.0);
    let mut worst = 0.0f64;
    for _ in 0..DRAWS {
        // Repellers and free motion only: a classical oscillator width
        // passes through zero.
        let m = r.random_range(0.5..2.0);
        let v2 = -r.random_range(0.0..0.05) * m;
        let gamma = r.random_range(0.0..0.5);
        let sigma0 = r.random_range(0.5..2.0);
        let sigma_dot0 = r.random_range(0.0..0.5);
        let params = SystemParams::new(m, 1.0, 0.0)?;
        let pot = QuadraticPotential::constant(0.0, 0.0, v2)?;
        let s0 = GaussianState::new(0.0, 0.0, sigma0, sigma_dot0)?;
        let path = integrate_width(WidthVariant::KostinScaled, &params, &Friction::real(gamma)?, &pot, &s0, &g)?;
        worst = worst.max(relative_error(&path, |t| {
            width_analytic_classical(sigma0, sigma_dot0, v2, gamma, m, t)
        })?);
    }
    Ok(worst)
}

/// Frictionless widths for constant `V₂` with `σ̇₀ = 0`. Repellers and free
/// motion on the default step; oscillators squeeze the width down to about
/// `ħ̃/(2mωσ₀)`, where the `1/σ³` term is stiff, so they run on `dt/4`.
fn width_frictionless(oscillator: bool) -> Result<f64> {
    let mut r = rng(if oscillator { 9 } else { 3 });
    let g = if oscillator { TimeGrid::new(0.0, 30.0, 2.5e-4)? } else { grid(30.0) };
    let mut worst = 0.0f64;
    for _ in 0..DRAWS {
        let m = r.random_range(0.5..2.0);
        let v2 = if oscillator { r.random_range(0.0..1.0) } else { -r.random_range(0.0..0.05) } * m;
        let eps = r.random_range(0.05..1.0);
        let sigma0 = r.random_range(0.5..2.0);
        let params = SystemParams::new(m, 1.0, eps)?;
        let pot = QuadraticPotential::constant(0.0, 0.0, v2)?;
        let s0 = GaussianState::new(0.0, 0.0, sigma0, 0.0)?;
        let path = integrate_width(WidthVariant::KostinScaled, &params, &Friction::none(), &pot, &s0, &g)?;
        let h = params.hbar_tilde();
        worst = worst.max(relative_error(&path, |t| width_analytic_frictionless(sigma0, v2, h, m, t))?);
    }
    Ok(worst)
}

fn soliton() -> Result<f64> {
    let mut r = rng(4);
    let g = grid(50.0);
    let mut worst = 0.0f64;
    for _ in 0..DRAWS {
        let m = r.random_range(0.5..2.0);
        let v2 = r.random_range(0.0..1.0) * m;
        let eps = r.random_range(0.05..1.0);
        let sigma0 = r.random_range(0.5..2.0);
        let gamma_r = r.random_range(0.0..0.5);
        let params = SystemParams::new(m, 1.0, eps)?;
        let gi = soliton_gamma_i(sigma0, v2, m, params.hbar_tilde())?;
        let pot = QuadraticPotential::constant(0.0, 0.0, v2)?;
        let s0 = GaussianState::new(0.0, 0.0, sigma0, 0.0)?;
        let f = Friction::new(gamma_r, gi)?;
        let path = integrate_width(WidthVariant::GeneralizedGammaI, &params, &f, &pot, &s0, &g)?;
        for s in path.values() {
            worst = worst.max((s - sigma0).abs());
        }
    }
    Ok(worst)
}

/// With `γ_I = 0` the coupled system must reproduce the separately
/// integrated center and width. Against the complex-friction width this holds
/// for any `γ_R`; without friction it must also agree with the generalized
/// Pinney width.
fn complex_decouples() -> Result<f64> {
    let mut r = rng(5);
    let g = grid(30.0);
    let mut worst = 0.0f64;
    for k in 0..DRAWS {
        let m = r.random_range(0.5..2.0);
        let gamma = if k % 2 == 0 { 0.0 } else { r.random_range(0.0..0.5) };
        let v1 = r.random_range(-0.5..0.5);
        let v2 = r.random_range(-0.05..1.0) * m;
        let params = SystemParams::new(m, 1.0, r.random_range(0.05..1.0))?;
        let pot = QuadraticPotential::constant(0.0, v1, v2)?;
        let s0 = GaussianState::new(r.random_range(-5.0..5.0), r.random_range(-1.0..1.0), r.random_range(0.5..2.0), 0.0)?;
        let f = Friction::real(gamma)?;
        let coupled = integrate_complex_friction_system(&params, &f, &pot, &s0, &g)?;
        let center = integrate_center_deterministic(&params, &f, &pot, &s0, &g)?;
        let variant = if gamma == 0.0 { WidthVariant::GeneralizedGammaI } else { WidthVariant::ComplexFriction };
        let width = integrate_width(variant, &params, &f, &pot, &s0, &g)?;
        for (a, b) in coupled.center.values().iter().zip(center.values()) {
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
        for (a, b) in coupled.width.values().iter().zip(width.values()) {
            worst = worst.max(((a - b) / b).abs());
        }
    }
    Ok(worst)
}

fn fresnel_oracle() -> Result<f64> {
    let mut r = rng(6);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let u = r.random_range(-10.0..10.0);
        let f = fresnel(u)?;
        let (c, s) = fresnel_quadrature(u, 1e-13);
        worst = worst.max((f.c - c).abs()).max((f.s - s).abs());
    }
    Ok(worst)
}

fn erf_oracle() -> Result<f64> {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let u = r.random_range(-6.0..6.0);
        worst = worst.max((erf(u)? - erf_quadrature(u, 1e-14)).abs());
    }
    Ok(worst)
}

/// Number of random ensembles whose trajectories cross.
fn non_crossing() -> Result<usize> {
    let mut r = rng(8);
    let g = TimeGrid::new(0.0, 20.0, 0.1)?;
    let mut crossed = 0;
    for k in 0..ENSEMBLES {
        let m = r.random_range(0.5..2.0);
        let x0 = r.random_range(-5.0..5.0);
        let v0 = r.random_range(-2.0..2.0);
        let v1 = r.random_range(-0.5..0.5);
        let v2 = r.random_range(-0.05..1.0) * m;
        let gamma = r.random_range(0.0..0.5);
        let sigma0 = r.random_range(0.5..2.0);
        let eps: f64 = if k % 10 == 0 { 0.0 } else { r.random_range(0.0..1.0) };
        let h = eps.sqrt();
        let ts: Vec<f64> = g.times().collect();
        let q = ts
            .iter()
            .map(|&t| center_analytic_static(x0, v0, v1, v2, gamma, m, t))
            .collect::<Result<Vec<_>>>()?;
        // A classical width only stays positive without a restoring force.
        let v2_width = if eps == 0.0 { -v2.abs() } else { v2 };
        let s = ts
            .iter()
            .map(|&t| width_analytic_frictionless(sigma0, v2_width, h, m, t))
            .collect::<Result<Vec<_>>>()?;
        let q = Path::new(g, q, None)?;
        let s = Path::new(g, s, None)?;
        let mut born = StreamFactory::new(SEED).stream(k as u64, Substream::Position);
        let xs = sample_initial_positions(32, x0, sigma0, &mut born)?;
        if !TrajectoryEnsemble::from_initial_positions(xs, &q, &s)?.is_non_crossing() {
            crossed += 1;
        }
    }
    Ok(crossed)
}

/// Run every check, in a fixed order.
pub fn run_selftest() -> Vec<Check> {
    let tol = [
        ("center_static_rk4_vs_closed_form", center_static as fn() -> Result<f64>, 1e-7),
        ("center_driven_rk4_vs_closed_form", center_driven, 1e-7),
        ("classical_width_vs_closed_form", width_classical, 1e-7),
        ("frictionless_repeller_width_vs_closed_form", || width_frictionless(false), 1e-7),
        ("frictionless_oscillator_width_vs_closed_form", || width_frictionless(true), 1e-7),
        ("soliton_width_fixed_point", soliton, 1e-8),
        ("complex_friction_decouples_at_real_friction", complex_decouples, 1e-10),
        ("fresnel_vs_quadrature", fresnel_oracle, 1e-10),
        ("erf_vs_quadrature", erf_oracle, 1e-12),
    ];
    let mut out: Vec<Check> = tol
        .into_iter()
        .map(|(name, f, tol)| match f() {
            Ok(worst) => below(name, worst, tol),
            Err(e) => errored(name, e),
        })
        .collect();
    out.push(match non_crossing() {
        Ok(crossed) => Check {
            name: "dressed_trajectories_never_cross",
            passed: crossed == 0,
            detail: format!("{crossed} of {ENSEMBLES} random ensembles crossed"),
        },
        Err(e) => errored("dressed_trajectories_never_cross", e),
    });
    out
}
