//! Pinney-type equations for the packet width.
//!
//! `V₂` is the curvature of the potential at the packet center. For the
//! quadratic families used here it does not depend on position, so no companion
//! center path is needed.

use std::fmt;
use std::str::FromStr;

use super::grid::{Path, TimeGrid};
use super::rk4::{columns, rk4_solve};
use crate::error::{invalid, Error, Result};
use crate::params::{Friction, GaussianState, SystemParams};
use crate::potential::QuadraticPotential;

/// Width below which the `1/σ³` term is treated as a collapse.
pub const SIGMA_FLOOR: f64 = 1e-12;

/// Magnitude below which a leading coefficient counts as vanished.
pub const SINGULAR_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WidthVariant {
    /// `σ̈ = −γσ̇ + ħ̃²/(4m²σ³) − V₂σ/m`
    KostinScaled,
    /// `σ̈ = −γσ̇ + ħ̃²e^{−2γt}/(4m²σ³) − V₂σ/m`
    CkScaled,
    /// `σ̈ = −γ_Rσ̇ + ħ̃²/(4m²σ³) + ħ̃γ_I/(2mσ) − V₂σ/m`
    GeneralizedGammaI,
    /// Generalized dissipative Pinney equation of the complex-friction
    /// wave equation (see [`complex_friction_width_accel`]).
    ComplexFriction,
}

impl WidthVariant {
    pub const ALL: [WidthVariant; 4] = [
        WidthVariant::KostinScaled,
        WidthVariant::CkScaled,
        WidthVariant::GeneralizedGammaI,
        WidthVariant::ComplexFriction,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            WidthVariant::KostinScaled => "kostin_scaled",
            WidthVariant::CkScaled => "ck_scaled",
            WidthVariant::GeneralizedGammaI => "generalized_gamma_i",
            WidthVariant::ComplexFriction => "complex_friction",
        }
    }
}

impl fmt::Display for WidthVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WidthVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s || (s == "kostin" && *v == Self::KostinScaled) || (s == "ck" && *v == Self::CkScaled))
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|v| v.name()).collect();
                format!("unknown width variant `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Coefficients shared by the complex-friction equations: `m`, `ħ̃`, `γ_R`, `γ_I`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ComplexCoefficients {
    pub m: f64,
    pub h: f64,
    pub gr: f64,
    pub gi: f64,
}

impl ComplexCoefficients {
    pub fn new(params: &SystemParams, friction: &Friction) -> Result<Self> {
        let h = params.hbar_tilde();
        if friction.gamma_i != 0.0 && h == 0.0 {
            return Err(invalid(
                "epsilon",
                params.epsilon,
                "complex friction needs a nonzero scaled Planck constant",
            ));
        }
        Ok(Self {
            m: params.mass,
            h,
            gr: friction.gamma_r,
            gi: friction.gamma_i,
        })
    }

    /// Leading bracket `1 + mγ_Iσ²/ħ̃` of the width equation.
    pub fn width_leading(&self, sigma: f64) -> f64 {
        if self.gi == 0.0 {
            1.0
        } else {
            1.0 + self.m * self.gi * sigma * sigma / self.h
        }
    }
}

/// `σ̈` from the complex-friction width equation
///
/// ```text
/// (1 + mγ_Iσ²/ħ) σ̈ = 3(mγ_I/ħ)σσ̇² − 2(mγ_Iγ_R/ħ)σ²σ̇ − (mV₂γ_I²/ħ²)σ⁵
///                    − (γ_I/2ħ)(4V₂ − mγ_I² − mγ_R²)σ³
///                    − (V₂/m − (γ_R² + 5γ_I²)/4)σ + γ_Iħ/(mσ) + ħ²/(4m²σ³)
/// ```
pub(crate) fn complex_friction_width_accel(
    c: &ComplexCoefficients,
    v2: f64,
    sigma: f64,
    sigma_dot: f64,
    t: f64,
) -> Result<f64> {
    let ComplexCoefficients { m, h, gr, gi } = *c;
    let lead = c.width_leading(sigma);
    if lead.abs() < SINGULAR_TOLERANCE {
        return Err(Error::SingularCoefficient {
            equation: "complex-friction width",
            t,
            value: lead,
        });
    }
    let s2 = sigma * sigma;
    let s3 = s2 * sigma;
    let pinney = h * h / (4.0 * m * m * s3);
    let linear = -(v2 / m - (gr * gr + 5.0 * gi * gi) / 4.0) * sigma;
    let rhs = if gi == 0.0 {
        linear + pinney
    } else {
        let k = m * gi / h;
        3.0 * k * sigma * sigma_dot * sigma_dot - 2.0 * k * gr * s2 * sigma_dot
            - k * k * v2 / m * s3 * s2
            - gi / (2.0 * h) * (4.0 * v2 - m * gi * gi - m * gr * gr) * s3
            + linear
            + gi * h / (m * sigma)
            + pinney
    };
    Ok(rhs / lead)
}

fn check_sigma(sigma: f64, t: f64) -> Result<()> {
    if sigma > SIGMA_FLOOR {
        Ok(())
    } else {
        Err(Error::WidthCollapse {
            t,
            sigma,
            floor: SIGMA_FLOOR,
        })
    }
}

/// RK4 solution of the selected width equation.
///
/// The returned [`Path`] holds `σ` as values and `σ̇` as derivatives. The
/// integration aborts if `σ` drops to [`SIGMA_FLOOR`] or, for
/// [`WidthVariant::ComplexFriction`], if `1 + mγ_Iσ²/ħ̃` vanishes.
///
/// ```
/// use qtraj::dynamics::{integrate_width, soliton_gamma_i, TimeGrid, WidthVariant};
/// use qtraj::{Friction, GaussianState, QuadraticPotential, SystemParams};
///
/// // A free packet with the soliton value of γ_I keeps its width.
/// let gamma_i = soliton_gamma_i(1.0, 0.0, 1.0, 1.0).unwrap();
/// let sigma = integrate_width(
///     WidthVariant::GeneralizedGammaI,
///     &SystemParams::default(),
///     &Friction::new(0.0, gamma_i).unwrap(),
///     &QuadraticPotential::free(),
///     &GaussianState::new(0.0, 0.0, 1.0, 0.0).unwrap(),
///     &TimeGrid::new(0.0, 10.0, 1e-2).unwrap(),
/// )
/// .unwrap();
/// assert!(sigma.values().iter().all(|s| (s - 1.0).abs() < 1e-12));
/// ```
pub fn integrate_width(
    variant: WidthVariant,
    params: &SystemParams,
    friction: &Friction,
    pot: &QuadraticPotential,
    state0: &GaussianState,
    grid: &TimeGrid,
) -> Result<Path> {
    params.validate()?;
    friction.validate()?;
    state0.validate()?;
    check_sigma(state0.sigma, grid.t0())?;
    let m = params.mass;
    let h = params.hbar_tilde();
    let pinney = h * h / (4.0 * m * m);
    let gr = friction.gamma_r;
    let gi = friction.gamma_i;
    let y0 = [state0.sigma, state0.sigma_dot];

    let ys = match variant {
        WidthVariant::KostinScaled | WidthVariant::CkScaled => {
            friction.require_real()?;
            let ck = variant == WidthVariant::CkScaled;
            rk4_solve(grid, y0, |t, y| {
                check_sigma(y[0], t)?;
                let damp = if ck { (-2.0 * gr * t).exp() } else { 1.0 };
                let s3 = y[0] * y[0] * y[0];
                Ok([y[1], -gr * y[1] + pinney * damp / s3 - pot.v2(t) * y[0] / m])
            })?
        }
        WidthVariant::GeneralizedGammaI => rk4_solve(grid, y0, |t, y| {
            check_sigma(y[0], t)?;
            let s3 = y[0] * y[0] * y[0];
            Ok([
                y[1],
                -gr * y[1] + pinney / s3 + h * gi / (2.0 * m * y[0]) - pot.v2(t) * y[0] / m,
            ])
        })?,
        WidthVariant::ComplexFriction => {
            let c = ComplexCoefficients::new(params, friction)?;
            rk4_solve(grid, y0, |t, y| {
                check_sigma(y[0], t)?;
                Ok([y[1], complex_friction_width_accel(&c, pot.v2(t), y[0], y[1], t)?])
            })?
        }
    };
    if let Some((k, s)) = ys.iter().enumerate().find(|(_, y)| !(y[0] > SIGMA_FLOOR)) {
        return Err(Error::WidthCollapse {
            t: grid.time(k),
            sigma: s[0],
            floor: SIGMA_FLOOR,
        });
    }
    let [sigma, sigma_dot] = columns(&ys);
    Path::new(*grid, sigma, Some(sigma_dot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::analytic::{
        soliton_gamma_i, width_analytic_classical, width_analytic_frictionless,
    };

    fn width(
        variant: WidthVariant,
        eps: f64,
        friction: Friction,
        pot: &QuadraticPotential,
        sigma_dot0: f64,
        t1: f64,
    ) -> Path {
        integrate_width(
            variant,
            &SystemParams::atomic(eps).unwrap(),
            &friction,
            pot,
            &GaussianState::new(0.0, 0.0, 1.0, sigma_dot0).unwrap(),
            &TimeGrid::new(0.0, t1, 1e-3).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn classical_width_matches_closed_form() {
        let pot = QuadraticPotential::repeller(1.0, 0.2).unwrap();
        let p = width(WidthVariant::KostinScaled, 0.0, Friction::real(0.06).unwrap(), &pot, 0.3, 10.0);
        let e = width_analytic_classical(1.0, 0.3, -0.04, 0.06, 1.0, 10.0).unwrap();
        assert!((p.last() / e - 1.0).abs() < 1e-8);
    }

    #[test]
    fn frictionless_width_matches_closed_form() {
        let pot = QuadraticPotential::repeller(1.0, 0.2).unwrap();
        for eps in [1.0, 0.5, 0.1] {
            let p = width(WidthVariant::KostinScaled, eps, Friction::none(), &pot, 0.0, 30.0);
            for (k, t) in p.grid().times().enumerate().step_by(997) {
                let e = width_analytic_frictionless(1.0, -0.04, eps.sqrt(), 1.0, t).unwrap();
                assert!((p.values()[k] / e - 1.0).abs() < 1e-8, "eps={eps} t={t}");
            }
        }
    }

    #[test]
    fn soliton_is_a_fixed_point() {
        let pot = QuadraticPotential::harmonic(1.0, 0.7).unwrap();
        let gi = soliton_gamma_i(1.0, 0.49, 1.0, 1.0).unwrap();
        let p = width(WidthVariant::GeneralizedGammaI, 1.0, Friction::new(0.1, gi).unwrap(), &pot, 0.0, 50.0);
        assert!(p.values().iter().all(|s| (s - 1.0).abs() < 1e-8));
    }

    #[test]
    fn complex_friction_soliton_for_free_packet() {
        let gi = soliton_gamma_i(1.0, 0.0, 1.0, 1.0).unwrap();
        let p = width(WidthVariant::ComplexFriction, 1.0, Friction::new(0.0, gi).unwrap(), &QuadraticPotential::free(), 0.0, 50.0);
        assert!(p.values().iter().all(|s| (s - 1.0).abs() < 1e-8));
    }

    #[test]
    fn ck_never_exceeds_kostin() {
        let pot = QuadraticPotential::repeller(1.0, 0.2).unwrap();
        for eps in [1.0, 0.5, 0.1] {
            let f = Friction::real(0.04).unwrap();
            let ck = width(WidthVariant::CkScaled, eps, f, &pot, 0.0, 40.0);
            let ko = width(WidthVariant::KostinScaled, eps, f, &pot, 0.0, 40.0);
            for (a, b) in ck.values().iter().zip(ko.values()).skip(1) {
                assert!(a <= b);
            }
        }
    }

    #[test]
    fn width_grows_with_epsilon() {
        let pot = QuadraticPotential::repeller(1.0, 0.2).unwrap();
        let f = Friction::real(0.02).unwrap();
        let paths: Vec<_> = [0.0, 0.1, 0.5, 1.0]
            .iter()
            .map(|&e| width(WidthVariant::KostinScaled, e, f, &pot, 0.0, 30.0))
            .collect();
        for w in paths.windows(2) {
            for (a, b) in w[0].values().iter().zip(w[1].values()) {
                assert!(a <= b);
            }
        }
    }

    #[test]
    fn collapse_and_singularity_are_errors() {
        // A classical packet focused by its initial velocity shrinks to zero.
        let r = integrate_width(
            WidthVariant::KostinScaled,
            &SystemParams::atomic(0.0).unwrap(),
            &Friction::none(),
            &QuadraticPotential::free(),
            &GaussianState::new(0.0, 0.0, 1.0, -1.0).unwrap(),
            &TimeGrid::new(0.0, 2.0, 1e-3).unwrap(),
        );
        assert!(matches!(r, Err(Error::WidthCollapse { .. })), "{r:?}");
        // 1 + mγ_Iσ²/ħ = 0 at σ = 1 when γ_I = −1.
        let r = integrate_width(
            WidthVariant::ComplexFriction,
            &SystemParams::default(),
            &Friction::new(0.0, -1.0).unwrap(),
            &QuadraticPotential::free(),
            &GaussianState::new(0.0, 0.0, 1.0, 0.0).unwrap(),
            &TimeGrid::new(0.0, 1.0, 1e-3).unwrap(),
        );
        assert!(matches!(r, Err(Error::SingularCoefficient { .. })), "{r:?}");
    }

    #[test]
    fn variant_names_round_trip() {
        for v in WidthVariant::ALL {
            assert_eq!(v.name().parse::<WidthVariant>().unwrap(), v);
        }
        assert_eq!("kostin".parse::<WidthVariant>().unwrap(), WidthVariant::KostinScaled);
        assert!("bogus".parse::<WidthVariant>().is_err());
    }
}
