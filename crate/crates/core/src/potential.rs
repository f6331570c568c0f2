//! Potentials of at most second order in `x`:
//! `V(x, t) = V₀(t) + V₁(t) x + ½ V₂(t) x²`.
//!
//! Potentials are closed-form families rather than arbitrary callables, so
//! the analytic center solutions can tell when `V₁` and `V₂` are constant.

use crate::error::{invalid, Result};

/// Value of the potential and its first two spatial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialValue {
    pub v: f64,
    pub dv: f64,
    pub d2v: f64,
}

/// A harmonic-type field driving a charge: `qE₀ cos(ω₀t + φ) x − ½mω²x²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenField {
    pub charge: f64,
    pub e0: f64,
    pub omega0: f64,
    pub phi: f64,
    /// Repeller frequency.
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialKind {
    Constant { v0: f64, v1: f64, v2: f64 },
    DrivenRepeller(DrivenField),
    /// `−½mω² exp(−g(t − t_B)²) x²`: a parabolic repeller switched on around `t_B`.
    GaussianWindowRepeller { omega: f64, g: f64, t_b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticPotential {
    kind: PotentialKind,
    mass: f64,
}

impl QuadraticPotential {
    pub fn free() -> Self {
        Self {
            kind: PotentialKind::Constant {
                v0: 0.0,
                v1: 0.0,
                v2: 0.0,
            },
            mass: 1.0,
        }
    }

    pub fn constant(v0: f64, v1: f64, v2: f64) -> Result<Self> {
        for (name, v) in [("v0", v0), ("v1", v1), ("v2", v2)] {
            if !v.is_finite() {
                return Err(invalid(name, v, "must be finite"));
            }
        }
        Ok(Self {
            kind: PotentialKind::Constant { v0, v1, v2 },
            mass: 1.0,
        })
    }

    /// `½mω²x²`.
    pub fn harmonic(mass: f64, omega: f64) -> Result<Self> {
        check_mass(mass)?;
        Self::constant(0.0, 0.0, mass * omega * omega)
    }

    /// Static inverted parabola `−½mω²x²`.
    pub fn repeller(mass: f64, omega: f64) -> Result<Self> {
        check_mass(mass)?;
        Self::constant(0.0, 0.0, -mass * omega * omega)
    }

    pub fn driven_repeller(mass: f64, field: DrivenField) -> Result<Self> {
        check_mass(mass)?;
        let DrivenField {
            charge,
            e0,
            omega0,
            phi,
            omega,
        } = field;
        for (name, v) in [
            ("charge", charge),
            ("e0", e0),
            ("omega0", omega0),
            ("phi", phi),
            ("omega", omega),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, v, "must be finite"));
            }
        }
        Ok(Self {
            kind: PotentialKind::DrivenRepeller(field),
            mass,
        })
    }

    pub fn gaussian_window_repeller(mass: f64, omega: f64, g: f64, t_b: f64) -> Result<Self> {
        check_mass(mass)?;
        if !omega.is_finite() {
            return Err(invalid("omega", omega, "must be finite"));
        }
        if !(g.is_finite() && g >= 0.0) {
            return Err(invalid("g", g, "window inverse width must be nonnegative"));
        }
        if !t_b.is_finite() {
            return Err(invalid("t_b", t_b, "must be finite"));
        }
        Ok(Self {
            kind: PotentialKind::GaussianWindowRepeller { omega, g, t_b },
            mass,
        })
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn v0(&self, _t: f64) -> f64 {
        match self.kind {
            PotentialKind::Constant { v0, .. } => v0,
            _ => 0.0,
        }
    }

    pub fn v1(&self, t: f64) -> f64 {
        match self.kind {
            PotentialKind::Constant { v1, .. } => v1,
            PotentialKind::DrivenRepeller(f) => f.charge * f.e0 * (f.omega0 * t + f.phi).cos(),
            PotentialKind::GaussianWindowRepeller { .. } => 0.0,
        }
    }

    pub fn v2(&self, t: f64) -> f64 {
        match self.kind {
            PotentialKind::Constant { v2, .. } => v2,
            PotentialKind::DrivenRepeller(f) => -self.mass * f.omega * f.omega,
            PotentialKind::GaussianWindowRepeller { omega, g, t_b } => {
                let s = t - t_b;
                -self.mass * omega * omega * (-g * s * s).exp()
            }
        }
    }

    /// `(V, ∂V/∂x, ∂²V/∂x²)` at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> PotentialValue {
        let (v0, v1, v2) = (self.v0(t), self.v1(t), self.v2(t));
        PotentialValue {
            v: v0 + v1 * x + 0.5 * v2 * x * x,
            dv: v1 + v2 * x,
            d2v: v2,
        }
    }

    /// Force gradient `∂V/∂x` at `(x, t)`.
    #[inline]
    pub fn gradient(&self, x: f64, t: f64) -> f64 {
        self.v1(t) + self.v2(t) * x
    }

    /// `(V₁, V₂)` when neither depends on time.
    pub fn static_coefficients(&self) -> Option<(f64, f64)> {
        match self.kind {
            PotentialKind::Constant { v1, v2, .. } => Some((v1, v2)),
            PotentialKind::DrivenRepeller(f) if f.e0 == 0.0 => Some((0.0, -self.mass * f.omega * f.omega)),
            PotentialKind::GaussianWindowRepeller { omega, g, .. } if g == 0.0 || omega == 0.0 => {
                Some((0.0, self.v2(0.0)))
            }
            _ => None,
        }
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if mass.is_finite() && mass > 0.0 {
        Ok(())
    } else {
        Err(invalid("mass", mass, "must be positive and finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn free_particle_is_flat() {
        let v = QuadraticPotential::free().eval(3.7, 11.0);
        assert_eq!((v.v, v.dv, v.d2v), (0.0, 0.0, 0.0));
    }

    #[test]
    fn driven_repeller_without_field() {
        let field = DrivenField {
            charge: -1.0,
            e0: 0.0,
            omega0: 0.3,
            phi: 0.0,
            omega: 0.2,
        };
        let p = QuadraticPotential::driven_repeller(1.0, field).unwrap();
        let v = p.eval(1.0, 0.0);
        assert!((v.v + 0.02).abs() < 1e-15);
        assert!((v.dv + 0.04).abs() < 1e-15);
        assert!((v.d2v + 0.04).abs() < 1e-15);
        let (v1, v2) = p.static_coefficients().unwrap();
        assert_eq!(v1, 0.0);
        assert!((v2 + 0.04).abs() < 1e-15);
    }

    #[test]
    fn window_is_fully_open_at_peak() {
        let p = QuadraticPotential::gaussian_window_repeller(1.0, 1.5, 0.7, 6.0).unwrap();
        assert!((p.eval(1.0, 6.0).d2v + 2.25).abs() < 1e-15);
        assert!(p.v2(40.0).abs() < 1e-100);
        assert!(p.static_coefficients().is_none());
    }

    proptest! {
        #[test]
        fn second_difference_recovers_v2(
            x in -50.0f64..50.0, t in 0.0f64..100.0, h in 1e-3f64..10.0,
            e0 in -1.0f64..1.0, w0 in 0.0f64..1.0, phi in -3.0f64..3.0,
        ) {
            let field = DrivenField { charge: -1.0, e0, omega0: w0, phi, omega: 0.2 };
            let p = QuadraticPotential::driven_repeller(1.0, field).unwrap();
            let d2 = (p.eval(x + h, t).v - 2.0 * p.eval(x, t).v + p.eval(x - h, t).v) / (h * h);
            let scale = (p.eval(x, t).v.abs() + 1.0) / (h * h);
            prop_assert!((d2 - p.v2(t)).abs() <= 1e-12 * scale.max(1.0));
            prop_assert_eq!(p.eval(x, t).dv, p.gradient(x, t));
        }
    }
}
