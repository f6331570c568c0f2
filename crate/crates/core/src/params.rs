//! Physical parameters shared by every model.
//!
//! All quantities default to atomic units (`m = ħ = 1`). The transition
//! parameter `ε ∈ [0, 1]` interpolates between the classical (`ε = 0`) and the
//! quantum (`ε = 1`) regime through the scaled Planck constant `ħ̃ = ħ√ε`.

use crate::error::{invalid, Result};

/// Mass, Planck constant and transition parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub mass: f64,
    pub hbar: f64,
    pub epsilon: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
            epsilon: 1.0,
        }
    }
}

impl SystemParams {
    pub fn new(mass: f64, hbar: f64, epsilon: f64) -> Result<Self> {
        let p = Self {
            mass,
            hbar,
            epsilon,
        };
        p.validate()?;
        Ok(p)
    }

    /// Atomic units with the given transition parameter.
    pub fn atomic(epsilon: f64) -> Result<Self> {
        Self::new(1.0, 1.0, epsilon)
    }

    /// Scaled Planck constant `ħ̃ = ħ√ε`.
    pub fn hbar_tilde(&self) -> f64 {
        if self.epsilon == 1.0 {
            self.hbar
        } else {
            self.hbar * self.epsilon.sqrt()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(invalid("mass", self.mass, "must be positive and finite"));
        }
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(invalid("hbar", self.hbar, "must be positive and finite"));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(invalid("epsilon", self.epsilon, "must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Complex friction coefficient `γ = γ_R + iγ_I`.
///
/// `γ_I = 0` recovers the real-friction theory. `γ_I` may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Friction {
    pub gamma_r: f64,
    pub gamma_i: f64,
}

impl Friction {
    pub fn new(gamma_r: f64, gamma_i: f64) -> Result<Self> {
        let f = Self { gamma_r, gamma_i };
        f.validate()?;
        Ok(f)
    }

    pub fn real(gamma: f64) -> Result<Self> {
        Self::new(gamma, 0.0)
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_real(&self) -> bool {
        self.gamma_i == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_r.is_finite() && self.gamma_r >= 0.0) {
            return Err(invalid("gamma_r", self.gamma_r, "must be nonnegative and finite"));
        }
        if !self.gamma_i.is_finite() {
            return Err(invalid("gamma_i", self.gamma_i, "must be finite"));
        }
        Ok(())
    }

    pub(crate) fn require_real(&self) -> Result<()> {
        if self.is_real() {
            Ok(())
        } else {
            Err(invalid(
                "gamma_i",
                self.gamma_i,
                "this equation is only defined for real friction",
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseKind {
    #[default]
    None,
    GaussianWhite,
}

/// Heat bath: temperature (as `k_B T`) and noise model.
///
/// The random force has `⟨F_r(0) F_r(t)⟩ = 2mγ k_B T δ(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bath {
    pub kt: f64,
    pub kind: NoiseKind,
}

impl Bath {
    pub fn none() -> Self {
        Self::default()
    }

    /// Gaussian white noise at temperature `kt`.
    pub fn thermal(kt: f64) -> Result<Self> {
        let b = Self {
            kt,
            kind: NoiseKind::GaussianWhite,
        };
        b.validate()?;
        Ok(b)
    }

    /// Zero when the noise is switched off, whatever `kt` says.
    pub fn effective_kt(&self) -> f64 {
        match self.kind {
            NoiseKind::None => 0.0,
            NoiseKind::GaussianWhite => self.kt,
        }
    }

    pub fn is_active(&self) -> bool {
        self.effective_kt() > 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kt.is_finite() && self.kt >= 0.0) {
            return Err(invalid("kT", self.kt, "must be nonnegative and finite"));
        }
        Ok(())
    }
}

/// Complete dynamical state of the Gaussian ansatz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub q: f64,
    pub q_dot: f64,
    pub sigma: f64,
    pub sigma_dot: f64,
}

impl GaussianState {
    pub fn new(q: f64, q_dot: f64, sigma: f64, sigma_dot: f64) -> Result<Self> {
        let s = Self {
            q,
            q_dot,
            sigma,
            sigma_dot,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.q.is_finite() {
            return Err(invalid("q", self.q, "must be finite"));
        }
        if !self.q_dot.is_finite() {
            return Err(invalid("q_dot", self.q_dot, "must be finite"));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(invalid("sigma", self.sigma, "must be positive and finite"));
        }
        if !self.sigma_dot.is_finite() {
            return Err(invalid("sigma_dot", self.sigma_dot, "must be finite"));
        }
        Ok(())
    }
}

/// Parameters that passed validation, with `ħ̃` resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validated {
    pub params: SystemParams,
    pub friction: Friction,
    pub bath: Bath,
    pub hbar_tilde: f64,
}

pub fn validate_params(params: SystemParams, friction: Friction, bath: Bath) -> Result<Validated> {
    params.validate()?;
    friction.validate()?;
    bath.validate()?;
    Ok(Validated {
        params,
        friction,
        bath,
        hbar_tilde: params.hbar_tilde(),
    })
}
