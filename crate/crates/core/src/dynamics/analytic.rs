//! Closed-form solutions for time-independent (or harmonically driven)
//! quadratic potentials.
//!
//! All of them are built from the damped kernel
//! `c(t) = cosh Ωt`, `s(t) = sinh Ωt / Ω` with `Ω² = λ`, which turns into
//! `cos`/`sin` when `λ < 0` and is summed as a power series when `|λ|t²` is
//! small, so no branch ever divides by `Ω`.

use crate::error::{invalid, Result};
use crate::potential::DrivenField;

/// `(c, s)` with `c = cosh(√λ t)` and `s = sinh(√λ t)/√λ`, for any real `λ`.
pub fn damped_kernel(lambda: f64, t: f64) -> (f64, f64) {
    let z = lambda * t * t;
    if z.abs() <= 1.0 {
        // c = Σ zᵏ/(2k)!, s = t Σ zᵏ/(2k+1)!
        let mut c = 1.0;
        let mut s = 1.0;
        let mut tc = 1.0;
        let mut ts = 1.0;
        for k in 1..30 {
            let k2 = (2 * k) as f64;
            tc *= z / ((k2 - 1.0) * k2);
            ts *= z / (k2 * (k2 + 1.0));
            c += tc;
            s += ts;
            if tc.abs() < 1e-17 && ts.abs() < 1e-17 {
                break;
            }
        }
        (c, s * t)
    } else if lambda > 0.0 {
        let w = lambda.sqrt();
        ((w * t).cosh(), (w * t).sinh() / w)
    } else {
        let w = (-lambda).sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    }
}

/// `Ω² = −V₂/m + γ²/4`. Negative values mean an underdamped oscillator.
pub fn omega_squared(v2: f64, gamma: f64, mass: f64) -> f64 {
    -v2 / mass + 0.25 * gamma * gamma
}

/// Damped frequency `Ω`, or `None` on the oscillatory branch.
pub fn damped_frequency(v2: f64, gamma: f64, mass: f64) -> Option<f64> {
    let l = omega_squared(v2, gamma, mass);
    (l >= 0.0).then(|| l.sqrt())
}

/// `τ(t) = (1 − e^{−γt})/γ`, with the `γ → 0` limit `τ = t`.
pub fn relaxation_time(gamma: f64, t: f64) -> f64 {
    if gamma == 0.0 {
        t
    } else {
        -(-gamma * t).exp_m1() / gamma
    }
}

/// `(t − τ(t))/γ`, which tends to `t²/2` as `γ → 0`.
pub fn relaxation_excess(gamma: f64, t: f64) -> f64 {
    let x = gamma * t;
    if x.abs() < 1e-3 {
        // t²(1/2 − x/6 + x²/24 − x³/120 + x⁴/720)
        let p = 0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x * (1.0 / 120.0 - x / 720.0)));
        t * t * p
    } else {
        (t - relaxation_time(gamma, t)) / gamma
    }
}

fn check_common(gamma: f64, mass: f64, t: f64) -> Result<()> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(invalid("mass", mass, "must be positive and finite"));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(invalid("gamma", gamma, "must be nonnegative and finite"));
    }
    if !t.is_finite() {
        return Err(invalid("t", t, "must be finite"));
    }
    Ok(())
}

/// Homogeneous propagators `K₁ = e^{−γt/2}(c + γs/2)` and `K₂ = e^{−γt/2}s`.
fn propagators(v2: f64, gamma: f64, mass: f64, t: f64) -> (f64, f64) {
    let (c, s) = damped_kernel(omega_squared(v2, gamma, mass), t);
    let e = (-0.5 * gamma * t).exp();
    (e * (c + 0.5 * gamma * s), e * s)
}

/// Center of a packet in `V = V₁x + ½V₂x²` with constant coefficients and
/// real friction `γ`:
///
/// ```text
/// x(t) = −V₁/V₂ + (x₀ + V₁/V₂)[c + (γ/2)s]e^{−γt/2} + ẋ₀ s e^{−γt/2}
/// ```
///
/// For `V₂ = 0` the limit `x₀ + ẋ₀τ − (V₁/m)(t − τ)/γ` is used instead.
///
/// ```
/// use qtraj::dynamics::center_analytic_static;
/// // inverted oscillator without friction: x₀ cosh ωt + ẋ₀ sinh(ωt)/ω
/// let w: f64 = 0.2;
/// let x = center_analytic_static(-10.0, 1.0, 0.0, -w * w, 0.0, 1.0, 3.0).unwrap();
/// let exact = -10.0 * (w * 3.0).cosh() + (w * 3.0).sinh() / w;
/// assert!((x - exact).abs() < 1e-12);
/// ```
pub fn center_analytic_static(
    x0: f64,
    x_dot0: f64,
    v1: f64,
    v2: f64,
    gamma: f64,
    mass: f64,
    t: f64,
) -> Result<f64> {
    check_common(gamma, mass, t)?;
    if v2 == 0.0 {
        let tau = relaxation_time(gamma, t);
        return Ok(x0 + x_dot0 * tau - v1 / mass * relaxation_excess(gamma, t));
    }
    let (k1, k2) = propagators(v2, gamma, mass, t);
    let shift = v1 / v2;
    Ok(-shift + (x0 + shift) * k1 + x_dot0 * k2)
}

/// Velocity `ẋ(t)` belonging to [`center_analytic_static`].
pub fn center_velocity_static(
    x0: f64,
    x_dot0: f64,
    v1: f64,
    v2: f64,
    gamma: f64,
    mass: f64,
    t: f64,
) -> Result<f64> {
    check_common(gamma, mass, t)?;
    // K₁' = −(V₂/m)K₂ and K₂' = K₁ − γK₂ follow from the kernel equations.
    let (k1, k2) = propagators(v2, gamma, mass, t);
    let k1p = -v2 / mass * k2;
    let k2p = k1 - gamma * k2;
    Ok(x0 * k1p + x_dot0 * k2p - v1 / mass * k2)
}

/// Center of a packet in the driven repeller
/// `V = qE₀cos(ω₀t + φ)x − ½mω²x²` with real friction `γ`.
///
/// Homogeneous part, the two transient field terms (which cancel the steady
/// term at `t = 0`) and the steady particular solution, with
/// `Ω² = ω² + γ²/4`.
pub fn center_analytic_driven(
    x0: f64,
    x_dot0: f64,
    field: &DrivenField,
    gamma: f64,
    mass: f64,
    t: f64,
) -> Result<f64> {
    check_common(gamma, mass, t)?;
    let DrivenField {
        charge,
        e0,
        omega0,
        phi,
        omega,
    } = *field;
    let w2 = omega * omega;
    let (c, s) = damped_kernel(w2 + 0.25 * gamma * gamma, t);
    let e = (-0.5 * gamma * t).exp();
    let homogeneous = (x0 * (c + 0.5 * gamma * s) + x_dot0 * s) * e;

    let sum = omega0 * omega0 + w2;
    let amp = charge * e0 / mass / (gamma * gamma * omega0 * omega0 + sum * sum);
    if amp == 0.0 {
        return Ok(homogeneous);
    }
    let sine_part = ((0.5 * gamma * gamma + sum) * s + gamma * c) * omega0 * phi.sin();
    let cosine_part = ((omega0 * omega0 - w2) * 0.5 * gamma * s - sum * c) * phi.cos();
    let arg = omega0 * t + phi;
    let steady = sum * arg.cos() - gamma * omega0 * arg.sin();
    Ok(homogeneous + e * amp * (sine_part + cosine_part) + amp * steady)
}

/// Classical width (`ħ̃ = 0`) for constant `V₂`:
/// `σ_cl = σ₀[c + (γ/2)s]e^{−γt/2} + σ̇₀ s e^{−γt/2}`.
pub fn width_analytic_classical(
    sigma0: f64,
    sigma_dot0: f64,
    v2: f64,
    gamma: f64,
    mass: f64,
    t: f64,
) -> Result<f64> {
    check_common(gamma, mass, t)?;
    if !(sigma0 > 0.0) {
        return Err(invalid("sigma0", sigma0, "must be positive"));
    }
    let (k1, k2) = propagators(v2, gamma, mass, t);
    Ok(sigma0 * k1 + sigma_dot0 * k2)
}

/// Frictionless width for constant `V₂` and `σ̇₀ = 0`:
/// `σ = σ₀ √(c² + ħ̃² s² / (4m²σ₀⁴))` with `λ = −V₂/m`.
///
/// For a repeller `V₂ = −mω²` this is
/// `σ₀ √(cosh²ωt + ħ̃² sinh²ωt / (4m²ω²σ₀⁴))`.
pub fn width_analytic_frictionless(
    sigma0: f64,
    v2: f64,
    hbar_tilde: f64,
    mass: f64,
    t: f64,
) -> Result<f64> {
    check_common(0.0, mass, t)?;
    if !(sigma0 > 0.0) {
        return Err(invalid("sigma0", sigma0, "must be positive"));
    }
    let (c, s) = damped_kernel(-v2 / mass, t);
    let r = hbar_tilde * s / (2.0 * mass * sigma0 * sigma0);
    Ok(sigma0 * (c * c + r * r).sqrt())
}

/// Imaginary friction `γ_I = −ħ/(2mσ₀²) + 2σ₀²V₂/ħ` that makes `σ = σ₀` a
/// fixed point of the generalized Pinney equation.
///
/// ```
/// use qtraj::dynamics::soliton_gamma_i;
/// assert_eq!(soliton_gamma_i(1.0, 0.0, 1.0, 1.0).unwrap(), -0.5);
/// assert_eq!(soliton_gamma_i(2.0, 1.0, 1.0, 1.0).unwrap(), 7.875);
/// ```
pub fn soliton_gamma_i(sigma0: f64, v2: f64, mass: f64, hbar: f64) -> Result<f64> {
    if !(sigma0.is_finite() && sigma0 > 0.0) {
        return Err(invalid("sigma0", sigma0, "must be positive and finite"));
    }
    if !(mass.is_finite() && mass > 0.0) {
        return Err(invalid("mass", mass, "must be positive and finite"));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(invalid("hbar", hbar, "must be positive and finite"));
    }
    let s2 = sigma0 * sigma0;
    Ok(-hbar / (2.0 * mass * s2) + 2.0 * s2 * v2 / hbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_branches_meet() {
        for lambda in [-2.0, -0.3, 0.0, 0.04, 1.7] {
            for t in [0.0, 0.5, 1.0, 3.0] {
                let (c, s) = damped_kernel(lambda, t);
                let (c2, s2) = if lambda > 0.0 {
                    let w = f64::sqrt(lambda);
                    ((w * t).cosh(), if t == 0.0 { 0.0 } else { (w * t).sinh() / w })
                } else if lambda < 0.0 {
                    let w = f64::sqrt(-lambda);
                    ((w * t).cos(), (w * t).sin() / w)
                } else {
                    (1.0, t)
                };
                assert!((c - c2).abs() < 1e-14 * c2.abs().max(1.0), "{lambda} {t}");
                assert!((s - s2).abs() < 1e-14 * s2.abs().max(1.0), "{lambda} {t}");
            }
        }
    }

    #[test]
    fn damped_frequency_substitution() {
        let w = 0.2;
        let o = damped_frequency(-w * w, 0.3 * w, 1.0).unwrap();
        assert!((o - 0.2022375).abs() < 1e-7);
        assert!(damped_frequency(1.0, 0.1, 1.0).is_none());
    }

    #[test]
    fn static_center_limits() {
        assert_eq!(center_analytic_static(1.5, -2.0, 0.3, -0.7, 0.1, 1.0, 0.0).unwrap(), 1.5);
        // harmonic half period
        let x = center_analytic_static(1.0, 0.0, 0.0, 1.0, 0.0, 1.0, std::f64::consts::PI).unwrap();
        assert!((x + 1.0).abs() < 1e-14);
        // uniform force without friction
        let x = center_analytic_static(0.0, 1.0, -2.0, 0.0, 0.0, 1.0, 3.0).unwrap();
        assert!((x - (3.0 + 9.0)).abs() < 1e-13);
    }

    #[test]
    fn relaxation_series_matches_formula() {
        for &g in &[1e-9, 1e-6, 1e-4] {
            let x: f64 = g;
            let expect = 0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0;
            assert!((relaxation_excess(g, 1.0) / expect - 1.0).abs() < 1e-15, "{g}");
        }
        // both branches agree across the switch
        let below = relaxation_excess(0.999_999e-3, 1.0);
        let above = relaxation_excess(1.000_001e-3, 1.0);
        assert!((below - above).abs() < 1e-9);
        assert_eq!(relaxation_excess(0.0, 2.0), 2.0);
    }

    #[test]
    fn driven_field_off_reduces_to_static() {
        let field = DrivenField {
            charge: -1.0,
            e0: 0.0,
            omega0: 0.3,
            phi: 0.4,
            omega: 0.2,
        };
        for t in [0.0, 1.0, 17.0] {
            let a = center_analytic_driven(-10.0, 1.0, &field, 0.06, 1.0, t).unwrap();
            let b = center_analytic_static(-10.0, 1.0, 0.0, -0.04, 0.06, 1.0, t).unwrap();
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn frictionless_width_formula() {
        let w: f64 = 0.2;
        let t = 7.0;
        let s = width_analytic_frictionless(1.0, -w * w, 1.0, 1.0, t).unwrap();
        let e = ((w * t).cosh().powi(2) + (w * t).sinh().powi(2) / (4.0 * w * w)).sqrt();
        assert!((s - e).abs() < 1e-13 * e);
        // free spreading
        let s = width_analytic_frictionless(1.0, 0.0, 1.0, 1.0, 2.0).unwrap();
        assert!((s - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn soliton_cancellation_point() {
        let (s0, m, h) = (1.3f64, 1.0, 1.0);
        let v2 = h * h / (4.0 * m * s0.powi(4));
        assert!(soliton_gamma_i(s0, v2, m, h).unwrap().abs() < 1e-15);
        assert!(soliton_gamma_i(0.0, 0.0, 1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn driven_center_starts_at_x0(
            x0 in -20.0f64..20.0, v0 in -3.0f64..3.0, e0 in 0.0f64..1.0,
            omega0 in 0.0f64..1.0, phi in -3.2f64..3.2, omega in 0.0f64..1.0,
            gamma in 0.0f64..0.5,
        ) {
            let field = DrivenField { charge: -1.0, e0, omega0, phi, omega };
            let x = center_analytic_driven(x0, v0, &field, gamma, 1.0, 0.0).unwrap();
            prop_assert!((x - x0).abs() <= 1e-12 * x0.abs().max(1.0));
        }

        #[test]
        fn static_velocity_is_the_derivative(
            x0 in -5.0f64..5.0, v0 in -2.0f64..2.0, v1 in -1.0f64..1.0,
            v2 in -1.0f64..1.0, gamma in 0.0f64..1.0, t in 0.1f64..10.0,
        ) {
            let f = |t| center_analytic_static(x0, v0, v1, v2, gamma, 1.0, t).unwrap();
            let fd = crate::oracle::central_difference(f, t, 1e-5);
            let v = center_velocity_static(x0, v0, v1, v2, gamma, 1.0, t).unwrap();
            prop_assert!((fd - v).abs() <= 1e-6 * v.abs().max(1.0));
        }
    }
}
