//! Slow, independent reference routines.
//!
//! Nothing in the production paths calls into this module. The routines here
//! exist so that tests and the `selftest` command can check the fast special
//! functions and closed forms against a different numerical route.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // Split into panels first so oscillatory integrands cannot fool the
    // initial error estimate.
    let panels = 16usize.max(((b - a).abs() * 8.0).ceil() as usize);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == panels { b } else { lo + h };
            let fa = f(lo);
            let fb = f(hi);
            let fm = f(0.5 * (lo + hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            simpson_step(f, lo, hi, fa, fm, fb, whole, tol / panels as f64, 60)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// `(C(u), S(u))` by quadrature of `∫₀ᵘ cos(πx²/2) dx` and `∫₀ᵘ sin(πx²/2) dx`.
pub fn fresnel_quadrature(u: f64, tol: f64) -> (f64, f64) {
    let c = adaptive_simpson(&|x: f64| (0.5 * PI * x * x).cos(), 0.0, u, tol);
    let s = adaptive_simpson(&|x: f64| (0.5 * PI * x * x).sin(), 0.0, u, tol);
    (c, s)
}

/// `erf(u)` by quadrature of `(2/√π) ∫₀ᵘ exp(−x²) dx`.
pub fn erf_quadrature(u: f64, tol: f64) -> f64 {
    FRAC_2_SQRT_PI * adaptive_simpson(&|x: f64| (-x * x).exp(), 0.0, u, tol / FRAC_2_SQRT_PI)
}

/// Maclaurin series `erf(u) = (2/√π) Σ (−1)ⁿ u^{2n+1} / (n!(2n+1))`.
///
/// Alternating, so only trustworthy for moderate `|u|` (≲ 3).
pub fn erf_maclaurin(u: f64) -> f64 {
    let u2 = u * u;
    let mut power = u; // (−1)ⁿ u^{2n+1} / n!
    let mut sum = u;
    for n in 1..400 {
        power *= -u2 / n as f64;
        let term = power / (2 * n + 1) as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Central finite difference of `f` at `x` with step `h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
