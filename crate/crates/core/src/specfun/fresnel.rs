//! Fresnel integrals with the convention `F(u) = ∫₀ᵘ exp(iπx²/2) dx`,
//! `C = Re F`, `S = Im F`.
//!
//! Power series for `|u| ≤ 1.6`; beyond that the complementary integral is
//! written as a complex continued fraction evaluated with the modified Lentz
//! method. For `|u| ≥ 10⁷` only the leading asymptotic term is kept.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::require_finite;
use crate::error::Result;

/// Largest `|u|` handled by the power series.
pub const FRESNEL_SERIES_CUTOFF: f64 = 1.6;

const ASYMPTOTIC_CUTOFF: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelPair {
    pub c: f64,
    pub s: f64,
}

pub fn fresnel(u: f64) -> Result<FresnelPair> {
    require_finite("u", u)?;
    let a = u.abs();
    let (c, s) = if a <= FRESNEL_SERIES_CUTOFF {
        series(a)
    } else if a < ASYMPTOTIC_CUTOFF {
        continued_fraction(a)
    } else {
        asymptotic(a)
    };
    Ok(if u < 0.0 {
        FresnelPair { c: -c, s: -s }
    } else {
        FresnelPair { c, s }
    })
}

/// `F(u) = u Σₖ (iπu²/2)ᵏ / (k! (2k+1))`.
pub(super) fn series(u: f64) -> (f64, f64) {
    let t = 0.5 * PI * u * u;
    let mut c = 0.0;
    let mut s = 0.0;
    let mut a = 1.0; // tᵏ / k!
    for k in 0..200usize {
        let term = a / (2 * k + 1) as f64;
        match k % 4 {
            0 => c += term,
            1 => s += term,
            2 => c -= term,
            _ => s -= term,
        }
        if term < 1e-17 * (c.abs() + s.abs()) && k > 2 {
            break;
        }
        a *= t / (k + 1) as f64;
    }
    (u * c, u * s)
}

/// Continued fraction for `|u| > 1.6`, accurate to machine precision.
pub(super) fn continued_fraction(u: f64) -> (f64, f64) {
    const TINY: f64 = 1e-300;
    let pix2 = PI * u * u;
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut n = -1.0f64;
    for _ in 2..=500 {
        n += 2.0;
        let an = -n * (n + 1.0);
        b += 4.0;
        d = (d * an + b).inv();
        cc = b + cc.inv() * an;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(u, -u);
    let phase = Complex64::new((0.5 * pix2).cos(), (0.5 * pix2).sin());
    let cs = Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - phase * h);
    (cs.re, cs.im)
}

fn asymptotic(u: f64) -> (f64, f64) {
    let arg = 0.5 * PI * u * u;
    let r = 1.0 / (PI * u);
    (0.5 + r * arg.sin(), 0.5 - r * arg.cos())
}
