//! Dissipative tunnelling of a Gaussian packet through a driven parabolic
//! repeller `V = qE₀cos(ω₀t + φ)x − ½mω²x²`.
//!
//! With the detector at the barrier top the transmission probability is
//!
//! ```text
//! T(t) = [erf(x_t/√2σ(t)) − erf(x₀/√2σ₀)] / erfc(x₀/√2σ₀)
//! ```
//!
//! The center `x_t` is the closed-form driven solution; the width is
//! integrated with either the Kostin or the Caldirola-Kanai scaled Pinney
//! equation.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::extract::{argmax, refined_argmax};
use super::{check_stride, ExperimentKind, ExperimentResult, Table};
use crate::dynamics::{center_analytic_driven, integrate_width, Path, TimeGrid, WidthVariant};
use crate::error::{invalid, Error, Result};
use crate::params::{Friction, GaussianState, SystemParams};
use crate::potential::{DrivenField, QuadraticPotential};
use crate::specfun::{erf_diff, erfc};

/// Parameter swept by a tunnelling scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanParameter {
    Omega0,
    E0,
    Epsilon,
    GammaR,
}

impl ScanParameter {
    pub const ALL: [ScanParameter; 4] = [
        ScanParameter::Omega0,
        ScanParameter::E0,
        ScanParameter::Epsilon,
        ScanParameter::GammaR,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScanParameter::Omega0 => "omega0",
            ScanParameter::E0 => "e0",
            ScanParameter::Epsilon => "epsilon",
            ScanParameter::GammaR => "gamma_r",
        }
    }
}

impl fmt::Display for ScanParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanParameter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            format!("unknown scan parameter `{s}` (expected omega0, e0, epsilon or gamma_r)")
        })
    }
}

/// `points` equally spaced values of `param` on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub param: ScanParameter,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl ScanSpec {
    /// Resonance scan `ω₀ ∈ [0, 3ω]` at 61 points.
    pub fn resonance(omega: f64) -> Self {
        Self {
            param: ScanParameter::Omega0,
            lo: 0.0,
            hi: 3.0 * omega,
            points: 61,
        }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points < 2 {
            return Err(invalid("scan_points", self.points as f64, "a scan needs at least two points"));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.hi > self.lo) {
            return Err(invalid("scan_hi", self.hi, "scan range must satisfy lo < hi"));
        }
        let n = self.points - 1;
        Ok((0..=n)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / n as f64)
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingConfig {
    pub params: SystemParams,
    /// Real friction coefficient.
    pub gamma: f64,
    pub variant: WidthVariant,
    pub field: DrivenField,
    pub x0: f64,
    pub p0: f64,
    pub sigma0: f64,
    pub t_end: f64,
    pub dt: f64,
    pub record_every: usize,
    pub scan: Option<ScanSpec>,
}

impl Default for TunnelingConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::default(),
            gamma: 0.0,
            variant: WidthVariant::KostinScaled,
            field: DrivenField {
                charge: -1.0,
                e0: 0.0,
                omega0: 0.0,
                phi: 0.0,
                omega: 0.2,
            },
            x0: -10.0,
            p0: 1.0,
            sigma0: 1.0,
            t_end: 150.0,
            dt: 1e-3,
            record_every: 100,
            scan: None,
        }
    }
}

/// `T = [erf(x_t/√2σ) − erf(x₀/√2σ₀)]/erfc(x₀/√2σ₀)`.
pub fn transmission(x_t: f64, sigma_t: f64, x0: f64, sigma0: f64) -> Result<f64> {
    let a = x_t / (SQRT_2 * sigma_t);
    let b = x0 / (SQRT_2 * sigma0);
    Ok(erf_diff(a, b)? / erfc(b)?)
}

fn width_path(cfg: &TunnelingConfig, grid: &TimeGrid) -> Result<Path> {
    let pot = QuadraticPotential::driven_repeller(cfg.params.mass, cfg.field)?;
    let state = GaussianState::new(cfg.x0, cfg.p0 / cfg.params.mass, cfg.sigma0, 0.0)?;
    integrate_width(cfg.variant, &cfg.params, &Friction::real(cfg.gamma)?, &pot, &state, grid)
}

fn center_at(cfg: &TunnelingConfig, t: f64) -> Result<f64> {
    let m = cfg.params.mass;
    center_analytic_driven(cfg.x0, cfg.p0 / m, &cfg.field, cfg.gamma, m, t)
}

fn validate(cfg: &TunnelingConfig) -> Result<()> {
    cfg.params.validate()?;
    Friction::real(cfg.gamma)?;
    if !matches!(cfg.variant, WidthVariant::KostinScaled | WidthVariant::CkScaled) {
        return Err(Error::Unsupported(
            "tunnelling uses the kostin_scaled or ck_scaled width",
        ));
    }
    if !(cfg.x0 < 0.0) {
        return Err(invalid("x0", cfg.x0, "the packet must start left of the barrier top"));
    }
    for (name, v) in [
        ("e0", cfg.field.e0),
        ("omega0", cfg.field.omega0),
        ("phi", cfg.field.phi),
        ("charge", cfg.field.charge),
        ("p0", cfg.p0),
    ] {
        if !v.is_finite() {
            return Err(invalid(name, v, "must be finite"));
        }
    }
    Ok(())
}

/// Asymptotic transmission `T(t_end)` for one configuration.
fn asymptotic(cfg: &TunnelingConfig, grid: &TimeGrid, sigma_end: Option<f64>) -> Result<f64> {
    let sigma = match sigma_end {
        Some(s) => s,
        None => width_path(cfg, grid)?.last(),
    };
    transmission(center_at(cfg, grid.t1())?, sigma, cfg.x0, cfg.sigma0)
}

fn apply(cfg: &TunnelingConfig, param: ScanParameter, value: f64) -> Result<TunnelingConfig> {
    let mut c = *cfg;
    match param {
        ScanParameter::Omega0 => c.field.omega0 = value,
        ScanParameter::E0 => c.field.e0 = value,
        ScanParameter::Epsilon => c.params = SystemParams::new(c.params.mass, c.params.hbar, value)?,
        ScanParameter::GammaR => c.gamma = value,
    }
    Ok(c)
}

/// Transmission versus time, and optionally the asymptotic transmission over
/// a parameter scan.
///
/// Columns `t`, `x_t`, `sigma`, `T`. Scalars: `transmission_asymptotic`
/// (the value at `t_end`), `transmission_max` and `t_transmission_max`
/// (largest recorded value). With a scan, the scan table has columns
/// `<param>`, `transmission` and the scalars `scan_argmax`, `scan_max` are
/// taken from the parabola through the best scan point and its neighbours;
/// an `ω₀` scan also reports them as `omega0_res` and
/// `omega0_res_over_omega`.
pub fn run_tunneling(cfg: &TunnelingConfig) -> Result<ExperimentResult> {
    validate(cfg)?;
    let grid = TimeGrid::new(0.0, cfg.t_end, cfg.dt)?;
    check_stride(cfg.record_every, grid.n_steps())?;
    let sigma_full = width_path(cfg, &grid)?;
    let sigma = sigma_full.decimate(cfg.record_every)?;
    let coarse = *sigma.grid();

    let ts: Vec<f64> = coarse.times().collect();
    let xs = ts.iter().map(|&t| center_at(cfg, t)).collect::<Result<Vec<_>>>()?;
    let tr = xs
        .iter()
        .zip(sigma.values())
        .map(|(&x, &s)| transmission(x, s, cfg.x0, cfg.sigma0))
        .collect::<Result<Vec<_>>>()?;
    let t_inf = transmission(center_at(cfg, grid.t1())?, sigma_full.last(), cfg.x0, cfg.sigma0)?;
    let k_max = argmax(&tr).unwrap_or(0);

    let mut table = Table::new();
    table.push("t", ts.clone())?;
    table.push("x_t", xs)?;
    table.push("sigma", sigma.values().to_vec())?;
    table.push("T", tr.clone())?;
    let mut out = ExperimentResult::new(ExperimentKind::Tunneling, table);
    out.set_scalar("transmission_asymptotic", Some(t_inf));
    out.set_scalar("transmission_max", Some(tr[k_max]));
    out.set_scalar("t_transmission_max", Some(ts[k_max]));
    out.meta("width_variant", cfg.variant);
    out.meta("epsilon", cfg.params.epsilon);
    out.meta("gamma_r", cfg.gamma);

    if let Some(scan) = cfg.scan {
        let values = scan.values()?;
        // ω₀ and E₀ only move the center, so the width is shared.
        let shared = matches!(scan.param, ScanParameter::Omega0 | ScanParameter::E0).then(|| sigma_full.last());
        let ts_scan = values
            .par_iter()
            .map(|&v| asymptotic(&apply(cfg, scan.param, v)?, &grid, shared))
            .collect::<Result<Vec<_>>>()?;
        let best = refined_argmax(&values, &ts_scan);
        let mut st = Table::new();
        st.push(scan.param.name(), values)?;
        st.push("transmission", ts_scan)?;
        out.scan = Some(st);
        out.set_scalar("scan_argmax", best.map(|b| b.x));
        out.set_scalar("scan_max", best.map(|b| b.value));
        if scan.param == ScanParameter::Omega0 {
            out.set_scalar("omega0_res", best.map(|b| b.x));
            out.set_scalar("omega0_res_over_omega", best.map(|b| b.x / cfg.field.omega));
        }
        out.meta("scan", scan.param);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_at_zero() {
        assert_eq!(transmission(-10.0, 1.0, -10.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn baseline_settles() {
        let cfg = TunnelingConfig {
            dt: 1e-2,
            record_every: 10,
            ..Default::default()
        };
        let r = run_tunneling(&cfg).unwrap();
        let t = r.column("t").unwrap();
        let tr = r.column("T").unwrap();
        let end = r.scalar("transmission_asymptotic").unwrap().unwrap();
        assert_eq!(tr[0], 0.0);
        for (t, v) in t.iter().zip(tr) {
            if *t > 50.0 {
                assert!((v - end).abs() < 1e-3);
            }
        }
        assert!(r.scalar("transmission_max").unwrap().unwrap() > end);
    }

    #[test]
    fn scan_grid_and_names() {
        let s = ScanSpec::resonance(0.2);
        let v = s.values().unwrap();
        assert_eq!(v.len(), 61);
        assert_eq!(v[0], 0.0);
        assert!((v[60] - 0.6).abs() < 1e-15);
        for p in ScanParameter::ALL {
            assert_eq!(p.name().parse::<ScanParameter>().unwrap(), p);
        }
    }

    #[test]
    fn rejects_the_wrong_side_and_width() {
        let cfg = TunnelingConfig {
            x0: 1.0,
            ..Default::default()
        };
        assert!(run_tunneling(&cfg).is_err());
        let cfg = TunnelingConfig {
            variant: WidthVariant::ComplexFriction,
            ..Default::default()
        };
        assert!(run_tunneling(&cfg).is_err());
    }
}
