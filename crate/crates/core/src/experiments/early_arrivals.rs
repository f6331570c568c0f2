//! Early arrivals caused by a briefly switched-on parabolic repeller.
//!
//! The barrier `V = −½mω²e^{−g(t−t_B)²}x²` appears around `t_B`. The
//! probability of finding the packet beyond the detector `x_d` is
//!
//! ```text
//! P_tr(t) = ½ erfc[(x_d − q(t))/(√2 σ(t))]
//! ```
//!
//! averaged over thermal centers with Maxwell-Boltzmann initial velocities.
//! Free and barrier runs of the same trajectory index share their initial
//! velocity and their noise (common random numbers), so the difference of the
//! two curves has a much smaller error than either curve.

use std::f64::consts::SQRT_2;

use rand::Rng;
use rand_distr::StandardNormal;

use super::extract::argmax;
use super::{check_stride, ExperimentKind, ExperimentResult, Table};
use crate::dynamics::{integrate_center_langevin_sampled, integrate_width, TimeGrid, WidthVariant};
use crate::error::{invalid, Result};
use crate::params::{Bath, Friction, GaussianState, SystemParams};
use crate::potential::QuadraticPotential;
use crate::rng::{StreamFactory, Substream};
use crate::specfun::erfc;
use crate::trajectories::ensemble_moments;

/// How the barrier center time `t_B` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BarrierTime {
    Value(f64),
    /// Time at which the damped free center reaches `x = 0`.
    FreePath,
    /// A multiple of `t_b = 2mσ₀²/ħ`.
    MultipleOfTb(f64),
}

/// `t_B = −(1/γ_R) ln(1 + γ_R q(0)/q̇(0))`, the time the damped free center
/// needs to reach the barrier top at `x = 0` (`−q(0)/q̇(0)` for `γ_R = 0`).
///
/// Requires `q(0) < 0 < q̇(0)` and `γ_R|q(0)|/q̇(0) < 1`; otherwise the
/// center stops before the barrier.
///
/// ```
/// use qtraj::experiments::free_path_barrier_time;
/// let t = free_path_barrier_time(-10.0, 1.0, 0.05).unwrap();
/// assert!((t - 20.0 * 2f64.ln()).abs() < 1e-12);
/// assert!(free_path_barrier_time(-10.0, 1.0, 0.1).is_err());
/// ```
pub fn free_path_barrier_time(q0: f64, q_dot0: f64, gamma_r: f64) -> Result<f64> {
    if !(q0 < 0.0 && q0.is_finite()) {
        return Err(invalid("q0", q0, "the packet must start left of the barrier"));
    }
    if !(q_dot0 > 0.0 && q_dot0.is_finite()) {
        return Err(invalid("q_dot0", q_dot0, "the packet must move towards the barrier"));
    }
    if !(gamma_r >= 0.0 && gamma_r.is_finite()) {
        return Err(invalid("gamma_r", gamma_r, "must be nonnegative and finite"));
    }
    let r = gamma_r * q0 / q_dot0;
    if !(r > -1.0) {
        return Err(invalid(
            "gamma_r",
            gamma_r,
            "γ_R|q(0)|/q̇(0) must be below 1 for the center to reach the barrier",
        ));
    }
    Ok(if gamma_r == 0.0 { -q0 / q_dot0 } else { -r.ln_1p() / gamma_r })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarlyArrivalsConfig {
    pub params: SystemParams,
    pub friction: Friction,
    pub kt: f64,
    /// Barrier frequency; the free reference run uses `ω = 0`.
    pub omega: f64,
    /// Inverse squared duration of the window.
    pub g: f64,
    pub barrier_time: BarrierTime,
    pub x_d: f64,
    pub q0: f64,
    /// Mean initial velocity; thermal velocities are added to it.
    pub q_dot0: f64,
    pub sigma0: f64,
    pub sigma_dot0: f64,
    pub t_end: f64,
    pub dt: f64,
    pub record_every: usize,
    pub n_tra: usize,
    pub seed: u64,
}

impl Default for EarlyArrivalsConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::default(),
            friction: Friction {
                gamma_r: 0.1,
                gamma_i: 0.0,
            },
            kt: 2.0,
            omega: 1.5,
            g: 1.0,
            barrier_time: BarrierTime::MultipleOfTb(3.0),
            x_d: 5.0,
            q0: -5.0,
            q_dot0: 0.0,
            sigma0: 1.0,
            sigma_dot0: 0.0,
            t_end: 60.0,
            dt: 1e-2,
            record_every: 10,
            n_tra: 10_000,
            seed: 0,
        }
    }
}

impl EarlyArrivalsConfig {
    /// `t_b = 2mσ₀²/ħ`.
    pub fn t_b(&self) -> f64 {
        2.0 * self.params.mass * self.sigma0 * self.sigma0 / self.params.hbar
    }

    pub fn resolve_barrier_time(&self) -> Result<f64> {
        let t = match self.barrier_time {
            BarrierTime::Value(t) => t,
            BarrierTime::FreePath => free_path_barrier_time(self.q0, self.q_dot0, self.friction.gamma_r)?,
            BarrierTime::MultipleOfTb(k) => k * self.t_b(),
        };
        if !t.is_finite() {
            return Err(invalid("t_barrier", t, "must be finite"));
        }
        Ok(t)
    }
}

fn p_tr(x_d: f64, q: f64, sigma: f64) -> Result<f64> {
    Ok(0.5 * erfc((x_d - q) / (SQRT_2 * sigma))?)
}

/// Maximal run of indices around `k` on which `diff > 3 se`, if `k` is in one.
fn excess_window(diff: &[f64], se: &[f64], k: usize) -> Option<(usize, usize)> {
    let above = |j: usize| diff[j] > 3.0 * se[j];
    if !above(k) {
        return None;
    }
    let lo = (0..k).rev().take_while(|&j| above(j)).last().unwrap_or(k);
    let hi = (k + 1..diff.len()).take_while(|&j| above(j)).last().unwrap_or(k);
    Some((lo, hi))
}

/// Thermal transmission probabilities with and without the barrier.
///
/// Columns `t`, `p_tr_free`, `p_tr_barrier`, `p_tr_free_se`,
/// `p_tr_barrier_se`, `diff` (barrier minus free) and `diff_se`, the
/// standard error of the paired difference. Scalars: `t_b`, `t_barrier`,
/// `p_tr_free_end`, `p_tr_barrier_end`, `max_excess` and `t_max_excess`
/// (largest `diff`), `z_max_excess` (`diff/diff_se` there), and
/// `excess_window_start`, `excess_window_end`: the run of recorded times
/// around the largest excess on which `diff > 3 diff_se`, absent if the
/// largest excess is not significant.
///
/// Widths solve the generalized Pinney equation with the full complex
/// friction; the centers feel only `γ_R`.
pub fn run_early_arrivals(cfg: &EarlyArrivalsConfig) -> Result<ExperimentResult> {
    cfg.params.validate()?;
    cfg.friction.validate()?;
    let bath = Bath::thermal(cfg.kt)?;
    if cfg.n_tra == 0 {
        return Err(invalid("n_tra", 0.0, "need at least one trajectory"));
    }
    for (name, v) in [("x_d", cfg.x_d), ("q0", cfg.q0), ("q_dot0", cfg.q_dot0), ("omega", cfg.omega)] {
        if !v.is_finite() {
            return Err(invalid(name, v, "must be finite"));
        }
    }
    let m = cfg.params.mass;
    let t_barrier = cfg.resolve_barrier_time()?;
    let fine = TimeGrid::new(0.0, cfg.t_end, cfg.dt)?;
    check_stride(cfg.record_every, fine.n_steps())?;
    let free = QuadraticPotential::free();
    let barrier = QuadraticPotential::gaussian_window_repeller(m, cfg.omega, cfg.g, t_barrier)?;
    let state0 = GaussianState::new(cfg.q0, cfg.q_dot0, cfg.sigma0, cfg.sigma_dot0)?;
    let width = |pot: &QuadraticPotential| -> Result<Vec<f64>> {
        let p = integrate_width(WidthVariant::GeneralizedGammaI, &cfg.params, &cfg.friction, pot, &state0, &fine)?;
        Ok(p.decimate(cfg.record_every)?.values().to_vec())
    };
    let s_free = width(&free)?;
    let s_barrier = width(&barrier)?;
    let grid = fine.decimate(cfg.record_every)?;
    let len = grid.len();

    let streams = StreamFactory::new(cfg.seed);
    let v_thermal = (cfg.kt / m).sqrt();
    let moments = ensemble_moments(cfg.n_tra, 3 * len, |i| {
        let i = i as u64;
        let v0 = cfg.q_dot0 + v_thermal * streams.stream(i, Substream::Velocity).sample::<f64, _>(StandardNormal);
        let start = GaussianState::new(cfg.q0, v0, cfg.sigma0, cfg.sigma_dot0)?;
        let mut noise_free = streams.stream(i, Substream::Noise);
        let mut noise_barrier = noise_free.clone();
        let run = |pot: &QuadraticPotential, rng: &mut rand_chacha::ChaCha8Rng| {
            integrate_center_langevin_sampled(&cfg.params, &cfg.friction, pot, &bath, &start, &fine, cfg.record_every, rng)
        };
        let q_free = run(&free, &mut noise_free)?;
        let q_barrier = run(&barrier, &mut noise_barrier)?;
        let mut out = vec![0.0; 3 * len];
        for k in 0..len {
            let a = p_tr(cfg.x_d, q_free.values()[k], s_free[k])?;
            let b = p_tr(cfg.x_d, q_barrier.values()[k], s_barrier[k])?;
            out[k] = a;
            out[len + k] = b;
            out[2 * len + k] = b - a;
        }
        Ok(out)
    })?;
    let mean = moments.mean();
    let se = moments.standard_error();
    let ts: Vec<f64> = grid.times().collect();
    let [free_mean, barrier_mean, diff] = [0, 1, 2].map(|j| mean[j * len..(j + 1) * len].to_vec());
    let [free_se, barrier_se, diff_se] = [0, 1, 2].map(|j| se[j * len..(j + 1) * len].to_vec());

    // Anchor on the largest excess: far from the barrier the difference is
    // tiny but, with common random numbers, its error is tinier still.
    let peak = argmax(&diff);
    let window = peak.and_then(|k| excess_window(&diff, &diff_se, k));
    let mut table = Table::new();
    table.push("t", ts.clone())?;
    table.push("p_tr_free", free_mean.clone())?;
    table.push("p_tr_barrier", barrier_mean.clone())?;
    table.push("p_tr_free_se", free_se)?;
    table.push("p_tr_barrier_se", barrier_se)?;
    table.push("diff", diff.clone())?;
    table.push("diff_se", diff_se.clone())?;
    let mut out = ExperimentResult::new(ExperimentKind::EarlyArrivals, table);
    out.set_scalar("t_b", Some(cfg.t_b()));
    out.set_scalar("t_barrier", Some(t_barrier));
    out.set_scalar("p_tr_free_end", free_mean.last().copied());
    out.set_scalar("p_tr_barrier_end", barrier_mean.last().copied());
    out.set_scalar("max_excess", peak.map(|k| diff[k]));
    out.set_scalar("t_max_excess", peak.map(|k| ts[k]));
    out.set_scalar("z_max_excess", peak.and_then(|k| (diff_se[k] > 0.0).then(|| diff[k] / diff_se[k])));
    out.set_scalar("excess_window_start", window.map(|w| ts[w.0]));
    out.set_scalar("excess_window_end", window.map(|w| ts[w.1]));
    out.meta("seed", cfg.seed);
    out.meta("n_tra", cfg.n_tra);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> EarlyArrivalsConfig {
        EarlyArrivalsConfig {
            n_tra: 256,
            t_end: 20.0,
            record_every: 50,
            seed: 3,
            ..Default::default()
        }
    }

    #[test]
    fn half_at_the_detector() {
        assert_eq!(p_tr(2.0, 2.0, 0.7).unwrap(), 0.5);
    }

    #[test]
    fn free_path_time_follows_the_damped_orbit() {
        assert_eq!(free_path_barrier_time(-10.0, 2.0, 0.0).unwrap(), 5.0);
        assert!(free_path_barrier_time(-10.0, -1.0, 0.0).is_err());
        assert!(free_path_barrier_time(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn without_barrier_both_curves_coincide() {
        let cfg = EarlyArrivalsConfig { omega: 0.0, ..small() };
        let r = run_early_arrivals(&cfg).unwrap();
        assert_eq!(r.column("p_tr_free"), r.column("p_tr_barrier"));
        assert!(r.column("diff").unwrap().iter().all(|d| *d == 0.0));
        assert_eq!(r.scalar("excess_window_start"), Some(None));
    }

    #[test]
    fn barrier_time_defaults_to_three_spreading_times() {
        let cfg = small();
        assert_eq!(cfg.t_b(), 2.0);
        assert_eq!(cfg.resolve_barrier_time().unwrap(), 6.0);
    }

    #[test]
    fn deterministic_given_the_seed() {
        assert_eq!(run_early_arrivals(&small()).unwrap(), run_early_arrivals(&small()).unwrap());
    }

    #[test]
    fn windows() {
        let diff = [0.0, 1.0, 5.0, 9.0, 4.0, 0.5, 6.0];
        let se = [1.0; 7];
        assert_eq!(excess_window(&diff, &se, 3), Some((2, 4)));
        assert_eq!(excess_window(&diff, &se, 6), Some((6, 6)));
        assert_eq!(excess_window(&diff, &se, 1), None);
    }
}
