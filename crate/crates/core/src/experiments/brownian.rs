//! Brownian motion of a free Gaussian packet in a thermal bath.
//!
//! The center obeys the free Langevin equation with Maxwell-Boltzmann initial
//! velocities; the width follows the chosen Pinney-type equation. The
//! classical mean square displacement is
//! `MSD_cl = 2(kT/mγ)(t − (1 − e^{−γt})/γ)`, and averaging the dressed
//! trajectories over Born positions adds `(σ(t) − σ₀)²`, so
//! `D_q = D_cl + (σ(t) − σ₀)²/2t`.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_stride, ExperimentKind, ExperimentResult, Table};
use crate::dynamics::{integrate_center_langevin_sampled, integrate_width, TimeGrid, WidthVariant};
use crate::error::{invalid, Result};
use crate::params::{Bath, Friction, GaussianState, SystemParams};
use crate::potential::QuadraticPotential;
use crate::rng::{StreamFactory, Substream};
use crate::trajectories::{diffusion_from_width, ensemble_moments, msd_classical_analytic};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrownianConfig {
    pub params: SystemParams,
    pub friction: Friction,
    pub kt: f64,
    pub variant: WidthVariant,
    pub sigma0: f64,
    pub sigma_dot0: f64,
    pub t_end: f64,
    pub dt: f64,
    pub record_every: usize,
    pub n_tra: usize,
    pub seed: u64,
}

impl Default for BrownianConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::default(),
            friction: Friction {
                gamma_r: 0.2,
                gamma_i: 0.0,
            },
            kt: 0.5,
            variant: WidthVariant::KostinScaled,
            sigma0: 1.0,
            sigma_dot0: 0.0,
            t_end: 100.0,
            dt: 1e-2,
            record_every: 100,
            n_tra: 10_000,
            seed: 0,
        }
    }
}

/// Largest `|mc − reference|/se` over the points with a nonzero error.
fn max_z(mc: &[f64], se: &[f64], reference: &[f64]) -> Option<f64> {
    mc.iter()
        .zip(se)
        .zip(reference)
        .filter(|((_, s), _)| **s > 0.0)
        .map(|((m, s), r)| (m - r).abs() / s)
        .reduce(f64::max)
}

/// Mean square displacements and diffusion coefficients versus time.
///
/// Columns `t`, `msd_cl`, `msd_q_analytic`, `msd_q_mc`, `d_cl`, `d_q`, then
/// `msd_q_mc_se`, `msd_cl_mc`, `msd_cl_mc_se`, `sigma`. `msd_cl_mc` averages
/// `(q(t) − q(0))²` over the stochastic centers, `msd_q_mc` the squared
/// displacement of the dressed trajectories. Both diffusion coefficients are
/// 0 at `t = 0`. Scalars: `d_cl_end`, `d_q_end`, `einstein_d = kT/mγ`, and
/// `msd_cl_max_z`, `msd_q_max_z`, the largest deviations of the Monte Carlo
/// columns from the analytic ones in standard errors.
///
/// Trajectory `i` takes its initial velocity, its noise and its Born position
/// from three separate streams of index `i`.
pub fn run_brownian(cfg: &BrownianConfig) -> Result<ExperimentResult> {
    cfg.params.validate()?;
    cfg.friction.validate()?;
    let bath = Bath::thermal(cfg.kt)?;
    if cfg.n_tra == 0 {
        return Err(invalid("n_tra", 0.0, "need at least one trajectory"));
    }
    let m = cfg.params.mass;
    let gamma = cfg.friction.gamma_r;
    let fine = TimeGrid::new(0.0, cfg.t_end, cfg.dt)?;
    check_stride(cfg.record_every, fine.n_steps())?;
    let free = QuadraticPotential::free();
    let state0 = GaussianState::new(0.0, 0.0, cfg.sigma0, cfg.sigma_dot0)?;
    let sigma = integrate_width(cfg.variant, &cfg.params, &cfg.friction, &free, &state0, &fine)?
        .decimate(cfg.record_every)?;
    let grid = *sigma.grid();
    let len = grid.len();
    let ts: Vec<f64> = grid.times().collect();
    let s = sigma.values();

    let streams = StreamFactory::new(cfg.seed);
    let v_thermal = (cfg.kt / m).sqrt();
    let moments = ensemble_moments(cfg.n_tra, 2 * len, |i| {
        let i = i as u64;
        let v0 = v_thermal * streams.stream(i, Substream::Velocity).sample::<f64, _>(StandardNormal);
        let x0 = cfg.sigma0 * streams.stream(i, Substream::Position).sample::<f64, _>(StandardNormal);
        let start = GaussianState::new(0.0, v0, cfg.sigma0, cfg.sigma_dot0)?;
        let mut noise = streams.stream(i, Substream::Noise);
        let center = integrate_center_langevin_sampled(
            &cfg.params,
            &cfg.friction,
            &free,
            &bath,
            &start,
            &fine,
            cfg.record_every,
            &mut noise,
        )?;
        let q = center.values();
        let mut out = Vec::with_capacity(2 * len);
        out.extend(q.iter().zip(s).map(|(q_t, s_t)| {
            let d = q_t - q[0] + x0 * (s_t / cfg.sigma0 - 1.0);
            d * d
        }));
        out.extend(q.iter().map(|q_t| (q_t - q[0]) * (q_t - q[0])));
        Ok(out)
    })?;
    let mean = moments.mean();
    let se = moments.standard_error();
    let (msd_q_mc, msd_cl_mc) = mean.split_at(len);
    let (msd_q_se, msd_cl_se) = se.split_at(len);

    let msd_cl: Vec<f64> = ts.iter().map(|&t| msd_classical_analytic(cfg.kt, m, gamma, t)).collect();
    let msd_q: Vec<f64> = msd_cl.iter().zip(s).map(|(c, s_t)| c + (s_t - cfg.sigma0).powi(2)).collect();
    let mut d_cl = Vec::with_capacity(len);
    let mut d_q = Vec::with_capacity(len);
    for (&t, &s_t) in ts.iter().zip(s) {
        let (c, q) = if t == 0.0 { (0.0, 0.0) } else { diffusion_from_width(cfg.kt, m, gamma, s_t, cfg.sigma0, t)? };
        d_cl.push(c);
        d_q.push(q);
    }

    let mut out_cl_z = max_z(msd_cl_mc, msd_cl_se, &msd_cl);
    let mut out_q_z = max_z(msd_q_mc, msd_q_se, &msd_q);
    if cfg.n_tra < 2 {
        out_cl_z = None;
        out_q_z = None;
    }
    let einstein = if gamma > 0.0 { Some(cfg.kt / (m * gamma)) } else { None };

    let mut table = Table::new();
    table.push("t", ts)?;
    table.push("msd_cl", msd_cl)?;
    table.push("msd_q_analytic", msd_q)?;
    table.push("msd_q_mc", msd_q_mc.to_vec())?;
    table.push("d_cl", d_cl.clone())?;
    table.push("d_q", d_q.clone())?;
    table.push("msd_q_mc_se", msd_q_se.to_vec())?;
    table.push("msd_cl_mc", msd_cl_mc.to_vec())?;
    table.push("msd_cl_mc_se", msd_cl_se.to_vec())?;
    table.push("sigma", s.to_vec())?;
    let mut out = ExperimentResult::new(ExperimentKind::Brownian, table);
    out.set_scalar("d_cl_end", d_cl.last().copied());
    out.set_scalar("d_q_end", d_q.last().copied());
    out.set_scalar("einstein_d", einstein);
    out.set_scalar("msd_cl_max_z", out_cl_z);
    out.set_scalar("msd_q_max_z", out_q_z);
    out.meta("width_variant", cfg.variant);
    out.meta("seed", cfg.seed);
    out.meta("n_tra", cfg.n_tra);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::soliton_gamma_i;

    fn small(kt: f64) -> BrownianConfig {
        BrownianConfig {
            kt,
            t_end: 20.0,
            dt: 1e-2,
            record_every: 100,
            n_tra: 512,
            seed: 7,
            ..Default::default()
        }
    }

    #[test]
    fn schema_and_zero_time_convention() {
        let r = run_brownian(&small(0.2)).unwrap();
        assert_eq!(
            &r.table.names()[..6],
            ["t", "msd_cl", "msd_q_analytic", "msd_q_mc", "d_cl", "d_q"]
        );
        assert_eq!(r.column("d_cl").unwrap()[0], 0.0);
        assert_eq!(r.column("d_q").unwrap()[0], 0.0);
        assert_eq!(r.column("msd_q_mc").unwrap()[0], 0.0);
    }

    #[test]
    fn zero_temperature_at_rest_does_not_move() {
        let cfg = BrownianConfig {
            kt: 0.0,
            params: SystemParams::atomic(0.0).unwrap(),
            ..small(0.0)
        };
        let r = run_brownian(&cfg).unwrap();
        assert!(r.column("msd_cl_mc").unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn soliton_width_gives_classical_diffusion() {
        let gi = soliton_gamma_i(1.0, 0.0, 1.0, 1.0).unwrap();
        let cfg = BrownianConfig {
            friction: Friction::new(0.2, gi).unwrap(),
            variant: WidthVariant::GeneralizedGammaI,
            ..small(0.5)
        };
        let r = run_brownian(&cfg).unwrap();
        for (a, b) in r.column("d_cl").unwrap().iter().zip(r.column("d_q").unwrap()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn same_seed_same_numbers() {
        let a = run_brownian(&small(0.5)).unwrap();
        let b = run_brownian(&small(0.5)).unwrap();
        assert_eq!(a, b);
        let c = run_brownian(&BrownianConfig { seed: 8, ..small(0.5) }).unwrap();
        assert_ne!(a.column("msd_q_mc"), c.column("msd_q_mc"));
    }

    #[test]
    fn monte_carlo_tracks_the_analytic_msd() {
        let r = run_brownian(&small(0.5)).unwrap();
        assert!(r.scalar("msd_cl_max_z").unwrap().unwrap() < 4.0);
        assert!(r.scalar("msd_q_max_z").unwrap().unwrap() < 4.0);
    }
}
