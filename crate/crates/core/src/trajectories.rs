//! Bohmian and scaled trajectories built from the center and width paths.
//!
//! Every trajectory follows from the dressing rule
//! `x(x⁰, t) = q(t) + (x⁰ − q(0)) σ(t)/σ(0)`, and the velocity field is
//! `v(x, t) = (σ̇/σ)(x − q(t)) + q̇(t)`. Nothing here is integrated.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::dynamics::{relaxation_excess, Path, TimeGrid};
use crate::error::{invalid, Error, Result};
use crate::rng::{StreamFactory, Substream};

fn check_width(sigma_path: &Path) -> Result<()> {
    match sigma_path.values().iter().position(|s| !(*s > 0.0)) {
        None => Ok(()),
        Some(k) => Err(Error::WidthCollapse {
            t: sigma_path.grid().time(k),
            sigma: sigma_path.values()[k],
            floor: 0.0,
        }),
    }
}

/// Trajectory of the particle that starts at `x0`.
///
/// Derivatives are filled in when both input paths carry them.
pub fn dressing_trajectory(x0: f64, q_path: &Path, sigma_path: &Path) -> Result<Path> {
    q_path.same_grid(sigma_path)?;
    check_width(sigma_path)?;
    let offset = (x0 - q_path.first()) / sigma_path.first();
    let values = q_path
        .values()
        .iter()
        .zip(sigma_path.values())
        .map(|(q, s)| q + offset * s)
        .collect();
    let derivs = match (q_path.derivatives(), sigma_path.derivatives()) {
        (Some(dq), Some(ds)) => Some(dq.iter().zip(ds).map(|(dq, ds)| dq + offset * ds).collect()),
        _ => None,
    };
    Path::new(*q_path.grid(), values, derivs)
}

/// `v(x, t) = (σ̇/σ)(x − q) + q̇`, interpolating both paths at `t`.
pub fn velocity_field(x: f64, t: f64, q_path: &Path, sigma_path: &Path) -> Result<f64> {
    q_path.same_grid(sigma_path)?;
    let (q, q_dot) = q_path.interpolate(t)?;
    let (sigma, sigma_dot) = sigma_path.interpolate(t)?;
    let (q_dot, sigma_dot) = match (q_dot, sigma_dot) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Unsupported("velocity field needs paths with derivatives")),
    };
    if !(sigma > 0.0) {
        return Err(Error::WidthCollapse { t, sigma, floor: 0.0 });
    }
    Ok(sigma_dot / sigma * (x - q) + q_dot)
}

/// `n` Born-rule samples `x⁰ ~ N(q0, σ0²)` drawn from `rng`.
pub fn sample_initial_positions<R: Rng + ?Sized>(n: usize, q0: f64, sigma0: f64, rng: &mut R) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::EmptyEnsemble);
    }
    if !(sigma0.is_finite() && sigma0 > 0.0) {
        return Err(invalid("sigma0", sigma0, "must be positive and finite"));
    }
    if !q0.is_finite() {
        return Err(invalid("q0", q0, "must be finite"));
    }
    Ok((0..n)
        .map(|_| q0 + sigma0 * rng.sample::<f64, _>(StandardNormal))
        .collect())
}

/// Classical mean square displacement `2(kT/mγ)(t − (1 − e^{−γt})/γ)`.
///
/// Uses a series for small `γt`; `γ = 0` gives the ballistic limit `kT t²/m`.
///
/// ```
/// use qtraj::trajectories::msd_classical_analytic;
/// assert_eq!(msd_classical_analytic(0.5, 1.0, 0.0, 2.0), 2.0);
/// let late = msd_classical_analytic(0.2, 1.0, 0.2, 50.0);
/// assert!((late - 90.0).abs() < 1e-3);
/// ```
pub fn msd_classical_analytic(kt: f64, mass: f64, gamma: f64, t: f64) -> f64 {
    2.0 * kt / mass * relaxation_excess(gamma, t)
}

/// `(D_cl, D_q)` from the classical MSD and the width at time `t`:
/// `D_cl = MSD_cl/2t`, `D_q = D_cl + (σ(t) − σ₀)²/2t`.
pub fn diffusion_from_width(kt: f64, mass: f64, gamma: f64, sigma_t: f64, sigma0: f64, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", t, "diffusion coefficients need t > 0"));
    }
    let d_cl = msd_classical_analytic(kt, mass, gamma, t) / (2.0 * t);
    let ds = sigma_t - sigma0;
    Ok((d_cl, d_cl + ds * ds / (2.0 * t)))
}

/// Classical and quantum diffusion coefficients at time `t > 0`.
pub fn diffusion_coefficients(kt: f64, mass: f64, gamma: f64, sigma_path: &Path, t: f64) -> Result<(f64, f64)> {
    let (sigma_t, _) = sigma_path.interpolate(t)?;
    diffusion_from_width(kt, mass, gamma, sigma_t, sigma_path.first(), t)
}

/// Seed and stream ids that produced an ensemble.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedProvenance {
    pub master_seed: u64,
    pub stream_ids: Vec<u64>,
}

/// Dressed trajectories sharing one center and one width path.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble {
    pub grid: TimeGrid,
    pub initial_positions: Vec<f64>,
    pub trajectories: Vec<Vec<f64>>,
    pub seed_provenance: Option<SeedProvenance>,
}

impl TrajectoryEnsemble {
    /// Dress the given initial positions.
    pub fn from_initial_positions(initial_positions: Vec<f64>, q_path: &Path, sigma_path: &Path) -> Result<Self> {
        if initial_positions.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        let trajectories = initial_positions
            .iter()
            .map(|&x0| dressing_trajectory(x0, q_path, sigma_path).map(|p| p.values().to_vec()))
            .collect::<Result<_>>()?;
        Ok(Self {
            grid: *q_path.grid(),
            initial_positions,
            trajectories,
            seed_provenance: None,
        })
    }

    /// Born-rule ensemble of `n` trajectories; trajectory `i` draws its
    /// starting point from its own position stream.
    pub fn sample(n: usize, q_path: &Path, sigma_path: &Path, streams: &StreamFactory) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyEnsemble);
        }
        let (q0, s0) = (q_path.first(), sigma_path.first());
        let xs = (0..n as u64)
            .map(|i| {
                let mut rng = streams.stream(i, Substream::Position);
                sample_initial_positions(1, q0, s0, &mut rng).map(|v| v[0])
            })
            .collect::<Result<Vec<_>>>()?;
        let mut e = Self::from_initial_positions(xs, q_path, sigma_path)?;
        e.seed_provenance = Some(SeedProvenance {
            master_seed: streams.master_seed(),
            stream_ids: (0..n as u64).map(|i| StreamFactory::stream_id(i, Substream::Position)).collect(),
        });
        Ok(e)
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    /// `true` when `x⁰ ↦ x(t)` is strictly increasing at every grid time.
    pub fn is_non_crossing(&self) -> bool {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.initial_positions[a].total_cmp(&self.initial_positions[b]));
        order.windows(2).all(|w| {
            let (a, b) = (&self.trajectories[w[0]], &self.trajectories[w[1]]);
            if self.initial_positions[w[0]] == self.initial_positions[w[1]] {
                return a == b;
            }
            a.iter().zip(b).all(|(xa, xb)| xa < xb)
        })
    }
}

/// Per-time sums for means and standard errors over an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    n: usize,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl Moments {
    pub fn new(len: usize) -> Self {
        Self {
            n: 0,
            sum: vec![0.0; len],
            sum_sq: vec![0.0; len],
        }
    }

    pub fn push(&mut self, sample: &[f64]) -> Result<()> {
        if sample.len() != self.sum.len() {
            return Err(Error::GridMismatch {
                left: self.sum.len(),
                right: sample.len(),
            });
        }
        for ((s, q), x) in self.sum.iter_mut().zip(&mut self.sum_sq).zip(sample) {
            *s += x;
            *q += x * x;
        }
        self.n += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &Moments) -> Result<()> {
        if other.sum.len() != self.sum.len() {
            return Err(Error::GridMismatch {
                left: self.sum.len(),
                right: other.sum.len(),
            });
        }
        for i in 0..self.sum.len() {
            self.sum[i] += other.sum[i];
            self.sum_sq[i] += other.sum_sq[i];
        }
        self.n += other.n;
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sum.is_empty()
    }

    pub fn mean(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.sum.iter().map(|s| s / n).collect()
    }

    /// Standard error of the mean, from the unbiased sample variance.
    pub fn standard_error(&self) -> Vec<f64> {
        let n = self.n as f64;
        if self.n < 2 {
            return vec![0.0; self.sum.len()];
        }
        self.sum
            .iter()
            .zip(&self.sum_sq)
            .map(|(s, q)| {
                let var = ((q - s * s / n) / (n - 1.0)).max(0.0);
                (var / n).sqrt()
            })
            .collect()
    }
}

/// Trajectories per reduction chunk. Fixed so the summation order, and hence
/// every bit of the result, does not depend on the thread count.
pub const REDUCTION_CHUNK: usize = 64;

/// Accumulate `sample(i)` for `i in 0..n` into [`Moments`] of length `len`.
///
/// Chunks of [`REDUCTION_CHUNK`] consecutive indices are summed in parallel,
/// each in index order, and the chunk totals are combined in chunk order.
pub fn ensemble_moments<F>(n: usize, len: usize, sample: F) -> Result<Moments>
where
    F: Fn(usize) -> Result<Vec<f64>> + Sync,
{
    if n == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let chunks = n.div_ceil(REDUCTION_CHUNK);
    let partial: Vec<Result<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments::new(len);
            for i in c * REDUCTION_CHUNK..((c + 1) * REDUCTION_CHUNK).min(n) {
                m.push(&sample(i)?)?;
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::new(len);
    for p in partial {
        total.merge(&p?)?;
    }
    Ok(total)
}

/// Monte Carlo mean square displacement with its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct MsdEstimate {
    pub mean: Vec<f64>,
    pub standard_error: Vec<f64>,
}

/// Double average of `(x(x⁰, t) − x⁰)²` over stochastic centers and Born
/// positions; center `i` is dressed with `born_samples[i]`.
pub fn msd_monte_carlo(centers: &[Path], born_samples: &[f64], sigma_path: &Path) -> Result<MsdEstimate> {
    if centers.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    if centers.len() != born_samples.len() {
        return Err(Error::GridMismatch {
            left: centers.len(),
            right: born_samples.len(),
        });
    }
    check_width(sigma_path)?;
    for c in centers {
        c.same_grid(sigma_path)?;
    }
    let s0 = sigma_path.first();
    let m = ensemble_moments(centers.len(), sigma_path.len(), |i| {
        let q = centers[i].values();
        let offset = born_samples[i] - q[0];
        Ok(q.iter()
            .zip(sigma_path.values())
            .map(|(q_t, s)| {
                let d = q_t - q[0] + offset * (s / s0 - 1.0);
                d * d
            })
            .collect())
    })?;
    Ok(MsdEstimate {
        mean: m.mean(),
        standard_error: m.standard_error(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate_center_langevin_sampled, integrate_width, WidthVariant};
    use crate::oracle::central_difference;
    use crate::params::{Bath, Friction, GaussianState, SystemParams};
    use crate::potential::QuadraticPotential;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn paths(eps: f64, omega: f64, gamma: f64, t1: f64, dt: f64) -> (Path, Path) {
        let params = SystemParams::atomic(eps).unwrap();
        let f = Friction::real(gamma).unwrap();
        let pot = QuadraticPotential::repeller(1.0, omega).unwrap();
        let s0 = GaussianState::new(-3.0, 1.0, 1.0, 0.0).unwrap();
        let grid = TimeGrid::new(0.0, t1, dt).unwrap();
        let q = crate::dynamics::integrate_center_deterministic(&params, &f, &pot, &s0, &grid).unwrap();
        let s = integrate_width(WidthVariant::KostinScaled, &params, &f, &pot, &s0, &grid).unwrap();
        (q, s)
    }

    #[test]
    fn center_particle_rides_the_center() {
        let (q, s) = paths(1.0, 0.2, 0.05, 5.0, 1e-2);
        let x = dressing_trajectory(q.first(), &q, &s).unwrap();
        assert_eq!(x.values(), q.values());
    }

    #[test]
    fn pair_separation_scales_with_width() {
        let (q, s) = paths(0.5, 0.2, 0.05, 10.0, 1e-2);
        let a = dressing_trajectory(-2.0, &q, &s).unwrap();
        let b = dressing_trajectory(-4.5, &q, &s).unwrap();
        for k in 0..q.len() {
            let ratio = (a.values()[k] - b.values()[k]) / 2.5;
            assert!((ratio - s.values()[k] / s.first()).abs() < 1e-13);
        }
    }

    #[test]
    fn velocity_field_is_the_time_derivative() {
        let (q, s) = paths(1.0, 0.2, 0.06, 20.0, 1e-4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let x0: f64 = rng.random_range(-6.0..0.0);
            let t: f64 = rng.random_range(0.1..19.9);
            let traj = dressing_trajectory(x0, &q, &s).unwrap();
            let x_at = |t: f64| traj.interpolate(t).unwrap().0;
            let fd = central_difference(x_at, t, 1e-4);
            let v = velocity_field(x_at(t), t, &q, &s).unwrap();
            assert!((fd - v).abs() < 1e-5 * v.abs().max(1.0), "fd={fd} v={v}");
        }
    }

    #[test]
    fn ensembles_never_cross() {
        for (eps, seed) in [(1.0, 1), (0.1, 2), (0.0, 3)] {
            let (q, s) = paths(eps, 0.3, 0.1, 20.0, 1e-2);
            let e = TrajectoryEnsemble::sample(200, &q, &s, &StreamFactory::new(seed)).unwrap();
            assert!(e.is_non_crossing());
            assert_eq!(e.seed_provenance.as_ref().unwrap().stream_ids.len(), 200);
        }
    }

    #[test]
    fn born_samples_have_the_right_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let xs = sample_initial_positions(100_000, 0.0, 1.0, &mut rng).unwrap();
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let sd = (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt();
        assert!(m.abs() < 0.01 && (sd - 1.0).abs() < 0.01);
        let again = sample_initial_positions(100_000, 0.0, 1.0, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(xs, again);
        assert!(sample_initial_positions(0, 0.0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn quantum_diffusion_adds_the_width_term() {
        let (_, s) = paths(1.0, 0.0, 0.2, 50.0, 1e-2);
        for k in 1..s.len() {
            let t = s.grid().time(k);
            let (d_cl, d_q) = diffusion_coefficients(0.5, 1.0, 0.2, &s, t).unwrap();
            let ds = s.values()[k] - s.first();
            assert!(((d_q - d_cl) - ds * ds / (2.0 * t)).abs() <= 1e-12);
            assert!(d_q > d_cl);
        }
        assert!(diffusion_coefficients(0.5, 1.0, 0.2, &s, 0.0).is_err());
    }

    #[test]
    fn einstein_limit() {
        let (d, _) = diffusion_from_width(0.5, 1.0, 0.2, 1.0, 1.0, 1e4).unwrap();
        assert!((d - 2.5).abs() < 2.5e-3);
    }

    #[test]
    fn frozen_ensemble_has_no_displacement() {
        let grid = TimeGrid::new(0.0, 5.0, 0.1).unwrap();
        let q = Path::new(grid, vec![0.0; grid.len()], Some(vec![0.0; grid.len()])).unwrap();
        let s = Path::new(grid, vec![1.0; grid.len()], Some(vec![0.0; grid.len()])).unwrap();
        let msd = msd_monte_carlo(&[q.clone(), q], &[0.3, -1.0], &s).unwrap();
        assert!(msd.mean.iter().all(|m| *m == 0.0));
        assert!(msd_monte_carlo(&[], &[], &s).is_err());
    }

    #[test]
    fn rigid_packet_msd_is_classical() {
        let (kt, gamma) = (0.2, 0.2);
        let params = SystemParams::default();
        let f = Friction::real(gamma).unwrap();
        let pot = QuadraticPotential::free();
        let bath = Bath::thermal(kt).unwrap();
        let grid = TimeGrid::new(0.0, 40.0, 1e-2).unwrap();
        let streams = StreamFactory::new(77);
        let n = 10_000;
        let centers: Vec<Path> = (0..n as u64)
            .map(|i| {
                let v0 = kt.sqrt() * streams.stream(i, Substream::Velocity).sample::<f64, _>(StandardNormal);
                let s0 = GaussianState::new(0.0, v0, 1.0, 0.0).unwrap();
                let mut rng = streams.stream(i, Substream::Noise);
                integrate_center_langevin_sampled(&params, &f, &pot, &bath, &s0, &grid, 400, &mut rng).unwrap()
            })
            .collect();
        let born: Vec<f64> = (0..n as u64)
            .map(|i| streams.stream(i, Substream::Position).sample::<f64, _>(StandardNormal))
            .collect();
        let coarse = *centers[0].grid();
        let s = Path::new(coarse, vec![1.0; coarse.len()], None).unwrap();
        let msd = msd_monte_carlo(&centers, &born, &s).unwrap();
        for (k, t) in coarse.times().enumerate().skip(1) {
            let exact = msd_classical_analytic(kt, 1.0, gamma, t);
            assert!((msd.mean[k] - exact).abs() < 3.0 * msd.standard_error[k], "t={t}");
        }
    }

    #[test]
    fn reduction_does_not_depend_on_threads() {
        let f = |i: usize| Ok(vec![(i as f64).sin(), (i as f64 * 0.37).cos() * 1e3]);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| ensemble_moments(1000, 2, f)).unwrap();
        let b = four.install(|| ensemble_moments(1000, 2, f)).unwrap();
        assert_eq!(a, b);
    }
}
