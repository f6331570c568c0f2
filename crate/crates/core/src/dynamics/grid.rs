use crate::error::{Error, Result};

/// Uniform time grid `t_k = t0 + k·dt`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    /// Grid from `t0` to (approximately) `t1`; `n_steps = round((t1 − t0)/dt)`.
    pub fn new(t0: f64, t1: f64, dt: f64) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(Error::InvalidGrid(format!("endpoints must be finite ({t0}, {t1})")));
        }
        if !(t1 > t0) {
            return Err(Error::InvalidGrid(format!("t1 = {t1} must exceed t0 = {t0}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidGrid(format!("dt = {dt} must be positive")));
        }
        let n = ((t1 - t0) / dt).round();
        if !(1.0..=1e10).contains(&n) {
            return Err(Error::InvalidGrid(format!("{n} steps is out of range")));
        }
        Ok(Self {
            t0,
            dt,
            n_steps: n as usize,
        })
    }

    pub fn with_steps(t0: f64, dt: f64, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::InvalidGrid("need at least one step".into()));
        }
        Self::new(t0, t0 + dt * n_steps as f64, dt)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of grid points, `n_steps + 1`.
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t1(&self) -> f64 {
        self.time(self.n_steps)
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.time(k))
    }

    /// Coarser grid keeping every `stride`-th point (the last point is dropped
    /// unless `stride` divides `n_steps`).
    pub fn decimate(&self, stride: usize) -> Result<Self> {
        if stride == 0 || stride > self.n_steps {
            return Err(Error::InvalidGrid(format!(
                "stride {stride} incompatible with {} steps",
                self.n_steps
            )));
        }
        Ok(Self {
            t0: self.t0,
            dt: self.dt * stride as f64,
            n_steps: self.n_steps / stride,
        })
    }
}

/// Values (and optionally their time derivatives) sampled on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    grid: TimeGrid,
    values: Vec<f64>,
    derivatives: Option<Vec<f64>>,
}

impl Path {
    pub fn new(grid: TimeGrid, values: Vec<f64>, derivatives: Option<Vec<f64>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch {
                left: grid.len(),
                right: values.len(),
            });
        }
        if let Some(d) = &derivatives {
            if d.len() != grid.len() {
                return Err(Error::GridMismatch {
                    left: grid.len(),
                    right: d.len(),
                });
            }
        }
        let all = values.iter().chain(derivatives.iter().flatten());
        if let Some(k) = all.clone().position(|v| !v.is_finite()) {
            let k = k % grid.len();
            return Err(Error::NonFiniteState {
                t: grid.time(k),
                state: vec![values[k]],
            });
        }
        Ok(Self {
            grid,
            values,
            derivatives,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivatives(&self) -> Option<&[f64]> {
        self.derivatives.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Value and derivative at an arbitrary time inside the grid.
    ///
    /// Uses cubic Hermite interpolation when derivatives are stored, linear
    /// interpolation otherwise. Grid points are returned exactly.
    pub fn interpolate(&self, t: f64) -> Result<(f64, Option<f64>)> {
        let g = &self.grid;
        let t1 = g.t1();
        let slack = 1e-9 * g.dt();
        if !(t >= g.t0() - slack && t <= t1 + slack) {
            return Err(Error::OutsideGrid { t, t0: g.t0(), t1 });
        }
        let x = ((t - g.t0()) / g.dt()).clamp(0.0, g.n_steps() as f64);
        let k = (x.floor() as usize).min(g.n_steps() - 1);
        let s = x - k as f64;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        if s == 0.0 {
            return Ok((y0, self.derivatives.as_ref().map(|d| d[k])));
        }
        if s == 1.0 {
            return Ok((y1, self.derivatives.as_ref().map(|d| d[k + 1])));
        }
        match &self.derivatives {
            Some(d) => {
                let h = g.dt();
                let (m0, m1) = (d[k] * h, d[k + 1] * h);
                let s2 = s * s;
                let s3 = s2 * s;
                let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
                    + (s3 - 2.0 * s2 + s) * m0
                    + (-2.0 * s3 + 3.0 * s2) * y1
                    + (s3 - s2) * m1;
                let dv = ((6.0 * s2 - 6.0 * s) * y0
                    + (3.0 * s2 - 4.0 * s + 1.0) * m0
                    + (-6.0 * s2 + 6.0 * s) * y1
                    + (3.0 * s2 - 2.0 * s) * m1)
                    / h;
                Ok((v, Some(dv)))
            }
            None => Ok((y0 + s * (y1 - y0), None)),
        }
    }

    /// Keep every `stride`-th sample.
    pub fn decimate(&self, stride: usize) -> Result<Self> {
        let grid = self.grid.decimate(stride)?;
        let pick = |v: &Vec<f64>| (0..grid.len()).map(|k| v[k * stride]).collect::<Vec<_>>();
        Ok(Self {
            grid,
            values: pick(&self.values),
            derivatives: self.derivatives.as_ref().map(pick),
        })
    }

    pub(crate) fn same_grid(&self, other: &Path) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left: self.len(),
                right: other.len(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_are_exact_multiples() {
        let g = TimeGrid::new(0.0, 1.0, 0.1).unwrap();
        assert_eq!(g.n_steps(), 10);
        assert_eq!(g.len(), 11);
        assert_eq!(g.time(7), 7.0 * 0.1);
        assert!(TimeGrid::new(1.0, 1.0, 0.1).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0.0).is_err());
        assert!(TimeGrid::new(0.0, 1.0, -0.5).is_err());
    }

    #[test]
    fn hermite_interpolation_is_exact_for_cubics() {
        let g = TimeGrid::new(0.0, 2.0, 0.25).unwrap();
        let f = |t: f64| t * t * t - t;
        let df = |t: f64| 3.0 * t * t - 1.0;
        let p = Path::new(g, g.times().map(f).collect(), Some(g.times().map(df).collect())).unwrap();
        for t in [0.0, 0.1, 0.77, 1.3, 2.0] {
            let (v, d) = p.interpolate(t).unwrap();
            assert!((v - f(t)).abs() < 1e-12);
            assert!((d.unwrap() - df(t)).abs() < 1e-11);
        }
        assert!(p.interpolate(2.5).is_err());
    }

    #[test]
    fn rejects_bad_lengths_and_nan() {
        let g = TimeGrid::new(0.0, 1.0, 0.5).unwrap();
        assert!(Path::new(g, vec![0.0; 2], None).is_err());
        assert!(Path::new(g, vec![0.0, f64::NAN, 1.0], None).is_err());
    }

    #[test]
    fn decimation_keeps_endpoints_when_divisible() {
        let g = TimeGrid::new(0.0, 10.0, 0.01).unwrap();
        let p = Path::new(g, g.times().collect(), None).unwrap();
        let d = p.decimate(100).unwrap();
        assert_eq!(d.len(), 11);
        assert_eq!(d.last(), g.t1());
    }
}
