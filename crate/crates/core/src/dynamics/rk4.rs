//! Fixed-step classical Runge-Kutta for small systems.

use super::grid::TimeGrid;
use crate::error::{Error, Result};

/// One RK4 step of `y' = f(t, y)`.
pub fn rk4_step<const N: usize, F>(f: &mut F, t: f64, y: &[f64; N], h: f64) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let axpy = |a: &[f64; N], k: &[f64; N], s: f64| {
        let mut out = *a;
        for (o, k) in out.iter_mut().zip(k) {
            *o += s * k;
        }
        out
    };
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &axpy(y, &k1, 0.5 * h))?;
    let k3 = f(t + 0.5 * h, &axpy(y, &k2, 0.5 * h))?;
    let k4 = f(t + h, &axpy(y, &k3, h))?;
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// Integrate over every point of `grid`, returning the state at each one.
///
/// Aborts with [`Error::NonFiniteState`] as soon as a component stops being
/// finite.
pub fn rk4_solve<const N: usize, F>(grid: &TimeGrid, y0: [f64; N], mut f: F) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    ensure_finite(grid.t0(), &y0)?;
    let mut out = Vec::with_capacity(grid.len());
    out.push(y0);
    let mut y = y0;
    for k in 0..grid.n_steps() {
        let t = grid.time(k);
        y = rk4_step(&mut f, t, &y, grid.dt())?;
        ensure_finite(grid.time(k + 1), &y)?;
        out.push(y);
    }
    Ok(out)
}

pub(crate) fn ensure_finite(t: f64, y: &[f64]) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteState { t, state: y.to_vec() })
    }
}

/// Split a solution into one column per component.
pub(crate) fn columns<const N: usize>(states: &[[f64; N]]) -> [Vec<f64>; N] {
    std::array::from_fn(|i| states.iter().map(|s| s[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_is_fourth_order() {
        let err = |dt: f64| {
            let g = TimeGrid::new(0.0, 2.0, dt).unwrap();
            let ys = rk4_solve(&g, [1.0], |_, y| Ok([-y[0]])).unwrap();
            (ys.last().unwrap()[0] - (-2.0f64).exp()).abs()
        };
        let p = (err(0.1) / err(0.05)).log2();
        assert!((3.8..4.2).contains(&p), "order {p}");
    }

    #[test]
    fn blow_up_is_reported() {
        let g = TimeGrid::new(0.0, 10.0, 0.5).unwrap();
        let r = rk4_solve(&g, [1.0], |_, y| Ok([y[0] * y[0] * 1e100]));
        assert!(matches!(r, Err(Error::NonFiniteState { .. })));
    }
}
