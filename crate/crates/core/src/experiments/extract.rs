//! Extraction rules for summary scalars.
//!
//! Extrema are located on the grid and refined by the parabola through the
//! grid point and its two neighbours. For samples `y₀, y₁, y₂` at spacing `h`
//! the vertex sits at offset `δh` from the middle point with
//! `δ = ½(y₀ − y₂)/(y₀ − 2y₁ + y₂)`, and its height is `y₁ − ¼(y₀ − y₂)δ`.

/// A refined extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    /// Grid index of the sample the refinement started from.
    pub index: usize,
    pub x: f64,
    pub value: f64,
}

/// Vertex of the parabola through `(x[k−1], x[k], x[k+1])`. Falls back to the
/// grid point at either end or when the three points are collinear.
pub fn parabolic_refine(xs: &[f64], ys: &[f64], k: usize) -> Extremum {
    let plain = Extremum {
        index: k,
        x: xs[k],
        value: ys[k],
    };
    if k == 0 || k + 1 >= ys.len() {
        return plain;
    }
    let (y0, y1, y2) = (ys[k - 1], ys[k], ys[k + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom == 0.0 {
        return plain;
    }
    let delta = 0.5 * (y0 - y2) / denom;
    if !(delta.abs() <= 1.0) {
        return plain;
    }
    let h = if delta >= 0.0 { xs[k + 1] - xs[k] } else { xs[k] - xs[k - 1] };
    Extremum {
        index: k,
        x: xs[k] + delta * h,
        value: y1 - 0.25 * (y0 - y2) * delta,
    }
}

/// First interior index `k ≥ from` with `y[k−1] < y[k] ≥ y[k+1]`.
pub fn first_local_max(ys: &[f64], from: usize) -> Option<usize> {
    (from.max(1)..ys.len().saturating_sub(1)).find(|&k| ys[k - 1] < ys[k] && ys[k] >= ys[k + 1])
}

/// First interior index `k ≥ from` with `y[k−1] > y[k] ≤ y[k+1]`.
pub fn first_local_min(ys: &[f64], from: usize) -> Option<usize> {
    (from.max(1)..ys.len().saturating_sub(1)).find(|&k| ys[k - 1] > ys[k] && ys[k] <= ys[k + 1])
}

/// Index of the largest sample (first one on ties).
pub fn argmax(ys: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, y) in ys.iter().enumerate() {
        if y.is_nan() {
            continue;
        }
        if best.is_none_or(|b| *y > ys[b]) {
            best = Some(k);
        }
    }
    best
}

/// Index of the smallest sample at or after `from` (first one on ties).
pub fn argmin_from(ys: &[f64], from: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, y) in ys.iter().enumerate().skip(from) {
        if best.is_none_or(|b| *y < ys[b]) {
            best = Some(k);
        }
    }
    best
}

/// Largest value of a scan, refined through the best point and its neighbours.
pub fn refined_argmax(xs: &[f64], ys: &[f64]) -> Option<Extremum> {
    argmax(ys).map(|k| parabolic_refine(xs, ys, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refinement_is_exact_for_parabolas() {
        let xs: Vec<f64> = (0..11).map(|k| k as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - (x - 1.37) * (x - 1.37)).collect();
        let e = refined_argmax(&xs, &ys).unwrap();
        assert!((e.x - 1.37).abs() < 1e-12);
        assert!((e.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_maximum_is_not_refined() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [3.0, 2.0, 1.0];
        let e = refined_argmax(&xs, &ys).unwrap();
        assert_eq!((e.index, e.x, e.value), (0, 0.0, 3.0));
    }

    #[test]
    fn local_extrema() {
        let ys = [0.0, 1.0, 3.0, 2.0, 1.5, 1.7, 4.0];
        assert_eq!(first_local_max(&ys, 0), Some(2));
        assert_eq!(first_local_min(&ys, 2), Some(4));
        assert_eq!(first_local_max(&ys, 3), None);
        assert_eq!(argmin_from(&ys, 3), Some(4));
    }
}
