//! Covers of complex-tangential curves by small neighborhoods.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_algebra::character_gap;

use super::curve::{check_complex_tangential, unit_grid, Curve};
use super::{Cover, Neighborhood};

/// Upper limit on the number of pieces a cover may have.
const MAX_PIECES: usize = 50_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverOptions {
    /// Relative inflation of the grid maximum of `|<gamma', gamma'>|`.
    pub margin: f64,
    /// Floor for `M`, so constant curves still get a positive radius.
    pub min_bound: f64,
    /// Largest tangential defect accepted on the grid.
    pub tangential_tol: f64,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions {
            margin: 0.1,
            min_bound: 1e-12,
            tangential_tol: 1e-9,
        }
    }
}

/// A verified cover of `gamma([0,1])` with the quantities it was built from.
#[derive(Clone, Debug, Serialize)]
pub struct TangentialCover {
    pub cover: Cover,
    /// The bound `M` on `|<gamma'(s), gamma'(t)>|`.
    pub bound: f64,
    /// Grid maximum of `||gamma'(t)||^2` before the margin.
    pub grid_max: f64,
    pub pieces: usize,
    pub radius: f64,
    pub radius_sum: f64,
    pub grid: usize,
    pub max_defect: f64,
    /// Largest `|1 - <gamma(t), gamma(a_i)>| / (M (t - a_i)^2)` over grid
    /// points with `t > a_i`.
    pub worst_estimate_ratio: f64,
}

/// Partition `[0,1]` into `m = floor(M/eps) + 1` pieces and cover the curve
/// by the neighborhoods `V(gamma(i/m), M/m^2)`.
///
/// `M` is the grid maximum of `||gamma'(t)||^2` times `1 + margin`. By
/// Cauchy-Schwarz this maximum also bounds `|<gamma'(s), gamma'(t)>|` for
/// every pair, so the diagonal suffices. Before returning, the radius sum,
/// grid coverage, and the estimate `|1 - <gamma(t), gamma(a_i)>| <=
/// M (t - a_i)^2` are checked at every grid point.
pub fn build_tangential_cover(
    curve: &Curve,
    epsilon: f64,
    grid: usize,
    options: &CoverOptions,
) -> Result<TangentialCover> {
    if !(epsilon > 0.0) || grid == 0 {
        return Err(Error::PreconditionFailed(
            "epsilon must be positive and the grid nonempty".into(),
        ));
    }
    let max_defect = check_complex_tangential(curve, grid, options.tangential_tol)?;
    let ts = unit_grid(grid);
    let grid_max = ts
        .par_iter()
        .map(|&t| curve.derivative_norm_sqr(t))
        .reduce(|| 0.0, f64::max);
    let bound = ((1.0 + options.margin) * grid_max).max(options.min_bound);
    let m_real = (bound / epsilon).floor() + 1.0;
    if !(m_real <= MAX_PIECES as f64) {
        return Err(Error::CoverVerificationFailed(format!(
            "{m_real} pieces exceed the limit of {MAX_PIECES}"
        )));
    }
    let m = m_real as usize;
    let radius = bound / (m as f64 * m as f64);
    let radius_sum = bound / m as f64;
    if !(radius_sum < epsilon) {
        return Err(Error::CoverVerificationFailed(format!(
            "radius sum {radius_sum} is not below epsilon {epsilon}"
        )));
    }
    let tail = 2.0 * curve.weight().tail_bound();
    let checks: Vec<(f64, f64, f64)> = ts
        .par_iter()
        .map(|&t| {
            let i = piece_index(t, m);
            let a = i as f64 / m as f64;
            let th = curve.theta(t);
            let ta = curve.theta(a);
            let delta: Vec<f64> = th.iter().zip(&ta).map(|(x, y)| x - y).collect();
            let gap = character_gap(&delta, curve.weight()).norm();
            (t, a, gap)
        })
        .collect();
    let mut worst_ratio = 0.0f64;
    for &(t, a, gap) in &checks {
        if !(gap < radius) {
            return Err(Error::CoverVerificationFailed(format!(
                "gamma({t}) is not in V(gamma({a}), {radius}): gap {gap}"
            )));
        }
        let estimate = bound * (t - a) * (t - a);
        if gap > estimate + tail {
            return Err(Error::CoverVerificationFailed(format!(
                "estimate fails at t = {t}: gap {gap} > M (t - a)^2 = {estimate}"
            )));
        }
        if t > a {
            worst_ratio = worst_ratio.max(gap / estimate);
        }
    }
    let pieces = (0..m)
        .map(|i| Neighborhood {
            center: curve.character(i as f64 / m as f64),
            radius,
        })
        .collect();
    Ok(TangentialCover {
        cover: Cover { pieces, epsilon },
        bound,
        grid_max,
        pieces: m,
        radius,
        radius_sum,
        grid: ts.len(),
        max_defect,
        worst_estimate_ratio: worst_ratio,
    })
}

/// `i` with `a_i = i/m` the largest partition point `<= t`.
fn piece_index(t: f64, m: usize) -> usize {
    let mut i = ((t * m as f64).floor() as usize).min(m - 1);
    while i > 0 && i as f64 / m as f64 > t {
        i -= 1;
    }
    while i + 1 < m && (i + 1) as f64 / m as f64 <= t {
        i += 1;
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_algebra::Weight;
    use crate::interpolation::curve::TrigPath;
    use crate::semigroup::SemigroupDesc;
    use std::f64::consts::TAU;

    fn curve(slopes: Vec<f64>) -> Curve {
        let sg = SemigroupDesc::polycube(slopes.len()).unwrap();
        let w = Weight::geometric(&sg, vec![0.5; slopes.len()]).unwrap();
        Curve::from_trig(
            w,
            TrigPath {
                offset: vec![0.0; slopes.len()],
                linear: slopes,
                cos: vec![],
                sin: vec![],
            },
        )
        .unwrap()
    }

    #[test]
    fn antidiagonal_cover() {
        let c = curve(vec![1.0, -1.0]);
        let out = build_tangential_cover(&c, 0.1, 2000, &CoverOptions::default()).unwrap();
        // ||gamma'||^2 = 4 pi^2 E[(s1 - s2)^2] = 16 pi^2 for q = 1/2.
        // Truncation drops second-moment mass of order N^2 q^N.
        assert!((out.grid_max - 4.0 * TAU * TAU).abs() < 1e-6, "{}", out.grid_max - 4.0 * TAU * TAU);
        assert!(out.radius_sum < 0.1);
        assert_eq!(out.pieces, (out.bound / 0.1).floor() as usize + 1);
        assert!((1580..=1740).contains(&out.pieces));
        assert!(out.worst_estimate_ratio <= 1.0);
    }

    #[test]
    fn constant_curve_single_piece() {
        let c = curve(vec![0.0, 0.0]);
        let out = build_tangential_cover(&c, 0.5, 100, &CoverOptions::default()).unwrap();
        assert_eq!(out.pieces, 1);
        assert_eq!(out.bound, 1e-12);
    }

    #[test]
    fn non_tangential_is_rejected() {
        let c = curve(vec![1.0, 0.0]);
        assert!(matches!(
            build_tangential_cover(&c, 0.1, 100, &CoverOptions::default()),
            Err(Error::NotComplexTangential { .. })
        ));
    }

    #[test]
    fn piece_index_is_floor() {
        assert_eq!(piece_index(0.0, 7), 0);
        assert_eq!(piece_index(1.0, 7), 6);
        assert_eq!(piece_index(3.0 / 7.0, 7), 3);
        assert_eq!(piece_index(0.4999, 2), 0);
    }
}
