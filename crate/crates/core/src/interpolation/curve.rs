//! `C^1` curves in the character group and their tangential defect.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_algebra::{inner_product, Weight};
use crate::report::VerificationReport;
use crate::semicharacter::{Character, PositiveSemicharacter};
use crate::semigroup::SemigroupDesc;

pub type PathFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Step of the central differences used when no derivative is supplied.
pub const DIFF_STEP: f64 = 1e-5;

/// `theta_i(t) = offset_i + linear_i t + sum_k cos_i[k] cos(2 pi (k+1) t)
///  + sin_i[k] sin(2 pi (k+1) t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPath {
    pub offset: Vec<f64>,
    #[serde(default)]
    pub linear: Vec<f64>,
    #[serde(default)]
    pub cos: Vec<Vec<f64>>,
    #[serde(default)]
    pub sin: Vec<Vec<f64>>,
}

impl TrigPath {
    fn coord(list: &[Vec<f64>], i: usize) -> &[f64] {
        list.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0
            || (!self.linear.is_empty() && self.linear.len() != d)
            || self.cos.len() > d
            || self.sin.len() > d
        {
            return Err(Error::PreconditionFailed(
                "trigonometric path tables must have one row per coordinate".into(),
            ));
        }
        Ok(())
    }

    pub fn theta(&self, t: f64) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let mut v = self.offset[i] + self.linear.get(i).copied().unwrap_or(0.0) * t;
                for (k, a) in Self::coord(&self.cos, i).iter().enumerate() {
                    v += a * (TAU * (k + 1) as f64 * t).cos();
                }
                for (k, b) in Self::coord(&self.sin, i).iter().enumerate() {
                    v += b * (TAU * (k + 1) as f64 * t).sin();
                }
                v
            })
            .collect()
    }

    pub fn derivative(&self, t: f64) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let mut v = self.linear.get(i).copied().unwrap_or(0.0);
                for (k, a) in Self::coord(&self.cos, i).iter().enumerate() {
                    let w = TAU * (k + 1) as f64;
                    v -= a * w * (w * t).sin();
                }
                for (k, b) in Self::coord(&self.sin, i).iter().enumerate() {
                    let w = TAU * (k + 1) as f64;
                    v += b * w * (w * t).cos();
                }
                v
            })
            .collect()
    }
}

/// A curve `gamma : [0,1] -> X` given by its angles, viewed in `l_2(S, w)`.
#[derive(Clone)]
pub struct Curve {
    theta: PathFn,
    derivative: PathFn,
    analytic_derivative: bool,
    weight: Weight,
    dim: usize,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("dim", &self.dim)
            .field("analytic_derivative", &self.analytic_derivative)
            .field("weight", &self.weight)
            .finish_non_exhaustive()
    }
}

impl Curve {
    /// Builds a curve. A supplied derivative is cross-checked against central
    /// differences on 33 points; without one, central differences are used.
    pub fn new(
        weight: Weight,
        dim: usize,
        theta: PathFn,
        derivative: Option<PathFn>,
    ) -> Result<Self> {
        if weight.q().len() != dim {
            return Err(Error::DimensionMismatch {
                expected: weight.q().len(),
                got: dim,
            });
        }
        let analytic_derivative = derivative.is_some();
        let derivative = match derivative {
            Some(d) => d,
            None => {
                let th = theta.clone();
                Arc::new(move |t: f64| central_difference(&th, t)) as PathFn
            }
        };
        let curve = Curve {
            theta,
            derivative,
            analytic_derivative,
            weight,
            dim,
        };
        for j in 0..=32 {
            let t = j as f64 / 32.0;
            let th = (curve.theta)(t);
            if th.len() != dim || th.iter().any(|x| !x.is_finite()) {
                return Err(Error::PreconditionFailed(format!(
                    "path does not give {dim} finite angles at t = {t}"
                )));
            }
            if analytic_derivative {
                let exact = (curve.derivative)(t);
                let approx = central_difference(&curve.theta, t);
                for (a, b) in exact.iter().zip(&approx) {
                    if (a - b).abs() > 1e-6 * (1.0 + a.abs()) {
                        return Err(Error::PreconditionFailed(format!(
                            "supplied derivative {a} disagrees with central difference {b} at t = {t}"
                        )));
                    }
                }
            }
        }
        Ok(curve)
    }

    pub fn from_trig(weight: Weight, path: TrigPath) -> Result<Self> {
        path.validate()?;
        let dim = path.dim();
        let p = Arc::new(path);
        let q = p.clone();
        Curve::new(
            weight,
            dim,
            Arc::new(move |t| p.theta(t)),
            Some(Arc::new(move |t| q.derivative(t))),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.analytic_derivative
    }

    /// Unreduced angles of `gamma(t)`.
    pub fn theta(&self, t: f64) -> Vec<f64> {
        (self.theta)(t)
    }

    pub fn theta_derivative(&self, t: f64) -> Vec<f64> {
        (self.derivative)(t)
    }

    pub fn character(&self, t: f64) -> Character {
        Character::new(self.theta(t))
    }

    /// `||gamma'(t)||^2 = 4 pi^2 sum w(s) (theta'(t) . s)^2`.
    pub fn derivative_norm_sqr(&self, t: f64) -> f64 {
        let dt = self.theta_derivative(t);
        self.weight
            .retained()
            .iter()
            .map(|(s, w)| {
                let x = TAU * s.dot(&dt);
                w * x * x
            })
            .sum()
    }
}

fn central_difference(theta: &PathFn, t: f64) -> Vec<f64> {
    let a = theta(t + DIFF_STEP);
    let b = theta(t - DIFF_STEP);
    a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * DIFF_STEP)).collect()
}

/// `|<gamma(t), gamma'(t)>|` with `gamma'(t)(s) = 2 pi i (theta'(t) . s)
/// gamma(t)(s)` and the conjugate on the second argument.
pub fn tangential_defect(curve: &Curve, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::PreconditionFailed(format!("parameter {t} outside [0,1]")));
    }
    let chi = curve.character(t);
    let dt = curve.theta_derivative(t);
    let (v, _) = inner_product(
        |s| chi.value_at(s),
        |s| Complex64::new(0.0, TAU * s.dot(&dt)) * chi.value_at(s),
        curve.weight(),
    );
    Ok(v.norm())
}

/// Fails with [`Error::NotComplexTangential`] at the first grid point whose
/// defect exceeds `tol`; returns the largest defect otherwise.
pub fn check_complex_tangential(curve: &Curve, grid: usize, tol: f64) -> Result<f64> {
    let ts = unit_grid(grid);
    let defects: Vec<f64> = ts
        .par_iter()
        .map(|&t| tangential_defect(curve, t))
        .collect::<Result<_>>()?;
    for (&t, &defect) in ts.iter().zip(&defects) {
        if defect > tol {
            return Err(Error::NotComplexTangential { t, defect, tol });
        }
    }
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// `grid` equispaced parameters in `[0, 1]`, both ends included.
pub fn unit_grid(grid: usize) -> Vec<f64> {
    match grid {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|j| j as f64 / (n - 1) as f64).collect(),
    }
}

/// The curve `t -> rho^{it}` for a strictly positive `rho != 1`, and a
/// report of its tangential defect `|sum w(s) lambda . s|`. The defect is
/// positive, so the curve is not complex-tangential.
pub fn imaginary_power_curve(
    sg: &SemigroupDesc,
    rho: &PositiveSemicharacter,
    weight: &Weight,
    grid: usize,
    tol: f64,
) -> Result<(Curve, VerificationReport)> {
    if !rho.is_strictly_positive() {
        return Err(Error::PreconditionFailed(
            "rho^{it} needs rho positive on all of S".into(),
        ));
    }
    if rho.is_one(sg) {
        return Err(Error::PreconditionFailed("rho = 1 gives a constant curve".into()));
    }
    let lambda = rho.lambda().to_vec();
    let l2 = lambda.clone();
    let curve = Curve::new(
        weight.clone(),
        sg.ambient_dim(),
        Arc::new(move |t| lambda.iter().map(|l| -t * l / TAU).collect()),
        Some(Arc::new(move |_| l2.iter().map(|l| -l / TAU).collect())),
    )?;
    let expected: f64 = weight
        .mean()
        .iter()
        .zip(rho.lambda())
        .map(|(m, l)| m * l)
        .sum::<f64>()
        .abs();
    let ts = unit_grid(grid.max(1));
    let defects: Vec<f64> = ts
        .iter()
        .map(|&t| tangential_defect(&curve, t))
        .collect::<Result<_>>()?;
    let min_defect = defects.iter().copied().fold(f64::INFINITY, f64::min);
    let max_defect = defects.iter().copied().fold(0.0, f64::max);
    let mut report = VerificationReport::new(
        "curve-counterexample",
        "the curve t -> rho^{it} is C^1 but not complex-tangential",
    );
    report.lhs = Some(min_defect.into());
    report.rhs = Some(expected.into());
    report.residual = (max_defect - expected).abs().max((min_defect - expected).abs());
    report.tol = tol;
    report.pass = Some(min_defect > tol);
    Ok((
        curve,
        report
            .with_detail("min_defect", min_defect)
            .with_detail("max_defect", max_defect)
            .with_detail("expected_defect", expected)
            .with_detail("grid", ts.len()),
    ))
}
