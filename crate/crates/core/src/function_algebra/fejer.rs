//! Fejér means of boundary Fourier series as polynomial approximants.

use crate::error::{Error, Result};
use crate::semicharacter::Semicharacter;
use crate::semigroup::{Element, SemigroupDesc};
use crate::torus;

use super::{AnalyticElement, AnalyticPolynomial};

/// Coefficients outside `S` below this are treated as DFT round-off.
const LEAK_TOL: f64 = 1e-9;

/// Relative size below which retained coefficients are dropped as round-off.
const ROUNDOFF: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct FejerApproximation {
    pub polynomial: AnalyticPolynomial,
    /// `max |F - p|` over the sample grid.
    pub sup_error: f64,
    /// Frequencies outside `S` with coefficient above tolerance.
    pub dropped: Vec<Vec<i64>>,
}

/// Fejér mean of order `degree` of the boundary Fourier series of `f`,
/// sampled on a grid of `grid` points per coordinate. Fails with
/// [`Error::SpectrumLeakage`] when the series has mass outside `S`.
pub fn fejer_approx(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    degree: usize,
    grid: usize,
) -> Result<FejerApproximation> {
    let out = fejer(sg, f, degree, grid)?;
    if !out.dropped.is_empty() {
        return Err(Error::SpectrumLeakage(out.dropped));
    }
    Ok(out)
}

/// Like [`fejer_approx`], but drops frequencies outside `S` instead of
/// failing. The result is an analytic polynomial even when `f` is not.
pub fn fejer_projection(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    degree: usize,
    grid: usize,
) -> Result<FejerApproximation> {
    fejer(sg, f, degree, grid)
}

fn fejer(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    degree: usize,
    grid: usize,
) -> Result<FejerApproximation> {
    if grid <= 2 * degree {
        return Err(Error::PreconditionFailed(format!(
            "grid {grid} must exceed twice the degree {degree}"
        )));
    }
    let d = sg.ambient_dim();
    let base = Semicharacter::one(sg);
    let values = torus::grid_values(f, &base, grid);
    let coef = torus::fourier_coefficients(&values, grid, d);
    let floor = ROUNDOFF * coef.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut terms = Vec::new();
    let mut dropped = Vec::new();
    for (i, c) in coef.iter().enumerate() {
        let k = torus::frequency_of(i, grid, d);
        if k.iter().any(|x| x.unsigned_abs() as usize > degree) {
            continue;
        }
        if !sg.contains(&k)? {
            if c.norm() > LEAK_TOL {
                dropped.push(k);
            }
            continue;
        }
        if c.norm() <= floor {
            continue;
        }
        let attenuation: f64 = k
            .iter()
            .map(|x| 1.0 - x.unsigned_abs() as f64 / (degree as f64 + 1.0))
            .product();
        terms.push((c * attenuation, Element(k)));
    }
    dropped.sort();
    let polynomial = AnalyticPolynomial::new(sg, terms)?;
    let approx = torus::grid_values(&polynomial.clone().into(), &base, grid);
    let sup_error = values
        .iter()
        .zip(&approx)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(FejerApproximation {
        polynomial,
        sup_error,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_is_reproduced() {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let one = AnalyticElement::constant(&sg, c(1.0, 0.0));
        for degree in [1, 4, 9] {
            let out = fejer_approx(&sg, &one, degree, 32).unwrap();
            assert_eq!(out.polynomial.terms().len(), 1);
            assert!((out.polynomial.coefficient(&Element(vec![0, 0])) - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn polynomial_coefficients_are_attenuated() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let coeffs = [c(0.5, 0.0), c(1.0, -1.0), c(0.0, 2.0), c(-0.3, 0.1)];
        let p = AnalyticPolynomial::new(
            &sg,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (c, Element(vec![k as i64])))
                .collect(),
        )
        .unwrap();
        let m = 8;
        let out = fejer_approx(&sg, &p.into(), m, 64).unwrap();
        for (k, &ck) in coeffs.iter().enumerate() {
            let expected = ck * (1.0 - k as f64 / (m as f64 + 1.0));
            let got = out.polynomial.coefficient(&Element(vec![k as i64]));
            assert!((got - expected).norm() < 1e-10);
        }
    }

    #[test]
    fn error_decreases_for_disc_function() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let f = AnalyticElement::polydisc(&sg, "1/(1-z/2)", None, |z| {
            1.0 / (c(1.0, 0.0) - z[0] / 2.0)
        })
        .unwrap();
        let errs: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&m| fejer_approx(&sg, &f, m, 512).unwrap().sup_error)
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn leakage_is_an_error_and_projection_drops_it() {
        let sg = SemigroupDesc::numerical(&[2, 3]).unwrap();
        let f = AnalyticElement::polydisc(&sg, "z + z^2", Some(vec![2]), |z| z[0] + z[0] * z[0])
            .unwrap();
        match fejer_approx(&sg, &f, 4, 16) {
            Err(Error::SpectrumLeakage(k)) => assert_eq!(k, vec![vec![1]]),
            other => panic!("expected leakage, got {other:?}"),
        }
        let proj = fejer_projection(&sg, &f, 4, 16).unwrap();
        assert_eq!(proj.dropped, vec![vec![1]]);
        assert!(proj.polynomial.coefficient(&Element(vec![1])) == c(0.0, 0.0));
        let c2 = proj.polynomial.coefficient(&Element(vec![2]));
        assert!((c2 - c(1.0 - 2.0 / 5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn grid_must_resolve_degree() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let one = AnalyticElement::constant(&sg, c(1.0, 0.0));
        assert!(matches!(
            fejer_approx(&sg, &one, 8, 16),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
