//! Maximum modulus on the semicharacter space against the boundary torus.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::report::VerificationReport;
use crate::semicharacter::{sample_semicharacter, Semicharacter};
use crate::semigroup::SemigroupDesc;
use crate::torus;

use super::AnalyticPolynomial;

const REFINE_CANDIDATES: usize = 8;

/// Samples `|p|` at `interior_samples` random semicharacters and on the
/// boundary grid of `boundary_samples` points per coordinate (refined by a
/// local search around the largest grid values), and passes iff the
/// interior maximum does not exceed the boundary maximum by more than `tol`.
pub fn max_modulus_check(
    sg: &SemigroupDesc,
    p: &AnalyticPolynomial,
    interior_samples: usize,
    boundary_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let d = sg.ambient_dim();
    let one = Semicharacter::one(sg);
    let f = p.clone().into();
    let grid: Vec<f64> = torus::grid_values(&f, &one, boundary_samples)
        .iter()
        .map(|v| v.norm())
        .collect();
    let (_, grid_max) = torus::argmax(&grid);

    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[b].total_cmp(&grid[a]).then(a.cmp(&b)));
    let step = 1.0 / boundary_samples as f64;
    let refined = order
        .iter()
        .take(REFINE_CANDIDATES)
        .map(|&i| refine(p, &one, torus::grid_point(i, boundary_samples, d), step))
        .fold(grid_max, f64::max);

    let faces = sg.prime_faces()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Semicharacter> = (0..interior_samples)
        .map(|_| sample_semicharacter(sg, &faces, &mut rng))
        .collect::<Result<_>>()?;
    let interior: Vec<f64> = samples.par_iter().map(|psi| p.eval(psi).norm()).collect();
    let (_, interior_max) = torus::argmax(&interior);
    let interior_max = interior_max.max(0.0);

    let mut report = VerificationReport::new(
        "max-modulus",
        "the maximum of |p| over all semicharacters is attained on the characters",
    );
    report.lhs = Some(interior_max.into());
    report.rhs = Some(refined.into());
    report.residual = (interior_max - refined).max(0.0);
    report.tol = tol;
    report.pass = Some(interior_max <= refined + tol);
    report.seed = Some(seed);
    report.scheme = Some(format!(
        "{interior_samples} interior samples; boundary grid {boundary_samples}^{d} refined"
    ));
    Ok(report
        .with_detail("boundary_grid_max", grid_max)
        .with_detail("boundary_refined_max", refined))
}

/// Compass search for a local maximum of `|p(chi_theta)|` from `theta`.
fn refine(p: &AnalyticPolynomial, one: &Semicharacter, mut theta: Vec<f64>, step: f64) -> f64 {
    let value = |t: &[f64]| p.eval(&one.rotated(t)).norm();
    let mut best = value(&theta);
    let mut h = step;
    let mut iters = 0;
    while h > 1e-14 && iters < 5000 {
        iters += 1;
        let mut improved = false;
        for c in 0..theta.len() {
            for sign in [1.0, -1.0] {
                let mut t = theta.clone();
                t[c] += sign * h;
                let v = value(&t);
                if v > best {
                    best = v;
                    theta = t;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::Element;
    use num_complex::Complex64;

    #[test]
    fn monomial_has_unit_maxima() {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let p = AnalyticPolynomial::monomial(&sg, Complex64::new(1.0, 0.0), Element(vec![2, 1]))
            .unwrap();
        let r = max_modulus_check(&sg, &p, 1000, 32, 1, 1e-12).unwrap();
        assert!(r.passed());
        assert!((r.rhs.unwrap().re - 1.0).abs() < 1e-12);
        assert!(r.lhs.unwrap().re <= 1.0);
    }

    #[test]
    fn one_plus_z_peaks_at_one() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let p = AnalyticPolynomial::new(
            &sg,
            vec![
                (Complex64::new(1.0, 0.0), Element(vec![0])),
                (Complex64::new(1.0, 0.0), Element(vec![1])),
            ],
        )
        .unwrap();
        let r = max_modulus_check(&sg, &p, 2000, 64, 5, 1e-12).unwrap();
        assert!(r.passed());
        assert!((r.rhs.unwrap().re - 2.0).abs() < 1e-12);
        assert!(r.lhs.unwrap().re < 2.0);
    }
}
