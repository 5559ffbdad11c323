//! Peak functions from zero functions, and the limit of their powers.
//!
//! Given `F` with `sup |F| < 1` and zero set `K`, a continuous logarithm `g`
//! of `F` off `K` has `Re g < 0`, so `h = g/(g - 1)` has `|h| < 1` off `K`,
//! and `h -> 1` as `F -> 0`. The logarithm at `psi` is continued along the
//! radial path `r -> psi_r` from `omega` (`r = 0`) to `psi` (`r = 1`), where
//! `psi_r` multiplies `psi` by `exp(-(-ln r) c . s)` for the monoid's
//! positive functional `c`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_algebra::AnalyticElement;
use crate::haar::{integrate_angles, QuadratureScheme};
use crate::report::VerificationReport;
use crate::semicharacter::Semicharacter;
use crate::semigroup::SemigroupDesc;
use crate::torus;

/// Phase increments above this are refined by bisection.
const MAX_PHASE_STEP: f64 = PI / 4.0;
const MAX_BISECTIONS: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeakOptions {
    /// `|F| <= zero_tol` is treated as `F = 0`.
    pub zero_tol: f64,
    /// Grid points per coordinate on the boundary torus.
    pub boundary_grid: usize,
    /// Number of contracted rings `r = l/rings` checked for winding.
    pub rings: usize,
    /// Grid lines per coordinate used for winding loops when `d > 1`.
    pub lines_per_dim: usize,
    /// Initial radial steps of the branch tracking.
    pub radial_steps: usize,
}

impl Default for PeakOptions {
    fn default() -> Self {
        PeakOptions {
            zero_tol: 1e-12,
            boundary_grid: 4096,
            rings: 32,
            lines_per_dim: 16,
            radial_steps: 16,
        }
    }
}

/// Output of [`zero_to_peak`]: the peak function and what was verified.
#[derive(Clone, Debug, Serialize)]
pub struct PeakConstruction {
    #[serde(skip)]
    pub h: AnalyticElement,
    /// Largest sampled `|F|`.
    pub sup_f: f64,
    pub loops_checked: usize,
    /// Loops meeting `K`, on which no winding number is defined.
    pub loops_skipped: usize,
    pub grid_points: usize,
    pub grid_points_in_k: usize,
    /// Largest `|h|` over grid points off `K`.
    pub max_h_off_k: f64,
    /// Largest `Re g` over grid points off `K`.
    pub max_re_g_off_k: f64,
    /// Grid points off `K` violating `|1 - h| <= 1/(1 - ln|F|)`.
    pub certificate_violations: usize,
    pub h_at_omega: crate::report::ComplexValue,
}

/// Continuous logarithm of `F` at `psi` along the radial path from `omega`.
fn radial_log(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    psi: &Semicharacter,
    steps: usize,
) -> Result<Complex64> {
    let at = |r: f64| -> Result<Complex64> { Ok(f.eval(&psi.toward_omega(sg, r)?)) };
    let start = at(0.0)?;
    let mut arg = start.arg();
    let mut prev = start;
    for j in 1..=steps {
        let (r0, r1) = ((j - 1) as f64 / steps as f64, j as f64 / steps as f64);
        let next = at(r1)?;
        arg += unwrap_increment(&at, r0, prev, r1, next, 0)?;
        prev = next;
    }
    Ok(Complex64::new(prev.norm().ln(), arg))
}

/// Change of `arg F` between parameters `a` and `b`, with bisection until
/// each principal increment is below `MAX_PHASE_STEP`.
fn unwrap_increment(
    at: &dyn Fn(f64) -> Result<Complex64>,
    a: f64,
    fa: Complex64,
    b: f64,
    fb: Complex64,
    depth: usize,
) -> Result<f64> {
    let step = (fb / fa).arg();
    if step.abs() <= MAX_PHASE_STEP || depth >= MAX_BISECTIONS {
        return Ok(step);
    }
    let m = 0.5 * (a + b);
    let fm = at(m)?;
    Ok(unwrap_increment(at, a, fa, m, fm, depth + 1)?
        + unwrap_increment(at, m, fm, b, fb, depth + 1)?)
}

/// Winding number of `F` around the closed loop `u -> point(u)`, `u` in
/// `[0,1]`, sampled at `n` points; `None` if the loop meets `K`.
fn winding_number(
    f: &AnalyticElement,
    point: &dyn Fn(f64) -> Result<Semicharacter>,
    n: usize,
    zero_tol: f64,
) -> Result<Option<f64>> {
    let at = |u: f64| -> Result<Complex64> { Ok(f.eval(&point(u)?)) };
    let values: Vec<Complex64> = (0..=n).map(|j| at(j as f64 / n as f64)).collect::<Result<_>>()?;
    if values.iter().any(|v| v.norm() <= zero_tol) {
        return Ok(None);
    }
    let mut total = 0.0;
    for j in 0..n {
        let (a, b) = (j as f64 / n as f64, (j + 1) as f64 / n as f64);
        total += unwrap_increment(&at, a, values[j], b, values[j + 1], 0)?;
    }
    Ok(Some(total / TAU))
}

/// Builds the peak function `h = g/(g - 1)` (`h = 1` on `K`) of a zero
/// function `F`, after checking `sup |F| < 1` on the boundary grid and on
/// contracted rings and that `F` has winding number 0 along every sampled
/// loop that avoids `K`.
pub fn zero_to_peak(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    options: &PeakOptions,
) -> Result<PeakConstruction> {
    if sg.positive_functional().is_none() {
        return Err(Error::PreconditionFailed(
            "radial logarithms need a pointed monoid".into(),
        ));
    }
    let d = sg.ambient_dim();
    let n = options.boundary_grid;
    let zero_tol = options.zero_tol;
    let omega = Semicharacter::omega(sg)?;
    let f_omega = f.eval(&omega);
    if f_omega.norm() <= zero_tol {
        return Err(Error::WindingObstruction(
            "omega lies in the zero set, so every radial path starts in K".into(),
        ));
    }

    let one = Semicharacter::one(sg);
    let boundary = torus::grid_values(f, &one, n);
    let mut sup_f = boundary.iter().map(|v| v.norm()).fold(f_omega.norm(), f64::max);

    // Winding loops: for d = 1 the contracted circles; for d > 1 the
    // coordinate lines of a coarse grid on each contracted torus.
    let lines = if d == 1 { 1 } else { options.lines_per_dim };
    let mut loops = Vec::new();
    for l in 1..=options.rings {
        let r = l as f64 / options.rings as f64;
        for axis in 0..d {
            for line in 0..lines.pow((d - 1) as u32) {
                loops.push((r, axis, line));
            }
        }
    }
    let results: Vec<(Option<f64>, f64)> = loops
        .par_iter()
        .map(|&(r, axis, line)| {
            let fixed = torus::grid_point(line, lines, d - 1);
            let point = |u: f64| -> Result<Semicharacter> {
                let mut theta = Vec::with_capacity(d);
                let mut k = 0;
                for c in 0..d {
                    if c == axis {
                        theta.push(u);
                    } else {
                        theta.push(fixed[k]);
                        k += 1;
                    }
                }
                one.rotated(&theta).toward_omega(sg, r)
            };
            let w = winding_number(f, &point, n, zero_tol)?;
            let ring_max = (0..n)
                .map(|j| point(j as f64 / n as f64).map(|p| f.eval(&p).norm()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok((w, ring_max))
        })
        .collect::<Result<_>>()?;
    let mut loops_skipped = 0;
    for (&(r, axis, line), &(w, ring_max)) in loops.iter().zip(&results) {
        sup_f = sup_f.max(ring_max);
        match w {
            None => loops_skipped += 1,
            Some(w) if w.abs() >= 0.5 => {
                return Err(Error::WindingObstruction(format!(
                    "winding number {:.0} along coordinate {axis}, line {line}, radius {r}",
                    w.round()
                )));
            }
            Some(_) => {}
        }
    }
    if sup_f >= 1.0 {
        return Err(Error::NotStrictlyContractive(sup_f));
    }

    let steps = options.radial_steps;
    let (sg_h, f_h) = (sg.clone(), f.clone());
    let evaluator = Arc::new(move |psi: &Semicharacter| -> Complex64 {
        let v = f_h.eval(psi);
        if v.norm() <= zero_tol {
            return Complex64::new(1.0, 0.0);
        }
        match radial_log(&sg_h, &f_h, psi, steps) {
            Ok(g) => g / (g - 1.0),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    });
    let h = AnalyticElement::Custom(crate::function_algebra::CustomElement {
        evaluator: evaluator.clone(),
        note: "h = g/(g-1) for a continuous logarithm g of a zero function".into(),
        degree: None,
    });

    // Grid verification of Re g < 0, |h| < 1 and the rate h -> 1.
    let total = boundary.len();
    let checks: Vec<Option<(f64, f64, bool)>> = (0..total)
        .into_par_iter()
        .map(|i| {
            if boundary[i].norm() <= zero_tol {
                return Ok(None);
            }
            let psi = one.rotated(&torus::grid_point(i, n, d));
            let g = radial_log(sg, f, &psi, steps)?;
            let hv = g / (g - 1.0);
            let bound = 1.0 / (1.0 - boundary[i].norm().ln());
            let ok = (Complex64::new(1.0, 0.0) - hv).norm() <= bound * (1.0 + 1e-12);
            Ok(Some((g.re, hv.norm(), ok)))
        })
        .collect::<Result<_>>()?;
    let mut max_h = 0.0f64;
    let mut max_re_g = f64::NEG_INFINITY;
    let mut in_k = 0;
    let mut violations = 0;
    for c in &checks {
        match c {
            None => in_k += 1,
            Some((re_g, hn, ok)) => {
                max_re_g = max_re_g.max(*re_g);
                max_h = max_h.max(*hn);
                if !ok {
                    violations += 1;
                }
            }
        }
    }
    if max_re_g >= 0.0 || max_h >= 1.0 {
        return Err(Error::NotStrictlyContractive(sup_f));
    }
    let h_omega = evaluator(&omega);
    Ok(PeakConstruction {
        h,
        sup_f,
        loops_checked: loops.len() - loops_skipped,
        loops_skipped,
        grid_points: total,
        grid_points_in_k: in_k,
        max_h_off_k: max_h,
        max_re_g_off_k: max_re_g,
        certificate_violations: violations,
        h_at_omega: h_omega.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerStep {
    pub n: usize,
    pub at_omega: crate::report::ComplexValue,
    pub integral: crate::report::ComplexValue,
    pub residual: f64,
    pub quadrature_error: Option<f64>,
}

/// For `n = 1, 2, 4, .., n_max` compares `h(omega)^n` with `int_X h^n` and
/// records `|int_X h^n|`. The identity verdict needs every residual within
/// `tol`; the limit verdict needs `|int_X h^{n_max}| <= limit_tol`. The
/// report passes only when both hold.
pub fn peak_power_limit(
    sg: &SemigroupDesc,
    h: &AnalyticElement,
    n_max: usize,
    scheme: &QuadratureScheme,
    tol: f64,
    limit_tol: f64,
) -> Result<VerificationReport> {
    if n_max == 0 {
        return Err(Error::PreconditionFailed("n_max must be positive".into()));
    }
    let d = sg.ambient_dim();
    let one = Semicharacter::one(sg);
    let at_omega = h.eval(&Semicharacter::omega(sg)?);
    let mut ns = Vec::new();
    let mut n = 1;
    while n < n_max {
        ns.push(n);
        n *= 2;
    }
    ns.push(n_max);
    let mut steps = Vec::new();
    for &n in &ns {
        let integrand = |theta: &[f64]| h.eval(&one.rotated(theta)).powu(n as u32);
        let integral = integrate_angles(d, scheme, &integrand)?;
        let lhs = at_omega.powu(n as u32);
        steps.push(PowerStep {
            n,
            at_omega: lhs.into(),
            integral: integral.value.into(),
            residual: (lhs - integral.value).norm(),
            quadrature_error: integral.error,
        });
    }
    let identity_pass = steps.iter().all(|s| s.residual <= tol);
    let last = steps.last().expect("at least one power");
    let limit = Complex64::from(last.integral).norm();
    let limit_pass = limit <= limit_tol;
    let mut report = VerificationReport::new(
        "peak-power-limit",
        "h(omega)^n equals the Haar integral of h^n, and the integrals tend to the measure of K",
    );
    report.lhs = Some(last.at_omega);
    report.rhs = Some(last.integral);
    report.residual = steps.iter().map(|s| s.residual).fold(0.0, f64::max);
    report.tol = tol;
    report.pass = Some(identity_pass && limit_pass);
    report.scheme = Some(scheme.to_string());
    if let QuadratureScheme::MonteCarlo { seed, .. } = scheme {
        report.seed = Some(*seed);
    }
    let mut report = report
        .with_detail("identity_pass", identity_pass)
        .with_detail("limit_pass", limit_pass)
        .with_detail("limit_modulus", limit)
        .with_detail("limit_tol", limit_tol)
        .with_detail("h_at_omega", crate::report::ComplexValue::from(at_omega))
        .with_detail("sequence", &steps);
    if h.has_custom() {
        report = report.with_note("custom evaluator: membership in the algebra is assumed, not verified");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_algebra::{peak_at_point, AnalyticPolynomial, Weight};
    use crate::semicharacter::Character;
    use crate::semigroup::Element;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc() -> SemigroupDesc {
        SemigroupDesc::polycube(1).unwrap()
    }

    fn quarter_z_minus_one(sg: &SemigroupDesc) -> AnalyticElement {
        AnalyticPolynomial::new(
            sg,
            vec![(c(-0.25, 0.0), Element(vec![0])), (c(0.25, 0.0), Element(vec![1]))],
        )
        .unwrap()
        .into()
    }

    fn small() -> PeakOptions {
        PeakOptions {
            boundary_grid: 512,
            ..PeakOptions::default()
        }
    }

    #[test]
    fn value_at_origin() {
        let sg = disc();
        let out = zero_to_peak(&sg, &quarter_z_minus_one(&sg), &small()).unwrap();
        assert!((out.sup_f - 0.5).abs() < 1e-12);
        assert_eq!(out.grid_points_in_k, 1);
        let g0 = c(0.25f64.ln(), PI);
        let expected = g0 / (g0 - 1.0);
        let got: Complex64 = out.h_at_omega.into();
        assert!((got - expected).norm() < 1e-12);
        assert!(got.norm() < 1.0);
        assert!(out.max_h_off_k < 1.0);
        assert_eq!(out.certificate_violations, 0);
    }

    #[test]
    fn zero_free_function() {
        let sg = disc();
        // F = (z + 3)/5 has no zeros on the closed disc.
        let f: AnalyticElement = AnalyticPolynomial::new(
            &sg,
            vec![(c(0.6, 0.0), Element(vec![0])), (c(0.2, 0.0), Element(vec![1]))],
        )
        .unwrap()
        .into();
        let out = zero_to_peak(&sg, &f, &small()).unwrap();
        assert_eq!(out.grid_points_in_k, 0);
        assert!(out.max_h_off_k < 1.0);
    }

    #[test]
    fn zero_at_omega_is_rejected() {
        let sg = disc();
        let f: AnalyticElement = AnalyticPolynomial::new(
            &sg,
            vec![(c(-0.25, 0.0), Element(vec![1])), (c(0.25, 0.0), Element(vec![2]))],
        )
        .unwrap()
        .into();
        assert!(matches!(
            zero_to_peak(&sg, &f, &small()),
            Err(Error::WindingObstruction(_))
        ));
    }

    #[test]
    fn interior_zero_is_a_winding_obstruction() {
        let sg = disc();
        // F = (z - 1/2)/4 vanishes inside the disc, so outer rings wind once.
        let f: AnalyticElement = AnalyticPolynomial::new(
            &sg,
            vec![(c(-0.125, 0.0), Element(vec![0])), (c(0.25, 0.0), Element(vec![1]))],
        )
        .unwrap()
        .into();
        assert!(matches!(
            zero_to_peak(&sg, &f, &small()),
            Err(Error::WindingObstruction(_))
        ));
    }

    #[test]
    fn large_function_is_rejected() {
        let sg = disc();
        let f = AnalyticElement::constant(&sg, c(1.0, 0.0));
        assert!(matches!(
            zero_to_peak(&sg, &f, &small()),
            Err(Error::NotStrictlyContractive(_))
        ));
    }

    #[test]
    fn point_peak_powers() {
        let sg = disc();
        let w = Weight::geometric(&sg, vec![0.5]).unwrap();
        let h = peak_at_point(&sg, &Character::new(vec![0.2]), &w);
        let scheme = QuadratureScheme::TensorTrapezoid { nodes_per_dim: 1024 };
        let r = peak_power_limit(&sg, &h, 8, &scheme, 1e-10, 0.2).unwrap();
        assert!(r.passed(), "{}", r.summary());
        let at_omega: Complex64 = serde_json::from_value::<crate::report::ComplexValue>(
            r.details["h_at_omega"].clone(),
        )
        .unwrap()
        .into();
        assert!((at_omega - c(0.75, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn constant_one_passes_identity_but_not_limit() {
        let sg = disc();
        let h = AnalyticElement::constant(&sg, c(1.0, 0.0));
        let scheme = QuadratureScheme::TensorTrapezoid { nodes_per_dim: 4 };
        let r = peak_power_limit(&sg, &h, 16, &scheme, 1e-12, 1e-3).unwrap();
        assert_eq!(r.details["identity_pass"], true);
        assert_eq!(r.details["limit_pass"], false);
        assert_eq!(r.pass, Some(false));
    }
}
