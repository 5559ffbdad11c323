//! Normalized Haar integration over the character group and the
//! mean-value and orbit-invariance checks.
//!
//! Characters are parameterized by angles `theta` in `T^d` with `d` the
//! ambient dimension. The map `theta -> chi_theta` is a surjective
//! homomorphism onto the character group, so it pushes the uniform measure
//! on `T^d` forward to Haar measure even when the group of fractions has
//! rank below `d` or index above 1.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_algebra::AnalyticElement;
use crate::report::{Hypothesis, VerificationReport};
use crate::semicharacter::{PositiveSemicharacter, Semicharacter};
use crate::semigroup::SemigroupDesc;
use crate::torus;

/// Sample count of the default Monte Carlo scheme.
pub const DEFAULT_MC_SAMPLES: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuadratureScheme {
    /// Equispaced tensor grid; exact for trigonometric polynomials whose
    /// per-coordinate degree is below `nodes_per_dim`.
    TensorTrapezoid { nodes_per_dim: usize },
    /// Uniform random angles with a reported standard error.
    MonteCarlo { samples: usize, seed: u64 },
    /// Iterated adaptive Gauss-Kronrod (7/15) on each coordinate, for
    /// integrands with integrable singularities.
    AdaptiveGaussKronrod { tol: f64, max_intervals: usize },
}

impl fmt::Display for QuadratureScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadratureScheme::TensorTrapezoid { nodes_per_dim } => {
                write!(f, "tensor trapezoid, {nodes_per_dim} nodes per coordinate")
            }
            QuadratureScheme::MonteCarlo { samples, seed } => {
                write!(f, "Monte Carlo, {samples} samples, seed {seed}")
            }
            QuadratureScheme::AdaptiveGaussKronrod { tol, max_intervals } => {
                write!(f, "adaptive Gauss-Kronrod 7/15, tol {tol:e}, at most {max_intervals} intervals")
            }
        }
    }
}

impl QuadratureScheme {
    /// Trapezoid with `2 * degree + 1` nodes when `f` has a degree bound,
    /// Monte Carlo otherwise.
    pub fn default_for(f: &AnalyticElement) -> Self {
        match f.degree_bound() {
            Some(deg) => QuadratureScheme::TensorTrapezoid {
                nodes_per_dim: 2 * deg.iter().copied().max().unwrap_or(0).max(0) as usize + 1,
            },
            None => QuadratureScheme::MonteCarlo {
                samples: DEFAULT_MC_SAMPLES,
                seed: 0,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            QuadratureScheme::TensorTrapezoid { nodes_per_dim } => *nodes_per_dim > 0,
            QuadratureScheme::MonteCarlo { samples, .. } => *samples > 1,
            QuadratureScheme::AdaptiveGaussKronrod { tol, max_intervals } => {
                *tol > 0.0 && *max_intervals > 0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::PreconditionFailed(format!("invalid quadrature scheme: {self}")))
        }
    }
}

/// A quadrature result. `error` is the standard error for Monte Carlo, the
/// summed Kronrod-Gauss differences for Gauss-Kronrod, and zero for the
/// trapezoid rule when it is exact for the integrand's degree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Integral {
    pub value: Complex64,
    pub error: Option<f64>,
    pub evaluations: usize,
}

/// `int_{T^d} f(theta) dtheta` for a function of the angles.
pub fn integrate_angles(
    d: usize,
    scheme: &QuadratureScheme,
    f: &(dyn Fn(&[f64]) -> Complex64 + Sync),
) -> Result<Integral> {
    scheme.validate()?;
    match *scheme {
        QuadratureScheme::TensorTrapezoid { nodes_per_dim: n } => {
            let total = n.pow(d as u32);
            let values: Vec<Complex64> = (0..total)
                .into_par_iter()
                .map(|i| f(&torus::grid_point(i, n, d)))
                .collect();
            Ok(Integral {
                value: torus::deterministic_sum(&values) / total as f64,
                error: None,
                evaluations: total,
            })
        }
        QuadratureScheme::MonteCarlo { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let points: Vec<Vec<f64>> = (0..samples)
                .map(|_| (0..d).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let values: Vec<Complex64> = points.par_iter().map(|t| f(t)).collect();
            Ok(monte_carlo(&values))
        }
        QuadratureScheme::AdaptiveGaussKronrod { tol, max_intervals } => {
            let mut evaluations = 0;
            let (value, error) = nested_gk(d, &mut Vec::new(), f, tol, max_intervals, &mut evaluations);
            Ok(Integral {
                value,
                error: Some(error),
                evaluations,
            })
        }
    }
}

fn monte_carlo(values: &[Complex64]) -> Integral {
    let n = values.len() as f64;
    let mean = torus::deterministic_sum(values) / n;
    let sq: Vec<Complex64> = values
        .iter()
        .map(|v| Complex64::new((v - mean).norm_sqr(), 0.0))
        .collect();
    let var = torus::deterministic_sum(&sq).re / (n - 1.0);
    Integral {
        value: mean,
        error: Some((var / n).sqrt()),
        evaluations: values.len(),
    }
}

/// Integral of `F(rho * chi)` over characters `chi`.
pub fn orbit_integral(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    rho: &PositiveSemicharacter,
    scheme: &QuadratureScheme,
) -> Result<Integral> {
    scheme.validate()?;
    let base = rho.as_semicharacter();
    let d = sg.ambient_dim();
    if let QuadratureScheme::TensorTrapezoid { nodes_per_dim: n } = *scheme {
        let values = torus::grid_values(f, &base, n);
        let exact = f
            .degree_bound()
            .is_some_and(|deg| deg.iter().all(|&k| (k as usize) < n));
        return Ok(Integral {
            value: torus::deterministic_sum(&values) / values.len() as f64,
            error: exact.then_some(0.0),
            evaluations: values.len(),
        });
    }
    integrate_angles(d, scheme, &|theta| f.eval(&base.rotated(theta)))
}

/// Integral of `F` over the character group.
pub fn integrate_x(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    scheme: &QuadratureScheme,
) -> Result<Integral> {
    orbit_integral(sg, f, &PositiveSemicharacter::one(sg), scheme)
}

/// Checks `int_X F dsigma = F(omega)`. Requires a pointed monoid; the
/// semicharacter `exp(-c . s)` built from the positive functional `c` is
/// the witness of a `rho` strictly between 0 and 1 off the identity.
pub fn verify_mean_value(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    scheme: &QuadratureScheme,
    tol: f64,
) -> Result<VerificationReport> {
    let c = sg.positive_functional().ok_or_else(|| {
        Error::PreconditionFailed(
            "mean-value property needs a pointed monoid (S ∩ S^-1 = {e}) so that omega exists"
                .into(),
        )
    })?;
    let integral = integrate_x(sg, f, scheme)?;
    let at_omega = f.eval(&Semicharacter::omega(sg)?);
    let mut report = VerificationReport::new(
        "mean-value",
        "the Haar integral over the characters equals the value at omega",
    )
    .compare(integral.value, at_omega, tol);
    report.hypothesis = Hypothesis::Holds(format!(
        "pointed monoid; exp(-c.s) with c = {c:?} lies strictly between 0 and 1 off e"
    ));
    report.scheme = Some(scheme.to_string());
    if let QuadratureScheme::MonteCarlo { seed, .. } = scheme {
        report.seed = Some(*seed);
    }
    report = report
        .with_detail("quadrature_error", integral.error)
        .with_detail("evaluations", integral.evaluations);
    if f.has_custom() {
        report = report.with_note("custom evaluator: membership in the algebra is assumed, not verified");
    }
    Ok(report)
}

/// Checks `int F(rho1 chi) dchi = int F(rho2 chi) dchi` when `rho1`, `rho2`
/// have equal supports or equal unit sets. Without either hypothesis the
/// residual is reported with no verdict.
pub fn verify_orbit_invariance(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    rho1: &PositiveSemicharacter,
    rho2: &PositiveSemicharacter,
    scheme: &QuadratureScheme,
    tol: f64,
) -> Result<VerificationReport> {
    let hypothesis = if rho1.face() == rho2.face() {
        Hypothesis::Holds("equal supports S(rho1) = S(rho2)".into())
    } else if rho1.unit_face(sg)? == rho2.unit_face(sg)? {
        Hypothesis::Holds("equal unit sets S^rho1 = S^rho2".into())
    } else {
        Hypothesis::Unmet("neither supports nor unit sets agree".into())
    };
    let a = orbit_integral(sg, f, rho1, scheme)?;
    let b = orbit_integral(sg, f, rho2, scheme)?;
    let mut report = VerificationReport::new(
        "orbit-invariance",
        "orbit integrals agree for semicharacters with equal supports or unit sets",
    )
    .compare(a.value, b.value, tol);
    if matches!(hypothesis, Hypothesis::Unmet(_)) {
        report.pass = None;
    }
    report.hypothesis = hypothesis;
    report.scheme = Some(scheme.to_string());
    if let QuadratureScheme::MonteCarlo { seed, .. } = scheme {
        report.seed = Some(*seed);
    }
    report = report
        .with_detail("rho1", rho1)
        .with_detail("rho2", rho2)
        .with_detail("unit_face_rho1", rho1.unit_face(sg)?)
        .with_detail("unit_face_rho2", rho2.unit_face(sg)?);
    if f.has_custom() {
        report = report.with_note("custom evaluator: membership in the algebra is assumed, not verified");
    }
    Ok(report)
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights at `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Kronrod estimate and `|Kronrod - Gauss|` on `[a, b]`.
fn gk15(a: f64, b: f64, f: &mut dyn FnMut(f64) -> Complex64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Adaptive bisection on `[0, 1]`, splitting the interval with the largest
/// error estimate (earliest on ties) until the total is below `tol`.
fn adaptive_gk(
    f: &mut dyn FnMut(f64) -> Complex64,
    tol: f64,
    max_intervals: usize,
) -> (Complex64, f64) {
    let (v, e) = gk15(0.0, 1.0, f);
    let mut intervals = vec![(0.0, 1.0, v, e)];
    loop {
        let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
        let total: Complex64 = intervals.iter().map(|iv| iv.2).sum();
        let floor = 50.0 * f64::EPSILON * total.norm();
        if total_err <= tol.max(floor) || intervals.len() >= max_intervals {
            return (total, total_err);
        }
        let (k, _) = intervals
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, iv)| {
                if iv.3 > best.1 {
                    (i, iv.3)
                } else {
                    best
                }
            });
        let (a, b, _, _) = intervals[k];
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return (total, total_err);
        }
        let (v1, e1) = gk15(a, m, f);
        let (v2, e2) = gk15(m, b, f);
        intervals[k] = (a, m, v1, e1);
        intervals.push((m, b, v2, e2));
    }
}

fn nested_gk(
    d: usize,
    prefix: &mut Vec<f64>,
    f: &(dyn Fn(&[f64]) -> Complex64 + Sync),
    tol: f64,
    max_intervals: usize,
    evaluations: &mut usize,
) -> (Complex64, f64) {
    let depth = prefix.len();
    let mut inner_err = 0.0f64;
    let mut g = |x: f64| {
        prefix.push(x);
        let v = if depth + 1 == d {
            *evaluations += 1;
            f(prefix)
        } else {
            let (v, e) = nested_gk(d, prefix, f, tol, max_intervals, evaluations);
            inner_err = inner_err.max(e);
            v
        };
        prefix.pop();
        v
    };
    let (v, e) = adaptive_gk(&mut g, tol, max_intervals);
    (v, e + inner_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_algebra::AnalyticPolynomial;
    use crate::semigroup::{Element, FaceDesc};
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn trap(n: usize) -> QuadratureScheme {
        QuadratureScheme::TensorTrapezoid { nodes_per_dim: n }
    }

    #[test]
    fn monomials_integrate_to_zero() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        for a in 1..6 {
            let f = AnalyticPolynomial::monomial(&sg, c(1.0, 0.0), Element(vec![a])).unwrap();
            let v = integrate_x(&sg, &f.into(), &trap(8)).unwrap().value;
            assert!(v.norm() <= 1e-14);
        }
        let k = AnalyticElement::constant(&sg, c(2.5, -1.0));
        assert_eq!(integrate_x(&sg, &k, &trap(3)).unwrap().value, c(2.5, -1.0));
    }

    #[test]
    fn disc_polynomial_mean() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let p = AnalyticPolynomial::new(
            &sg,
            (0..=5)
                .map(|k| (c(1.0 / (k as f64 + 1.0), 0.0), Element(vec![k])))
                .collect(),
        )
        .unwrap();
        let v = integrate_x(&sg, &p.into(), &trap(11)).unwrap().value;
        assert!((v - c(1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn orbit_integral_examples() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let p: AnalyticElement = AnalyticPolynomial::new(
            &sg,
            vec![(c(3.0, 0.0), Element(vec![0])), (c(2.0, 1.0), Element(vec![2]))],
        )
        .unwrap()
        .into();
        let one = PositiveSemicharacter::one(&sg);
        assert_eq!(
            orbit_integral(&sg, &p, &one, &trap(5)).unwrap().value,
            integrate_x(&sg, &p, &trap(5)).unwrap().value
        );
        let rho = PositiveSemicharacter::full(&sg, vec![0.7]).unwrap();
        let v = orbit_integral(&sg, &p, &rho, &trap(5)).unwrap().value;
        assert!((v - c(3.0, 0.0)).norm() < 1e-14);
        let omega = PositiveSemicharacter::omega(&sg).unwrap();
        let v = orbit_integral(&sg, &p, &omega, &trap(5)).unwrap().value;
        assert!((v - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn orbit_invariance_hypotheses() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let p: AnalyticElement =
            AnalyticPolynomial::monomial(&sg, c(1.0, 0.0), Element(vec![1])).unwrap().into();
        let r1 = PositiveSemicharacter::full(&sg, vec![0.3]).unwrap();
        let r2 = PositiveSemicharacter::full(&sg, vec![1.1]).unwrap();
        let r = verify_orbit_invariance(&sg, &p, &r1, &r2, &trap(4), 1e-12).unwrap();
        assert_eq!(r.pass, Some(true));

        let r = verify_orbit_invariance(&sg, &p, &r1, &r1, &trap(4), 1e-12).unwrap();
        assert_eq!(r.residual, 0.0);

        let omega = PositiveSemicharacter::omega(&sg).unwrap();
        let one = PositiveSemicharacter::one(&sg);
        let r = verify_orbit_invariance(&sg, &p, &one, &omega, &trap(4), 1e-12).unwrap();
        assert!(matches!(r.hypothesis, Hypothesis::Unmet(_)));
        assert_eq!(r.pass, None);

        // A strictly contracting rho has unit set {e}, as omega does.
        let r = verify_orbit_invariance(&sg, &p, &r1, &omega, &trap(4), 1e-12).unwrap();
        assert!(matches!(r.hypothesis, Hypothesis::Holds(_)));
        assert_eq!(r.pass, Some(true));
    }

    #[test]
    fn orbit_invariance_on_partial_faces() {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let p: AnalyticElement = AnalyticPolynomial::new(
            &sg,
            vec![
                (c(1.0, 0.0), Element(vec![0, 0])),
                (c(0.5, 0.0), Element(vec![0, 1])),
                (c(0.25, 0.0), Element(vec![1, 0])),
            ],
        )
        .unwrap()
        .into();
        let r1 = PositiveSemicharacter::new(&sg, FaceDesc::new([1]), vec![0.0, 0.4]).unwrap();
        let r2 = PositiveSemicharacter::new(&sg, FaceDesc::new([1]), vec![0.0, 2.0]).unwrap();
        let r = verify_orbit_invariance(&sg, &p, &r1, &r2, &trap(4), 1e-12).unwrap();
        assert_eq!(r.pass, Some(true));
    }

    #[test]
    fn mean_value_needs_pointed_monoid() {
        let sg = SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap();
        let k = AnalyticElement::constant(&sg, c(1.0, 0.0));
        assert!(matches!(
            verify_mean_value(&sg, &k, &trap(3), 1e-12),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn mean_value_of_constant_plus_monomial() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let p: AnalyticElement = AnalyticPolynomial::new(
            &sg,
            vec![(c(3.0, 0.0), Element(vec![0])), (c(2.0, 0.0), Element(vec![1]))],
        )
        .unwrap()
        .into();
        let r = verify_mean_value(&sg, &p, &QuadratureScheme::default_for(&p), 1e-14).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn gauss_kronrod_handles_log_singularity() {
        // int_0^1 ln(x) dx = -1.
        let f = |t: &[f64]| c(t[0].ln(), 0.0);
        let scheme = QuadratureScheme::AdaptiveGaussKronrod {
            tol: 1e-12,
            max_intervals: 500,
        };
        let r = integrate_angles(1, &scheme, &f).unwrap();
        assert!((r.value - c(-1.0, 0.0)).norm() < 1e-11);
        // 2D: int cos(2 pi x) cos(2 pi y) + 1 = 1.
        let g = |t: &[f64]| c((TAU * t[0]).cos() * (TAU * t[1]).cos() + 1.0, 0.0);
        let r = integrate_angles(2, &scheme, &g).unwrap();
        assert!((r.value - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn monte_carlo_agrees_with_trapezoid() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let f = AnalyticElement::custom("exp(cos)", |psi: &Semicharacter| {
            let z = psi.value_at(&Element(vec![1]));
            c(z.re.exp(), 0.0)
        });
        let t = integrate_x(&sg, &f, &trap(64)).unwrap().value;
        let mc = integrate_x(&sg, &f, &QuadratureScheme::MonteCarlo { samples: 20_000, seed: 3 })
            .unwrap();
        assert!((mc.value - t).norm() <= 4.0 * mc.error.unwrap());
    }
}
