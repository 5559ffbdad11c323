//! Evaluatable members of the algebra `A(S^)`: analytic polynomials, Laplace
//! transforms, weighted boundary functionals `psi -> <psi, b>`, user-supplied
//! evaluators, and their sums and products.

mod fejer;
mod maxmod;
mod polynomial;
mod weight;

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::semicharacter::{Character, Semicharacter};
use crate::semigroup::{Element, SemigroupDesc};

pub use fejer::{fejer_approx, fejer_projection, FejerApproximation};
pub use maxmod::max_modulus_check;
pub use polynomial::{AnalyticPolynomial, LaplaceTransform, PolynomialSpec, TermSpec};
pub use weight::{Weight, DEFAULT_TAIL_TOL};

/// Closure evaluating a function at a semicharacter.
pub type Evaluator = Arc<dyn Fn(&Semicharacter) -> Complex64 + Send + Sync>;

/// `psi -> <psi, b> = sum_s w(s) psi(s) conj(b(s))`, truncated to the
/// weight's retained elements.
#[derive(Clone, Debug)]
pub struct BoundaryFunctional {
    /// `(s, w(s) conj(b(s)))` over the retained elements.
    coeffs: Arc<Vec<(Complex64, Element)>>,
    b_sup: f64,
    tail_bound: f64,
}

impl BoundaryFunctional {
    pub fn new(weight: &Weight, b: impl Fn(&Element) -> Complex64) -> Self {
        let mut b_sup = 0.0f64;
        let coeffs = weight
            .retained()
            .iter()
            .map(|(s, w)| {
                let v = b(s);
                b_sup = b_sup.max(v.norm());
                (w * v.conj(), s.clone())
            })
            .collect();
        BoundaryFunctional {
            coeffs: Arc::new(coeffs),
            b_sup,
            tail_bound: weight.tail_bound(),
        }
    }

    /// `b = chi` for a character `chi`.
    pub fn character(weight: &Weight, chi: &Character) -> Self {
        Self::new(weight, |s| chi.value_at(s))
    }

    pub fn error_bound(&self) -> f64 {
        self.b_sup * self.tail_bound
    }

    pub fn eval(&self, psi: &Semicharacter) -> Complex64 {
        self.coeffs.iter().map(|(c, s)| c * psi.value_at(s)).sum()
    }
}

/// A function given by an evaluator with no verified analyticity.
#[derive(Clone)]
pub struct CustomElement {
    pub evaluator: Evaluator,
    /// Why the function is believed to belong to the algebra.
    pub note: String,
    /// Per-coordinate degree bound, when the function is a trigonometric
    /// polynomial on the boundary.
    pub degree: Option<Vec<i64>>,
}

impl fmt::Debug for CustomElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomElement")
            .field("note", &self.note)
            .field("degree", &self.degree)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub enum AnalyticElement {
    Polynomial(AnalyticPolynomial),
    Laplace(LaplaceTransform),
    BoundaryFunctional(BoundaryFunctional),
    Custom(CustomElement),
    /// `sum c_i F_i`.
    Sum(Vec<(Complex64, AnalyticElement)>),
    /// `prod F_i`.
    Product(Vec<AnalyticElement>),
}

impl From<AnalyticPolynomial> for AnalyticElement {
    fn from(p: AnalyticPolynomial) -> Self {
        AnalyticElement::Polynomial(p)
    }
}

impl AnalyticElement {
    pub fn constant(sg: &SemigroupDesc, c: Complex64) -> Self {
        AnalyticPolynomial::constant(sg, c).into()
    }

    pub fn custom(
        note: impl Into<String>,
        f: impl Fn(&Semicharacter) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        AnalyticElement::Custom(CustomElement {
            evaluator: Arc::new(f),
            note: note.into(),
            degree: None,
        })
    }

    /// `F(z)` for a function of the polydisc coordinates of `Z_+^n` or of a
    /// numerical monoid.
    pub fn polydisc(
        sg: &SemigroupDesc,
        note: impl Into<String>,
        degree: Option<Vec<i64>>,
        f: impl Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let probe = Semicharacter::one(sg);
        probe.polydisc_point(sg)?;
        let sg = sg.clone();
        Ok(AnalyticElement::Custom(CustomElement {
            evaluator: Arc::new(move |psi| {
                let z = psi.polydisc_point(&sg).expect("family checked at construction");
                f(&z)
            }),
            note: note.into(),
            degree,
        }))
    }

    pub fn eval(&self, psi: &Semicharacter) -> Complex64 {
        match self {
            AnalyticElement::Polynomial(p) => p.eval(psi),
            AnalyticElement::Laplace(f) => f.eval(psi),
            AnalyticElement::BoundaryFunctional(b) => b.eval(psi),
            AnalyticElement::Custom(c) => (c.evaluator)(psi),
            AnalyticElement::Sum(parts) => parts.iter().map(|(c, f)| c * f.eval(psi)).sum(),
            AnalyticElement::Product(parts) => parts.iter().map(|f| f.eval(psi)).product(),
        }
    }

    /// Value and a bound on its truncation error. Only boundary functionals
    /// are truncated; custom evaluators report zero.
    pub fn eval_with_error(&self, psi: &Semicharacter) -> (Complex64, f64) {
        match self {
            AnalyticElement::BoundaryFunctional(b) => (b.eval(psi), b.error_bound()),
            AnalyticElement::Sum(parts) => parts.iter().fold(
                (Complex64::new(0.0, 0.0), 0.0),
                |(v, e), (c, f)| {
                    let (fv, fe) = f.eval_with_error(psi);
                    (v + c * fv, e + c.norm() * fe)
                },
            ),
            AnalyticElement::Product(parts) => {
                let evals: Vec<_> = parts.iter().map(|f| f.eval_with_error(psi)).collect();
                let value = evals.iter().map(|(v, _)| v).product();
                let upper: f64 = evals.iter().map(|(v, e)| v.norm() + e).product();
                let exact: f64 = evals.iter().map(|(v, _)| v.norm()).product();
                (value, upper - exact)
            }
            _ => (self.eval(psi), 0.0),
        }
    }

    /// Exponents and coefficients when the function is a finite sum
    /// `sum c_s psi(s)`.
    pub fn term_list(&self) -> Option<Vec<(Complex64, Element)>> {
        match self {
            AnalyticElement::Polynomial(p) => Some(p.terms().to_vec()),
            AnalyticElement::Laplace(f) => {
                Some(f.values().iter().map(|(s, c)| (*c, s.clone())).collect())
            }
            AnalyticElement::BoundaryFunctional(b) => Some(b.coeffs.to_vec()),
            _ => None,
        }
    }

    /// Per-coordinate degree bound of the boundary restriction, if it is a
    /// trigonometric polynomial.
    pub fn degree_bound(&self) -> Option<Vec<i64>> {
        match self {
            AnalyticElement::Polynomial(p) => Some(p.degree_bound()),
            AnalyticElement::Laplace(f) => Some(polynomial::degree_bound(f.values().keys())),
            AnalyticElement::BoundaryFunctional(b) => {
                Some(polynomial::degree_bound(b.coeffs.iter().map(|(_, s)| s)))
            }
            AnalyticElement::Custom(c) => c.degree.clone(),
            AnalyticElement::Sum(parts) => {
                let mut out: Option<Vec<i64>> = None;
                for (_, f) in parts {
                    let d = f.degree_bound()?;
                    out = Some(match out {
                        None => d,
                        Some(o) if d.is_empty() => o,
                        Some(o) if o.is_empty() => d,
                        Some(o) => o.iter().zip(&d).map(|(a, b)| *a.max(b)).collect(),
                    });
                }
                out
            }
            AnalyticElement::Product(parts) => {
                let mut out: Option<Vec<i64>> = None;
                for f in parts {
                    let d = f.degree_bound()?;
                    out = Some(match out {
                        None => d,
                        Some(o) if d.is_empty() => o,
                        Some(o) if o.is_empty() => d,
                        Some(o) => o.iter().zip(&d).map(|(a, b)| a + b).collect(),
                    });
                }
                out
            }
        }
    }

    /// Whether any part is a custom evaluator, whose membership in the
    /// algebra is asserted rather than verified.
    pub fn has_custom(&self) -> bool {
        match self {
            AnalyticElement::Custom(_) => true,
            AnalyticElement::Sum(parts) => parts.iter().any(|(_, f)| f.has_custom()),
            AnalyticElement::Product(parts) => parts.iter().any(|f| f.has_custom()),
            _ => false,
        }
    }

    pub fn scaled(self, c: Complex64) -> Self {
        AnalyticElement::Sum(vec![(c, self)])
    }

    pub fn power(&self, n: usize) -> Self {
        AnalyticElement::Product(vec![self.clone(); n])
    }
}

/// `sum_retained w(s) x(s) conj(y(s))` and a bound `sup|x| sup|y| tail` on
/// the truncation error.
pub fn inner_product(
    x: impl Fn(&Element) -> Complex64,
    y: impl Fn(&Element) -> Complex64,
    weight: &Weight,
) -> (Complex64, f64) {
    let (mut sx, mut sy) = (0.0f64, 0.0f64);
    let mut acc = Complex64::new(0.0, 0.0);
    for (s, w) in weight.retained() {
        let (a, b) = (x(s), y(s));
        sx = sx.max(a.norm());
        sy = sy.max(b.norm());
        acc += w * a * b.conj();
    }
    (acc, sx * sy * weight.tail_bound())
}

/// `1 - <chi_x, chi_y>` for characters whose angles differ by `dtheta`,
/// summed as `sum w(s) (1 - e^{i phi_s})` so that it vanishes exactly at
/// `dtheta = 0`. The truncation error is at most `2 * tail_bound`.
pub fn character_gap(dtheta: &[f64], weight: &Weight) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (s, w) in weight.retained() {
        let phase = TAU * s.dot(dtheta);
        let half = (0.5 * phase).sin();
        acc += w * Complex64::new(2.0 * half * half, -phase.sin());
    }
    acc
}

/// `h(psi) = (1 + <psi, chi0>)/2`: equal to 1 at `chi0` and of modulus
/// below 1 at every other semicharacter.
pub fn peak_at_point(sg: &SemigroupDesc, chi0: &Character, weight: &Weight) -> AnalyticElement {
    let half = Complex64::new(0.5, 0.0);
    AnalyticElement::Sum(vec![
        (half, AnalyticElement::constant(sg, Complex64::new(1.0, 0.0))),
        (
            half,
            AnalyticElement::BoundaryFunctional(BoundaryFunctional::character(weight, chi0)),
        ),
    ])
}

/// Status of the hypothesis that `S` is a cone in its group of fractions:
/// it always holds for polycubes and numerical monoids and is not decided
/// for lattice cones.
pub fn cone_hypothesis_status(sg: &SemigroupDesc) -> &'static str {
    match sg.family() {
        crate::semigroup::Family::PolyCube | crate::semigroup::Family::Numerical => "holds",
        crate::semigroup::Family::LatticeCone => "unchecked hypothesis",
    }
}
