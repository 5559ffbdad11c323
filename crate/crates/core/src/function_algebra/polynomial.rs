//! Analytic polynomials `p = sum c_i a_i^` and finitely supported Laplace
//! transforms.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semicharacter::Semicharacter;
use crate::semigroup::{Element, SemigroupDesc};

/// Wire format of one polynomial term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub re: f64,
    pub im: f64,
    pub elem: Vec<i64>,
}

/// Wire format `{"terms":[{"re":..,"im":..,"elem":[..]}, ..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialSpec {
    pub terms: Vec<TermSpec>,
}

/// A finite combination of evaluation functions with distinct exponents in
/// `S`, kept sorted by exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticPolynomial {
    terms: Vec<(Complex64, Element)>,
}

impl Serialize for AnalyticPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl AnalyticPolynomial {
    pub fn new(sg: &SemigroupDesc, terms: Vec<(Complex64, Element)>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (c, s) in terms {
            if s.0.len() != sg.ambient_dim() {
                return Err(Error::DimensionMismatch {
                    expected: sg.ambient_dim(),
                    got: s.0.len(),
                });
            }
            sg.require_member(s.coords())?;
            if seen.insert(s.clone(), c).is_some() {
                return Err(Error::PreconditionFailed(format!(
                    "exponent {:?} appears twice",
                    s.0
                )));
            }
        }
        Ok(AnalyticPolynomial {
            terms: seen.into_iter().map(|(s, c)| (c, s)).collect(),
        })
    }

    pub fn from_spec(sg: &SemigroupDesc, spec: &PolynomialSpec) -> Result<Self> {
        Self::new(
            sg,
            spec.terms
                .iter()
                .map(|t| (Complex64::new(t.re, t.im), Element(t.elem.clone())))
                .collect(),
        )
    }

    pub fn to_spec(&self) -> PolynomialSpec {
        PolynomialSpec {
            terms: self
                .terms
                .iter()
                .map(|(c, s)| TermSpec {
                    re: c.re,
                    im: c.im,
                    elem: s.0.clone(),
                })
                .collect(),
        }
    }

    pub fn constant(sg: &SemigroupDesc, c: Complex64) -> Self {
        AnalyticPolynomial {
            terms: vec![(c, sg.identity())],
        }
    }

    pub fn monomial(sg: &SemigroupDesc, c: Complex64, s: Element) -> Result<Self> {
        Self::new(sg, vec![(c, s)])
    }

    pub fn terms(&self) -> &[(Complex64, Element)] {
        &self.terms
    }

    pub fn coefficient(&self, s: &Element) -> Complex64 {
        self.terms
            .binary_search_by(|(_, t)| t.cmp(s))
            .map(|i| self.terms[i].0)
            .unwrap_or_default()
    }

    pub fn eval(&self, psi: &Semicharacter) -> Complex64 {
        self.terms.iter().map(|(c, s)| c * psi.value_at(s)).sum()
    }

    /// Largest `|s_i|` over the exponents, per coordinate.
    pub fn degree_bound(&self) -> Vec<i64> {
        degree_bound(self.terms.iter().map(|(_, s)| s))
    }

    /// Random polynomial with every exponent of `S` in the box of side
    /// `degree` and coefficients uniform in the unit square.
    pub fn random<R: Rng + ?Sized>(sg: &SemigroupDesc, degree: i64, rng: &mut R) -> Result<Self> {
        let terms = sg
            .elements_in_box(degree)?
            .into_iter()
            .map(|s| {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                (c, s)
            })
            .collect();
        Ok(AnalyticPolynomial { terms })
    }

    /// The same function as a finitely supported Laplace transform.
    pub fn to_laplace(&self) -> LaplaceTransform {
        LaplaceTransform {
            values: self.terms.iter().map(|(c, s)| (s.clone(), *c)).collect(),
        }
    }
}

pub(crate) fn degree_bound<'a>(elems: impl Iterator<Item = &'a Element>) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    for s in elems {
        if out.is_empty() {
            out = vec![0; s.0.len()];
        }
        for (o, x) in out.iter_mut().zip(s.coords()) {
            *o = (*o).max(x.abs());
        }
    }
    out
}

/// `f^(psi) = sum f(s) psi(s)` for a finitely supported `f : S -> C`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplaceTransform {
    values: BTreeMap<Element, Complex64>,
}

impl LaplaceTransform {
    pub fn new(sg: &SemigroupDesc, values: BTreeMap<Element, Complex64>) -> Result<Self> {
        for s in values.keys() {
            sg.require_member(s.coords())?;
        }
        Ok(LaplaceTransform { values })
    }

    pub fn values(&self) -> &BTreeMap<Element, Complex64> {
        &self.values
    }

    pub fn eval(&self, psi: &Semicharacter) -> Complex64 {
        self.values.iter().map(|(s, c)| c * psi.value_at(s)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semicharacter::{Character, PositiveSemicharacter};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn omega_kills_nonconstant_terms() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let p = AnalyticPolynomial::new(
            &sg,
            vec![(c(3.0, 0.0), Element(vec![0])), (c(2.0, 0.0), Element(vec![1]))],
        )
        .unwrap();
        assert_eq!(p.eval(&Semicharacter::omega(&sg).unwrap()), c(3.0, 0.0));
    }

    #[test]
    fn coordinate_function() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let p = AnalyticPolynomial::monomial(&sg, c(1.0, 0.0), Element(vec![1])).unwrap();
        let psi = Semicharacter::from_polydisc(&sg, &[c(0.0, 0.5)]).unwrap();
        assert!((p.eval(&psi) - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_terms() {
        let sg = SemigroupDesc::numerical(&[2, 3]).unwrap();
        assert!(AnalyticPolynomial::monomial(&sg, c(1.0, 0.0), Element(vec![1])).is_err());
        let dup = vec![(c(1.0, 0.0), Element(vec![2])), (c(1.0, 0.0), Element(vec![2]))];
        assert!(AnalyticPolynomial::new(&sg, dup).is_err());
    }

    #[test]
    fn json_round_trip() {
        let sg = SemigroupDesc::polycube(1).unwrap();
        let text = r#"{"terms":[{"re":3.0,"im":0.0,"elem":[0]},{"re":2.0,"im":0.0,"elem":[1]}]}"#;
        let spec: PolynomialSpec = serde_json::from_str(text).unwrap();
        let p = AnalyticPolynomial::from_spec(&sg, &spec).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), text);
    }

    #[test]
    fn laplace_matches_polynomial_exactly() {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = AnalyticPolynomial::random(&sg, 4, &mut rng).unwrap();
        let f = p.to_laplace();
        for _ in 0..20 {
            let psi = Semicharacter::new(
                PositiveSemicharacter::full(&sg, vec![rng.gen(), rng.gen()]).unwrap(),
                Character::new(vec![rng.gen(), rng.gen()]),
            )
            .unwrap();
            assert_eq!(p.eval(&psi), f.eval(&psi));
        }
    }

    #[test]
    fn random_polynomial_shape() {
        let sg = SemigroupDesc::polycube(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = AnalyticPolynomial::random(&sg, 5, &mut rng).unwrap();
        assert_eq!(p.terms().len(), 36);
        assert_eq!(p.degree_bound(), vec![5, 5]);
    }
}
