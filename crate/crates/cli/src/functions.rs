//! Functions named in configs.

use genan::function_algebra::{peak_at_point, PolynomialSpec};
use genan::{AnalyticElement, AnalyticPolynomial, Character, Result, SemigroupDesc, Weight};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// An analytic polynomial `sum c_i a_i^`.
    Polynomial(PolynomialSpec),
    /// `sum_k c_k z^k` in the disc coordinate `z` of `Z_+` or a numerical
    /// monoid; `coeffs[k] = [re, im]`.
    DiscPolynomial { coeffs: Vec<[f64; 2]> },
    /// The polydisc coordinate `z_index`.
    Coordinate {
        #[serde(default)]
        index: usize,
    },
    /// `conj(z_index)` on the boundary.
    ConjCoordinate {
        #[serde(default)]
        index: usize,
    },
    /// `(1 + <psi, chi0>)/2` in the weighted pairing.
    PointPeak { theta: Vec<f64> },
}

impl FunctionSpec {
    /// `coordinate` and `conj_coordinate` by bare name, otherwise JSON.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        match text {
            "coordinate" => Ok(FunctionSpec::Coordinate { index: 0 }),
            "conj_coordinate" => Ok(FunctionSpec::ConjCoordinate { index: 0 }),
            _ => serde_json::from_str(text).map_err(|e| format!("unrecognized function {text:?}: {e}")),
        }
    }

    pub fn build(&self, sg: &SemigroupDesc, weight: &Weight) -> Result<AnalyticElement> {
        match self {
            FunctionSpec::Polynomial(spec) => Ok(AnalyticPolynomial::from_spec(sg, spec)?.into()),
            FunctionSpec::DiscPolynomial { coeffs } => {
                let c: Vec<Complex64> = coeffs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                let degree = c.len().saturating_sub(1) as i64;
                AnalyticElement::polydisc(sg, "disc polynomial", Some(vec![degree]), move |z| {
                    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, ck| acc * z[0] + ck)
                })
            }
            FunctionSpec::Coordinate { index } => {
                let i = *index;
                let mut degree = vec![0; sg.ambient_dim()];
                if let Some(d) = degree.get_mut(i) {
                    *d = 1;
                }
                AnalyticElement::polydisc(sg, format!("z_{i}"), Some(degree), move |z| z[i])
            }
            FunctionSpec::ConjCoordinate { index } => {
                let i = *index;
                let mut degree = vec![0; sg.ambient_dim()];
                if let Some(d) = degree.get_mut(i) {
                    *d = 1;
                }
                AnalyticElement::polydisc(sg, format!("conj z_{i}"), Some(degree), move |z| z[i].conj())
            }
            FunctionSpec::PointPeak { theta } => {
                Ok(peak_at_point(sg, &Character::new(theta.clone()), weight))
            }
        }
    }
}
