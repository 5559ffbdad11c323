//! Neighborhoods `V(zeta, delta)` in the weighted pairing, the covering
//! criterion, complex-tangential curves and their covers, and peak
//! functions.

mod cover;
mod curve;
mod peak;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_algebra::{character_gap, Weight};
use crate::report::VerificationReport;
use crate::semicharacter::Character;

pub use cover::{build_tangential_cover, CoverOptions, TangentialCover};
pub use curve::{
    check_complex_tangential, imaginary_power_curve, tangential_defect, unit_grid, Curve, PathFn,
    TrigPath, DIFF_STEP,
};
pub use peak::{peak_power_limit, zero_to_peak, PeakConstruction, PeakOptions, PowerStep};

/// `V(zeta, delta) = {chi : |1 - <chi, zeta>| < delta}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Neighborhood {
    pub center: Character,
    pub radius: f64,
}

/// A finite family of neighborhoods and the bound `epsilon` on their radii.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cover {
    pub pieces: Vec<Neighborhood>,
    pub epsilon: f64,
}

impl Cover {
    pub fn radius_sum(&self) -> f64 {
        self.pieces.iter().map(|p| p.radius).sum()
    }
}

/// `|1 - <chi, zeta>|` in the pairing of `l_2(S, w)`.
pub fn neighborhood_distance(chi: &Character, center: &Character, weight: &Weight) -> f64 {
    let delta: Vec<f64> = chi
        .theta()
        .iter()
        .zip(center.theta())
        .map(|(a, b)| a - b)
        .collect();
    character_gap(&delta, weight).norm()
}

pub fn in_neighborhood(chi: &Character, nbhd: &Neighborhood, weight: &Weight) -> bool {
    neighborhood_distance(chi, &nbhd.center, weight) < nbhd.radius
}

/// Passes iff the radii sum to less than `epsilon` and every sample lies in
/// some piece. Uncovered samples are listed by index.
pub fn check_cover(
    samples: &[Character],
    cover: &Cover,
    weight: &Weight,
) -> Result<VerificationReport> {
    if samples.is_empty() {
        return Err(Error::PreconditionFailed("no samples of K given".into()));
    }
    let uncovered: Vec<usize> = samples
        .iter()
        .enumerate()
        .filter(|(_, chi)| !cover.pieces.iter().any(|p| in_neighborhood(chi, p, weight)))
        .map(|(i, _)| i)
        .collect();
    let sum = cover.radius_sum();
    let radius_ok = sum < cover.epsilon;
    let mut report = VerificationReport::new(
        "cover-criterion",
        "K is covered by finitely many V(zeta_i, delta_i) with sum delta_i < epsilon",
    );
    report.lhs = Some(sum.into());
    report.rhs = Some(cover.epsilon.into());
    report.residual = (sum - cover.epsilon).max(0.0);
    report.tol = cover.epsilon;
    report.pass = Some(radius_ok && uncovered.is_empty());
    Ok(report
        .with_detail("radius_sum", sum)
        .with_detail("radius_sum_below_epsilon", radius_ok)
        .with_detail("uncovered", &uncovered)
        .with_detail("samples", samples.len())
        .with_detail("pieces", cover.pieces.len()))
}

/// The six properties a compact subset of `X` may have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SetProperty {
    /// Interpolation set.
    I,
    /// Peak-interpolation set.
    PI,
    /// Zero set.
    Z,
    /// Peak set.
    P,
    /// Null for every annihilating measure.
    N,
    /// Totally null.
    TN,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// A zero function whose sublevel set `|F| <= zero_tol` is `K`.
    ZeroFunction { sup_f: f64, zero_tol: f64 },
    /// A peak function checked on a grid.
    PeakFunction { grid_points: usize, max_h_off_k: f64 },
    /// A verified cover for every `epsilon` tried.
    Covers { epsilons: Vec<f64>, pieces: Vec<usize> },
    /// `|int h^n| -> 0` witnessed up to `n_max`.
    PowerLimit { n_max: usize, modulus: f64 },
    /// Concluded from another property through the equivalence of the six
    /// properties, whose topological hypotheses were asserted, not checked.
    Inferred { from: SetProperty, asserted_hypotheses: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyClaim {
    pub property: SetProperty,
    pub evidence: Evidence,
}

/// Hypotheses under which the six properties are equivalent. They are not
/// decidable here and are only ever asserted.
pub const EQUIVALENCE_HYPOTHESES: [&str; 3] = [
    "S is countable",
    "K is a G_delta set",
    "the complement of K in the semicharacter space is simply connected",
];

/// Claims implied by verified `evidence` for `property`: the property itself,
/// plus, when `assert_hypotheses` is set, the other five labeled as
/// inferred under asserted hypotheses.
pub fn infer_properties(
    property: SetProperty,
    evidence: Evidence,
    assert_hypotheses: bool,
) -> Vec<PropertyClaim> {
    let mut out = vec![PropertyClaim { property, evidence }];
    if assert_hypotheses {
        for other in [
            SetProperty::I,
            SetProperty::PI,
            SetProperty::Z,
            SetProperty::P,
            SetProperty::N,
            SetProperty::TN,
        ] {
            if other != property {
                out.push(PropertyClaim {
                    property: other,
                    evidence: Evidence::Inferred {
                        from: property,
                        asserted_hypotheses: EQUIVALENCE_HYPOTHESES
                            .iter()
                            .map(|s| s.to_string())
                            .collect(),
                    },
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::SemigroupDesc;

    fn setup() -> Weight {
        let sg = SemigroupDesc::polycube(1).unwrap();
        Weight::geometric(&sg, vec![0.5]).unwrap()
    }

    #[test]
    fn neighborhood_membership() {
        let w = setup();
        let zeta = Character::new(vec![0.3]);
        let n = Neighborhood {
            center: zeta.clone(),
            radius: 1e-9,
        };
        assert!(in_neighborhood(&zeta, &n, &w));
        let anti = Character::new(vec![0.8]);
        let dist = neighborhood_distance(&anti, &zeta, &w);
        // 1 - (1 - q)/(1 + q) for q = 1/2.
        assert!((dist - 2.0 / 3.0).abs() < 1e-12);
        let v = |r| Neighborhood {
            center: zeta.clone(),
            radius: r,
        };
        assert!(!in_neighborhood(&anti, &v(0.6), &w));
        assert!(in_neighborhood(&anti, &v(0.7), &w));
        assert!(!in_neighborhood(&zeta, &v(0.0), &w));
    }

    #[test]
    fn cover_checks() {
        let w = setup();
        let zeta = Character::new(vec![0.3]);
        let single = Cover {
            pieces: vec![Neighborhood {
                center: zeta.clone(),
                radius: 0.05,
            }],
            epsilon: 0.1,
        };
        assert!(check_cover(std::slice::from_ref(&zeta), &single, &w).unwrap().passed());

        let far = Character::new(vec![0.8]);
        let r = check_cover(&[zeta.clone(), far], &single, &w).unwrap();
        assert_eq!(r.pass, Some(false));
        assert_eq!(r.details["uncovered"], serde_json::json!([1]));

        let tight = Cover {
            pieces: vec![Neighborhood {
                center: zeta.clone(),
                radius: 0.1,
            }],
            epsilon: 0.1,
        };
        assert_eq!(check_cover(&[zeta], &tight, &w).unwrap().pass, Some(false));
    }

    #[test]
    fn inference_labels() {
        let claims = infer_properties(
            SetProperty::P,
            Evidence::PeakFunction {
                grid_points: 10,
                max_h_off_k: 0.9,
            },
            true,
        );
        assert_eq!(claims.len(), 6);
        assert!(claims[1..]
            .iter()
            .all(|c| matches!(c.evidence, Evidence::Inferred { .. })));
        assert_eq!(
            infer_properties(SetProperty::Z, Evidence::ZeroFunction { sup_f: 0.5, zero_tol: 1e-12 }, false).len(),
            1
        );
    }
}
