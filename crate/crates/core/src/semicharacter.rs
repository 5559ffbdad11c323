//! Semicharacters of a finitely generated monoid.
//!
//! Every semicharacter factors as `psi = rho * chi` with `rho` nonnegative and
//! `chi` a character. On a finitely generated submonoid of `Z^d` the
//! nonnegative part is `rho(s) = exp(-lambda . s)` on the submonoid generated
//! by a prime face and zero off it; the log of `rho` is additive on its support
//! and extends to a linear functional on the support's group of fractions,
//! which is where the `lambda` parameterization comes from. Characters are
//! `chi(s) = exp(2 pi i theta . s)` with `theta` reduced mod 1.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::{Element, FaceDesc, Family, SemigroupDesc};

/// Slack allowed on `lambda . g >= 0` for face generators.
pub const LAMBDA_TOL: f64 = 1e-12;

/// Membership test for the support `S(rho)` of a nonnegative semicharacter,
/// valid for elements already known to lie in `S`.
#[derive(Clone, Debug, PartialEq)]
enum Support {
    Full,
    Unit,
    /// `s` is in the support iff `c . s == 0`.
    Exposed(Vec<i64>),
}

impl Support {
    fn contains(&self, s: &[i64]) -> bool {
        match self {
            Support::Full => true,
            Support::Unit => s.iter().all(|&x| x == 0),
            Support::Exposed(c) => c.iter().zip(s).map(|(a, b)| a * b).sum::<i64>() == 0,
        }
    }
}

/// Nonnegative semicharacter `rho`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositiveSemicharacter {
    face: FaceDesc,
    lambda: Vec<f64>,
    #[serde(skip)]
    support: Support,
}

impl PositiveSemicharacter {
    /// Validates the face (prime) and `lambda` (nonnegative on the face) and
    /// canonicalizes the face to its closure.
    pub fn new(sg: &SemigroupDesc, face: FaceDesc, lambda: Vec<f64>) -> Result<Self> {
        if lambda.len() != sg.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: sg.ambient_dim(),
                got: lambda.len(),
            });
        }
        if lambda.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSemicharacter("lambda must be finite".into()));
        }
        if !sg.is_prime_face(&face)? {
            return Err(Error::InvalidSemicharacter(format!(
                "face {:?} is not prime: its complement is not an ideal",
                face.gen_subset
            )));
        }
        let face = sg.face_closure(&face)?;
        for &j in &face.gen_subset {
            let g = &sg.generators()[j];
            let dot = Element(g.clone()).dot(&lambda);
            let scale = 1.0 + g.iter().map(|&x| (x as f64).abs()).sum::<f64>()
                * lambda.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if dot < -LAMBDA_TOL * scale {
                return Err(Error::InvalidSemicharacter(format!(
                    "lambda . g = {dot} < 0 for face generator {g:?}; values would exceed 1"
                )));
            }
        }
        let support = if face.gen_subset.len() == sg.num_generators() {
            Support::Full
        } else if face.is_empty() {
            Support::Unit
        } else {
            Support::Exposed(sg.exposing_functional(&face)?)
        };
        Ok(PositiveSemicharacter {
            face,
            lambda,
            support,
        })
    }

    /// The constant semicharacter 1.
    pub fn one(sg: &SemigroupDesc) -> Self {
        PositiveSemicharacter {
            face: sg.full_face(),
            lambda: vec![0.0; sg.ambient_dim()],
            support: Support::Full,
        }
    }

    /// Strictly positive semicharacter `exp(-lambda . s)` on all of `S`.
    pub fn full(sg: &SemigroupDesc, lambda: Vec<f64>) -> Result<Self> {
        Self::new(sg, sg.full_face(), lambda)
    }

    /// The indicator `omega` of `{e}`; fails unless `S` is pointed.
    pub fn omega(sg: &SemigroupDesc) -> Result<Self> {
        Self::new(sg, FaceDesc::empty(), vec![0.0; sg.ambient_dim()]).map_err(|_| {
            Error::PreconditionFailed(
                "omega is a semicharacter only for pointed monoids (S ∩ S^-1 = {e})".into(),
            )
        })
    }

    pub fn face(&self) -> &FaceDesc {
        &self.face
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn in_support(&self, s: &Element) -> bool {
        self.support.contains(s.coords())
    }

    /// Whether `rho > 0` on all of `S`.
    pub fn is_strictly_positive(&self) -> bool {
        self.support == Support::Full
    }

    /// Whether the support is `{e}`, i.e. `rho = omega`.
    pub fn is_omega(&self) -> bool {
        self.support == Support::Unit
    }

    /// Whether `rho` is identically 1.
    pub fn is_one(&self, sg: &SemigroupDesc) -> bool {
        self.is_strictly_positive()
            && sg
                .generators()
                .iter()
                .all(|g| Element(g.clone()).dot(&self.lambda).abs() <= LAMBDA_TOL)
    }

    /// `rho(s)` for `s` already known to be a member of `S`.
    pub fn value_at(&self, s: &Element) -> f64 {
        if self.in_support(s) {
            (-s.dot(&self.lambda)).exp()
        } else {
            0.0
        }
    }

    pub fn eval(&self, sg: &SemigroupDesc, s: &Element) -> Result<f64> {
        sg.require_member(s.coords())?;
        Ok(self.value_at(s))
    }

    /// Face of the unit set `S^rho = {s : rho(s) = 1}`: the face generators on
    /// which `lambda` vanishes, closed under the monoid.
    pub fn unit_face(&self, sg: &SemigroupDesc) -> Result<FaceDesc> {
        let scale = 1.0 + self.lambda.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let zero = FaceDesc::new(self.face.gen_subset.iter().copied().filter(|&j| {
            Element(sg.generators()[j].clone()).dot(&self.lambda).abs() <= LAMBDA_TOL * scale
        }));
        sg.face_closure(&zero)
    }

    /// `rho^z`. Allowed for `Re z > 0`, for `z = 0` (the indicator of the
    /// support) and for purely imaginary `z` when `rho > 0` everywhere.
    pub fn power(&self, z: Complex64) -> Result<Semicharacter> {
        let invalid = |reason: &str| Error::InvalidExponent {
            re: z.re,
            im: z.im,
            reason: reason.into(),
        };
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(invalid("exponent must be finite"));
        }
        if z.re < 0.0 {
            return Err(invalid("real part must be nonnegative"));
        }
        if z.re == 0.0 && z.im != 0.0 && !self.is_strictly_positive() {
            return Err(invalid(
                "purely imaginary powers need a semicharacter positive on all of S",
            ));
        }
        let lambda = self.lambda.iter().map(|l| z.re * l).collect();
        let theta = self.lambda.iter().map(|l| -z.im * l / TAU).collect();
        Ok(Semicharacter {
            rho: PositiveSemicharacter {
                face: self.face.clone(),
                lambda,
                support: self.support.clone(),
            },
            chi: Character::new(theta),
        })
    }

    /// `rho` viewed as a semicharacter with trivial character part.
    pub fn as_semicharacter(&self) -> Semicharacter {
        Semicharacter {
            chi: Character::trivial(self.lambda.len()),
            rho: self.clone(),
        }
    }
}

/// A character `chi(s) = exp(2 pi i theta . s)`, `theta` in `[0,1)^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Character {
    #[serde(deserialize_with = "deserialize_theta")]
    theta: Vec<f64>,
}

fn deserialize_theta<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    let raw = Vec::<f64>::deserialize(d)?;
    Ok(raw.into_iter().map(wrap_unit).collect())
}

/// Canonical representative of `x mod 1` in `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl Character {
    pub fn new(theta: Vec<f64>) -> Self {
        Character {
            theta: theta.into_iter().map(wrap_unit).collect(),
        }
    }

    pub fn trivial(dim: usize) -> Self {
        Character {
            theta: vec![0.0; dim],
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// Phase `theta . s` reduced mod 1.
    pub fn phase(&self, s: &Element) -> f64 {
        wrap_unit(s.dot(&self.theta))
    }

    pub fn value_at(&self, s: &Element) -> Complex64 {
        Complex64::cis(TAU * self.phase(s))
    }

    pub fn eval(&self, sg: &SemigroupDesc, s: &Element) -> Result<Complex64> {
        sg.require_member(s.coords())?;
        Ok(self.value_at(s))
    }

    /// Product of characters (sum of angles mod 1).
    pub fn multiply(&self, other: &Character) -> Character {
        Character::new(self.theta.iter().zip(&other.theta).map(|(a, b)| a + b).collect())
    }

    /// Largest per-coordinate circular distance between angle vectors.
    pub fn circular_distance(&self, other: &Character) -> f64 {
        self.theta
            .iter()
            .zip(&other.theta)
            .map(|(a, b)| {
                let d = (a - b).rem_euclid(1.0);
                d.min(1.0 - d)
            })
            .fold(0.0, f64::max)
    }

    /// Value of the extension of `chi` to the group of fractions at `a^{-1} b`.
    pub fn extend_to_group(&self, sg: &SemigroupDesc, a: &Element, b: &Element) -> Result<Complex64> {
        Ok(self.eval(sg, a)?.conj() * self.eval(sg, b)?)
    }
}

/// Wire format of a semicharacter: `{"face":[..],"lambda":[..],"theta":[..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemicharacterSpec {
    pub face: FaceDesc,
    pub lambda: Vec<f64>,
    #[serde(default)]
    pub theta: Option<Vec<f64>>,
}

/// A semicharacter `psi = rho * chi`.
#[derive(Clone, Debug, PartialEq)]
pub struct Semicharacter {
    rho: PositiveSemicharacter,
    chi: Character,
}

impl Serialize for Semicharacter {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(serializer)
    }
}

impl Semicharacter {
    pub fn new(rho: PositiveSemicharacter, chi: Character) -> Result<Self> {
        if rho.lambda.len() != chi.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.lambda.len(),
                got: chi.dim(),
            });
        }
        Ok(Semicharacter { rho, chi })
    }

    pub fn from_spec(sg: &SemigroupDesc, spec: &SemicharacterSpec) -> Result<Self> {
        let rho = PositiveSemicharacter::new(sg, spec.face.clone(), spec.lambda.clone())?;
        let theta = spec
            .theta
            .clone()
            .unwrap_or_else(|| vec![0.0; sg.ambient_dim()]);
        Semicharacter::new(rho, Character::new(theta))
    }

    pub fn to_spec(&self) -> SemicharacterSpec {
        SemicharacterSpec {
            face: self.rho.face.clone(),
            lambda: self.rho.lambda.clone(),
            theta: Some(self.chi.theta.clone()),
        }
    }

    /// The character `chi` as a semicharacter (`rho = 1`).
    pub fn character(sg: &SemigroupDesc, chi: Character) -> Self {
        Semicharacter {
            rho: PositiveSemicharacter::one(sg),
            chi,
        }
    }

    pub fn one(sg: &SemigroupDesc) -> Self {
        PositiveSemicharacter::one(sg).as_semicharacter()
    }

    pub fn omega(sg: &SemigroupDesc) -> Result<Self> {
        Ok(PositiveSemicharacter::omega(sg)?.as_semicharacter())
    }

    pub fn rho(&self) -> &PositiveSemicharacter {
        &self.rho
    }

    pub fn chi(&self) -> &Character {
        &self.chi
    }

    /// Whether `|psi| = 1` everywhere.
    pub fn is_character(&self, sg: &SemigroupDesc) -> bool {
        self.rho.is_one(sg)
    }

    /// `psi(s)` for `s` already known to be in `S`.
    pub fn value_at(&self, s: &Element) -> Complex64 {
        if !self.rho.in_support(s) {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar((-s.dot(&self.rho.lambda)).exp(), TAU * self.chi.phase(s))
    }

    pub fn eval(&self, sg: &SemigroupDesc, s: &Element) -> Result<Complex64> {
        sg.require_member(s.coords())?;
        Ok(self.value_at(s))
    }

    /// Pointwise product. The support of the product is the intersection of
    /// the supports, which for closed faces is the face intersection.
    pub fn multiply(&self, sg: &SemigroupDesc, other: &Semicharacter) -> Result<Semicharacter> {
        let face = self.rho.face.intersection(&other.rho.face);
        let lambda = self
            .rho
            .lambda
            .iter()
            .zip(&other.rho.lambda)
            .map(|(a, b)| a + b)
            .collect();
        let rho = PositiveSemicharacter::new(sg, face, lambda)?;
        Semicharacter::new(rho, self.chi.multiply(&other.chi))
    }

    /// `rho * chi'` for a different character; keeps the nonnegative part.
    pub fn with_character(&self, chi: Character) -> Semicharacter {
        Semicharacter {
            rho: self.rho.clone(),
            chi,
        }
    }

    /// `psi * chi_theta`, the translate of `psi` by the character with angles
    /// `theta`.
    pub fn rotated(&self, theta: &[f64]) -> Semicharacter {
        Semicharacter {
            rho: self.rho.clone(),
            chi: Character::new(self.chi.theta.iter().zip(theta).map(|(a, b)| a + b).collect()),
        }
    }

    /// Returns `(rho, chi)` after checking `|psi(s)| = rho(s)` on sampled
    /// members of `S`.
    pub fn decompose(&self, sg: &SemigroupDesc) -> Result<(PositiveSemicharacter, Character)> {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let s = sg.random_element(&mut rng, 4);
            let lhs = self.value_at(&s).norm();
            let rhs = self.rho.value_at(&s);
            if (lhs - rhs).abs() > 1e-12 * (1.0 + rhs) {
                return Err(Error::InvalidSemicharacter(format!(
                    "|psi(s)| = {lhs} differs from rho(s) = {rhs} at {:?}",
                    s.0
                )));
            }
        }
        Ok((self.rho.clone(), self.chi.clone()))
    }

    /// `psi_r = rho_c^{-ln r} * psi` with `rho_c(s) = exp(-c . s)` for the
    /// monoid's positive functional `c`: `r = 1` gives `psi`, `r -> 0` tends
    /// to `omega`, and `r = 0` is `omega` itself.
    pub fn toward_omega(&self, sg: &SemigroupDesc, r: f64) -> Result<Semicharacter> {
        let c = sg.positive_functional().ok_or_else(|| {
            Error::PreconditionFailed("radial paths to omega need a pointed monoid".into())
        })?;
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::PreconditionFailed(format!("radius {r} outside [0,1]")));
        }
        if r == 0.0 {
            return Semicharacter::omega(sg);
        }
        let t = -r.ln();
        let lambda = self
            .rho
            .lambda
            .iter()
            .zip(c)
            .map(|(l, &ci)| l + t * ci as f64)
            .collect();
        Ok(Semicharacter {
            rho: PositiveSemicharacter {
                face: self.rho.face.clone(),
                lambda,
                support: self.rho.support.clone(),
            },
            chi: self.chi.clone(),
        })
    }

    /// Coordinates `z_i` of `psi` in the closed polydisc, for `Z_+^n` and for
    /// numerical monoids (where `psi(s) = z^s`).
    pub fn polydisc_point(&self, sg: &SemigroupDesc) -> Result<Vec<Complex64>> {
        match sg.family() {
            Family::PolyCube => Ok((0..sg.ambient_dim())
                .map(|i| {
                    let mut e = vec![0; sg.ambient_dim()];
                    e[i] = 1;
                    self.value_at(&Element(e))
                })
                .collect()),
            Family::Numerical => Ok(vec![if self.rho.is_omega() {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar((-self.rho.lambda[0]).exp(), TAU * self.chi.theta[0])
            }]),
            Family::LatticeCone => Err(Error::Unsupported(
                "polydisc coordinates exist only for polycube and numerical monoids".into(),
            )),
        }
    }

    /// The semicharacter at polydisc coordinates `z` (`Z_+^n` or numerical
    /// monoids). Zero coordinates drop the corresponding generator from the
    /// support.
    pub fn from_polydisc(sg: &SemigroupDesc, z: &[Complex64]) -> Result<Self> {
        if z.len() != sg.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: sg.ambient_dim(),
                got: z.len(),
            });
        }
        if sg.family() == Family::LatticeCone {
            return Err(Error::Unsupported(
                "polydisc coordinates exist only for polycube and numerical monoids".into(),
            ));
        }
        if let Some(w) = z.iter().find(|w| w.norm() > 1.0) {
            return Err(Error::InvalidSemicharacter(format!("|{w}| > 1 is outside the disc")));
        }
        let face = match sg.family() {
            Family::PolyCube => FaceDesc::new((0..z.len()).filter(|&i| z[i].norm() > 0.0)),
            _ if z[0].norm() > 0.0 => sg.full_face(),
            _ => FaceDesc::empty(),
        };
        let lambda = z
            .iter()
            .map(|w| if w.norm() > 0.0 { -w.norm().ln() } else { 0.0 })
            .collect();
        let theta = z.iter().map(|w| w.arg() / TAU).collect();
        Semicharacter::new(PositiveSemicharacter::new(sg, face, lambda)?, Character::new(theta))
    }
}

/// Random semicharacter: a uniformly chosen prime face from `faces`, a random
/// admissible `lambda`, and a uniform character.
pub fn sample_semicharacter<R: Rng + ?Sized>(
    sg: &SemigroupDesc,
    faces: &[FaceDesc],
    rng: &mut R,
) -> Result<Semicharacter> {
    let d = sg.ambient_dim();
    let face = faces[rng.gen_range(0..faces.len())].clone();
    let lambda = match sg.family() {
        Family::PolyCube | Family::Numerical => {
            (0..d).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect()
        }
        Family::LatticeCone => {
            let admissible = |l: &[f64]| {
                face.gen_subset
                    .iter()
                    .all(|&j| Element(sg.generators()[j].clone()).dot(l) >= 0.0)
            };
            let mut found = None;
            for _ in 0..200 {
                let l: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if admissible(&l) {
                    found = Some(l);
                    break;
                }
            }
            found.unwrap_or_else(|| vec![0.0; d])
        }
    };
    let theta = (0..d).map(|_| rng.gen::<f64>()).collect();
    Semicharacter::new(PositiveSemicharacter::new(sg, face, lambda)?, Character::new(theta))
}
