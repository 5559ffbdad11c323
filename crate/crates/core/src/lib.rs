//! Generalized analytic functions on compact abelian groups whose dual is a
//! finitely generated submonoid of `Z^d`.

pub mod error;
pub mod function_algebra;
pub mod haar;
pub mod interpolation;
pub mod lattice;
pub mod report;
pub mod semicharacter;
pub mod semigroup;
pub mod spectrum;
pub mod torus;

pub use error::{Error, Result};
pub use function_algebra::{AnalyticElement, AnalyticPolynomial, Weight};
pub use report::{ComplexValue, Hypothesis, VerificationReport};
pub use semicharacter::{Character, PositiveSemicharacter, Semicharacter, SemicharacterSpec};
pub use semigroup::{Element, FaceDesc, Family, SemigroupDesc, SemigroupSpec};
