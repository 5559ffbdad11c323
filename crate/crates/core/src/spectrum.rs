//! Fourier spectrum of boundary restrictions and the Arens-Singer
//! analyticity classifier.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_algebra::AnalyticElement;
use crate::report::ComplexValue;
use crate::semicharacter::{PositiveSemicharacter, Semicharacter};
use crate::semigroup::SemigroupDesc;
use crate::torus;

pub const DEFAULT_COEF_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralLine {
    pub frequency: Vec<i64>,
    pub coefficient: ComplexValue,
}

/// Fourier coefficients of `F|X` above `coef_tol`, within the resolved band.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub nodes_per_dim: usize,
    pub coef_tol: f64,
    pub frequencies: Vec<SpectralLine>,
    pub in_s: bool,
    pub leaked: Vec<Vec<i64>>,
}

impl SpectrumReport {
    pub fn coefficient(&self, k: &[i64]) -> Option<Complex64> {
        self.frequencies
            .iter()
            .find(|l| l.frequency == k)
            .map(|l| l.coefficient.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AsVerdict {
    /// No retained frequency outside `S`. Not a proof: mass beyond the
    /// resolved band or below tolerance is invisible.
    ConsistentWithAs,
    /// A retained frequency outside `S`.
    NotAs { certificate: Vec<i64> },
}

/// Samples `F` on the `nodes_per_dim^d` torus grid, takes the DFT and keeps
/// coefficients above `coef_tol`. Frequencies are in the symmetric band; the
/// Nyquist bin is read as `-n/2` and so never counts as a member of a
/// pointed `S`.
pub fn boundary_spectrum(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    nodes_per_dim: usize,
    coef_tol: f64,
) -> Result<SpectrumReport> {
    spectrum_along(sg, f, &Semicharacter::one(sg), nodes_per_dim, coef_tol)
}

fn spectrum_along(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    base: &Semicharacter,
    nodes_per_dim: usize,
    coef_tol: f64,
) -> Result<SpectrumReport> {
    if !nodes_per_dim.is_power_of_two() || nodes_per_dim < 2 {
        return Err(Error::PreconditionFailed(format!(
            "nodes per dimension must be a power of two, got {nodes_per_dim}"
        )));
    }
    if !(coef_tol > 0.0) {
        return Err(Error::PreconditionFailed("coefficient tolerance must be positive".into()));
    }
    let d = sg.ambient_dim();
    let values = torus::grid_values(f, base, nodes_per_dim);
    let coef = torus::fourier_coefficients(&values, nodes_per_dim, d);
    let mut frequencies = Vec::new();
    let mut leaked = Vec::new();
    for (i, c) in coef.iter().enumerate() {
        if c.norm() <= coef_tol {
            continue;
        }
        let k = torus::frequency_of(i, nodes_per_dim, d);
        if !sg.contains(&k)? {
            leaked.push(k.clone());
        }
        frequencies.push(SpectralLine {
            frequency: k,
            coefficient: (*c).into(),
        });
    }
    frequencies.sort_by(|a, b| a.frequency.cmp(&b.frequency));
    leaked.sort();
    Ok(SpectrumReport {
        nodes_per_dim,
        coef_tol,
        in_s: leaked.is_empty(),
        frequencies,
        leaked,
    })
}

pub fn classify_arens_singer(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    nodes_per_dim: usize,
    coef_tol: f64,
) -> Result<(AsVerdict, SpectrumReport)> {
    let report = boundary_spectrum(sg, f, nodes_per_dim, coef_tol)?;
    let verdict = match report.leaked.first() {
        Some(k) => AsVerdict::NotAs {
            certificate: k.clone(),
        },
        None => AsVerdict::ConsistentWithAs,
    };
    Ok((verdict, report))
}

/// Compares the spectra of `chi -> F(rho1 chi)` and `chi -> F(rho1 rho0 chi)`
/// on frequencies in the support of `rho1`, where `rho0` is the indicator of
/// that support. Implemented for `rho1` with full support or `rho1 = omega`.
/// Returns the largest coefficient discrepancy.
pub fn restricted_spectra_discrepancy(
    sg: &SemigroupDesc,
    f: &AnalyticElement,
    rho1: &PositiveSemicharacter,
    nodes_per_dim: usize,
) -> Result<f64> {
    if !(rho1.is_strictly_positive() || rho1.is_omega()) {
        return Err(Error::Unsupported(
            "restricted spectra are compared only for full-support rho or omega".into(),
        ));
    }
    let rho0 = rho1.power(Complex64::new(0.0, 0.0))?;
    let a = rho1.as_semicharacter();
    let b = a.multiply(sg, &rho0)?;
    let sa = spectrum_along(sg, f, &a, nodes_per_dim, f64::MIN_POSITIVE)?;
    let sb = spectrum_along(sg, f, &b, nodes_per_dim, f64::MIN_POSITIVE)?;
    let mut worst = 0.0f64;
    for line in &sa.frequencies {
        let k = crate::semigroup::Element(line.frequency.clone());
        if sg.contains(k.coords())? && rho1.in_support(&k) {
            let cb = sb.coefficient(&line.frequency).unwrap_or_default();
            worst = worst.max((Complex64::from(line.coefficient) - cb).norm());
        }
    }
    Ok(worst)
}
