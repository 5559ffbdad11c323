//! Run configuration: parsing, validation, and per-section defaults.

use std::collections::BTreeMap;
use std::path::Path;

use genan::haar::QuadratureScheme;
use genan::interpolation::TrigPath;
use genan::{SemicharacterSpec, SemigroupDesc, SemigroupSpec, Weight};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::functions::FunctionSpec;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("config is not valid JSON for this schema: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub q: Vec<f64>,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
}

fn default_tail_tol() -> f64 {
    genan::function_algebra::DEFAULT_TAIL_TOL
}

/// A semigroup and weight overriding the top-level ones for one section.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Setting {
    pub semigroup: Option<SemigroupSpec>,
    pub weight: Option<WeightConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeanValueConfig {
    #[serde(flatten)]
    pub setting: Setting,
    pub count: usize,
    pub degree: i64,
    pub scheme: Option<QuadratureScheme>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoPair {
    pub rho1: SemicharacterSpec,
    pub rho2: SemicharacterSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitConfig {
    #[serde(flatten)]
    pub setting: Setting,
    pub count: usize,
    pub degree: i64,
    #[serde(default)]
    pub pairs: Vec<RhoPair>,
    /// Each `rho` in `powers_of` is also compared with `rho^n` for `n` in
    /// `powers`.
    #[serde(default)]
    pub powers_of: Vec<SemicharacterSpec>,
    #[serde(default)]
    pub powers: Vec<u32>,
    pub scheme: Option<QuadratureScheme>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaxModulusConfig {
    #[serde(flatten)]
    pub setting: Setting,
    pub count: usize,
    pub degree: i64,
    pub interior_samples: usize,
    pub boundary_samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedSpectrum {
    ConsistentWithAs,
    NotAs,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumConfig {
    #[serde(flatten)]
    pub setting: Setting,
    pub function: FunctionSpec,
    pub nodes_per_dim: usize,
    #[serde(default = "default_coef_tol")]
    pub coef_tol: f64,
    pub expect: Option<ExpectedSpectrum>,
    /// Named functions selectable with `--function`.
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
}

fn default_coef_tol() -> f64 {
    genan::spectrum::DEFAULT_COEF_TOL
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TangentialConfig {
    #[serde(flatten)]
    pub setting: Setting,
    pub path: TrigPath,
    pub grid: usize,
    /// A non-tangential path whose defect profile must equal `control_defect`.
    pub control: Option<TrigPath>,
    pub control_defect: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverBuildConfig {
    #[serde(flatten)]
    pub setting: Setting,
    pub path: TrigPath,
    pub epsilons: Vec<f64>,
    pub grid: usize,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_margin() -> f64 {
    0.1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceConfig {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverCheckConfig {
    #[serde(flatten)]
    pub setting: Setting,
    /// Sample angles of `K`.
    pub samples: Vec<Vec<f64>>,
    pub pieces: Vec<PieceConfig>,
    pub epsilon: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    #[serde(flatten)]
    pub setting: Setting,
    pub lambda: Vec<f64>,
    pub grid: usize,
    pub expected_defect: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeakConfig {
    #[serde(flatten)]
    pub setting: Setting,
    pub function: FunctionSpec,
    #[serde(default = "default_boundary_grid")]
    pub boundary_grid: usize,
    #[serde(default = "default_zero_tol")]
    pub zero_tol: f64,
    pub n_max: usize,
    pub scheme: QuadratureScheme,
    /// Half-length of the excluded arc around each grid point of `K` when
    /// checking `|h| < 1`.
    #[serde(default)]
    pub exclude_arc: f64,
}

fn default_boundary_grid() -> usize {
    4096
}

fn default_zero_tol() -> f64 {
    1e-12
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointPeakConfig {
    #[serde(flatten)]
    pub setting: Setting,
    pub theta: Vec<f64>,
    /// Points `{"face","lambda","theta"}` with expected values of `h`.
    pub probes: Vec<Probe>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Probe {
    pub at: SemicharacterSpec,
    pub expected: [f64; 2],
    pub tol_name: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub semigroup: SemigroupSpec,
    pub weight: WeightConfig,
    pub scheme: Option<QuadratureScheme>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
    pub mean_value: Option<MeanValueConfig>,
    pub orbit: Option<OrbitConfig>,
    pub max_modulus: Option<MaxModulusConfig>,
    pub spectrum: Option<SpectrumConfig>,
    pub tangential: Option<TangentialConfig>,
    pub cover_build: Option<CoverBuildConfig>,
    pub cover_check: Option<CoverCheckConfig>,
    pub counterexample: Option<CounterexampleConfig>,
    pub peak: Option<PeakConfig>,
    pub point_peak: Option<PointPeakConfig>,
}

/// Tolerance names and their defaults.
pub const DEFAULT_TOLERANCES: [(&str, f64); 11] = [
    ("mean-value", 1e-12),
    ("orbit-invariance", 1e-12),
    ("max-modulus", 1e-9),
    ("tangential", 1e-10),
    ("tangential-control", 1e-6),
    ("cover-tangential", 1e-9),
    ("counterexample", 1e-6),
    ("peak-identity", 1e-8),
    ("peak-limit", 1e-3),
    ("point-peak", 1e-12),
    ("point-peak-interior", 1e-9),
];

/// A parsed config together with the SHA-256 of its bytes.
pub struct Loaded {
    pub config: RunConfig,
    pub hash: String,
}

pub fn load(path: &Path) -> Result<Loaded, ConfigError> {
    let bytes = std::fs::read(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let config: RunConfig = serde_json::from_slice(&bytes)?;
    let hash = hex::encode(Sha256::digest(&bytes));
    Ok(Loaded { config, hash })
}

impl RunConfig {
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            DEFAULT_TOLERANCES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| *v)
                .expect("every tolerance name has a default")
        })
    }

    /// Applies `NAME=VALUE` overrides.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<(), ConfigError> {
        for item in overrides {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| invalid(format!("--tol expects NAME=VALUE, got {item:?}")))?;
            let value: f64 = value
                .parse()
                .map_err(|_| invalid(format!("--tol {name}: {value:?} is not a number")))?;
            self.tolerances.insert(name.to_string(), value);
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, value) in &self.tolerances {
            if !DEFAULT_TOLERANCES.iter().any(|(n, _)| n == name) {
                return Err(invalid(format!("unknown tolerance {name:?}")));
            }
            if !(*value > 0.0) {
                return Err(invalid(format!("tolerance {name} must be positive, got {value}")));
            }
        }
        if let Some(s) = &self.scheme {
            s.validate().map_err(|e| invalid(e.to_string()))?;
        }
        let settings: Vec<&Setting> = [
            self.mean_value.as_ref().map(|c| &c.setting),
            self.orbit.as_ref().map(|c| &c.setting),
            self.max_modulus.as_ref().map(|c| &c.setting),
            self.spectrum.as_ref().map(|c| &c.setting),
            self.tangential.as_ref().map(|c| &c.setting),
            self.cover_build.as_ref().map(|c| &c.setting),
            self.cover_check.as_ref().map(|c| &c.setting),
            self.counterexample.as_ref().map(|c| &c.setting),
            self.peak.as_ref().map(|c| &c.setting),
            self.point_peak.as_ref().map(|c| &c.setting),
        ]
        .into_iter()
        .flatten()
        .collect();
        self.resolve(&Setting::default())?;
        for s in settings {
            self.resolve(s)?;
        }
        if let Some(c) = &self.cover_build {
            if c.epsilons.is_empty() || c.epsilons.iter().any(|e| !(*e > 0.0)) {
                return Err(invalid("cover_build.epsilons must be nonempty and positive"));
            }
        }
        if let Some(c) = &self.peak {
            c.scheme.validate().map_err(|e| invalid(e.to_string()))?;
        }
        Ok(())
    }

    /// The semigroup and weight in force for a section.
    pub fn resolve(&self, setting: &Setting) -> Result<(SemigroupDesc, Weight), ConfigError> {
        let spec = setting.semigroup.clone().unwrap_or_else(|| self.semigroup.clone());
        let sg = SemigroupDesc::new(spec).map_err(|e| invalid(e.to_string()))?;
        let wc = setting.weight.as_ref().unwrap_or(&self.weight);
        if wc.q.iter().any(|q| !(*q > 0.0 && *q < 1.0)) {
            return Err(invalid(format!("weight ratios must lie in (0,1), got {:?}", wc.q)));
        }
        if !(wc.tail_tol > 0.0) {
            return Err(invalid("weight tail tolerance must be positive"));
        }
        let weight = Weight::geometric_with_tol(&sg, wc.q.clone(), wc.tail_tol)
            .map_err(|e| invalid(e.to_string()))?;
        Ok((sg, weight))
    }
}
