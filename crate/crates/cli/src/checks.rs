//! Runners behind each subcommand. Each returns the outcomes of its checks.

use genan::function_algebra::max_modulus_check;
use genan::haar::{verify_mean_value, verify_orbit_invariance, QuadratureScheme};
use genan::interpolation::{
    build_tangential_cover, check_cover, imaginary_power_curve, infer_properties, peak_power_limit,
    tangential_defect, unit_grid, zero_to_peak, Cover, CoverOptions, Curve, Evidence,
    Neighborhood, PeakOptions, SetProperty,
};
use genan::spectrum::{classify_arens_singer, AsVerdict};
use genan::torus;
use genan::{
    AnalyticElement, AnalyticPolynomial, Character, Error, Hypothesis, PositiveSemicharacter,
    Semicharacter, SemicharacterSpec, SemigroupDesc, VerificationReport,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{ConfigError, ExpectedSpectrum, RunConfig};
use crate::functions::FunctionSpec;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Report(VerificationReport),
    /// A precondition or hypothesis of the checked statement failed.
    Precondition { check: String, message: String },
}

impl Outcome {
    fn error(check: &str, e: Error) -> Self {
        Outcome::Precondition {
            check: check.into(),
            message: e.to_string(),
        }
    }
}

pub type Outcomes = Result<Vec<Outcome>, ConfigError>;

fn missing(section: &str) -> ConfigError {
    ConfigError::Invalid(format!("config has no \"{section}\" section"))
}

/// Folds per-case reports into one: largest residual, all verdicts.
fn aggregate(check: &str, statement: &str, cases: &[VerificationReport]) -> VerificationReport {
    let mut out = VerificationReport::new(check, statement);
    let worst = cases
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.residual.total_cmp(&b.1.residual).then(b.0.cmp(&a.0)));
    if let Some((i, w)) = worst {
        out.lhs = w.lhs;
        out.rhs = w.rhs;
        out.residual = w.residual;
        out.tol = w.tol;
        out.scheme = w.scheme.clone();
        out.seed = w.seed;
        out.hypothesis = w.hypothesis.clone();
        out = out.with_detail("worst_case", i);
    }
    out.pass = if cases.iter().any(|c| c.pass.is_none()) {
        None
    } else {
        Some(cases.iter().all(|c| c.passed()))
    };
    if let Some(unmet) = cases.iter().find(|c| matches!(c.hypothesis, Hypothesis::Unmet(_))) {
        out.hypothesis = unmet.hypothesis.clone();
    }
    let residuals: Vec<f64> = cases.iter().map(|c| c.residual).collect();
    let failures: Vec<usize> = (0..cases.len()).filter(|&i| cases[i].pass == Some(false)).collect();
    let mut notes: Vec<String> = cases.iter().flat_map(|c| c.notes.iter().cloned()).collect();
    notes.dedup();
    out.notes = notes;
    out.with_detail("cases", cases.len())
        .with_detail("failures", failures)
        .with_detail("residuals", residuals)
}

fn scheme_for(cfg: &RunConfig, section: &Option<QuadratureScheme>, f: &AnalyticElement) -> QuadratureScheme {
    section
        .clone()
        .or_else(|| cfg.scheme.clone())
        .unwrap_or_else(|| QuadratureScheme::default_for(f))
}

pub fn mean_value(cfg: &RunConfig) -> Outcomes {
    let c = cfg.mean_value.as_ref().ok_or_else(|| missing("mean_value"))?;
    let (sg, _) = cfg.resolve(&c.setting)?;
    let tol = cfg.tol("mean-value");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for _ in 0..c.count {
        let p: AnalyticElement = match AnalyticPolynomial::random(&sg, c.degree, &mut rng) {
            Ok(p) => p.into(),
            Err(e) => return Ok(vec![Outcome::error("mean-value", e)]),
        };
        let scheme = scheme_for(cfg, &c.scheme, &p);
        match verify_mean_value(&sg, &p, &scheme, tol) {
            Ok(r) => cases.push(r),
            Err(e) => return Ok(vec![Outcome::error("mean-value", e)]),
        }
    }
    Ok(vec![Outcome::Report(aggregate(
        "mean-value",
        "the Haar integral over the characters equals the value at omega",
        &cases,
    ))])
}

fn positive(sg: &SemigroupDesc, spec: &SemicharacterSpec) -> genan::Result<PositiveSemicharacter> {
    PositiveSemicharacter::new(sg, spec.face.clone(), spec.lambda.clone())
}

pub fn orbit(cfg: &RunConfig) -> Outcomes {
    let c = cfg.orbit.as_ref().ok_or_else(|| missing("orbit"))?;
    let (sg, _) = cfg.resolve(&c.setting)?;
    let tol = cfg.tol("orbit-invariance");
    let run = || -> genan::Result<Vec<VerificationReport>> {
        let mut pairs = Vec::new();
        for p in &c.pairs {
            pairs.push((positive(&sg, &p.rho1)?, positive(&sg, &p.rho2)?));
        }
        for base in &c.powers_of {
            let rho = positive(&sg, base)?;
            for &n in &c.powers {
                let lambda = rho.lambda().iter().map(|l| l * n as f64).collect();
                pairs.push((rho.clone(), PositiveSemicharacter::new(&sg, rho.face().clone(), lambda)?));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut cases = Vec::new();
        for _ in 0..c.count {
            let p: AnalyticElement = AnalyticPolynomial::random(&sg, c.degree, &mut rng)?.into();
            let scheme = scheme_for(cfg, &c.scheme, &p);
            for (r1, r2) in &pairs {
                cases.push(verify_orbit_invariance(&sg, &p, r1, r2, &scheme, tol)?);
            }
        }
        Ok(cases)
    };
    Ok(vec![match run() {
        Ok(cases) => Outcome::Report(
            aggregate(
                "orbit-invariance",
                "orbit integrals agree for semicharacters with equal supports or unit sets",
                &cases,
            )
            .with_detail("pairs", c.pairs.len() + c.powers_of.len() * c.powers.len()),
        ),
        Err(e) => Outcome::error("orbit-invariance", e),
    }])
}

pub fn max_modulus(cfg: &RunConfig) -> Outcomes {
    let c = cfg.max_modulus.as_ref().ok_or_else(|| missing("max_modulus"))?;
    let (sg, _) = cfg.resolve(&c.setting)?;
    let tol = cfg.tol("max-modulus");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for i in 0..c.count {
        let run = AnalyticPolynomial::random(&sg, c.degree, &mut rng).and_then(|p| {
            max_modulus_check(
                &sg,
                &p,
                c.interior_samples,
                c.boundary_samples,
                cfg.seed.wrapping_add(i as u64),
                tol,
            )
        });
        match run {
            Ok(r) => cases.push(r),
            Err(e) => return Ok(vec![Outcome::error("max-modulus", e)]),
        }
    }
    // The residual of a one-sided check is the excess of the interior max.
    for r in &mut cases {
        let (lhs, rhs) = (r.lhs.map_or(0.0, |v| v.re), r.rhs.map_or(0.0, |v| v.re));
        r.residual = (lhs - rhs).max(0.0);
    }
    Ok(vec![Outcome::Report(aggregate(
        "max-modulus",
        "the maximum of |p| over all semicharacters is attained on the characters",
        &cases,
    ))])
}

pub fn spectrum(cfg: &RunConfig, function: Option<&str>) -> Outcomes {
    let c = cfg.spectrum.as_ref().ok_or_else(|| missing("spectrum"))?;
    let (sg, weight) = cfg.resolve(&c.setting)?;
    let spec = match function {
        None => c.function.clone(),
        Some(name) => match c.functions.get(name) {
            Some(f) => f.clone(),
            None => FunctionSpec::parse(name).map_err(ConfigError::Invalid)?,
        },
    };
    let expected = c.expect.unwrap_or(ExpectedSpectrum::ConsistentWithAs);
    let run = || -> genan::Result<VerificationReport> {
        let f = spec.build(&sg, &weight)?;
        let (verdict, rep) = classify_arens_singer(&sg, &f, c.nodes_per_dim, c.coef_tol)?;
        let got = match verdict {
            AsVerdict::ConsistentWithAs => ExpectedSpectrum::ConsistentWithAs,
            AsVerdict::NotAs { .. } => ExpectedSpectrum::NotAs,
        };
        let largest_leak = rep
            .frequencies
            .iter()
            .filter(|l| rep.leaked.contains(&l.frequency))
            .map(|l| Complex64::from(l.coefficient).norm())
            .fold(0.0, f64::max);
        let mut r = VerificationReport::new(
            "arens-singer-spectrum",
            "the boundary spectrum lies in S for functions analytic in the sense of Arens and Singer",
        );
        r.residual = largest_leak;
        r.tol = c.coef_tol;
        r.pass = Some(got == expected);
        let mut r = r
            .with_detail("function", &spec)
            .with_detail("verdict", &verdict)
            .with_detail("expected", expected)
            .with_detail("spectrum", &rep);
        if got == ExpectedSpectrum::NotAs && expected == ExpectedSpectrum::NotAs {
            r = r.with_note("negative result reproduced: the function has spectrum outside S");
        }
        Ok(r)
    };
    Ok(vec![match run() {
        Ok(r) => Outcome::Report(r),
        Err(e) => Outcome::error("arens-singer-spectrum", e),
    }])
}

fn defects(curve: &Curve, grid: usize) -> genan::Result<Vec<f64>> {
    unit_grid(grid).iter().map(|&t| tangential_defect(curve, t)).collect()
}

pub fn tangential(cfg: &RunConfig) -> Outcomes {
    let c = cfg.tangential.as_ref().ok_or_else(|| missing("tangential"))?;
    let (_, weight) = cfg.resolve(&c.setting)?;
    let tol = cfg.tol("tangential");
    let control_tol = cfg.tol("tangential-control");
    let run = || -> genan::Result<VerificationReport> {
        let curve = Curve::from_trig(weight.clone(), c.path.clone())?;
        let profile = defects(&curve, c.grid)?;
        let max_defect = profile.iter().copied().fold(0.0, f64::max);
        let mut r = VerificationReport::new(
            "complex-tangential",
            "<gamma(t), gamma'(t)> = 0 in l2(S, w) at every grid point",
        );
        r.lhs = Some(max_defect.into());
        r.rhs = Some(0.0.into());
        r.residual = max_defect;
        r.tol = tol;
        let mut pass = max_defect <= tol;
        r = r
            .with_detail("grid", profile.len())
            .with_detail("defects", &profile)
            .with_detail("tail_bound", weight.tail_bound());
        if let (Some(path), Some(expected)) = (&c.control, c.control_defect) {
            let control = Curve::from_trig(weight.clone(), path.clone())?;
            let cp = defects(&control, c.grid)?;
            let dev = cp.iter().map(|d| (d - expected).abs()).fold(0.0, f64::max);
            pass &= dev <= control_tol;
            r = r
                .with_detail("control_expected_defect", expected)
                .with_detail("control_max_deviation", dev)
                .with_detail("control_tol", control_tol);
        }
        r.pass = Some(pass);
        Ok(r)
    };
    Ok(vec![match run() {
        Ok(r) => Outcome::Report(r),
        Err(e) => Outcome::error("complex-tangential", e),
    }])
}

pub fn cover_build(cfg: &RunConfig) -> Outcomes {
    let c = cfg.cover_build.as_ref().ok_or_else(|| missing("cover_build"))?;
    let (_, weight) = cfg.resolve(&c.setting)?;
    let options = CoverOptions {
        margin: c.margin,
        tangential_tol: cfg.tol("cover-tangential"),
        ..CoverOptions::default()
    };
    let run = || -> genan::Result<VerificationReport> {
        let curve = Curve::from_trig(weight.clone(), c.path.clone())?;
        let mut per_eps = Vec::new();
        let mut worst_ratio = 0.0f64;
        for &eps in &c.epsilons {
            let out = build_tangential_cover(&curve, eps, c.grid, &options)?;
            worst_ratio = worst_ratio.max(out.worst_estimate_ratio);
            per_eps.push(serde_json::json!({
                "epsilon": eps,
                "pieces": out.pieces,
                "radius": out.radius,
                "radius_sum": out.radius_sum,
                "bound": out.bound,
                "grid_max": out.grid_max,
                "grid": out.grid,
                "max_defect": out.max_defect,
                "worst_estimate_ratio": out.worst_estimate_ratio,
            }));
        }
        let mut r = VerificationReport::new(
            "tangential-cover",
            "the image of a complex-tangential curve is covered by V(gamma(a_i), M/m^2) with radii summing below epsilon",
        );
        r.residual = worst_ratio;
        r.tol = 1.0;
        r.pass = Some(true);
        Ok(r.with_detail("covers", per_eps)
            .with_note("coverage, the radius sum and the estimate |1 - <gamma(t), gamma(a_i)>| <= M (t - a_i)^2 are verified at every grid point before a cover is returned"))
    };
    Ok(vec![match run() {
        Ok(r) => Outcome::Report(r),
        Err(e @ Error::CoverVerificationFailed(_)) => {
            let mut r = VerificationReport::new("tangential-cover", "cover construction");
            r.pass = Some(false);
            Outcome::Report(r.with_note(e.to_string()))
        }
        Err(e) => Outcome::error("tangential-cover", e),
    }])
}

pub fn cover_check(cfg: &RunConfig) -> Outcomes {
    let c = cfg.cover_check.as_ref().ok_or_else(|| missing("cover_check"))?;
    let (_, weight) = cfg.resolve(&c.setting)?;
    let samples: Vec<Character> = c.samples.iter().map(|t| Character::new(t.clone())).collect();
    let cover = Cover {
        pieces: c
            .pieces
            .iter()
            .map(|p| Neighborhood {
                center: Character::new(p.center.clone()),
                radius: p.radius,
            })
            .collect(),
        epsilon: c.epsilon,
    };
    Ok(vec![match check_cover(&samples, &cover, &weight) {
        Ok(r) => Outcome::Report(r),
        Err(e) => Outcome::error("cover-criterion", e),
    }])
}

pub fn counterexample(cfg: &RunConfig) -> Outcomes {
    let c = cfg.counterexample.as_ref().ok_or_else(|| missing("counterexample"))?;
    let (sg, weight) = cfg.resolve(&c.setting)?;
    let tol = cfg.tol("counterexample");
    let run = || -> genan::Result<VerificationReport> {
        let rho = PositiveSemicharacter::full(&sg, c.lambda.clone())?;
        let (curve, mut r) = imaginary_power_curve(&sg, &rho, &weight, c.grid, cfg.tol("cover-tangential"))?;
        let rejected = match build_tangential_cover(&curve, 0.1, c.grid, &CoverOptions::default()) {
            Err(Error::NotComplexTangential { t, defect, .. }) => Some((t, defect)),
            Err(e) => return Err(e),
            Ok(_) => None,
        };
        let mut pass = r.passed() && rejected.is_some();
        if let Some(expected) = c.expected_defect {
            let dev = r
                .details
                .get("max_defect")
                .and_then(|v| v.as_f64())
                .map(|m| (m - expected).abs())
                .unwrap_or(f64::INFINITY)
                .max(r.lhs.map_or(f64::INFINITY, |m| (m.re - expected).abs()));
            r.residual = dev;
            r.tol = tol;
            pass &= dev <= tol;
            r = r.with_detail("configured_expected_defect", expected);
        }
        r.pass = Some(pass);
        Ok(r.with_detail("cover_rejected", rejected.is_some())
            .with_detail("rejection", rejected.map(|(t, d)| serde_json::json!({"t": t, "defect": d}))))
    };
    Ok(vec![match run() {
        Ok(r) => Outcome::Report(r),
        Err(e) => Outcome::error("curve-counterexample", e),
    }])
}

pub fn peak(cfg: &RunConfig) -> Outcomes {
    let c = cfg.peak.as_ref().ok_or_else(|| missing("peak"))?;
    let (sg, weight) = cfg.resolve(&c.setting)?;
    let options = PeakOptions {
        zero_tol: c.zero_tol,
        boundary_grid: c.boundary_grid,
        ..PeakOptions::default()
    };
    let run = || -> genan::Result<VerificationReport> {
        let f = c.function.build(&sg, &weight)?;
        let built = zero_to_peak(&sg, &f, &options)?;
        let d = sg.ambient_dim();
        let n = c.boundary_grid;
        let one = Semicharacter::one(&sg);
        let f_grid = torus::grid_values(&f, &one, n);
        let k_points: Vec<Vec<f64>> = (0..f_grid.len())
            .filter(|&i| f_grid[i].norm() <= c.zero_tol)
            .map(|i| torus::grid_point(i, n, d))
            .collect();
        // Arc length in radians on each circle, centered on each point of K.
        let half = c.exclude_arc / (2.0 * std::f64::consts::TAU);
        let h_grid = torus::grid_values(&built.h, &one, n);
        let mut max_h = 0.0f64;
        let mut excluded = 0usize;
        for (i, hv) in h_grid.iter().enumerate() {
            let theta = torus::grid_point(i, n, d);
            let chi = Character::new(theta);
            let near_k = k_points
                .iter()
                .any(|k| chi.circular_distance(&Character::new(k.clone())) <= half);
            if near_k {
                excluded += 1;
            } else {
                max_h = max_h.max(hv.norm());
            }
        }
        let scheme = c.scheme.clone();
        let mut r = peak_power_limit(
            &sg,
            &built.h,
            c.n_max,
            &scheme,
            cfg.tol("peak-identity"),
            cfg.tol("peak-limit"),
        )?;
        let construction_ok = max_h < 1.0 && built.certificate_violations == 0;
        r.pass = Some(r.passed() && construction_ok);
        let mut claims = infer_properties(
            SetProperty::Z,
            Evidence::ZeroFunction {
                sup_f: built.sup_f,
                zero_tol: c.zero_tol,
            },
            false,
        );
        if construction_ok {
            claims.extend(infer_properties(
                SetProperty::P,
                Evidence::PeakFunction {
                    grid_points: built.grid_points,
                    max_h_off_k: built.max_h_off_k,
                },
                false,
            ));
        }
        if r.details.get("limit_pass") == Some(&serde_json::Value::Bool(true)) {
            let modulus = r.details.get("limit_modulus").and_then(|v| v.as_f64()).unwrap_or(0.0);
            claims.extend(infer_properties(
                SetProperty::TN,
                Evidence::PowerLimit {
                    n_max: c.n_max,
                    modulus,
                },
                false,
            ));
        }
        r.check = "peak-pipeline".into();
        r.statement = "a zero function yields a peak function h with |h| < 1 off K, and int h^n tends to the measure of K".into();
        Ok(r.with_detail("construction", &built)
            .with_detail("max_h_outside_excluded_arcs", max_h)
            .with_detail("excluded_grid_points", excluded)
            .with_detail("claims", claims))
    };
    Ok(vec![match run() {
        Ok(r) => Outcome::Report(r),
        Err(e) => Outcome::error("peak-pipeline", e),
    }])
}

pub fn point_peak(cfg: &RunConfig) -> Outcomes {
    let c = cfg.point_peak.as_ref().ok_or_else(|| missing("point_peak"))?;
    let (sg, weight) = cfg.resolve(&c.setting)?;
    for p in &c.probes {
        if !crate::config::DEFAULT_TOLERANCES.iter().any(|(n, _)| *n == p.tol_name) {
            return Err(ConfigError::Invalid(format!("unknown tolerance {:?}", p.tol_name)));
        }
    }
    let run = || -> genan::Result<VerificationReport> {
        let h = FunctionSpec::PointPeak { theta: c.theta.clone() }.build(&sg, &weight)?;
        let mut probes = Vec::new();
        let mut pass = true;
        let mut worst = 0.0f64;
        for p in &c.probes {
            let psi = Semicharacter::from_spec(&sg, &p.at)?;
            let value = h.eval(&psi);
            let expected = Complex64::new(p.expected[0], p.expected[1]);
            let residual = (value - expected).norm();
            let tol = cfg.tol(&p.tol_name);
            pass &= residual <= tol;
            worst = worst.max(residual);
            probes.push(serde_json::json!({
                "at": p.at,
                "value": genan::ComplexValue::from(value),
                "expected": genan::ComplexValue::from(expected),
                "residual": residual,
                "tol": tol,
            }));
        }
        let mut r = VerificationReport::new(
            "point-peak",
            "psi -> (1 + <psi, chi0>)/2 equals 1 at chi0 and has modulus below 1 elsewhere",
        );
        r.residual = worst;
        r.tol = cfg.tol("point-peak");
        r.pass = Some(pass);
        Ok(r.with_detail("probes", probes)
            .with_detail("tail_bound", weight.tail_bound()))
    };
    Ok(vec![match run() {
        Ok(r) => Outcome::Report(r),
        Err(e) => Outcome::error("point-peak", e),
    }])
}

pub fn suite(cfg: &RunConfig) -> Outcomes {
    let mut out = Vec::new();
    if cfg.mean_value.is_some() {
        out.extend(mean_value(cfg)?);
    }
    if cfg.orbit.is_some() {
        out.extend(orbit(cfg)?);
    }
    if cfg.max_modulus.is_some() {
        out.extend(max_modulus(cfg)?);
    }
    if cfg.spectrum.is_some() {
        out.extend(spectrum(cfg, None)?);
    }
    if cfg.tangential.is_some() {
        out.extend(tangential(cfg)?);
    }
    if cfg.cover_build.is_some() {
        out.extend(cover_build(cfg)?);
    }
    if cfg.cover_check.is_some() {
        out.extend(cover_check(cfg)?);
    }
    if cfg.counterexample.is_some() {
        out.extend(counterexample(cfg)?);
    }
    if cfg.peak.is_some() {
        out.extend(peak(cfg)?);
    }
    if cfg.point_peak.is_some() {
        out.extend(point_peak(cfg)?);
    }
    if out.is_empty() {
        return Err(ConfigError::Invalid("config has no check sections".into()));
    }
    Ok(out)
}

/// 0 if every check passed, 2 if any precondition failed or any verdict was
/// withheld for an unmet hypothesis, 1 otherwise.
pub fn exit_code(outcomes: &[Outcome]) -> i32 {
    let blocked = outcomes.iter().any(|o| match o {
        Outcome::Precondition { .. } => true,
        Outcome::Report(r) => r.pass.is_none(),
    });
    if blocked {
        return 2;
    }
    if outcomes
        .iter()
        .all(|o| matches!(o, Outcome::Report(r) if r.passed()))
    {
        0
    } else {
        1
    }
}
