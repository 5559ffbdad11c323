//! `genan`: batch verification of generalized-analytic function identities.

mod checks;
mod config;
mod functions;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::checks::Outcome;
use crate::config::ConfigError;

pub const EXIT_CONFIG: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "genan", version, about = "Verify identities for generalized analytic functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for `<command>.json` and `<command>.txt` reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 1 makes every report bit-reproducible.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Tolerance override, repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true)]
    tol: Vec<String>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Haar integral of random polynomials against their value at omega.
    MeanValue,
    /// Orbit integrals for configured pairs of positive semicharacters.
    Orbit,
    /// Maximum modulus over semicharacters against the boundary maximum.
    MaxModulus,
    /// Check a configured cover of sample points.
    CoverCheck,
    /// Build covers of a complex-tangential curve.
    CoverBuild,
    /// Tangential defect profile of a configured curve.
    Tangential,
    /// Defect of the curve t -> rho^{it}.
    Counterexample,
    /// Peak function from a zero function, and the limit of its powers.
    Peak,
    /// Values of the point peak function at configured probes.
    PointPeak,
    /// Boundary spectrum and the Arens-Singer classifier.
    Spectrum {
        /// Function to classify: a name from the config, `coordinate`,
        /// `conj_coordinate`, or a JSON function spec.
        #[arg(long)]
        function: Option<String>,
    },
    /// Every configured check.
    Suite,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::MeanValue => "mean-value",
            Command::Orbit => "orbit",
            Command::MaxModulus => "max-modulus",
            Command::CoverCheck => "cover-check",
            Command::CoverBuild => "cover-build",
            Command::Tangential => "tangential",
            Command::Counterexample => "counterexample",
            Command::Peak => "peak",
            Command::PointPeak => "point-peak",
            Command::Spectrum { .. } => "spectrum",
            Command::Suite => "suite",
        }
    }
}

fn run(cli: &Cli) -> Result<i32, ConfigError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| ConfigError::Invalid("--config is required".into()))?;
    let loaded = config::load(path)?;
    let mut cfg = loaded.config;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.apply_overrides(&cli.tol)?;
    cfg.validate()?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(ConfigError::Invalid("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    }
    let outcomes: Vec<Outcome> = match &cli.command {
        Command::MeanValue => checks::mean_value(&cfg)?,
        Command::Orbit => checks::orbit(&cfg)?,
        Command::MaxModulus => checks::max_modulus(&cfg)?,
        Command::CoverCheck => checks::cover_check(&cfg)?,
        Command::CoverBuild => checks::cover_build(&cfg)?,
        Command::Tangential => checks::tangential(&cfg)?,
        Command::Counterexample => checks::counterexample(&cfg)?,
        Command::Peak => checks::peak(&cfg)?,
        Command::PointPeak => checks::point_peak(&cfg)?,
        Command::Spectrum { function } => checks::spectrum(&cfg, function.as_deref())?,
        Command::Suite => checks::suite(&cfg)?,
    };
    let code = checks::exit_code(&outcomes);
    let name = cli.command.name();
    let doc = render::Document::new(name, &loaded.hash, &cfg, &cli.tol, &outcomes, code);
    let text = render::text(&doc);
    print!("{text}");
    if let Some(dir) = &cli.out {
        let write = |file: String, body: &str| {
            std::fs::write(dir.join(&file), body).map_err(|source| ConfigError::Read {
                path: dir.join(file).display().to_string(),
                source,
            })
        };
        std::fs::create_dir_all(dir).map_err(|source| ConfigError::Read {
            path: dir.display().to_string(),
            source,
        })?;
        write(format!("{name}.json"), &render::json(&doc))?;
        write(format!("{name}.txt"), &text)?;
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("genan: {e}");
            EXIT_CONFIG
        }
    };
    ExitCode::from(code as u8)
}
