//! JSON and text rendering of run results.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::checks::Outcome;
use crate::config::{RunConfig, DEFAULT_TOLERANCES};

#[derive(Serialize)]
pub struct Document<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    /// SHA-256 of the config file bytes.
    pub config_hash: &'a str,
    pub seed: u64,
    pub tolerance_overrides: &'a [String],
    pub tolerances: BTreeMap<&'static str, f64>,
    pub exit_code: i32,
    pub checks: &'a [Outcome],
}

impl<'a> Document<'a> {
    pub fn new(
        command: &'a str,
        config_hash: &'a str,
        cfg: &RunConfig,
        overrides: &'a [String],
        checks: &'a [Outcome],
        exit_code: i32,
    ) -> Self {
        Document {
            tool: "genan",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config_hash,
            seed: cfg.seed,
            tolerance_overrides: overrides,
            tolerances: DEFAULT_TOLERANCES.iter().map(|(n, _)| (*n, cfg.tol(n))).collect(),
            exit_code,
            checks,
        }
    }
}

pub fn json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
    s.push('\n');
    s
}

pub fn text(doc: &Document) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "genan {} {}", doc.version, doc.command);
    let _ = writeln!(s, "config sha256 {}", doc.config_hash);
    let _ = writeln!(s, "seed {}", doc.seed);
    for o in doc.checks {
        match o {
            Outcome::Report(r) => {
                let _ = writeln!(s, "{}", r.summary());
                if let Some(scheme) = &r.scheme {
                    let _ = writeln!(s, "    scheme: {scheme}");
                }
                match &r.hypothesis {
                    genan::Hypothesis::Holds(h) => {
                        let _ = writeln!(s, "    hypothesis holds: {h}");
                    }
                    genan::Hypothesis::Unmet(h) => {
                        let _ = writeln!(s, "    hypothesis unmet: {h}");
                    }
                    genan::Hypothesis::None => {}
                }
                if let (Some(l), Some(rh)) = (r.lhs, r.rhs) {
                    let _ = writeln!(
                        s,
                        "    lhs {:.15e}{:+.15e}i  rhs {:.15e}{:+.15e}i",
                        l.re, l.im, rh.re, rh.im
                    );
                }
                if let Some(spec) = r.details.get("spectrum") {
                    render_spectrum(&mut s, spec);
                }
                for note in &r.notes {
                    let _ = writeln!(s, "    note: {note}");
                }
            }
            Outcome::Precondition { check, message } => {
                let _ = writeln!(s, "[PRECONDITION] {check}: {message}");
            }
        }
    }
    let _ = writeln!(s, "exit {}", doc.exit_code);
    s
}

fn render_spectrum(s: &mut String, spec: &serde_json::Value) {
    let Some(lines) = spec.get("frequencies").and_then(|v| v.as_array()) else {
        return;
    };
    let _ = writeln!(s, "    {:>16}  {:>24}  {:>24}", "frequency", "re", "im");
    for line in lines {
        let k = line.get("frequency").map(|v| v.to_string()).unwrap_or_default();
        let c = line.get("coefficient");
        let re = c.and_then(|c| c.get("re")).and_then(|v| v.as_f64()).unwrap_or(0.0);
        let im = c.and_then(|c| c.get("im")).and_then(|v| v.as_f64()).unwrap_or(0.0);
        let _ = writeln!(s, "    {k:>16}  {re:>24.15e}  {im:>24.15e}");
    }
}
