//! Batch runner behind the `clifford-obstruct` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::embedding::{search, SearchConfig, SearchReport};
use crate::error::{Error, Result};
use crate::obstructions::{report_with, CheckId, CheckResult, Overall, Verdict};
use crate::preset::parse_preset;
use crate::ring::{GradedRing, RingJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_OBSTRUCTION: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Preset(String),
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "human" => Ok(Format::Human),
            "json" => Ok(Format::Json),
            other => Err(Error::Unsupported(format!("unknown format `{other}` (expected human or json)"))),
        }
    }
}

/// Search settings given on the command line; unset fields fall back to the
/// ring file's `search` block, then to defaults.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SearchOverrides {
    pub mode: Option<crate::embedding::SearchMode>,
    pub restarts: Option<usize>,
    pub iterations: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input: Input,
    /// `None` runs every check.
    pub checks: Option<Vec<CheckId>>,
    pub search: SearchOverrides,
    pub format: Format,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn preset(expr: impl Into<String>) -> Self {
        RunConfig {
            input: Input::Preset(expr.into()),
            checks: None,
            search: SearchOverrides::default(),
            format: Format::Human,
            seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub ring: String,
    pub n: usize,
    pub betti: Vec<usize>,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub overall: Overall,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RunReport {
    /// Depends only on the verdicts.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.verdict == Verdict::Obstruction) {
            EXIT_OBSTRUCTION
        } else {
            EXIT_OK
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Unsupported(format!("malformed report: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A ring file is the ring JSON schema plus an optional `search` block.
pub fn load_ring_file(text: &str) -> Result<(GradedRing, Option<SearchConfig>)> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::InvalidRing(format!("malformed ring JSON: {e}")))?;
    let search = match value.as_object_mut().and_then(|o| o.remove("search")) {
        Some(block) => Some(
            serde_json::from_value(block).map_err(|e| Error::InvalidRing(format!("malformed search block: {e}")))?,
        ),
        None => None,
    };
    let schema: RingJson =
        serde_json::from_value(value).map_err(|e| Error::InvalidRing(format!("malformed ring JSON: {e}")))?;
    Ok((GradedRing::from_json_schema(schema)?, search))
}

fn load(input: &Input) -> Result<(GradedRing, Option<SearchConfig>)> {
    match input {
        Input::Preset(expr) => Ok((parse_preset(expr)?, None)),
        Input::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Unsupported(format!("cannot read {}: {e}", path.display())))?;
            load_ring_file(&text)
        }
    }
}

/// Builds the report without rendering it.
pub fn execute(cfg: &RunConfig) -> Result<RunReport> {
    let (ring, file_search) = load(&cfg.input)?;
    let ids = cfg.checks.clone().unwrap_or_else(|| CheckId::ALL.to_vec());
    let report = report_with(&ring, &ids)?;

    let wants_search = cfg.search.mode.is_some() || file_search.is_some();
    let mut search_cfg = file_search.unwrap_or_default();
    if let Some(mode) = cfg.search.mode {
        search_cfg.mode = mode;
    }
    if let Some(r) = cfg.search.restarts {
        search_cfg.restarts = r;
    }
    if let Some(i) = cfg.search.iterations {
        search_cfg.iterations = i;
    }
    if let Some(seed) = cfg.seed {
        search_cfg.seed = seed;
    }

    let mut notes = Vec::new();
    let search_report = if wants_search {
        match search(&ring, &search_cfg) {
            Ok(r) => Some(r),
            Err(Error::SearchRefused(msg)) => {
                notes.push(format!("search refused: {msg}"));
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    Ok(RunReport {
        ring: report.ring,
        n: report.n,
        betti: report.betti,
        seed: search_cfg.seed,
        checks: report.checks,
        overall: report.overall,
        search: search_report,
        notes,
    })
}

pub fn run(cfg: &RunConfig) -> RunOutcome {
    match execute(cfg) {
        Ok(report) => RunOutcome {
            exit_code: report.exit_code(),
            stdout: match cfg.format {
                Format::Json => report.to_json(),
                Format::Human => render_human(&report),
            },
            stderr: String::new(),
        },
        Err(e) => RunOutcome {
            exit_code: EXIT_INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn flag(possible: bool) -> &'static str {
    if possible {
        "no obstruction found"
    } else {
        "ruled out"
    }
}

pub fn render_human(report: &RunReport) -> String {
    let mut out = String::new();
    let betti: Vec<String> = report.betti.iter().map(|b| b.to_string()).collect();
    let _ = writeln!(out, "ring   {}", report.ring);
    let _ = writeln!(out, "n      {}", report.n);
    let _ = writeln!(out, "betti  ({})", betti.join(", "));
    let _ = writeln!(out, "seed   {}", report.seed);
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<20} {:<13} witness", "check", "verdict");
    for c in &report.checks {
        let _ = writeln!(out, "{:<20} {:<13} {}", c.id.as_str(), c.verdict.to_string(), c.witness);
    }
    let _ = writeln!(out);
    let o = &report.overall;
    let _ = writeln!(out, "conformally formal   {}", flag(o.conformally_formal_possible));
    let _ = writeln!(out, "Clifford formal      {}", flag(o.clifford_formal_possible));
    if let Some(u) = o.uqr_elliptic_possible {
        let _ = writeln!(out, "UQR-elliptic         {}", flag(u));
    }
    if let Some(s) = &report.search {
        let _ = writeln!(out);
        let verdict = if s.is_certificate() {
            "certificate found"
        } else {
            "no certificate (residual floor is evidence only)"
        };
        let _ = writeln!(
            out,
            "search {}: {verdict}, residual {:.3e}, injectivity margin {:.3e}, restart {} of {} run",
            s.config.mode, s.residual, s.terms.injectivity_margin, s.restart, s.restarts_run
        );
        if s.is_certificate() {
            for (k, cols) in s.phi.iter().enumerate() {
                for (i, v) in cols.iter().enumerate() {
                    let _ = writeln!(out, "  Phi_{k}[{i}] = {v}");
                }
            }
        }
    }
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headline_exit_codes() {
        let out = run(&RunConfig::preset("connsum(prod(S2,S2),prod(S2,S2))"));
        assert_eq!(out.exit_code, EXIT_OBSTRUCTION);
        assert!(out.stdout.contains("UQR-elliptic         ruled out"));
        assert_eq!(run(&RunConfig::preset("S4")).exit_code, EXIT_OK);
        let bad = run(&RunConfig::preset("prod(S2"));
        assert_eq!(bad.exit_code, EXIT_INPUT_ERROR);
        assert!(bad.stderr.contains("position 7"));
    }

    #[test]
    fn ring_file_with_search_block() {
        let text = r#"{"name": "S2xS2", "n": 4, "betti": [1, 0, 2, 0, 1],
            "cup": [{"k": 2, "l": 2, "i": 0, "j": 1, "coeffs": [1]},
                    {"k": 2, "l": 2, "i": 1, "j": 0, "coeffs": [1]}],
            "search": {"mode": "wedge+star", "restarts": 3, "iterations": 500, "seed": 9}}"#;
        let (ring, search) = load_ring_file(text).unwrap();
        assert_eq!(ring.betti(), &[1, 0, 2, 0, 1]);
        let search = search.unwrap();
        assert_eq!((search.restarts, search.seed), (3, 9));
        assert_eq!(search.thresholds.residual, 1e-8);
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let mut cfg = RunConfig::preset("prod(S2,S2)");
        cfg.format = Format::Json;
        cfg.search.mode = Some(crate::embedding::SearchMode::WedgeStar);
        cfg.search.restarts = Some(2);
        cfg.seed = Some(3);
        let out = run(&cfg);
        assert_eq!(out.exit_code, EXIT_OK);
        let back = RunReport::from_json(&out.stdout).unwrap();
        assert_eq!(back.to_json(), out.stdout);
        assert_eq!(back.seed, 3);
    }

    #[test]
    fn refused_search_is_noted() {
        let mut cfg = RunConfig::preset("connsum^16(prod(S2,S4))");
        cfg.search.mode = Some(crate::embedding::SearchMode::Wedge);
        let report = execute(&cfg).unwrap();
        assert!(report.search.is_none());
        assert_eq!(report.notes.len(), 1);
        assert_eq!(report.exit_code(), EXIT_OBSTRUCTION);
    }
}
