//! Run manifests: the full configuration plus what the run actually used.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};
use crate::experiment::ExperimentConfig;
use crate::gci::{beta_coefficients, solve_gci, Betas, TABULATION_GRID};

use super::config::{config_from_document, write_config_into};
use super::keyvalue::{Document, Writer};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const BUILD_ID: &str = env!("SOHRLAB_BUILD_ID");

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub command: String,
    pub c1: f64,
    pub c2: f64,
    pub k0: f64,
    pub phi0: f64,
    pub betas: Betas,
    pub seeds: Vec<u64>,
    pub tool_version: String,
    pub build_id: String,
    /// Seconds since the Unix epoch at start and end of the run.
    pub started: u64,
    pub finished: u64,
    /// Free-form results recorded by the command, in order.
    pub results: Vec<(String, String)>,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn new(config: &ExperimentConfig, command: &str) -> Result<Self> {
        let h = &config.hydro;
        let table = solve_gci(h.d, 2, TABULATION_GRID)?;
        let seeds = (0..config.realizations as u64).map(|r| config.seed.wrapping_add(r)).collect();
        Ok(Self {
            config: config.clone(),
            command: command.to_string(),
            c1: h.c1,
            c2: h.c2,
            k0: h.k0,
            phi0: h.phi0(),
            betas: beta_coefficients(&table, h.alpha, h.phi0(), h.k0),
            seeds,
            tool_version: TOOL_VERSION.to_string(),
            build_id: BUILD_ID.to_string(),
            started: now(),
            finished: 0,
            results: Vec::new(),
        })
    }

    pub fn record(&mut self, key: &str, value: impl std::fmt::Display) {
        self.results.push((key.to_string(), value.to_string()));
    }

    pub fn finish(&mut self) {
        self.finished = now();
    }

    pub fn to_text(&self) -> String {
        let mut w = Writer::default();
        write_config_into(&self.config, &mut w);
        let h = &self.config.hydro;
        w.section("run")
            .kv("command", &self.command)
            .kv("tool_version", &self.tool_version)
            .kv("build_id", &self.build_id)
            .kv("started", self.started)
            .kv("finished", self.finished)
            .kv("scheme", format!("relaxation-splitting/{}", h.flux.as_str()))
            .kv("model", h.mode.as_str())
            .kv("c1", format!("{:?}", self.c1))
            .kv("c2", format!("{:?}", self.c2))
            .kv("k0", format!("{:?}", self.k0))
            .kv("phi0", format!("{:?}", self.phi0));
        for (k, b) in self.betas.0.iter().enumerate() {
            w.kv(&format!("beta{}", k + 1), format!("{b:?}"));
        }
        let seeds: Vec<String> = self.seeds.iter().map(|s| s.to_string()).collect();
        w.kv("seeds", seeds.join(", "));
        if !self.results.is_empty() {
            w.section("results");
            for (k, v) in &self.results {
                w.kv(k, v);
            }
        }
        w.finish()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        super::write_text(path, &self.to_text())
    }
}

/// Configuration recorded in a manifest; the `[run]` and `[results]`
/// sections are informational and skipped.
pub fn config_from_manifest(text: &str, path: &Path) -> Result<ExperimentConfig> {
    let mut doc = Document::parse(text, path)?;
    if !doc.has_section("run") {
        return Err(Error::Config(format!("{}: not a run manifest (no [run] section)", path.display())));
    }
    config_from_document(&mut doc, &["run", "results"])
}

pub fn load_manifest_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    config_from_manifest(&text, path)
}
