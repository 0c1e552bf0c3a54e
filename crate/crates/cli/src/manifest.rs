//! Run-manifest plumbing: JSON config ingestion with flag overrides, and
//! η-grid parsing/validation.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::str::FromStr;

use exciton_core::channels::Environment;
use exciton_core::protocol::{ChainConfig, EngineKind};
use serde::Deserialize;

use crate::CliError;

/// On-disk JSON schema. Every field is optional; missing fields take the
/// documented defaults (N = M = 3, η = 0.1, t = 1e-3, J = 1, B = 0,
/// markov, pert2). Unknown fields are rejected so typos surface by name.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    n_monomers: Option<usize>,
    n_reservoir: Option<usize>,
    eta: Option<f64>,
    t: Option<f64>,
    couplings: Option<Vec<f64>>,
    fields: Option<Vec<f64>>,
    environment: Option<String>,
    engine: Option<String>,
}

/// Fully resolved run parameters.
pub struct Resolved {
    pub config: ChainConfig,
    /// True when the engine came from a flag or the config file rather
    /// than the default (the witness preset upgrades a defaulted engine
    /// to `exact`).
    pub engine_explicit: bool,
}

/// Load the JSON config (if any), apply `--engine`/`--env` overrides, fill
/// defaults, and validate. Error messages name the offending field or file.
pub fn resolve_config(
    path: Option<&Path>,
    engine_flag: Option<&str>,
    env_flag: Option<&str>,
) -> Result<Resolved, CliError> {
    let file: ConfigFile = match path {
        None => ConfigFile::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                CliError::Validation(format!("cannot read config file {}: {e}", p.display()))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("config file {}: {e}", p.display())))?
        }
    };

    let n = file.n_monomers.unwrap_or(3);
    let m = file.n_reservoir.unwrap_or(3);
    let eta = file.eta.unwrap_or(0.1);
    let t = file.t.unwrap_or(1e-3);

    let environment = match env_flag.or(file.environment.as_deref()) {
        Some(s) => Environment::from_str(s)
            .map_err(|e| CliError::Validation(format!("environment: {e}")))?,
        None => Environment::Markov,
    };
    let engine_source = engine_flag.or(file.engine.as_deref());
    let engine_explicit = engine_source.is_some();
    let engine = match engine_source {
        Some(s) => {
            EngineKind::from_str(s).map_err(|e| CliError::Validation(format!("engine: {e}")))?
        }
        None => EngineKind::Perturbative2,
    };

    let mut config = ChainConfig::with_defaults(n, m, eta, t, environment, engine);
    if let Some(couplings) = file.couplings {
        config.spec.couplings = couplings;
    }
    if let Some(fields) = file.fields {
        config.spec.fields = fields;
    }
    config.validate()?;
    Ok(Resolved {
        config,
        engine_explicit,
    })
}

/// An η grid: `count` evenly spaced points from `start` to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

/// Slack so decimal approximations of π/2 (e.g. 1.5708) pass the bounds
/// check; evaluated points are clamped to π/2 exactly.
const GRID_STOP_SLACK: f64 = 1e-3;

impl Grid {
    pub const fn new(start: f64, stop: f64, count: usize) -> Self {
        Grid { start, stop, count }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::Validation(format!(
                "grid count must be >= 2, got {}",
                self.count
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::Validation(format!(
                "grid bounds must be finite, got {}:{}",
                self.start, self.stop
            )));
        }
        if self.start < 0.0 || self.stop > FRAC_PI_2 + GRID_STOP_SLACK || self.start > self.stop {
            return Err(CliError::Validation(format!(
                "grid bounds must satisfy 0 <= start <= stop <= π/2, got {}:{}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| (self.start + step * i as f64).min(FRAC_PI_2))
            .collect()
    }
}

/// Parse `start:stop:count` (clap value parser).
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be start:stop:count, got '{s}'"));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| format!("grid start '{}' is not a number", parts[0]))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| format!("grid stop '{}' is not a number", parts[1]))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| format!("grid count '{}' is not an integer", parts[2]))?;
    Ok(Grid::new(start, stop, count))
}
