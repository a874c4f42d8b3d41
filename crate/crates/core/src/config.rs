//! JSON run configuration.
//!
//! Unknown keys are rejected. A `summary.json` written by a previous run is
//! also accepted: its embedded `resolved_config` is used verbatim.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initial::{steep, InitialData};
use crate::analysis::FamilyMember;
use crate::model::PdeParams;
use crate::spectral::{GridSpec, StateField};
use crate::stepper::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub half_width: f64,
    pub n_points: usize,
}

impl GridConfig {
    pub fn build(&self) -> Result<Arc<GridSpec>> {
        if !self.n_points.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid.n_points must be a power of two, got {}",
                self.n_points
            )));
        }
        GridSpec::new(self.half_width, self.n_points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub trace: bool,
    pub checkpoints: bool,
    pub final_state: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("output"),
            trace: true,
            checkpoints: false,
            final_state: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyKind {
    /// `alpha * u0` for the run's initial data.
    Scaling { alphas: Vec<f64> },
    /// `steep(amplitude, s)` for each steepness `s`.
    Steepness { amplitude: f64, steepnesses: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub id: String,
    pub members: FamilyKind,
}

impl FamilySpec {
    pub fn len(&self) -> usize {
        match &self.members {
            FamilyKind::Scaling { alphas } => alphas.len(),
            FamilyKind::Steepness { steepnesses, .. } => steepnesses.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: PdeParams,
    pub grid: GridConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    pub initial: InitialData,
    #[serde(default)]
    pub outputs: OutputConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl RunConfig {
    /// Reads, resolves relative paths against the file's directory and validates.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        RunConfig::parse(&text, base).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Parses JSON text; relative paths are taken against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<RunConfig> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg: RunConfig = match value {
            serde_json::Value::Object(mut map) if map.contains_key("resolved_config") => {
                let inner = map.remove("resolved_config").unwrap_or_default();
                serde_json::from_value(inner).map_err(|e| Error::Config(format!("resolved_config: {e}")))?
            }
            // parse the text itself so that errors carry line and column
            _ => serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?,
        };
        cfg.initial.resolve_paths(base);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every section and builds the initial field once to apply the decay gate.
    pub fn validate(&self) -> Result<()> {
        self.params
            .validate()
            .map_err(|e| Error::Config(format!("params: {e}")))?;
        self.grid.build().map_err(|e| match e {
            Error::Config(m) => Error::Config(m),
            e => Error::Config(format!("grid: {e}")),
        })?;
        self.solver
            .validate()
            .map_err(|e| Error::Config(format!("solver: {e}")))?;
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".to_string()));
        }
        if let Some(f) = &self.family {
            if let FamilyKind::Steepness { amplitude, steepnesses } = &f.members {
                if !amplitude.is_finite() || steepnesses.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return Err(Error::Config(format!("family '{}': steepnesses must be positive", f.id)));
                }
            }
        }
        let u0 = self.initial_field()?;
        let edge = u0.edge_magnitude();
        if edge > self.solver.decay_tolerance {
            return Err(Error::DecayViolation {
                edge,
                tolerance: self.solver.decay_tolerance,
            });
        }
        Ok(())
    }

    pub fn build_grid(&self) -> Result<Arc<GridSpec>> {
        self.grid.build()
    }

    pub fn initial_field(&self) -> Result<StateField> {
        let grid = self.build_grid()?;
        self.initial
            .build(&grid, &self.params, self.seed, self.solver.decay_tolerance)
    }

    /// Materializes the family members in declaration order.
    pub fn family_members(&self) -> Result<Vec<FamilyMember>> {
        let family = self
            .family
            .as_ref()
            .ok_or_else(|| Error::Config("no family section".to_string()))?;
        if family.is_empty() {
            return Err(Error::Config(format!("family '{}' has no members", family.id)));
        }
        let grid = self.build_grid()?;
        match &family.members {
            FamilyKind::Scaling { alphas } => {
                let base = self.initial_field()?;
                alphas
                    .iter()
                    .map(|&alpha| Ok(FamilyMember { alpha, u0: base.scale(alpha)? }))
                    .collect()
            }
            FamilyKind::Steepness { amplitude, steepnesses } => Ok(steepnesses
                .iter()
                .map(|&s| FamilyMember {
                    alpha: s,
                    u0: steep(&grid, *amplitude, s),
                })
                .collect()),
        }
    }
}
