//! Initial-data presets.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::read_field;
use crate::model::PdeParams;
use crate::solitary::{build_profile_with_tolerance, SolitonParams};
use crate::spectral::{GridSpec, StateField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `A exp(-((x - x0)/w)^2)`
    Gaussian { amplitude: f64, width: f64, center: f64 },
    /// Solitary wave of speed `c` for the run's parameters.
    Soliton { c: f64 },
    /// `alpha` times the solitary wave of speed `c`.
    ScaledSoliton { c: f64, alpha: f64 },
    /// `-A tanh(s x) sech^2 x`, whose slope at the origin is `-A s`.
    Steep { amplitude: f64, steepness: f64 },
    /// `x,u` table on the run's grid.
    File { path: PathBuf },
    /// Sum of `count` Gaussian bumps with seeded amplitudes, centers and widths.
    RandomBumps { count: usize, amplitude: f64 },
    Zero,
}

impl InitialData {
    /// Checks the preset's own parameters.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("initial: {msg}")));
        let finite = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("initial: {name} must be finite, got {v}")))
            }
        };
        match self {
            InitialData::Gaussian { amplitude, width, center } => {
                finite("amplitude", *amplitude)?;
                finite("center", *center)?;
                if !(width.is_finite() && *width > 0.0) {
                    return bad(format!("width must be positive, got {width}"));
                }
            }
            InitialData::Soliton { c } => finite("c", *c)?,
            InitialData::ScaledSoliton { c, alpha } => {
                finite("c", *c)?;
                finite("alpha", *alpha)?;
            }
            InitialData::Steep { amplitude, steepness } => {
                finite("amplitude", *amplitude)?;
                if !(steepness.is_finite() && *steepness > 0.0) {
                    return bad(format!("steepness must be positive, got {steepness}"));
                }
            }
            InitialData::File { path } => {
                if !path.is_file() {
                    return bad(format!("data file {} does not exist", path.display()));
                }
            }
            InitialData::RandomBumps { count, amplitude } => {
                finite("amplitude", *amplitude)?;
                if *count == 0 {
                    return bad("count must be at least 1".to_string());
                }
            }
            InitialData::Zero => {}
        }
        Ok(())
    }

    /// Resolves a relative data-file path against `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        if let InitialData::File { path } = self {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }

    /// Samples the preset on `grid`. Solitons are built with `edge_tolerance`
    /// as their admissible edge value.
    pub fn build(&self, grid: &Arc<GridSpec>, params: &PdeParams, seed: u64, edge_tolerance: f64) -> Result<StateField> {
        self.validate()?;
        match self {
            InitialData::Gaussian { amplitude, width, center } => {
                StateField::from_fn(grid.clone(), |x| amplitude * (-((x - center) / width).powi(2)).exp())
            }
            InitialData::Soliton { c } => soliton(grid, params, *c, 1.0, edge_tolerance),
            InitialData::ScaledSoliton { c, alpha } => soliton(grid, params, *c, *alpha, edge_tolerance),
            InitialData::Steep { amplitude, steepness } => Ok(steep(grid, *amplitude, *steepness)),
            InitialData::File { path } => {
                let field = read_field(path)?;
                let g = field.grid();
                if g.len() != grid.len() || (g.half_width() - grid.half_width()).abs() > 1e-9 * grid.half_width() {
                    return Err(Error::Config(format!(
                        "initial: {} holds {} points on [-{}, {}), run grid has {} points on [-{}, {})",
                        path.display(),
                        g.len(),
                        g.half_width(),
                        g.half_width(),
                        grid.len(),
                        grid.half_width(),
                        grid.half_width()
                    )));
                }
                StateField::new(grid.clone(), field.into_values())
            }
            InitialData::RandomBumps { count, amplitude } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let l = grid.half_width();
                let bumps: Vec<(f64, f64, f64)> = (0..*count)
                    .map(|_| {
                        (
                            amplitude * rng.gen_range(-1.0..1.0),
                            rng.gen_range(-0.4 * l..0.4 * l),
                            rng.gen_range(0.5..2.0),
                        )
                    })
                    .collect();
                StateField::from_fn(grid.clone(), |x| {
                    bumps.iter().map(|(a, c, w)| a * (-((x - c) / w).powi(2)).exp()).sum()
                })
            }
            InitialData::Zero => Ok(StateField::zeros(grid.clone())),
        }
    }
}

/// `-A tanh(s x) sech^2 x`.
pub fn steep(grid: &Arc<GridSpec>, amplitude: f64, steepness: f64) -> StateField {
    StateField::from_fn(grid.clone(), |x| {
        let sech = 1.0 / x.cosh();
        -amplitude * (steepness * x).tanh() * sech * sech
    })
    .expect("steep profile is finite")
}

fn soliton(grid: &Arc<GridSpec>, params: &PdeParams, c: f64, alpha: f64, edge_tolerance: f64) -> Result<StateField> {
    let p = SolitonParams::new(c, *params)?;
    let profile = build_profile_with_tolerance(&p, grid, edge_tolerance)?;
    profile.field.scale(alpha)
}
