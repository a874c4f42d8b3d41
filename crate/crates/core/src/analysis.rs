//! Blow-up criterion and existence-time lower bound for smooth data.
//!
//! With `E0 = E(u0)` and `m0 = min g u0'`, the slope obeys a Riccati
//! comparison `m' >= -(m^2 + K)/2`, where the bracket `K` depends on which
//! range `gamma` falls in. Integrating the comparison gives the lower bound
//!
//! ```text
//! T(u0) = (2/sqrt K) (pi/2 + atan(m0 / sqrt K))
//! ```
//!
//! which for `m0 < 0` is the same number as `-2 atan(sqrt K / m0) / sqrt K`.
//! Separately, a point with `g u0'(x0) < -sqrt(|(g-3)g|/2 E0 + 4 sqrt2 w |g| sqrt E0)`
//! forces breaking in finite time.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{energy, PdeParams};
use crate::spectral::StateField;
use crate::stepper::{simulate, SolverConfig, StopReason};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaCase {
    /// `0 < g < 3/2`
    Low,
    /// `3/2 <= g <= 3`
    Mid,
    /// `g > 3` or `g < 0`
    HighOrNeg,
    Zero,
}

impl GammaCase {
    pub fn of(gamma: f64) -> GammaCase {
        if gamma == 0.0 {
            GammaCase::Zero
        } else if gamma > 0.0 && gamma < 1.5 {
            GammaCase::Low
        } else if (1.5..=3.0).contains(&gamma) {
            GammaCase::Mid
        } else {
            GammaCase::HighOrNeg
        }
    }

    /// Coefficient of `E0` in the bracket for this case.
    pub fn energy_coefficient(self, gamma: f64) -> f64 {
        match self {
            GammaCase::Low => 0.5 * (3.0 - gamma) * gamma,
            GammaCase::Mid => 0.5 * gamma * gamma,
            GammaCase::HighOrNeg => 0.5 * (2.0 * gamma - 3.0) * gamma,
            GammaCase::Zero => 0.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GammaCase::Low => "low",
            GammaCase::Mid => "mid",
            GammaCase::HighOrNeg => "high_or_neg",
            GammaCase::Zero => "zero",
        }
    }
}

fn omega_term(params: &PdeParams, e0: f64) -> f64 {
    4.0 * SQRT_2 * params.omega * params.gamma.abs() * e0.sqrt()
}

/// `K = coef(case) E0 + 4 sqrt2 w |g| sqrt E0`.
pub fn bound_bracket(case: GammaCase, params: &PdeParams, e0: f64) -> f64 {
    case.energy_coefficient(params.gamma) * e0 + omega_term(params, e0)
}

/// Right side of the blow-up criterion: `-sqrt(|(g-3)g|/2 E0 + 4 sqrt2 w |g| sqrt E0)`.
pub fn blowup_threshold(params: &PdeParams, e0: f64) -> f64 {
    let g = params.gamma;
    -(0.5 * ((g - 3.0) * g).abs() * e0 + omega_term(params, e0)).sqrt()
}

/// Riccati lower bound `(2/sqrt K)(pi/2 + atan(m0/sqrt K))`, continuous in `m0`.
///
/// `K = 0` is taken as the limit: `2/|m0|` for `m0 < 0`, infinite otherwise.
pub fn riccati_lower_bound(k: f64, m0: f64) -> f64 {
    if k <= 0.0 {
        return if m0 < 0.0 { -2.0 / m0 } else { f64::INFINITY };
    }
    let r = k.sqrt();
    2.0 / r * (FRAC_PI_2 + (m0 / r).atan())
}

/// The same bound in the form `-2 atan(sqrt K / m0) / sqrt K`; meaningful for `m0 < 0`.
pub fn riccati_lower_bound_arctan_form(k: f64, m0: f64) -> f64 {
    let r = k.sqrt();
    -2.0 * (r / m0).atan() / r
}

/// Earliest time at which the comparison solution started from `m0` can reach `level < m0`.
///
/// Any run that stops when `m` crosses `level` stops no earlier than this.
pub fn riccati_crossing_time(k: f64, m0: f64, level: f64) -> f64 {
    if level >= m0 {
        return 0.0;
    }
    if k <= 0.0 {
        return if level < 0.0 && m0 < 0.0 {
            2.0 * (1.0 / level - 1.0 / m0)
        } else if level < 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
    }
    let r = k.sqrt();
    2.0 / r * ((m0 / r).atan() - (level / r).atan())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    #[serde(rename = "E0")]
    pub e0: f64,
    pub m0: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub gamma_case: GammaCase,
    /// `f64::INFINITY` when `g = 0` or `E0 = 0`.
    #[serde(serialize_with = "crate::io::serialize_time", rename = "T_lower")]
    pub t_lower: f64,
}

/// `min_i g u0'(x_i)` together with its index.
fn min_scaled_slope(u0: &StateField, gamma: f64) -> (usize, f64) {
    let grid = u0.grid();
    grid.derivative_values(u0.spectrum(), 1)
        .iter()
        .map(|d| gamma * d)
        .enumerate()
        .fold((0, f64::INFINITY), |b, (i, s)| if s < b.1 { (i, s) } else { b })
}

pub fn existence_bound(u0: &StateField, params: &PdeParams) -> BoundResult {
    let e0 = energy(u0);
    let gamma_case = GammaCase::of(params.gamma);
    let (_, m0) = min_scaled_slope(u0, params.gamma);
    let k = bound_bracket(gamma_case, params, e0);
    let t_lower = if gamma_case == GammaCase::Zero || e0 == 0.0 {
        f64::INFINITY
    } else {
        riccati_lower_bound(k, m0)
    };
    BoundResult {
        e0,
        m0,
        k,
        gamma_case,
        t_lower,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupVerdict {
    pub e0: f64,
    pub threshold: f64,
    pub witness_x0: Option<f64>,
    pub triggered: bool,
}

/// Scans `g u0'` for a point below the blow-up threshold.
pub fn blowup_condition(u0: &StateField, params: &PdeParams) -> Result<BlowupVerdict> {
    if params.is_global_regime() {
        return Err(Error::GammaZero);
    }
    let e0 = energy(u0);
    let threshold = blowup_threshold(params, e0);
    let (idx, m0) = min_scaled_slope(u0, params.gamma);
    let triggered = m0 < threshold;
    Ok(BlowupVerdict {
        e0,
        threshold,
        witness_x0: triggered.then(|| u0.grid().x(idx)),
        triggered,
    })
}

/// One member of an initial-data family, labelled by its parameter value.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub alpha: f64,
    pub u0: StateField,
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessRow {
    pub family_id: String,
    pub alpha: f64,
    pub e0: f64,
    pub m0: f64,
    pub gamma_case: GammaCase,
    pub k: f64,
    #[serde(serialize_with = "crate::io::serialize_time")]
    pub t_lower: f64,
    pub t_star: Option<f64>,
    pub ratio: Option<f64>,
    /// No blow-up observed before `t_end`.
    pub censored: bool,
    pub stop_reason: Option<StopReason>,
    pub error: Option<String>,
}

impl SharpnessRow {
    /// Whether `t* >= T_lower (1 - tolerance)`; `None` for censored or failed rows.
    pub fn respects_bound(&self, tolerance: f64) -> Option<bool> {
        self.ratio.map(|r| r >= 1.0 - tolerance)
    }
}

/// Relative slack allowed when comparing extrapolated blow-up times with the bound.
pub const SHARPNESS_TOLERANCE: f64 = 0.02;

fn sharpness_row(family_id: &str, member: &FamilyMember, params: &PdeParams, config: &SolverConfig) -> SharpnessRow {
    let bound = existence_bound(&member.u0, params);
    let mut row = SharpnessRow {
        family_id: family_id.to_string(),
        alpha: member.alpha,
        e0: bound.e0,
        m0: bound.m0,
        gamma_case: bound.gamma_case,
        k: bound.k,
        t_lower: bound.t_lower,
        t_star: None,
        ratio: None,
        censored: false,
        stop_reason: None,
        error: None,
    };
    match simulate(&member.u0, params, config) {
        Ok(run) => {
            row.stop_reason = Some(run.stop_reason);
            match (run.stop_reason.is_blowup(), run.t_star) {
                (true, Some(t_star)) => {
                    row.t_star = Some(t_star);
                    row.ratio = Some(t_star / bound.t_lower);
                }
                _ => row.censored = true,
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Simulates every member and tabulates observed versus guaranteed existence time.
///
/// Members run concurrently on `workers` threads (all available cores when
/// `None`); rows come back in member order.
pub fn sharpness_experiment(
    family_id: &str,
    family: &[FamilyMember],
    params: &PdeParams,
    config: &SolverConfig,
    workers: Option<usize>,
) -> Result<Vec<SharpnessRow>> {
    if params.is_global_regime() {
        return Err(Error::GammaZero);
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        family
            .par_iter()
            .map(|m| sharpness_row(family_id, m, params, config))
            .collect()
    }))
}
