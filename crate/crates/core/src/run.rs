//! Drivers behind the `simulate`, `soliton`, `bound` and `sweep` commands.
//!
//! Each driver writes its artifacts into an output directory and returns a
//! serializable report. Artifacts contain no timestamps or timings, so the
//! same configuration always produces the same bytes.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{
    blowup_condition, blowup_threshold, existence_bound, sharpness_experiment, BoundResult, GammaCase, SharpnessRow,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::initial::InitialData;
use crate::io::{read_field, serialize_time, write_comparison, write_field, write_json, write_profile, write_trace};
use crate::model::PdeParams;
use crate::solitary::{build_profile, check_admissible, SolitonParams, SolitonProfile};
use crate::spectral::{GridSpec, StateField};
use crate::stepper::{simulate, StopReason};

pub const GLOBAL_MESSAGE: &str = "gamma = 0: the slope never steepens and all solutions are global";

#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub threshold: f64,
    pub triggered: bool,
    pub witness_x0: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateSummary {
    pub stop_reason: StopReason,
    pub t_stop: f64,
    pub steps: usize,
    pub energy_initial: f64,
    pub energy_final: f64,
    pub energy_drift: f64,
    pub m_final: f64,
    pub t_star: Option<f64>,
    pub bound: BoundResult,
    /// Absent when `gamma = 0`.
    pub verdict: Option<VerdictReport>,
    pub note: Option<String>,
    /// Relative L2 distance to the translated profile, for soliton data.
    pub shape_error: Option<f64>,
    pub warnings: Vec<String>,
    pub resolved_config: RunConfig,
}

/// Runs the configured simulation and writes `config.json`, `summary.json`,
/// `trace.csv` and the requested field files into `out`.
pub fn cmd_simulate(config: &RunConfig, out: &Path) -> Result<SimulateSummary> {
    let mut resolved = config.clone();
    resolved.outputs.dir = out.to_path_buf();
    let u0 = config.initial_field()?;
    let params = config.params;
    let bound = existence_bound(&u0, &params);
    let (verdict, note) = match blowup_condition(&u0, &params) {
        Ok(v) => (
            Some(VerdictReport {
                threshold: v.threshold,
                triggered: v.triggered,
                witness_x0: v.witness_x0,
            }),
            None,
        ),
        Err(Error::GammaZero) => (None, Some(GLOBAL_MESSAGE.to_string())),
        Err(e) => return Err(e),
    };

    let mut solver = config.solver;
    if config.outputs.checkpoints && solver.checkpoint_interval.is_none() {
        solver.checkpoint_interval = Some(solver.sample_interval);
    }
    let run = simulate(&u0, &params, &solver)?;

    let shape_error = match config.initial {
        InitialData::Soliton { c } => {
            let phi = &u0;
            let norm = phi.l2_norm();
            let mut worst: f64 = 0.0;
            let fields = run
                .checkpoints
                .iter()
                .map(|cp| (cp.t, &cp.field))
                .chain(std::iter::once((run.t_stop, &run.final_state)));
            for (t, field) in fields {
                let back = field.shifted(-c * t)?;
                worst = worst.max(back.add_scaled(phi, -1.0)?.l2_norm() / norm);
            }
            Some(worst)
        }
        _ => None,
    };

    if config.outputs.trace {
        write_trace(&out.join("trace.csv"), &run.samples)?;
    }
    if config.outputs.checkpoints {
        for (k, cp) in run.checkpoints.iter().enumerate() {
            write_field(&out.join("checkpoints").join(format!("u_{k:05}.csv")), &cp.field, Some(cp.t))?;
        }
    }
    if config.outputs.final_state {
        write_field(&out.join("final.csv"), &run.final_state, Some(run.t_stop))?;
    }

    let summary = SimulateSummary {
        stop_reason: run.stop_reason,
        t_stop: run.t_stop,
        steps: run.steps,
        energy_initial: run.energy_trace.first().map(|e| e.energy).unwrap_or(0.0),
        energy_final: run.energy_trace.last().map(|e| e.energy).unwrap_or(0.0),
        energy_drift: run.energy_drift(),
        m_final: run.slope_trace.last().map(|s| s.m).unwrap_or(0.0),
        t_star: run.t_star,
        bound,
        verdict,
        note,
        shape_error,
        warnings: run.warnings.clone(),
        resolved_config: resolved.clone(),
    };
    write_json(&out.join("config.json"), &resolved)?;
    write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Serialize)]
pub struct SolitonReport {
    pub c: f64,
    pub omega: f64,
    pub gamma: f64,
    pub amplitude: f64,
    pub decay_rate: f64,
    pub measured_decay_rate: f64,
    pub first_integral_residual: f64,
    pub momentum_balance_residual: f64,
    pub profile_path: PathBuf,
}

/// Builds the solitary wave and writes `profile.csv` into `out`.
pub fn cmd_soliton(c: f64, params: PdeParams, half_width: f64, n_points: usize, out: &Path) -> Result<(SolitonReport, SolitonProfile)> {
    let p = SolitonParams::new(c, params)?;
    let adm = check_admissible(&p);
    if !adm.is_admissible() {
        return Err(Error::Inadmissible(adm.diagnostic()));
    }
    let grid = GridSpec::new(half_width, n_points)?;
    let profile = build_profile(&p, &grid)?;
    let path = out.join("profile.csv");
    write_profile(&path, &profile)?;
    let report = SolitonReport {
        c,
        omega: params.omega,
        gamma: params.gamma,
        amplitude: p.amplitude(),
        decay_rate: p.decay_rate(),
        measured_decay_rate: profile.decay_rate,
        first_integral_residual: profile.first_integral_residual(),
        momentum_balance_residual: profile.momentum_balance_residual(),
        profile_path: path,
    };
    write_json(&out.join("soliton.json"), &report)?;
    Ok((report, profile))
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    #[serde(rename = "E0")]
    pub e0: f64,
    pub m0: f64,
    pub gamma_case: GammaCase,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_4i: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triggered: Option<bool>,
    #[serde(serialize_with = "serialize_time", rename = "T_lower")]
    pub t_lower: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

pub fn bound_report(u0: &StateField, params: &PdeParams) -> BoundReport {
    let b = existence_bound(u0, params);
    let global = params.is_global_regime();
    BoundReport {
        e0: b.e0,
        m0: b.m0,
        gamma_case: b.gamma_case,
        k: b.k,
        threshold_4i: (!global).then(|| blowup_threshold(params, b.e0)),
        triggered: (!global).then(|| b.m0 < blowup_threshold(params, b.e0)),
        t_lower: b.t_lower,
        message: global.then(|| GLOBAL_MESSAGE.to_string()),
    }
}

/// Bound for the initial data of a run configuration.
pub fn cmd_bound_config(config: &RunConfig) -> Result<BoundReport> {
    Ok(bound_report(&config.initial_field()?, &config.params))
}

/// Bound for an `x,u` data file.
pub fn cmd_bound_data(path: &Path, params: &PdeParams) -> Result<BoundReport> {
    params.validate()?;
    Ok(bound_report(&read_field(path)?, params))
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub family_id: String,
    pub rows: Vec<SharpnessRow>,
    pub failed: usize,
    pub censored: usize,
    pub resolved_config: RunConfig,
}

/// Runs the family in the configuration and writes `comparison.csv` and
/// `sweep.json`. Fails when the family is empty or when every member failed.
pub fn cmd_sweep(config: &RunConfig, out: &Path, workers: Option<usize>) -> Result<SweepSummary> {
    let family = config
        .family
        .as_ref()
        .ok_or_else(|| Error::Config("sweep needs a 'family' section".to_string()))?;
    let members = config.family_members()?;
    let workers = workers.or(config.workers);
    let rows = sharpness_experiment(&family.id, &members, &config.params, &config.solver, workers)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let censored = rows.iter().filter(|r| r.censored).count();

    let mut resolved = config.clone();
    resolved.outputs.dir = out.to_path_buf();
    resolved.workers = workers;
    write_comparison(&out.join("comparison.csv"), &rows)?;
    let summary = SweepSummary {
        family_id: family.id.clone(),
        rows,
        failed,
        censored,
        resolved_config: resolved,
    };
    write_json(&out.join("sweep.json"), &summary)?;
    if failed == summary.rows.len() {
        let first = summary.rows[0].error.clone().unwrap_or_default();
        return Err(Error::Config(format!("every family member failed; first error: {first}")));
    }
    Ok(summary)
}
