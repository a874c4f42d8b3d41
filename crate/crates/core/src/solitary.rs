//! Smooth solitary waves `u(t, x) = phi(x - c t)`.
//!
//! Traveling waves satisfy the first integral
//!
//! ```text
//! (phi')^2 (c - g phi) = phi^2 (c - 2w - phi)
//! ```
//!
//! and exist (smooth, exponentially decaying) exactly when `c > 2w` and
//! `c (g - 1) < 2 w g`. The profile peaks at `a = c - 2w` and decays like
//! `exp(-kappa |x|)` with `kappa = sqrt(a / c)`.
//!
//! The profile is built by marching in `x` directly onto the grid nodes. Near
//! the crest the unknown is `sigma = sqrt(a - phi)`, which obeys the regular
//! equation `sigma' = (a - sigma^2) / (2 sqrt(c - g a + g sigma^2))` with
//! `sigma(0) = 0`; once `phi <= a/2` the unknown switches to `ln phi`, whose
//! slope `-sqrt((a - phi)/(c - g phi))` stays bounded all the way into the tail.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::PdeParams;
use crate::spectral::{GridSpec, StateField};
use crate::stepper::{simulate, SolverConfig, StopReason};

/// Profile samples below this fraction of the amplitude are set to zero.
pub const TAIL_CUTOFF: f64 = 1e-14;

/// Default admissible `phi(L)`.
pub const DEFAULT_EDGE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    pub speed: f64,
    pub params: PdeParams,
}

/// One of the two strict inequalities required for a smooth solitary wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `c > 2w` fails.
    SpeedAboveLinear,
    /// `c (g - 1) < 2 w g` fails.
    SpeedCap,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SpeedAboveLinear => write!(f, "c > 2ω"),
            Violation::SpeedCap => write!(f, "c(γ−1) < 2ωγ"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub violations: Vec<Violation>,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn diagnostic(&self) -> String {
        if self.violations.is_empty() {
            return "admissible".to_string();
        }
        self.violations
            .iter()
            .map(|v| format!("{v} violated"))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl SolitonParams {
    pub fn new(speed: f64, params: PdeParams) -> Result<Self> {
        params.validate()?;
        if !(speed.is_finite() && speed > 0.0) {
            return Err(Error::InvalidParams(format!(
                "wave speed must be positive, got {speed}"
            )));
        }
        Ok(SolitonParams { speed, params })
    }

    /// Crest height `a = c - 2w`.
    pub fn amplitude(&self) -> f64 {
        self.speed - 2.0 * self.params.omega
    }

    /// Tail decay rate `sqrt(a / c)`.
    pub fn decay_rate(&self) -> f64 {
        (self.amplitude() / self.speed).sqrt()
    }

    /// Crest curvature `beta` in `a - phi(x) ~ beta x^2`.
    pub fn crest_curvature(&self) -> f64 {
        let a = self.amplitude();
        a * a / (4.0 * (self.speed - self.params.gamma * a))
    }

    /// Upper speed limit `2wg/(g-1)`, binding only for `g > 1`.
    pub fn speed_cap(&self) -> Option<f64> {
        let PdeParams { gamma, omega } = self.params;
        (gamma > 1.0).then(|| 2.0 * omega * gamma / (gamma - 1.0))
    }
}

pub fn check_admissible(p: &SolitonParams) -> Admissibility {
    let PdeParams { gamma, omega } = p.params;
    let c = p.speed;
    let mut violations = Vec::new();
    if !(c * (gamma - 1.0) < 2.0 * omega * gamma) {
        violations.push(Violation::SpeedCap);
    }
    if !(c > 2.0 * omega) {
        violations.push(Violation::SpeedAboveLinear);
    }
    Admissibility { violations }
}

/// A solitary profile sampled on a grid, crest at `x = 0`.
#[derive(Debug, Clone)]
pub struct SolitonProfile {
    pub params: SolitonParams,
    pub field: StateField,
    /// Slope from the first integral, `-sign(x) phi sqrt((a - phi)/(c - g phi))`.
    pub slope: Vec<f64>,
    /// Decay rate measured from the log-slope of the tail.
    pub decay_rate: f64,
}

impl SolitonProfile {
    pub fn grid(&self) -> &Arc<GridSpec> {
        self.field.grid()
    }

    pub fn amplitude(&self) -> f64 {
        self.field.max_abs()
    }

    /// Max over the grid of `|(phi')^2 (c - g phi) - phi^2 (c - 2w - phi)|`
    /// with `phi'` taken spectrally, relative to `a^2 c`.
    pub fn first_integral_residual(&self) -> f64 {
        let PdeParams { gamma, omega } = self.params.params;
        let c = self.params.speed;
        let grid = self.grid();
        let phi = self.field.values();
        let dphi = grid.derivative_values(self.field.spectrum(), 1);
        let a = self.params.amplitude();
        let scale = a * a * c;
        phi.iter()
            .zip(&dphi)
            .map(|(p, d)| (d * d * (c - gamma * p) - p * p * (c - 2.0 * omega - p)).abs())
            .fold(0.0, f64::max)
            / scale
    }

    /// Max over the grid of the once-integrated traveling-wave equation
    /// `(2w - c) phi + c phi'' + 3/2 phi^2 - g/2 (phi')^2 - g phi phi''`.
    pub fn momentum_balance_residual(&self) -> f64 {
        let PdeParams { gamma, omega } = self.params.params;
        let c = self.params.speed;
        let grid = self.grid();
        let spec = self.field.spectrum();
        let d1 = grid.derivative_values(spec, 1);
        let d2 = grid.derivative_values(spec, 2);
        self.field
            .values()
            .iter()
            .zip(d1.iter().zip(&d2))
            .map(|(p, (p1, p2))| {
                ((2.0 * omega - c) * p + c * p2 + 1.5 * p * p - 0.5 * gamma * p1 * p1 - gamma * p * p2)
                    .abs()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
enum March {
    Crest(f64),
    Tail(f64),
}

/// `phi(j h)` for `j = 0..=nodes`.
fn march_half_profile(p: &SolitonParams, h: f64, nodes: usize) -> Vec<f64> {
    let PdeParams { gamma, .. } = p.params;
    let c = p.speed;
    let a = p.amplitude();
    let crest_gap = c - gamma * a;

    let crest_rhs = |s: f64| (a - s * s) / (2.0 * (crest_gap + gamma * s * s).sqrt());
    let tail_rhs = |psi: f64| {
        let phi = psi.exp();
        -((a - phi).max(0.0) / (c - gamma * phi)).sqrt()
    };
    let rk4 = |f: &dyn Fn(f64) -> f64, y: f64, dx: f64| {
        let k1 = f(y);
        let k2 = f(y + 0.5 * dx * k1);
        let k3 = f(y + 0.5 * dx * k2);
        let k4 = f(y + dx * k3);
        y + dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    };

    // resolve the crest core, the sharp near-cap crest, and the tail length
    let core = 2.0 * (crest_gap / a).sqrt();
    let scale = (1.0 / p.decay_rate()).min(core).min(crest_gap / a).min(1.0);
    let substeps = ((h / (2e-3 * scale)).ceil() as usize).max(1);
    let dx = h / substeps as f64;

    let mut state = March::Crest(0.0);
    let mut out = Vec::with_capacity(nodes + 1);
    out.push(a);
    for _ in 0..nodes {
        for _ in 0..substeps {
            state = match state {
                March::Crest(s) => March::Crest(rk4(&crest_rhs, s, dx)),
                March::Tail(psi) => March::Tail(rk4(&tail_rhs, psi, dx)),
            };
        }
        let phi = match state {
            March::Crest(s) => {
                let phi = a - s * s;
                if phi <= 0.5 * a {
                    state = March::Tail(phi.ln());
                }
                phi
            }
            March::Tail(psi) => psi.exp(),
        };
        out.push(if phi < TAIL_CUTOFF * a { 0.0 } else { phi });
    }
    out
}

/// Least-squares slope of `-ln phi` over tail nodes with `phi` in `[1e-12 a, 1e-4 a]`.
fn measure_decay(half: &[f64], h: f64, a: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = half
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 1e-12 * a && v < 1e-4 * a)
        .map(|(j, v)| (j as f64 * h, v.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(-sxy / sxx)
}

pub fn build_profile(p: &SolitonParams, grid: &Arc<GridSpec>) -> Result<SolitonProfile> {
    build_profile_with_tolerance(p, grid, DEFAULT_EDGE_TOLERANCE)
}

/// Builds the profile, rejecting grids where `phi(L) > edge_tolerance`.
pub fn build_profile_with_tolerance(
    p: &SolitonParams,
    grid: &Arc<GridSpec>,
    edge_tolerance: f64,
) -> Result<SolitonProfile> {
    let adm = check_admissible(p);
    if !adm.is_admissible() {
        return Err(Error::Inadmissible(adm.diagnostic()));
    }
    let n = grid.len();
    let half_n = n / 2;
    let h = grid.spacing();
    let a = p.amplitude();
    let half = march_half_profile(p, h, half_n);

    let edge = half[half_n];
    if edge > edge_tolerance {
        let required_half_width = grid.half_width() + (edge / edge_tolerance).ln() / p.decay_rate();
        return Err(Error::GridTooNarrow {
            edge,
            tolerance: edge_tolerance,
            required_half_width,
        });
    }

    // x_i = (i - N/2) h; node j = |i - N/2|
    let values: Vec<f64> = (0..n).map(|i| half[i.abs_diff(half_n)]).collect();
    let PdeParams { gamma, .. } = p.params;
    let slope = (0..n)
        .map(|i| {
            let phi = values[i];
            let mag = phi * ((a - phi).max(0.0) / (p.speed - gamma * phi)).sqrt();
            if i < half_n {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let decay_rate = measure_decay(&half, h, a).unwrap_or_else(|| p.decay_rate());
    Ok(SolitonProfile {
        params: *p,
        field: StateField::new(grid.clone(), values)?,
        slope,
        decay_rate,
    })
}

/// Shape and speed diagnostics of a propagated solitary wave.
#[derive(Debug, Clone, Serialize)]
pub struct TravelingReport {
    pub times: Vec<f64>,
    /// `||u(t, . + c t) - phi|| / ||phi||` in the grid `L^2` norm.
    pub l2_errors: Vec<f64>,
    pub max_errors: Vec<f64>,
    /// Crest position (quadratic sub-grid fit), unwrapped across the seam.
    pub peak_positions: Vec<f64>,
    pub measured_speed: f64,
    pub stop_reason: StopReason,
    pub t_stop: f64,
}

impl TravelingReport {
    pub fn completed(&self) -> bool {
        self.stop_reason == StopReason::ReachedTEnd
    }

    pub fn max_l2_error(&self) -> f64 {
        self.l2_errors.iter().copied().fold(0.0, f64::max)
    }

    pub fn final_l2_error(&self) -> f64 {
        self.l2_errors.last().copied().unwrap_or(0.0)
    }
}

/// Crest location from a parabola through the discrete maximum and its neighbours.
pub fn peak_location(field: &StateField) -> f64 {
    let v = field.values();
    let n = v.len();
    let grid = field.grid();
    let (i, _) = v
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, &x)| if x > b.1 { (i, x) } else { b });
    let (l, c, r) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
    let denom = l - 2.0 * c + r;
    let offset = if denom != 0.0 { 0.5 * (l - r) / denom } else { 0.0 };
    grid.x(i) + offset * grid.spacing()
}

/// Evolves the profile for `config.t_end` and compares with the exact translate.
///
/// Checkpoints default to ten per run when the config sets none.
pub fn verify_traveling(profile: &SolitonProfile, config: &SolverConfig) -> Result<TravelingReport> {
    let mut cfg = *config;
    if cfg.checkpoint_interval.is_none() {
        cfg.checkpoint_interval = Some(cfg.t_end / 10.0);
    }
    let c = profile.params.speed;
    let run = simulate(&profile.field, &profile.params.params, &cfg)?;
    let norm = profile.field.l2_norm();
    let period = profile.grid().period();

    let mut report = TravelingReport {
        times: Vec::new(),
        l2_errors: Vec::new(),
        max_errors: Vec::new(),
        peak_positions: Vec::new(),
        measured_speed: f64::NAN,
        stop_reason: run.stop_reason,
        t_stop: run.t_stop,
    };
    let mut unwrap = 0.0;
    let mut prev: Option<f64> = None;
    for cp in &run.checkpoints {
        let back = cp.field.shifted(-c * cp.t)?;
        let diff = back.add_scaled(&profile.field, -1.0)?;
        let mut pos = peak_location(&cp.field);
        if let Some(q) = prev {
            if pos + unwrap < q - 0.5 * period {
                unwrap += period;
            }
        }
        pos += unwrap;
        prev = Some(pos);
        report.times.push(cp.t);
        report.l2_errors.push(diff.l2_norm() / norm);
        report.max_errors.push(diff.max_abs());
        report.peak_positions.push(pos);
    }
    if report.times.len() >= 2 {
        let n = report.times.len() as f64;
        let mt = report.times.iter().sum::<f64>() / n;
        let mp = report.peak_positions.iter().sum::<f64>() / n;
        let (sxy, sxx) = report
            .times
            .iter()
            .zip(&report.peak_positions)
            .fold((0.0, 0.0), |(a, b), (t, p)| (a + (t - mt) * (p - mp), b + (t - mt) * (t - mt)));
        report.measured_speed = sxy / sxx;
    }
    Ok(report)
}
