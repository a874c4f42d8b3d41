//! The evolution equation
//!
//! ```text
//! u_t - u_txx + 2 w u_x + 3 u u_x = g (2 u_x u_xx + u u_xxx)
//! ```
//!
//! in its three equivalent guises: the nonlocal form integrated by the solver,
//! the momentum form in `y = u - u_xx` (cross-check), and the raw third-order
//! form (residual diagnostic). Also the conserved energy and the slope
//! quantities `m(t) = inf_x g u_x` driving wave breaking.
//!
//! All pointwise products are formed in physical space and dealiased before
//! they re-enter spectral space.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{GridSpec, StateField};

/// The two fixed constants `(gamma, omega)`, `omega >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeParams {
    pub gamma: f64,
    pub omega: f64,
}

impl PdeParams {
    pub fn new(gamma: f64, omega: f64) -> Result<Self> {
        let p = PdeParams { gamma, omega };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() {
            return Err(Error::InvalidParams(format!(
                "gamma must be finite, got {}",
                self.gamma
            )));
        }
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "omega must be finite and >= 0, got {}",
                self.omega
            )));
        }
        Ok(())
    }

    /// `gamma = 0`: the regularized long wave equation, every solution global.
    pub fn is_global_regime(&self) -> bool {
        self.gamma == 0.0
    }

    /// Camassa-Holm member (`gamma = 1`).
    pub fn is_camassa_holm(&self) -> bool {
        self.gamma == 1.0
    }
}

/// One point of the slope trace: `m = min g u_x` attained at `xi`, next to grid point `xi_index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeSample {
    pub t: f64,
    pub m: f64,
    pub xi: f64,
    pub xi_index: usize,
    /// Right side of the slope equation evaluated at `(t, xi)`.
    pub m_rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySample {
    pub t: f64,
    pub energy: f64,
}

fn ik(grid: &GridSpec, idx: usize, k: f64) -> Complex64 {
    grid.derivative_symbol(idx, k, 1)
}

/// Time derivative from the nonlocal form
/// `u_t = -g u u_x - d_x p*((3-g)/2 u^2 + g/2 u_x^2 + 2 w u)`.
pub fn rhs_nonlocal(u: &StateField, params: &PdeParams) -> Result<StateField> {
    let grid = u.grid();
    let values = nonlocal_rhs_values(grid, u.values(), params);
    StateField::new(grid.clone(), values)
}

/// Slice-level kernel of [`rhs_nonlocal`]; output may be non-finite.
pub(crate) fn nonlocal_rhs_values(grid: &GridSpec, u: &[f64], params: &PdeParams) -> Vec<f64> {
    let PdeParams { gamma, omega } = *params;
    let uh = grid.forward(u);
    let ux = grid.derivative_values(&uh, 1);
    let transport = grid.product_spectrum(u, &ux);
    let forcing: Vec<f64> = u
        .iter()
        .zip(&ux)
        .map(|(v, d)| 0.5 * (3.0 - gamma) * v * v + 0.5 * gamma * d * d)
        .collect();
    let mut forcing_hat = grid.forward(&forcing);
    crate::spectral::dealias_in_place(&mut forcing_hat);

    let out: Vec<Complex64> = (0..grid.len())
        .map(|idx| {
            let k = grid.wavenumbers()[idx];
            let nonlocal = ik(grid, idx, k) / (1.0 + k * k)
                * (forcing_hat[idx] + 2.0 * omega * uh[idx]);
            -gamma * transport[idx] - nonlocal
        })
        .collect();
    grid.inverse(&out)
}

/// Time derivative from the momentum form
/// `y_t = -g y_x u - 2 g y u_x - 2 w u_x - 3(1-g) u u_x`, `u_t = p * y_t`.
pub fn rhs_momentum(u: &StateField, params: &PdeParams) -> Result<StateField> {
    let PdeParams { gamma, omega } = *params;
    let grid = u.grid();
    let uh = u.spectrum();
    let v = u.values();
    let ux = grid.derivative_values(uh, 1);
    let uxx = grid.derivative_values(uh, 2);
    let uxxx = grid.derivative_values(uh, 3);
    let y: Vec<f64> = v.iter().zip(&uxx).map(|(a, b)| a - b).collect();
    let yx: Vec<f64> = ux.iter().zip(&uxxx).map(|(a, b)| a - b).collect();

    let yx_u = grid.product_spectrum(&yx, v);
    let y_ux = grid.product_spectrum(&y, &ux);
    let u_ux = grid.product_spectrum(v, &ux);
    let yt: Vec<Complex64> = (0..grid.len())
        .map(|idx| {
            let k = grid.wavenumbers()[idx];
            -gamma * yx_u[idx] - 2.0 * gamma * y_ux[idx] - 2.0 * omega * ik(grid, idx, k) * uh[idx]
                - 3.0 * (1.0 - gamma) * u_ux[idx]
        })
        .collect();
    let ut = crate::spectral::helmholtz_spectrum(grid, &yt);
    StateField::from_spectrum(grid.clone(), &ut)
}

/// Max-norm residual of the third-order form for a candidate `u_t`.
pub fn pde_residual(u: &StateField, u_t: &StateField, params: &PdeParams) -> Result<f64> {
    if u.grid() != u_t.grid() {
        return Err(Error::GridMismatch);
    }
    let PdeParams { gamma, omega } = *params;
    let grid = u.grid();
    let uh = u.spectrum();
    let v = u.values();
    let ux = grid.derivative_values(uh, 1);
    let uxx = grid.derivative_values(uh, 2);
    let uxxx = grid.derivative_values(uh, 3);
    let u_ux = grid.product_spectrum(v, &ux);
    let ux_uxx = grid.product_spectrum(&ux, &uxx);
    let u_uxxx = grid.product_spectrum(v, &uxxx);
    let uth = u_t.spectrum();

    let res: Vec<Complex64> = (0..grid.len())
        .map(|idx| {
            let k = grid.wavenumbers()[idx];
            (1.0 + k * k) * uth[idx] + 2.0 * omega * ik(grid, idx, k) * uh[idx]
                + 3.0 * u_ux[idx]
                - gamma * (2.0 * ux_uxx[idx] + u_uxxx[idx])
        })
        .collect();
    let r = grid.inverse(&res);
    Ok(r.iter().fold(0.0, |m, x| m.max(x.abs())))
}

/// `E(u) = integral of (u^2 + u_x^2)` by the trapezoidal rule.
pub fn energy(u: &StateField) -> f64 {
    let grid = u.grid();
    let ux = grid.derivative_values(u.spectrum(), 1);
    grid.spacing()
        * u.values()
            .iter()
            .zip(&ux)
            .map(|(a, b)| a * a + b * b)
            .sum::<f64>()
}

/// Spectrum of `G = (3-g)g/2 u^2 + g^2/2 u_x^2 + 2 w g u`, the argument of the
/// convolution in the slope equations.
fn slope_forcing_spectrum(grid: &GridSpec, u: &[f64], uh: &[Complex64], ux: &[f64], params: &PdeParams) -> Vec<Complex64> {
    let PdeParams { gamma, omega } = *params;
    let g: Vec<f64> = u
        .iter()
        .zip(ux)
        .map(|(v, d)| 0.5 * (3.0 - gamma) * gamma * v * v + 0.5 * gamma * gamma * d * d)
        .collect();
    let mut gh = grid.forward(&g);
    crate::spectral::dealias_in_place(&mut gh);
    gh.iter()
        .zip(uh)
        .map(|(a, b)| a + 2.0 * omega * gamma * b)
        .collect()
}

/// Whole-field `g u_tx` from the differentiated nonlocal form:
/// `-g^2/2 u_x^2 - g^2 u u_xx + (3-g)g/2 u^2 + 2 w g u - p*G`.
pub fn utx_field(u: &StateField, params: &PdeParams) -> Result<StateField> {
    let PdeParams { gamma, omega } = *params;
    let grid = u.grid();
    let uh = u.spectrum();
    let v = u.values();
    let ux = grid.derivative_values(uh, 1);
    let uxx = grid.derivative_values(uh, 2);
    let ux2 = grid.product_spectrum(&ux, &ux);
    let u_uxx = grid.product_spectrum(v, &uxx);
    let u2 = grid.product_spectrum(v, v);
    let gh = slope_forcing_spectrum(grid, v, uh, &ux, params);

    let out: Vec<Complex64> = (0..grid.len())
        .map(|idx| {
            let k = grid.wavenumbers()[idx];
            -0.5 * gamma * gamma * ux2[idx] - gamma * gamma * u_uxx[idx]
                + 0.5 * (3.0 - gamma) * gamma * u2[idx]
                + 2.0 * omega * gamma * uh[idx]
                - gh[idx] / (1.0 + k * k)
        })
        .collect();
    StateField::from_spectrum(grid.clone(), &out)
}

/// Locates `m = min g u_x` and evaluates
/// `m' = -m^2/2 + (3-g)g/2 u^2 + 2 w g u - p*G` at the minimizer.
///
/// The grid minimizer is refined by Newton steps on `g u_xx = 0` using the
/// trigonometric interpolant, so `m(t)` stays smooth as the minimum moves
/// between grid points. With `gamma = 0` the slope is identically zero and
/// `xi` is the first grid point.
pub fn slope_sample(u: &StateField, params: &PdeParams, t: f64) -> SlopeSample {
    let grid = u.grid();
    if params.is_global_regime() {
        return SlopeSample {
            t,
            m: 0.0,
            xi: grid.x(0),
            xi_index: 0,
            m_rhs: 0.0,
        };
    }
    let PdeParams { gamma, omega } = *params;
    let uh = u.spectrum();
    let v = u.values();
    let ux = grid.derivative_values(uh, 1);
    let (xi_index, grid_m) = ux
        .iter()
        .map(|d| gamma * d)
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, s)| if s < best.1 { (i, s) } else { best });

    let h = grid.spacing();
    let x_grid = grid.x(xi_index);
    let mut xi = x_grid;
    for _ in 0..8 {
        let d = grid.evaluate_at(uh, xi, &[2, 3]);
        let (s2, s3) = (gamma * d[0], gamma * d[1]);
        if !(s3 > 0.0) {
            break;
        }
        let step = (-s2 / s3).clamp(-h, h);
        xi = (xi + step).clamp(x_grid - h, x_grid + h);
        if step.abs() < 1e-14 * h {
            break;
        }
    }

    let gh = slope_forcing_spectrum(grid, v, uh, &ux, params);
    let conv_h = crate::spectral::helmholtz_spectrum(grid, &gh);
    let at = grid.evaluate_at(uh, xi, &[0, 1]);
    let (u_xi, m, conv) = if gamma * at[1] <= grid_m {
        (at[0], gamma * at[1], grid.evaluate_at(&conv_h, xi, &[0])[0])
    } else {
        xi = x_grid;
        (v[xi_index], grid_m, grid.inverse(&conv_h)[xi_index])
    };
    let m_rhs = -0.5 * m * m + 0.5 * (3.0 - gamma) * gamma * u_xi * u_xi
        + 2.0 * omega * gamma * u_xi
        - conv;
    SlopeSample {
        t,
        m,
        xi,
        xi_index,
        m_rhs,
    }
}
