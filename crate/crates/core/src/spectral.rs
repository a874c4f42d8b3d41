//! Periodic Fourier machinery on the box `[-L, L)`.
//!
//! Every other module goes through the operations here: spectral
//! differentiation, the Helmholtz inverse `(1 - d_xx)^{-1}` (convolution with
//! the kernel `p(x) = exp(-|x|)/2`, periodized), 2/3-rule dealiasing and the
//! discrete `H^s` norms.
//!
//! Transforms use the unnormalized forward DFT `f_k = sum_j u_j exp(-i k x_j)`
//! relative to `x_0 = -L`; the inverse carries the `1/N`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Uniform periodic grid with its wavenumber set and cached FFT plans.
///
/// Plans are immutable after construction, so a `GridSpec` (usually behind an
/// [`Arc`]) can be shared freely between threads.
pub struct GridSpec {
    half_width: f64,
    n_points: usize,
    spacing: f64,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridSpec")
            .field("half_width", &self.half_width)
            .field("n_points", &self.n_points)
            .finish()
    }
}

impl PartialEq for GridSpec {
    fn eq(&self, other: &Self) -> bool {
        self.half_width == other.half_width && self.n_points == other.n_points
    }
}

impl GridSpec {
    /// Builds the grid `x_i = -L + i h`, `h = 2L/N`. `N` must be even and at least 16.
    pub fn new(half_width: f64, n_points: usize) -> Result<Arc<GridSpec>> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half width must be positive and finite, got {half_width}"
            )));
        }
        if n_points < 16 || !n_points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "point count must be even and >= 16, got {n_points}"
            )));
        }
        let spacing = 2.0 * half_width / n_points as f64;
        let wavenumbers = (0..n_points)
            .map(|idx| PI * mode_index(idx, n_points) as f64 / half_width)
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Arc::new(GridSpec {
            half_width,
            n_points,
            spacing,
            wavenumbers,
            forward: planner.plan_fft_forward(n_points),
            inverse: planner.plan_fft_inverse(n_points),
        }))
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Domain length `2L`.
    pub fn period(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Wavenumbers in FFT storage order; index `N/2` is the Nyquist mode.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn nyquist_index(&self) -> usize {
        self.n_points / 2
    }

    /// Largest retained mode index under the 2/3 rule: `3K < N`.
    pub fn dealias_cutoff(&self) -> usize {
        (self.n_points - 1) / 3
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(values.len(), self.n_points);
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse transform, keeping the real part.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<f64> {
        debug_assert_eq!(spectrum.len(), self.n_points);
        let mut buf = spectrum.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n_points as f64;
        buf.iter().map(|c| c.re * scale).collect()
    }

    /// Multiplies each mode by `symbol(idx, k)`.
    pub(crate) fn apply<F>(&self, spectrum: &[Complex64], symbol: F) -> Vec<Complex64>
    where
        F: Fn(usize, f64) -> Complex64,
    {
        spectrum
            .iter()
            .zip(&self.wavenumbers)
            .enumerate()
            .map(|(idx, (s, &k))| s * symbol(idx, k))
            .collect()
    }

    /// Symbol of `d^order/dx^order`, with the Nyquist mode zeroed for odd orders.
    pub(crate) fn derivative_symbol(&self, idx: usize, k: f64, order: u32) -> Complex64 {
        if order % 2 == 1 && idx == self.nyquist_index() {
            return ZERO;
        }
        Complex64::new(0.0, k).powu(order)
    }

    pub(crate) fn derivative_spectrum(&self, spectrum: &[Complex64], order: u32) -> Vec<Complex64> {
        self.apply(spectrum, |idx, k| self.derivative_symbol(idx, k, order))
    }

    pub(crate) fn derivative_values(&self, spectrum: &[Complex64], order: u32) -> Vec<f64> {
        self.inverse(&self.derivative_spectrum(spectrum, order))
    }

    /// Derivatives of the trigonometric interpolant at an arbitrary point `x`,
    /// one value per entry of `orders`. The Nyquist mode is dropped for odd orders.
    pub(crate) fn evaluate_at(&self, spectrum: &[Complex64], x: f64, orders: &[u32]) -> Vec<f64> {
        let theta = x + self.half_width;
        let mut out = vec![0.0; orders.len()];
        for (idx, (s, &k)) in spectrum.iter().zip(&self.wavenumbers).enumerate() {
            let (sin, cos) = (k * theta).sin_cos();
            let phase = s * Complex64::new(cos, sin);
            for (o, &order) in out.iter_mut().zip(orders) {
                *o += (phase * self.derivative_symbol(idx, k, order)).re;
            }
        }
        let scale = 1.0 / self.n_points as f64;
        out.iter_mut().for_each(|o| *o *= scale);
        out
    }

    /// Spectrum of the pointwise product `a * b` with the 2/3 rule applied.
    pub(crate) fn product_spectrum(&self, a: &[f64], b: &[f64]) -> Vec<Complex64> {
        let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        let mut spec = self.forward(&prod);
        dealias_in_place(&mut spec);
        spec
    }
}

/// Signed mode index `j` for storage position `idx`; Nyquist maps to `+N/2`.
pub fn mode_index(idx: usize, n: usize) -> i64 {
    if idx <= n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Sampled field `u(x_i)` on a shared grid.
///
/// Values are guaranteed finite; the spectrum is computed lazily once.
#[derive(Clone)]
pub struct StateField {
    grid: Arc<GridSpec>,
    values: Vec<f64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl fmt::Debug for StateField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateField")
            .field("grid", &self.grid)
            .field("max_abs", &self.max_abs())
            .finish()
    }
}

impl StateField {
    pub fn new(grid: Arc<GridSpec>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "field has {} samples, grid has {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(StateField {
            grid,
            values,
            spectrum: OnceLock::new(),
        })
    }

    pub fn zeros(grid: Arc<GridSpec>) -> Self {
        let n = grid.len();
        StateField {
            grid,
            values: vec![0.0; n],
            spectrum: OnceLock::new(),
        }
    }

    pub fn from_fn(grid: Arc<GridSpec>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        StateField::new(grid, values)
    }

    pub fn from_spectrum(grid: Arc<GridSpec>, spectrum: &[Complex64]) -> Result<Self> {
        let values = grid.inverse(spectrum);
        StateField::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<GridSpec> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| self.grid.forward(&self.values))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest magnitude at the two samples adjacent to the periodic seam `x = ±L`.
    pub fn edge_magnitude(&self) -> f64 {
        let n = self.values.len();
        self.values[0].abs().max(self.values[n - 1].abs())
    }

    /// Returns `self + alpha * other`.
    pub fn add_scaled(&self, other: &StateField, alpha: f64) -> Result<StateField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + alpha * b)
            .collect();
        StateField::new(self.grid.clone(), values)
    }

    pub fn scale(&self, alpha: f64) -> Result<StateField> {
        StateField::new(
            self.grid.clone(),
            self.values.iter().map(|v| alpha * v).collect(),
        )
    }

    /// Trapezoidal `L^2` norm on the periodic grid.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.spacing() * self.values.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    pub fn max_norm(&self) -> f64 {
        self.max_abs()
    }

    /// Spectral translation `u(x - shift)`.
    pub fn shifted(&self, shift: f64) -> Result<StateField> {
        let spec = self
            .grid
            .apply(self.spectrum(), |_, k| Complex64::from_polar(1.0, -k * shift));
        StateField::from_spectrum(self.grid.clone(), &spec)
    }
}

/// Sobolev exponent `s >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevIndex(f64);

impl SobolevIndex {
    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() && s >= 0.0 {
            Ok(SobolevIndex(s))
        } else {
            Err(Error::InvalidParams(format!(
                "Sobolev index must be finite and >= 0, got {s}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Whether the index lies in the strong-solution regime `s > 3/2`.
    pub fn is_strong(self) -> bool {
        self.0 > 1.5
    }
}

/// Spectral derivative of order 1, 2 or 3.
pub fn differentiate(f: &StateField, order: u32) -> Result<StateField> {
    if !(1..=3).contains(&order) {
        return Err(Error::DerivativeOrder(order));
    }
    let grid = f.grid();
    StateField::new(grid.clone(), grid.derivative_values(f.spectrum(), order))
}

/// `p * f` with `p(x) = exp(-|x|)/2`, realized as the multiplier `1/(1 + k^2)`.
pub fn helmholtz_inverse(f: &StateField) -> Result<StateField> {
    let grid = f.grid();
    let spec = helmholtz_spectrum(grid, f.spectrum());
    StateField::from_spectrum(grid.clone(), &spec)
}

pub(crate) fn helmholtz_spectrum(grid: &GridSpec, spectrum: &[Complex64]) -> Vec<Complex64> {
    grid.apply(spectrum, |_, k| Complex64::new(1.0 / (1.0 + k * k), 0.0))
}

/// Zeroes every mode with `|j| > K`, `K = floor((N - 1)/3)`.
pub fn dealias(spectrum: &[Complex64]) -> Vec<Complex64> {
    let mut out = spectrum.to_vec();
    dealias_in_place(&mut out);
    out
}

pub(crate) fn dealias_in_place(spectrum: &mut [Complex64]) {
    let n = spectrum.len();
    let cutoff = ((n.saturating_sub(1)) / 3) as i64;
    for (idx, s) in spectrum.iter_mut().enumerate() {
        if mode_index(idx, n).abs() > cutoff {
            *s = ZERO;
        }
    }
}

/// Discrete `H^s` norm, `s = 0` reproducing the trapezoidal `L^2` norm.
pub fn hs_norm(f: &StateField, s: SobolevIndex) -> f64 {
    let grid = f.grid();
    let n = grid.len() as f64;
    let weight = grid.period() / (n * n);
    let sum: f64 = f
        .spectrum()
        .iter()
        .zip(grid.wavenumbers())
        .map(|(c, &k)| (1.0 + k * k).powf(s.value()) * c.norm_sqr())
        .sum();
    (weight * sum).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    /// Band-limited random field: a handful of low modes with decaying amplitudes.
    fn random_smooth(grid: &Arc<GridSpec>, seed: u64) -> StateField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = grid.half_width();
        let modes: Vec<(f64, f64, f64)> = (1..=12)
            .map(|j| {
                let amp = rng.gen_range(-1.0..1.0) / j as f64;
                let phase = rng.gen_range(0.0..2.0 * PI);
                (j as f64 * PI / l, amp, phase)
            })
            .collect();
        let c0 = rng.gen_range(-0.5..0.5);
        StateField::from_fn(grid.clone(), |x| {
            c0 + modes
                .iter()
                .map(|(k, a, p)| a * (k * x + p).cos())
                .sum::<f64>()
        })
        .unwrap()
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(GridSpec::new(1.0, 15).is_err());
        assert!(GridSpec::new(1.0, 8).is_err());
        assert!(GridSpec::new(0.0, 64).is_err());
        assert!(GridSpec::new(f64::NAN, 64).is_err());
    }

    #[test]
    fn grid_geometry() {
        let g = GridSpec::new(3.0, 64).unwrap();
        assert_eq!(g.spacing() * 64.0, 6.0);
        assert_eq!(g.x(0), -3.0);
        assert_eq!(g.x(32), 0.0);
        let xs = g.points();
        assert!(xs.windows(2).all(|w| w[1] > w[0]));
        // every non-Nyquist wavenumber has its negation in the set
        let ks = g.wavenumbers();
        for (idx, &k) in ks.iter().enumerate() {
            let has_negation = ks.iter().any(|&q| q == -k);
            assert_eq!(has_negation, idx != g.nyquist_index(), "idx {idx}");
        }
    }

    #[test]
    fn non_finite_rejected_with_index() {
        let g = GridSpec::new(1.0, 16).unwrap();
        let mut v = vec![0.0; 16];
        v[5] = f64::INFINITY;
        v[9] = f64::NAN;
        match StateField::new(g, v) {
            Err(Error::NonFinite { index, .. }) => assert_eq!(index, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derivative_of_single_mode() {
        let l = 5.0;
        let g = GridSpec::new(l, 128).unwrap();
        let k0 = PI / l;
        let f = StateField::from_fn(g.clone(), |x| (k0 * x).sin()).unwrap();
        let df = differentiate(&f, 1).unwrap();
        let exact: Vec<f64> = g.points().iter().map(|x| k0 * (k0 * x).cos()).collect();
        assert!(max_diff(df.values(), &exact) <= 1e-10);
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let g = GridSpec::new(2.0, 32).unwrap();
        let f = StateField::from_fn(g, |_| 1.0).unwrap();
        for order in 1..=3 {
            assert!(differentiate(&f, order).unwrap().max_abs() <= 1e-14);
        }
    }

    #[test]
    fn derivative_order_out_of_range() {
        let g = GridSpec::new(2.0, 32).unwrap();
        let f = StateField::zeros(g);
        assert!(matches!(differentiate(&f, 0), Err(Error::DerivativeOrder(0))));
        assert!(matches!(differentiate(&f, 4), Err(Error::DerivativeOrder(4))));
    }

    #[test]
    fn gaussian_second_derivative() {
        let g = GridSpec::new(20.0, 512).unwrap();
        let f = StateField::from_fn(g.clone(), |x| (-x * x).exp()).unwrap();
        let d2 = differentiate(&f, 2).unwrap();
        let exact: Vec<f64> = g
            .points()
            .iter()
            .map(|x| (4.0 * x * x - 2.0) * (-x * x).exp())
            .collect();
        assert!(max_diff(d2.values(), &exact) <= 1e-8);
    }

    #[test]
    fn odd_derivative_kills_nyquist() {
        let g = GridSpec::new(1.0, 16).unwrap();
        let f = StateField::from_fn(g.clone(), |x| (8.0 * PI * x).cos()).unwrap();
        assert!(differentiate(&f, 1).unwrap().max_abs() < 1e-12);
        assert!(differentiate(&f, 3).unwrap().max_abs() < 1e-12);
        // even orders keep it: -k^2 cos
        let k = 8.0 * PI;
        let d2 = differentiate(&f, 2).unwrap();
        let exact: Vec<f64> = g.points().iter().map(|x| -k * k * (k * x).cos()).collect();
        assert!(max_diff(d2.values(), &exact) < 1e-9 * k * k);
    }

    #[test]
    fn helmholtz_single_mode_and_zero() {
        let l = 7.0;
        let g = GridSpec::new(l, 64).unwrap();
        let k0 = PI / l;
        let f = StateField::from_fn(g.clone(), |x| (k0 * x).cos()).unwrap();
        let pf = helmholtz_inverse(&f).unwrap();
        let exact: Vec<f64> = g
            .points()
            .iter()
            .map(|x| (k0 * x).cos() / (1.0 + k0 * k0))
            .collect();
        assert!(max_diff(pf.values(), &exact) <= 1e-12);
        let z = helmholtz_inverse(&StateField::zeros(g)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn helmholtz_round_trip() {
        let g = GridSpec::new(10.0, 256).unwrap();
        for seed in 0..5 {
            let f = random_smooth(&g, seed);
            let pf = helmholtz_inverse(&f).unwrap();
            let back = pf.add_scaled(&differentiate(&pf, 2).unwrap(), -1.0).unwrap();
            let err = max_diff(back.values(), f.values()) / f.max_abs();
            assert!(err <= 1e-10, "seed {seed}: {err}");
        }
    }

    #[test]
    fn helmholtz_matches_periodized_kernel_quadrature() {
        // direct convolution with the periodized Green's function
        // G(x) = cosh(L - |x|) / (2 sinh L) for |x| <= 2L-periodic
        let l = 6.0;
        let g = GridSpec::new(l, 128).unwrap();
        let f = StateField::from_fn(g.clone(), |x| (-(x - 0.5).powi(2)).exp()).unwrap();
        let pf = helmholtz_inverse(&f).unwrap();
        let h = g.spacing();
        let n = g.len();
        let kernel = |d: f64| {
            let d = d.rem_euclid(2.0 * l);
            let d = d.min(2.0 * l - d);
            (l - d).cosh() / (2.0 * l.sinh())
        };
        // trapezoid quadrature is spectrally accurate except at the kernel's kink,
        // so compare at modest tolerance
        for i in (0..n).step_by(7) {
            let direct: f64 = (0..n)
                .map(|j| kernel(g.x(i) - g.x(j)) * f.values()[j] * h)
                .sum();
            assert!((direct - pf.values()[i]).abs() < 5e-3, "i = {i}");
        }
    }

    #[test]
    fn dealias_examples() {
        let n = 48;
        let mut s = vec![ZERO; n];
        s[1] = Complex64::new(1.0, 2.0);
        assert_eq!(dealias(&s), s);
        let mut ny = vec![ZERO; n];
        ny[n / 2] = Complex64::new(3.0, 0.0);
        assert!(dealias(&ny).iter().all(|c| *c == ZERO));
        // cutoff sits at |j| = floor((N-1)/3)
        let mut edge = vec![ZERO; n];
        edge[15] = Complex64::new(1.0, 0.0);
        edge[16] = Complex64::new(1.0, 0.0);
        edge[n - 15] = Complex64::new(1.0, 0.0);
        edge[n - 16] = Complex64::new(1.0, 0.0);
        let d = dealias(&edge);
        assert_eq!(d[15], Complex64::new(1.0, 0.0));
        assert_eq!(d[n - 15], Complex64::new(1.0, 0.0));
        assert_eq!(d[16], ZERO);
        assert_eq!(d[n - 16], ZERO);
    }

    #[test]
    fn hs_norm_examples() {
        let l = 4.0;
        let g = GridSpec::new(l, 64).unwrap();
        for s in [0.0, 1.0, 2.5] {
            let s = SobolevIndex::new(s).unwrap();
            assert_eq!(hs_norm(&StateField::zeros(g.clone()), s), 0.0);
            let one = StateField::from_fn(g.clone(), |_| 1.0).unwrap();
            assert!((hs_norm(&one, s) - (2.0 * l).sqrt()).abs() < 1e-12);
        }
        let k0 = PI / l;
        let f = StateField::from_fn(g.clone(), |x| (k0 * x).sin()).unwrap();
        let expected = (l * (1.0 + k0 * k0)).sqrt();
        assert!((hs_norm(&f, SobolevIndex::new(1.0).unwrap()) - expected).abs() < 1e-12);
    }

    #[test]
    fn sobolev_index_validation() {
        assert!(SobolevIndex::new(-0.1).is_err());
        assert!(!SobolevIndex::new(1.5).unwrap().is_strong());
        assert!(SobolevIndex::new(1.6).unwrap().is_strong());
    }

    #[test]
    fn spectral_convergence_on_gaussian() {
        let err = |n: usize| {
            let g = GridSpec::new(20.0, n).unwrap();
            let f = StateField::from_fn(g.clone(), |x| (-x * x).exp()).unwrap();
            let d = differentiate(&f, 1).unwrap();
            let exact: Vec<f64> = g
                .points()
                .iter()
                .map(|x| -2.0 * x * (-x * x).exp())
                .collect();
            max_diff(d.values(), &exact)
        };
        let (e128, e256) = (err(128), err(256));
        assert!(e256 <= (e128 / 1e3).max(1e-13), "{e128:e} -> {e256:e}");
    }

    #[test]
    fn shift_translates_single_mode() {
        let l = 3.0;
        let g = GridSpec::new(l, 64).unwrap();
        let k0 = 2.0 * PI / l;
        let f = StateField::from_fn(g.clone(), |x| (k0 * x).sin()).unwrap();
        let s = f.shifted(0.37).unwrap();
        let exact: Vec<f64> = g.points().iter().map(|x| (k0 * (x - 0.37)).sin()).collect();
        assert!(max_diff(s.values(), &exact) < 1e-12);
    }

    #[test]
    fn point_evaluation_matches_mode() {
        let l = 3.0;
        let g = GridSpec::new(l, 64).unwrap();
        let k0 = 3.0 * PI / l;
        let f = StateField::from_fn(g.clone(), |x| (k0 * x).sin()).unwrap();
        let x = 0.4321;
        let d = g.evaluate_at(f.spectrum(), x, &[0, 1, 2]);
        assert!((d[0] - (k0 * x).sin()).abs() < 1e-13);
        assert!((d[1] - k0 * (k0 * x).cos()).abs() < 1e-12);
        assert!((d[2] + k0 * k0 * (k0 * x).sin()).abs() < 1e-11);
        let on_grid = g.evaluate_at(f.spectrum(), g.x(10), &[0])[0];
        assert!((on_grid - f.values()[10]).abs() < 1e-13);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn transform_round_trip(values in proptest::collection::vec(-1e3f64..1e3, 64)) {
                let g = GridSpec::new(2.5, 64).unwrap();
                let back = g.inverse(&g.forward(&values));
                let scale = values.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
                prop_assert!(max_diff(&back, &values) / scale <= 1e-12);
            }

            #[test]
            fn helmholtz_is_linear(seed in 0u64..1000, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
                let g = GridSpec::new(8.0, 128).unwrap();
                let f = random_smooth(&g, seed);
                let h = random_smooth(&g, seed + 7919);
                let combo = f.scale(alpha).unwrap().add_scaled(&h, beta).unwrap();
                let lhs = helmholtz_inverse(&combo).unwrap();
                let rhs = helmholtz_inverse(&f).unwrap().scale(alpha).unwrap()
                    .add_scaled(&helmholtz_inverse(&h).unwrap(), beta).unwrap();
                prop_assert!(max_diff(lhs.values(), rhs.values()) <= 1e-13);
            }

            #[test]
            fn derivative_commutes_with_kernel(seed in 0u64..1000) {
                let g = GridSpec::new(8.0, 128).unwrap();
                let f = random_smooth(&g, seed);
                let a = differentiate(&helmholtz_inverse(&f).unwrap(), 1).unwrap();
                let b = helmholtz_inverse(&differentiate(&f, 1).unwrap()).unwrap();
                prop_assert!(max_diff(a.values(), b.values()) <= 1e-10);
            }

            #[test]
            fn parseval_at_s_zero(values in proptest::collection::vec(-10.0f64..10.0, 32)) {
                let g = GridSpec::new(1.7, 32).unwrap();
                let f = StateField::new(g, values).unwrap();
                let s0 = hs_norm(&f, SobolevIndex::new(0.0).unwrap());
                prop_assert!((s0 - f.l2_norm()).abs() <= 1e-10 * (1.0 + f.l2_norm()));
            }

            #[test]
            fn dealias_idempotent(re in proptest::collection::vec(-1.0f64..1.0, 40),
                                  im in proptest::collection::vec(-1.0f64..1.0, 40)) {
                let s: Vec<Complex64> = re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)).collect();
                let once = dealias(&s);
                prop_assert_eq!(dealias(&once), once);
            }
        }
    }
}
