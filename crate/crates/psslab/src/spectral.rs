//! Periodic spectral toolbox on the unit circle.
//!
//! Everything here works with period-1 functions sampled on a uniform grid
//! `x_j = j/n`. Fourier coefficients follow the convention
//! `f(x) = sum_k c(k) e^{2 pi i k x}` with `c(k) = integral_0^1 f e^{-2 pi i k x} dx`,
//! so the Helmholtz operator `1 - d_xx` acts as the multiplier `1 + 4 pi^2 k^2`
//! and its inverse is convolution with the analytic kernel
//! `g(x) = cosh(x - floor(x) - 1/2) / (2 sinh(1/2))`.
//!
//! Sobolev norms intentionally use the dimensionless weight `(1 + k^2)^s`,
//! which is the usual definition of the `H^s` norm on the circle; note that
//! this differs from the `1 + 4 pi^2 k^2` symbol of the Helmholtz operator.
//! Both scales are needed and they are kept separate on purpose.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;
use thiserror::Error;

/// Errors from spectral-space operations.
#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("grid size must be an even integer >= 8, got {0}")]
    InvalidGridSize(usize),
    #[error("size mismatch: field has {actual} values but grid expects {expected}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("grids differ: {0} vs {1} points")]
    GridMismatch(usize, usize),
    #[error("derivative order must be in 1..=5, got {0}")]
    BadDerivativeOrder(u32),
    #[error("field contains a non-finite value at index {0}")]
    NonFinite(usize),
    #[error("refinement target {target} must be an even size >= the source grid {from}")]
    BadRefinement { from: usize, target: usize },
}

/// Uniform sampling of the period-1 circle.
///
/// Sample `j` sits at `x_j = j / n_points`. The spectral mode set is
/// `{-n/2, ..., n/2 - 1}` stored in FFT order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicGrid {
    n: usize,
}

impl PeriodicGrid {
    /// Create a grid with `n` uniform points; `n` must be even and at least 8.
    pub fn new(n: usize) -> Result<Self, SpectralError> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(SpectralError::InvalidGridSize(n));
        }
        Ok(Self { n })
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Sample location `x_j = j/n`.
    pub fn point(&self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.point(j))
    }

    /// Signed mode number of the FFT-ordered slot `j`.
    pub fn mode(&self, j: usize) -> i64 {
        if j < self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }
}

/// Real nodal samples of a period-1 function.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != grid.n_points() {
            return Err(SpectralError::SizeMismatch {
                expected: grid.n_points(),
                actual: values.len(),
            });
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite(j));
        }
        Ok(Self { grid, values })
    }

    /// Sample a closure at the grid points.
    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn constant(grid: PeriodicGrid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.n_points()],
        }
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        assert_eq!(
            self.grid, other.grid,
            "fields live on different grids ({} vs {})",
            self.grid.n, other.grid.n
        );
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Field {
            grid: self.grid,
            values,
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, other: &Field) -> Field {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Field) -> Field {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> Field {
        self.map(|v| s * v)
    }

    pub fn shift(&self, c: f64) -> Field {
        self.map(|v| v + c)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    /// Mean value, which equals the trapezoidal quadrature of `f` over one period.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `L^2[0,1]` norm by quadrature, `sqrt(mean of f^2)`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64).sqrt()
    }

    /// `L^1[0,1]` norm by quadrature.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }
}

/// Complex Fourier coefficients in FFT order, representing
/// `f(x) = sum_k coeffs(k) e^{2 pi i k x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    grid: PeriodicGrid,
    coeffs: Vec<Complex64>,
}

impl SpectralCoeffs {
    pub fn new(grid: PeriodicGrid, coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        if coeffs.len() != grid.n_points() {
            return Err(SpectralError::SizeMismatch {
                expected: grid.n_points(),
                actual: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of the signed mode `k`, or zero when `k` is out of range.
    pub fn mode_coeff(&self, k: i64) -> Complex64 {
        let n = self.grid.n_points() as i64;
        if k >= n / 2 || k < -n / 2 {
            return Complex64::new(0.0, 0.0);
        }
        let idx = if k >= 0 { k } else { k + n } as usize;
        self.coeffs[idx]
    }

    /// Largest Hermitian-symmetry violation `|c(-k) - conj(c(k))|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n_points() as i64;
        let mut worst: f64 = self.coeffs[0].im.abs();
        for k in 1..n / 2 {
            let d = self.mode_coeff(-k) - self.mode_coeff(k).conj();
            worst = worst.max(d.norm());
        }
        worst
    }

    /// Apply a multiplier given as a function of the signed mode number.
    pub fn apply_multiplier(&self, m: impl Fn(i64) -> Complex64) -> SpectralCoeffs {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * m(self.grid.mode(j)))
            .collect();
        SpectralCoeffs {
            grid: self.grid,
            coeffs,
        }
    }
}

thread_local! {
    // Plan cache. Plans are deterministic; this only avoids re-planning in hot loops.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_with(n: usize, forward: bool, buf: &mut [Complex64]) {
    let fft: Arc<dyn rustfft::Fft<f64>> = PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        if forward {
            planner.plan_fft_forward(n)
        } else {
            planner.plan_fft_inverse(n)
        }
    });
    fft.process(buf);
}

/// Forward transform: nodal samples to Fourier coefficients.
pub fn forward(field: &Field) -> SpectralCoeffs {
    let n = field.grid.n_points();
    let mut buf: Vec<Complex64> = field
        .values
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    fft_with(n, true, &mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    SpectralCoeffs {
        grid: field.grid,
        coeffs: buf,
    }
}

/// Inverse transform: Fourier coefficients back to (real) nodal samples.
///
/// The imaginary part of the synthesis is discarded; for Hermitian input it is
/// at round-off level.
pub fn inverse(coeffs: &SpectralCoeffs) -> Field {
    let n = coeffs.grid.n_points();
    let mut buf = coeffs.coeffs.clone();
    fft_with(n, false, &mut buf);
    Field {
        grid: coeffs.grid,
        values: buf.iter().map(|c| c.re).collect(),
    }
}

/// Spectral derivative of the trigonometric interpolant.
///
/// The multiplier is `(2 pi i k)^order`; the unpaired Nyquist mode is zeroed
/// for odd orders so the result of a real input stays real.
pub fn differentiate(field: &Field, order: u32) -> Result<Field, SpectralError> {
    if !(1..=5).contains(&order) {
        return Err(SpectralError::BadDerivativeOrder(order));
    }
    let n = field.grid.n_points() as i64;
    let hat = forward(field);
    let out = hat.apply_multiplier(|k| {
        if order % 2 == 1 && k == -n / 2 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, 2.0 * PI * k as f64).powu(order)
    });
    Ok(inverse(&out))
}

/// Invert the Helmholtz operator `1 - d_xx` via the multiplier `1/(1 + 4 pi^2 k^2)`.
pub fn helmholtz_solve(field: &Field) -> Field {
    let hat = forward(field);
    let out = hat.apply_multiplier(|k| {
        let k = k as f64;
        Complex64::new(1.0 / (1.0 + 4.0 * PI * PI * k * k), 0.0)
    });
    inverse(&out)
}

/// Apply the forward Helmholtz operator `1 - d_xx`.
pub fn helmholtz_apply(field: &Field) -> Result<Field, SpectralError> {
    Ok(field.sub(&differentiate(field, 2)?))
}

/// Periodic Green kernel of `1 - d_xx`: `cosh(x - floor(x) - 1/2) / (2 sinh(1/2))`.
///
/// One-periodic, even about the integers, minimum at half-integers, unit mass.
pub fn green_kernel(x: f64) -> f64 {
    (x - x.floor() - 0.5).cosh() / (2.0 * (0.5f64).sinh())
}

// Refinement factor for the quadrature oracle below. The kernel has a
// derivative jump at the period seam, so nodal trapezoid sums are only
// O(1/n^2) accurate; quadrature on the refined grid restores ~1e-11 accuracy
// for n = 256 while staying free of any transform code.
const GREEN_QUADRATURE_REFINE: usize = 256;

/// Periodic convolution with the Green kernel by trapezoidal quadrature.
///
/// The integrand is sampled on a grid refined by a fixed factor, with the
/// field values extended by its closed-form trigonometric interpolant, because
/// the kernel's corner at the seam would otherwise cap plain nodal trapezoid
/// accuracy near 1e-6 at n = 256. No FFT is used anywhere on this path, so it
/// serves as an independent oracle for [`helmholtz_solve`].
pub fn green_convolve(field: &Field) -> Field {
    let n = field.grid.n_points();
    let m = n * GREEN_QUADRATURE_REFINE;

    // Band-limited interpolant of the nodal data, evaluated on the fine grid by
    // circular correlation with the closed-form Dirichlet kernel
    //   D(s) = sin(pi n s) * cot(pi s) / n,  D(0) = 1,
    // which reproduces the even-n trigonometric interpolant exactly.
    let mut dirichlet = vec![0.0f64; m];
    for (r, d) in dirichlet.iter_mut().enumerate() {
        if r.is_multiple_of(GREEN_QUADRATURE_REFINE) {
            *d = if r == 0 { 1.0 } else { 0.0 };
            continue;
        }
        let s = r as f64 / m as f64;
        *d = (PI * n as f64 * s).sin() / ((PI * s).tan() * n as f64);
    }
    let mut fine = vec![0.0f64; m];
    for (r, out) in fine.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, &fj) in field.values.iter().enumerate() {
            // offset r - j*refine mod m
            let off = (r + m - j * GREEN_QUADRATURE_REFINE) % m;
            acc += fj * dirichlet[off];
        }
        *out = acc;
    }

    let kernel: Vec<f64> = (0..m).map(|r| green_kernel(r as f64 / m as f64)).collect();
    let values = (0..n)
        .map(|i| {
            let base = i * GREEN_QUADRATURE_REFINE;
            let mut acc = 0.0;
            for (r, &f) in fine.iter().enumerate() {
                // g(x_i - y_r) with x_i - y_r = (base - r)/m mod 1
                let off = (base + m - r) % m;
                acc += kernel[off] * f;
            }
            acc / m as f64
        })
        .collect();
    Field {
        grid: field.grid,
        values,
    }
}

/// Sobolev norm `sqrt(sum_k (1 + k^2)^s |c(k)|^2)` of the nodal field.
pub fn sobolev_norm(field: &Field, s: f64) -> f64 {
    let hat = forward(field);
    let mut acc = 0.0;
    for (j, c) in hat.coeffs.iter().enumerate() {
        let k = hat.grid.mode(j) as f64;
        acc += (1.0 + k * k).powf(s) * c.norm_sqr();
    }
    acc.sqrt()
}

/// 2/3-rule dealiasing: zero all modes with `|k| > n/3`. Idempotent.
pub fn dealias(coeffs: &SpectralCoeffs) -> SpectralCoeffs {
    let cutoff = (coeffs.grid.n_points() / 3) as i64;
    coeffs.apply_multiplier(|k| {
        if k.abs() > cutoff {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    })
}

/// Resample onto a finer grid by spectral zero padding.
///
/// Exact for the trigonometric interpolant; used to evaluate quadratic
/// quantities of solver output alias-free.
pub fn refine(field: &Field, target: PeriodicGrid) -> Result<Field, SpectralError> {
    let n = field.grid.n_points();
    let m = target.n_points();
    if m < n || !m.is_multiple_of(2) {
        return Err(SpectralError::BadRefinement { from: n, target: m });
    }
    if m == n {
        return Ok(field.clone());
    }
    let hat = forward(field);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); m];
    let half = n / 2;
    coeffs[..half].copy_from_slice(&hat.coeffs[..half]);
    for k in 1..half {
        coeffs[m - k] = hat.coeffs[n - k];
    }
    // split the unpaired Nyquist mode symmetrically
    let nyq = hat.coeffs[half] * 0.5;
    coeffs[half] = nyq;
    coeffs[m - half] = nyq;
    Ok(inverse(&SpectralCoeffs {
        grid: target,
        coeffs,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n).unwrap()
    }

    /// Deterministic smooth band-limited test field.
    pub(crate) fn smooth_field(g: PeriodicGrid, seed: u64) -> Field {
        crate::datum::random_smooth(g, seed, 12, 0.1, 0.4)
    }

    #[test]
    fn grid_rejects_odd_and_tiny_sizes() {
        assert!(PeriodicGrid::new(255).is_err());
        assert!(PeriodicGrid::new(6).is_err());
        assert!(PeriodicGrid::new(8).is_ok());
    }

    #[test]
    fn constant_transforms_to_pure_mode_zero() {
        let g = grid(64);
        let hat = forward(&Field::constant(g, 1.0));
        assert!((hat.mode_coeff(0).re - 1.0).abs() < 1e-14);
        for k in 1..32 {
            assert!(hat.mode_coeff(k).norm() < 1e-14);
            assert!(hat.mode_coeff(-k).norm() < 1e-14);
        }
    }

    #[test]
    fn roundtrip_and_parseval_on_random_field() {
        let g = grid(256);
        let f = smooth_field(g, 1);
        let back = inverse(&forward(&f));
        let scale = f.max_abs();
        let mut worst = 0.0f64;
        for (a, b) in f.values().iter().zip(back.values()) {
            worst = worst.max((a - b).abs());
        }
        assert!(worst / scale < 1e-13, "roundtrip defect {worst:e}");

        let hat = forward(&f);
        let nodal: f64 = f.values().iter().map(|v| v * v).sum::<f64>() / f.len() as f64;
        let spectral: f64 = hat.coeffs().iter().map(|c| c.norm_sqr()).sum();
        assert!((nodal - spectral).abs() / nodal < 1e-12);
    }

    #[test]
    fn hermitian_symmetry_of_real_input() {
        let g = grid(128);
        let hat = forward(&smooth_field(g, 2));
        assert!(hat.hermitian_defect() < 1e-15);
    }

    #[test]
    fn differentiate_eigenfunctions() {
        let g = grid(128);
        let c = Field::from_fn(g, |x| (2.0 * PI * x).cos());
        let d1 = differentiate(&c, 1).unwrap();
        let expect = Field::from_fn(g, |x| -2.0 * PI * (2.0 * PI * x).sin());
        assert!(d1.sub(&expect).max_abs() < 1e-11);

        let s4 = Field::from_fn(g, |x| (4.0 * PI * x).sin());
        let d2 = differentiate(&s4, 2).unwrap();
        let expect2 = s4.scale(-16.0 * PI * PI);
        assert!(d2.sub(&expect2).max_abs() < 1e-10);
    }

    #[test]
    fn differentiate_is_exact_on_high_modes() {
        // pure mode just below Nyquist
        let g = grid(64);
        let k = 31.0;
        let f = Field::from_fn(g, |x| (2.0 * PI * k * x).sin());
        let d = differentiate(&f, 1).unwrap();
        let expect = Field::from_fn(g, |x| 2.0 * PI * k * (2.0 * PI * k * x).cos());
        // round-off scales with the multiplier 2 pi k
        assert!(d.sub(&expect).max_abs() < 2.0 * PI * k * 1e-13);
    }

    #[test]
    fn differentiate_constant_is_zero_any_order() {
        let g = grid(64);
        let c = Field::constant(g, 3.25);
        for order in 1..=5 {
            assert!(differentiate(&c, order).unwrap().max_abs() < 1e-13);
        }
    }

    #[test]
    fn differentiate_rejects_bad_order() {
        let g = grid(64);
        let c = Field::constant(g, 1.0);
        assert_eq!(
            differentiate(&c, 0).unwrap_err(),
            SpectralError::BadDerivativeOrder(0)
        );
        assert_eq!(
            differentiate(&c, 6).unwrap_err(),
            SpectralError::BadDerivativeOrder(6)
        );
    }

    #[test]
    fn helmholtz_fixes_constants_and_scales_eigenfunctions() {
        let g = grid(128);
        let one = Field::constant(g, 1.0);
        assert!(helmholtz_solve(&one).sub(&one).max_abs() < 1e-14);

        let c = Field::from_fn(g, |x| (2.0 * PI * x).cos());
        let out = helmholtz_solve(&c);
        let expect = c.scale(1.0 / (1.0 + 4.0 * PI * PI));
        assert!(out.sub(&expect).max_abs() < 1e-14);
    }

    #[test]
    fn helmholtz_inverts_forward_operator() {
        let g = grid(256);
        let f = smooth_field(g, 3);
        let u = helmholtz_solve(&f);
        let back = helmholtz_apply(&u).unwrap();
        assert!(back.sub(&f).max_abs() < 1e-10);
    }

    #[test]
    fn green_kernel_values_and_periodicity() {
        // cosh(1/2) / (2 sinh(1/2)) and 1 / (2 sinh(1/2)), frozen from the closed form
        assert!((green_kernel(0.0) - 1.081_976_706_869_326_2).abs() < 1e-13);
        assert!((green_kernel(0.5) - 0.959_517_375_667_471_9).abs() < 1e-13);
        for &x in &[-1.3, -0.2, 0.0, 0.37, 0.5, 2.71] {
            assert!((green_kernel(x + 1.0) - green_kernel(x)).abs() < 1e-14);
        }
        // minimum at half-integers
        assert!(green_kernel(0.5) < green_kernel(0.4));
        assert!(green_kernel(0.5) < green_kernel(0.6));
    }

    #[test]
    fn green_convolve_preserves_constants() {
        // the kernel has unit mass; quadrature error scales with the refined
        // grid size, so the small unit-test grid sits near 3e-10
        let g = grid(64);
        let one = Field::constant(g, 1.0);
        assert!(green_convolve(&one).sub(&one).max_abs() < 1e-9);
        let g = grid(256);
        let one = Field::constant(g, 1.0);
        assert!(green_convolve(&one).sub(&one).max_abs() < 1e-10);
    }

    #[test]
    fn green_convolve_eigenfunction() {
        let g = grid(64);
        let c = Field::from_fn(g, |x| (2.0 * PI * x).cos());
        let expect = c.scale(1.0 / (1.0 + 4.0 * PI * PI));
        assert!(green_convolve(&c).sub(&expect).max_abs() < 1e-9);
    }

    #[test]
    fn green_convolve_matches_helmholtz_solve() {
        let g = grid(256);
        let f = smooth_field(g, 4);
        let d = green_convolve(&f).sub(&helmholtz_solve(&f)).max_abs();
        assert!(d < 1e-10, "oracle disagreement {d:e}");
    }

    #[test]
    fn sobolev_norm_frozen_values() {
        let g = grid(128);
        let one = Field::constant(g, 1.0);
        for &s in &[0.0, 0.5, 2.0, 4.0] {
            assert!((sobolev_norm(&one, s) - 1.0).abs() < 1e-13);
        }
        let c = Field::from_fn(g, |x| (2.0 * PI * x).cos());
        assert!((sobolev_norm(&c, 0.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn sobolev_norm_zero_index_equals_l2_quadrature() {
        let g = grid(256);
        let f = smooth_field(g, 5);
        let a = sobolev_norm(&f, 0.0);
        let b = f.l2_norm();
        assert!((a - b).abs() / b < 1e-12);
    }

    #[test]
    fn dealias_cuts_high_modes_and_keeps_low() {
        let g = grid(256);
        let f = Field::from_fn(g, |x| (2.0 * PI * 127.0 * x).cos() + (2.0 * PI * x).cos());
        let hat = dealias(&forward(&f));
        assert!(hat.mode_coeff(127).norm() < 1e-15, "mode n/2-1 must be zeroed");
        assert!((hat.mode_coeff(1).re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn refine_is_exact_on_band_limited_data() {
        let g = grid(64);
        let f = Field::from_fn(g, |x| 0.3 + (2.0 * PI * 3.0 * x).sin());
        let fine = refine(&f, grid(256)).unwrap();
        let expect = Field::from_fn(grid(256), |x| 0.3 + (2.0 * PI * 3.0 * x).sin());
        assert!(fine.sub(&expect).max_abs() < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn dealias_is_idempotent(seed in 0u64..1000) {
            let g = grid(64);
            let f = crate::datum::random_smooth(g, seed, 30, 0.5, 0.0);
            let once = dealias(&forward(&f));
            let twice = dealias(&once);
            for (a, b) in once.coeffs().iter().zip(twice.coeffs()) {
                prop_assert!((a - b).norm() == 0.0);
            }
        }

        #[test]
        fn sobolev_norm_monotone_in_s(seed in 0u64..1000, r in 0.0f64..3.0, ds in 0.0f64..2.0) {
            let g = grid(64);
            let f = crate::datum::random_smooth(g, seed, 20, 0.5, 0.1);
            let lo = sobolev_norm(&f, r);
            let hi = sobolev_norm(&f, r + ds);
            prop_assert!(lo <= hi * (1.0 + 1e-12));
        }
    }
}
