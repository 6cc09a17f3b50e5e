use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::UniformPeriodicGrid;

/// Real samples on a periodic grid with a lazily cached spectrum.
#[derive(Debug, Clone)]
pub struct Field {
    grid: UniformPeriodicGrid,
    samples: Vec<f64>,
    spectrum: OnceLock<Arc<Vec<Complex64>>>,
}

impl Field {
    pub fn new(grid: UniformPeriodicGrid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidParameter(format!("expected {} samples, got {}", grid.len(), samples.len())));
        }
        Ok(Self::from_parts(grid, samples))
    }

    fn from_parts(grid: UniformPeriodicGrid, samples: Vec<f64>) -> Self {
        Self { grid, samples, spectrum: OnceLock::new() }
    }

    pub fn zeros(grid: UniformPeriodicGrid) -> Self {
        Self::from_parts(grid, vec![0.0; grid.len()])
    }

    /// Samples `f(x)` on a 1D grid, or `f(x1)` on each row of a 2D grid.
    pub fn from_fn_1d(grid: UniformPeriodicGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: grid.dim() });
        }
        Ok(Self::from_parts(grid, grid.axis_coordinates().into_iter().map(f).collect()))
    }

    pub fn from_fn_2d(grid: UniformPeriodicGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if grid.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: grid.dim() });
        }
        let x = grid.axis_coordinates();
        let mut samples = Vec::with_capacity(grid.len());
        for &x2 in &x {
            samples.extend(x.iter().map(|&x1| f(x1, x2)));
        }
        Ok(Self::from_parts(grid, samples))
    }

    /// Tensor product `a(x1) b(x2)` of two fields on the same 1D axis.
    pub fn tensor(a: &Field, b: &Field) -> Result<Self> {
        if a.grid.dim() != 1 || b.grid.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: a.grid.dim().max(b.grid.dim()) });
        }
        if a.grid != b.grid {
            return Err(Error::GridMismatch);
        }
        let mut samples = Vec::with_capacity(a.len() * b.len());
        for &bv in &b.samples {
            samples.extend(a.samples.iter().map(|&av| av * bv));
        }
        Ok(Self::from_parts(a.grid.squared(), samples))
    }

    /// Real part of the normalised inverse DFT of `spectrum`.
    pub fn from_spectrum(grid: UniformPeriodicGrid, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                spectrum.len()
            )));
        }
        Ok(Self::from_parts(grid, fft::inverse_real(&grid, spectrum)))
    }

    pub fn grid(&self) -> &UniformPeriodicGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Unnormalised DFT coefficients, computed once.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| Arc::new(fft::forward_real(&self.grid, &self.samples))).as_slice()
    }

    /// Value at the grid point `x = 0`.
    pub fn value_at_origin(&self) -> f64 {
        let c = self.grid.center_index();
        match self.grid.dim() {
            1 => self.samples[c],
            _ => self.samples[c * self.grid.points_per_axis() + c],
        }
    }

    /// Value at the grid point with axis indices `(i1, i2)`; `i2` is ignored in 1D.
    pub fn at(&self, i1: usize, i2: usize) -> f64 {
        match self.grid.dim() {
            1 => self.samples[i1],
            _ => self.samples[i2 * self.grid.points_per_axis() + i1],
        }
    }

    /// Applies `m(xi1, xi2)` in frequency space.
    pub fn apply_multiplier(&self, m: impl Fn(f64, f64) -> Complex64) -> Field {
        let spec = self.spectrum();
        let mut out = vec![Complex64::new(0.0, 0.0); spec.len()];
        self.grid.for_each_frequency(|i, a, b| out[i] = spec[i] * m(a, b));
        Self::from_parts(self.grid, fft::inverse_real(&self.grid, out))
    }

    /// Applies a real radial multiplier `m(|xi|)`.
    pub fn apply_radial(&self, m: impl Fn(f64) -> f64) -> Field {
        self.apply_multiplier(|a, b| Complex64::new(m(a.hypot(b)), 0.0))
    }

    /// Spectral partial derivative along `axis` (0 for `x1`, 1 for `x2`).
    pub fn derivative(&self, axis: usize) -> Result<Field> {
        self.derivative_power(axis, 1)
    }

    /// `order`-th spectral partial derivative along `axis`.
    pub fn derivative_power(&self, axis: usize, order: u32) -> Result<Field> {
        if axis >= self.grid.dim() {
            return Err(Error::InvalidParameter(format!("axis {axis} out of range for a {}D field", self.grid.dim())));
        }
        let k = self.grid.derivative_wavenumbers();
        let n = self.grid.points_per_axis();
        let spec = self.spectrum();
        let i = Complex64::new(0.0, 1.0);
        let out: Vec<Complex64> = spec
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let slot = if axis == 0 { idx % n } else { idx / n };
                c * (i * k[slot]).powu(order)
            })
            .collect();
        Ok(Self::from_parts(self.grid, fft::inverse_real(&self.grid, out)))
    }

    /// Antiderivative along `axis` through the multiplier `-i / xi`, with the
    /// zero mode and the Nyquist slot set to zero.
    pub fn antiderivative(&self, axis: usize) -> Result<Field> {
        if axis >= self.grid.dim() {
            return Err(Error::InvalidParameter(format!("axis {axis} out of range")));
        }
        let k = self.grid.derivative_wavenumbers();
        let n = self.grid.points_per_axis();
        let spec = self.spectrum();
        let out: Vec<Complex64> = spec
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let slot = if axis == 0 { idx % n } else { idx / n };
                if k[slot] == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * Complex64::new(0.0, -1.0 / k[slot])
                }
            })
            .collect();
        Ok(Self::from_parts(self.grid, fft::inverse_real(&self.grid, out)))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Self::from_parts(self.grid, self.samples.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        self.check_same_grid(other)?;
        Ok(Self::from_parts(self.grid, self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect()))
    }

    /// Pointwise product without dealiasing.
    pub fn pointwise_mul(&self, other: &Field) -> Result<Field> {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scaled(&self, c: f64) -> Field {
        self.map(|v| c * v)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: f64, other: &Field) -> Result<Field> {
        self.zip_map(other, |a, b| a + c * b)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Riemann-sum inner product `h^d sum u v`.
    pub fn inner(&self, other: &Field) -> Result<f64> {
        self.check_same_grid(other)?;
        let s: f64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).sum();
        Ok(s * self.grid.cell_measure())
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Field> for &Field {
            type Output = Field;

            /// Panics if the grids differ; use [`Field::zip_map`] for a fallible version.
            fn $method(self, rhs: &Field) -> Field {
                self.zip_map(rhs, |a, b| a $op b).expect("fields on different grids")
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);

impl Mul<&Field> for f64 {
    type Output = Field;

    fn mul(self, rhs: &Field) -> Field {
        rhs.scaled(self)
    }
}

impl Neg for &Field {
    type Output = Field;

    fn neg(self) -> Field {
        self.scaled(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_sine() {
        let g = UniformPeriodicGrid::new(1, 64, 1.0).unwrap();
        let u = Field::from_fn_1d(g, |x| (3.0 * x).sin()).unwrap();
        let du = u.derivative(0).unwrap();
        let exact = Field::from_fn_1d(g, |x| 3.0 * (3.0 * x).cos()).unwrap();
        assert!((&du - &exact).max_abs() < 1e-12);
    }

    #[test]
    fn antiderivative_inverts_derivative_on_zero_mean_fields() {
        let g = UniformPeriodicGrid::new(2, 32, 2.0).unwrap();
        let u = Field::from_fn_2d(g, |a, b| (a / 2.0).cos() * (1.5 * b).sin()).unwrap();
        let back = u.antiderivative(1).unwrap().derivative(1).unwrap();
        assert!((&back - &u).max_abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_derivative_axes() {
        let g = UniformPeriodicGrid::new(2, 32, 1.0).unwrap();
        let u = Field::from_fn_2d(g, |a, b| (2.0 * a).sin() * b.cos()).unwrap();
        let d1 = Field::from_fn_2d(g, |a, b| 2.0 * (2.0 * a).cos() * b.cos()).unwrap();
        let d2 = Field::from_fn_2d(g, |a, b| -(2.0 * a).sin() * b.sin()).unwrap();
        assert!((&u.derivative(0).unwrap() - &d1).max_abs() < 1e-12);
        assert!((&u.derivative(1).unwrap() - &d2).max_abs() < 1e-12);
    }

    #[test]
    fn tensor_product_layout() {
        let g = UniformPeriodicGrid::new(1, 16, 1.0).unwrap();
        let a = Field::from_fn_1d(g, |x| x).unwrap();
        let b = Field::from_fn_1d(g, |x| 2.0 + x.cos()).unwrap();
        let t = Field::tensor(&a, &b).unwrap();
        assert_eq!(t.at(3, 5), a.samples()[3] * b.samples()[5]);
    }
}
