use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Half-width factor of the default box `[-16π, 16π]^d`.
pub const DEFAULT_BOX_HALF_WIDTH: f64 = 16.0;

/// Uniform periodic grid on `[-Lπ, Lπ]^dim` with `L = box_half_width`.
///
/// Sample `k` on an axis sits at `-Lπ + k h` with `h = 2Lπ / points_per_axis`,
/// so the point `x = 0` has index `points_per_axis / 2`. The frequency lattice
/// has spacing `1 / L` and the Nyquist frequency is `points_per_axis / (2L)`.
/// Two-dimensional samples are stored row-major with `x1` as the fast index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformPeriodicGrid {
    dim: usize,
    points_per_axis: usize,
    box_half_width: f64,
}

impl UniformPeriodicGrid {
    pub fn new(dim: usize, points_per_axis: usize, box_half_width: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dim must be 1 or 2, got {dim}")));
        }
        if points_per_axis < 16 || !points_per_axis.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points_per_axis must be a power of two >= 16, got {points_per_axis}"
            )));
        }
        if !(box_half_width.is_finite() && box_half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("box_half_width must be positive, got {box_half_width}")));
        }
        Ok(Self { dim, points_per_axis, box_half_width })
    }

    /// 1D grid on the default box.
    pub fn line(points: usize) -> Result<Self> {
        Self::new(1, points, DEFAULT_BOX_HALF_WIDTH)
    }

    /// 2D grid on the default box.
    pub fn square(points_per_axis: usize) -> Result<Self> {
        Self::new(2, points_per_axis, DEFAULT_BOX_HALF_WIDTH)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn box_half_width(&self) -> f64 {
        self.box_half_width
    }

    /// Total number of samples, `points_per_axis^dim`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.period() / self.points_per_axis as f64
    }

    pub fn period(&self) -> f64 {
        2.0 * self.box_half_width * PI
    }

    pub fn origin(&self) -> f64 {
        -self.box_half_width * PI
    }

    /// Volume element `h^dim` of the Riemann sum.
    pub fn cell_measure(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn nyquist(&self) -> f64 {
        self.points_per_axis as f64 / (2.0 * self.box_half_width)
    }

    pub fn frequency_step(&self) -> f64 {
        1.0 / self.box_half_width
    }

    /// Index of the sample at `x = 0` on each axis.
    pub fn center_index(&self) -> usize {
        self.points_per_axis / 2
    }

    pub fn coordinate(&self, k: usize) -> f64 {
        self.origin() + k as f64 * self.spacing()
    }

    /// Sample positions along one axis.
    pub fn axis_coordinates(&self) -> Vec<f64> {
        (0..self.points_per_axis).map(|k| self.coordinate(k)).collect()
    }

    /// Signed DFT index of slot `m`; the Nyquist slot maps to `-n/2`.
    pub fn signed_mode(&self, m: usize) -> i64 {
        let n = self.points_per_axis as i64;
        let m = m as i64;
        if m < n / 2 {
            m
        } else {
            m - n
        }
    }

    /// Angular frequency of DFT slot `m` along an axis.
    pub fn wavenumber(&self, m: usize) -> f64 {
        self.signed_mode(m) as f64 / self.box_half_width
    }

    pub fn axis_wavenumbers(&self) -> Vec<f64> {
        (0..self.points_per_axis).map(|m| self.wavenumber(m)).collect()
    }

    /// Wavenumbers for spectral differentiation: the Nyquist slot is zeroed so
    /// derivatives of real fields stay real.
    pub fn derivative_wavenumbers(&self) -> Vec<f64> {
        let n = self.points_per_axis;
        (0..n).map(|m| if m == n / 2 { 0.0 } else { self.wavenumber(m) }).collect()
    }

    /// The 1D grid carrying one axis of this grid.
    pub fn axis(&self) -> Self {
        Self { dim: 1, ..*self }
    }

    /// The 2D grid whose axes match this grid's axis.
    pub fn squared(&self) -> Self {
        Self { dim: 2, ..*self }
    }

    /// Calls `f(index, xi)` with `xi = (xi1, xi2)` (`xi2 = 0` in 1D) for every DFT slot.
    pub fn for_each_frequency(&self, mut f: impl FnMut(usize, f64, f64)) {
        let k = self.axis_wavenumbers();
        match self.dim {
            1 => k.iter().enumerate().for_each(|(i, &xi)| f(i, xi, 0.0)),
            _ => {
                let n = self.points_per_axis;
                for (row, &xi2) in k.iter().enumerate() {
                    for (col, &xi1) in k.iter().enumerate() {
                        f(row * n + col, xi1, xi2);
                    }
                }
            }
        }
    }

    /// Radial frequency `|xi|` of every DFT slot, in storage order.
    pub fn frequency_magnitudes(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.for_each_frequency(|i, a, b| out[i] = a.hypot(b));
        out
    }

    /// Short human-readable description, e.g. `1024^2 on [-16pi,16pi]^2`.
    pub fn describe(&self) -> String {
        let pow = if self.dim == 1 { String::new() } else { format!("^{}", self.dim) };
        format!("{}{pow} on [-{L}pi,{L}pi]{pow}", self.points_per_axis, L = self.box_half_width)
    }
}
