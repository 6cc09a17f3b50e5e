//! Forward and inverse DFTs on [`UniformPeriodicGrid`] sample layouts.
//!
//! Forward transforms are unnormalised; inverse transforms divide by the
//! number of samples, so `inverse(forward(u)) == u`.

use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::grid::UniformPeriodicGrid;

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let planner = PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()));
    let mut guard = planner.lock().unwrap_or_else(|p| p.into_inner());
    guard.plan_fft(len, direction)
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    const TILE: usize = 32;
    for bi in (0..n).step_by(TILE) {
        for bj in (bi..n).step_by(TILE) {
            for i in bi..(bi + TILE).min(n) {
                let start = if bi == bj { i + 1 } else { bj };
                for j in start..(bj + TILE).min(n) {
                    data.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}

/// In-place unnormalised transform of a 1D or 2D buffer.
pub fn transform_in_place(grid: &UniformPeriodicGrid, data: &mut [Complex64], direction: FftDirection) {
    let n = grid.points_per_axis();
    assert_eq!(data.len(), grid.len(), "buffer does not match grid");
    let fft = plan(n, direction);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
    if grid.dim() == 2 {
        transpose_square(data, n);
        fft.process_with_scratch(data, &mut scratch);
        transpose_square(data, n);
    }
}

pub fn forward_complex(grid: &UniformPeriodicGrid, mut data: Vec<Complex64>) -> Vec<Complex64> {
    transform_in_place(grid, &mut data, FftDirection::Forward);
    data
}

pub fn forward_real(grid: &UniformPeriodicGrid, samples: &[f64]) -> Vec<Complex64> {
    forward_complex(grid, samples.iter().map(|&v| Complex64::new(v, 0.0)).collect())
}

/// Normalised inverse transform.
pub fn inverse_complex(grid: &UniformPeriodicGrid, mut data: Vec<Complex64>) -> Vec<Complex64> {
    transform_in_place(grid, &mut data, FftDirection::Inverse);
    let scale = 1.0 / grid.len() as f64;
    data.iter_mut().for_each(|c| *c *= scale);
    data
}

/// Normalised inverse transform keeping the real part.
pub fn inverse_real(grid: &UniformPeriodicGrid, data: Vec<Complex64>) -> Vec<f64> {
    inverse_complex(grid, data).into_iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft_2d(n: usize, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        let w = |k: usize| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64);
        for k2 in 0..n {
            for k1 in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j2 in 0..n {
                    for j1 in 0..n {
                        acc += x[j2 * n + j1] * w((k1 * j1 + k2 * j2) % n);
                    }
                }
                out[k2 * n + k1] = acc;
            }
        }
        out
    }

    #[test]
    fn two_dimensional_transform_matches_naive_sum() {
        let g = UniformPeriodicGrid::new(2, 16, 1.0).unwrap();
        let x: Vec<Complex64> =
            (0..256).map(|i| Complex64::new(((i * 37) % 11) as f64 - 5.0, ((i * 13) % 7) as f64)).collect();
        let fast = forward_complex(&g, x.clone());
        let slow = naive_dft_2d(16, &x);
        let err = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn round_trip() {
        let g = UniformPeriodicGrid::new(2, 64, 3.0).unwrap();
        let x: Vec<f64> = (0..g.len()).map(|i| ((i * 7919) % 101) as f64 / 101.0).collect();
        let back = inverse_real(&g, forward_real(&g, &x));
        let err = x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-13);
    }
}
