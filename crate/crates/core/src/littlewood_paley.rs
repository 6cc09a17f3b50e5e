//! Dyadic frequency blocks, Lebesgue quadrature and Besov norms.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::cutoff::CutoffProfile;
use crate::error::{Error, Result};
use crate::fft;
use crate::field::Field;
use crate::grid::UniformPeriodicGrid;

/// Regularity `s` and integrability `p` of a Besov space `B^s_{p,∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovIndex {
    pub s: f64,
    pub p: f64,
}

impl BesovIndex {
    pub fn new(s: f64, p: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidParameter(format!("s must be finite, got {s}")));
        }
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter(format!("p must lie in [1, inf], got {p}")));
        }
        Ok(Self { s, p })
    }

    /// Same `p`, regularity shifted by `ds`.
    pub fn shifted(&self, ds: f64) -> Self {
        Self { s: self.s + ds, p: self.p }
    }

    /// Whether `s > 1 + dim/p`, the regime in which the equations are locally well posed.
    pub fn is_supercritical(&self, dim: usize) -> bool {
        self.s > 1.0 + dim as f64 / self.p
    }
}

/// `(h^d sum |u|^p)^(1/p)`, or the grid maximum for `p = inf`.
pub fn lp_norm(u: &Field, p: f64) -> f64 {
    lp_norm_samples(u.grid(), u.samples(), p)
}

pub fn lp_norm_samples(grid: &UniformPeriodicGrid, samples: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return samples.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    let sum: f64 = if p == 2.0 {
        samples.iter().map(|v| v * v).sum()
    } else if p == 1.0 {
        samples.iter().map(|v| v.abs()).sum()
    } else {
        samples.iter().map(|v| v.abs().powf(p)).sum()
    };
    (grid.cell_measure() * sum).powf(1.0 / p)
}

/// Pointwise Euclidean `L^p` norm of a vector of fields on a shared grid.
pub fn lp_norm_vector(components: &[&Field], p: f64) -> Result<f64> {
    let first = components.first().ok_or_else(|| Error::InvalidParameter("empty vector".into()))?;
    for c in components {
        first.check_same_grid(c)?;
    }
    let magnitude: Vec<f64> =
        (0..first.len()).map(|i| components.iter().map(|c| c.samples()[i].powi(2)).sum::<f64>().sqrt()).collect();
    Ok(lp_norm_samples(first.grid(), &magnitude, p))
}

/// Highest shell `j` whose annulus fits below the grid's Nyquist frequency.
pub fn max_resolved_shell(grid: &UniformPeriodicGrid) -> i32 {
    let mut j = -1;
    while check_shell_resolved(grid, j + 1).is_ok() {
        j += 1;
    }
    j
}

/// Fails with [`Error::UnresolvedShell`] when `8/3 * 2^j` exceeds the Nyquist frequency.
pub fn check_shell_resolved(grid: &UniformPeriodicGrid, j: i32) -> Result<()> {
    let needed = if j < 0 { 4.0 / 3.0 } else { 8.0 / 3.0 * 2f64.powi(j) };
    let nyquist = grid.nyquist();
    if needed > nyquist * (1.0 + 1e-12) {
        Err(Error::UnresolvedShell { shell: j, needed, nyquist })
    } else {
        Ok(())
    }
}

fn block_spectrum(spectrum: &[Complex64], radii: &[f64], j: i32, profile: &CutoffProfile) -> Vec<Complex64> {
    spectrum
        .iter()
        .zip(radii)
        .map(|(&c, &r)| {
            let m = profile.block(j, r);
            if m == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                c * m
            }
        })
        .collect()
}

/// `Δ_j u` for `j >= -1`.
pub fn dyadic_block(u: &Field, j: i32, profile: &CutoffProfile) -> Result<Field> {
    if j < -1 {
        return Err(Error::InvalidParameter(format!("blocks start at j = -1, got {j}")));
    }
    check_shell_resolved(u.grid(), j)?;
    let radii = u.grid().frequency_magnitudes();
    let spec = block_spectrum(u.spectrum(), &radii, j, profile);
    Field::from_spectrum(*u.grid(), spec)
}

/// The blocks `Δ_{-1} u, ..., Δ_{j_max} u`.
#[derive(Debug, Clone)]
pub struct DyadicDecomposition {
    blocks: Vec<Field>,
    j_max: i32,
}

impl DyadicDecomposition {
    pub fn new(u: &Field, j_max: i32, profile: &CutoffProfile) -> Result<Self> {
        if j_max < -1 {
            return Err(Error::InvalidParameter(format!("j_max must be >= -1, got {j_max}")));
        }
        check_shell_resolved(u.grid(), j_max)?;
        let radii = u.grid().frequency_magnitudes();
        let spectrum = u.spectrum();
        let grid = *u.grid();
        let blocks = (-1..=j_max)
            .into_par_iter()
            .map(|j| {
                let spec = block_spectrum(spectrum, &radii, j, profile);
                Field::new(grid, fft::inverse_real(&grid, spec))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { blocks, j_max })
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// Block `j` for `-1 <= j <= j_max`.
    pub fn block(&self, j: i32) -> Option<&Field> {
        usize::try_from(j + 1).ok().and_then(|i| self.blocks.get(i))
    }

    pub fn blocks(&self) -> &[Field] {
        &self.blocks
    }

    /// Sum of all blocks.
    pub fn reconstruct(&self) -> Field {
        let mut acc = self.blocks[0].clone();
        for b in &self.blocks[1..] {
            acc = &acc + b;
        }
        acc
    }

    /// `sup_j 2^{js} ||Δ_j u||_{L^p}`.
    pub fn besov_norm(&self, idx: BesovIndex) -> f64 {
        self.weighted_block_norms(idx).into_iter().fold(0.0, f64::max)
    }

    /// `2^{js} ||Δ_j u||_{L^p}` for `j = -1..=j_max`.
    pub fn weighted_block_norms(&self, idx: BesovIndex) -> Vec<f64> {
        self.blocks.iter().enumerate().map(|(i, b)| 2f64.powf((i as f64 - 1.0) * idx.s) * lp_norm(b, idx.p)).collect()
    }
}

/// `sup_{-1 <= j <= j_max} 2^{js} ||Δ_j u||_{L^p}`.
pub fn besov_norm(u: &Field, idx: BesovIndex, j_max: i32) -> Result<f64> {
    Ok(weighted_block_norms(u, idx, j_max)?.into_iter().fold(0.0, f64::max))
}

/// The weighted block norms without keeping the blocks around.
pub fn weighted_block_norms(u: &Field, idx: BesovIndex, j_max: i32) -> Result<Vec<f64>> {
    check_shell_resolved(u.grid(), j_max)?;
    let profile = CutoffProfile::default();
    let grid = *u.grid();
    let radii = grid.frequency_magnitudes();
    let spectrum = u.spectrum();
    Ok((-1..=j_max)
        .into_par_iter()
        .map(|j| {
            let spec = block_spectrum(spectrum, &radii, j, &profile);
            let block = fft::inverse_real(&grid, spec);
            2f64.powf(j as f64 * idx.s) * lp_norm_samples(&grid, &block, idx.p)
        })
        .collect())
}

/// Besov norm of a vector field, with the pointwise Euclidean norm inside `L^p`.
pub fn besov_norm_vector(components: &[&Field], idx: BesovIndex, j_max: i32) -> Result<f64> {
    let profile = CutoffProfile::default();
    let mut best = 0.0f64;
    for j in -1..=j_max {
        let blocks = components.iter().map(|c| dyadic_block(c, j, &profile)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Field> = blocks.iter().collect();
        best = best.max(2f64.powf(j as f64 * idx.s) * lp_norm_vector(&refs, idx.p)?);
    }
    Ok(best)
}

/// Zeroes every mode with `|m| >= n/3` on some axis (the 2/3 rule).
pub fn dealias(u: &Field) -> Field {
    let grid = *u.grid();
    let n = grid.points_per_axis();
    let keep = |m: usize| (grid.signed_mode(m).unsigned_abs() as usize) * 3 < n;
    let spec: Vec<Complex64> = u
        .spectrum()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let ok = keep(i % n) && (grid.dim() == 1 || keep(i / n));
            if ok {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Field::new(grid, fft::inverse_real(&grid, spec)).expect("length preserved")
}

/// Dealiased pointwise product: both factors and the result are truncated by the 2/3 rule.
pub fn dealiased_product(a: &Field, b: &Field) -> Result<Field> {
    Ok(dealias(&dealias(a).pointwise_mul(&dealias(b))?))
}

fn transport_term(v: &[&Field], f: &Field) -> Result<Field> {
    let mut acc = Field::zeros(*f.grid());
    for (axis, vi) in v.iter().enumerate() {
        acc = &acc + &dealiased_product(vi, &f.derivative(axis)?)?;
    }
    Ok(acc)
}

fn commutator_impl(v: &[&Field], f: &Field, k: i32) -> Result<Field> {
    if v.len() != f.grid().dim() {
        return Err(Error::DimensionMismatch { expected: f.grid().dim(), got: v.len() });
    }
    for vi in v {
        vi.check_same_grid(f)?;
    }
    let profile = CutoffProfile::default();
    let outer = dyadic_block(&transport_term(v, f)?, k, &profile)?;
    let inner = transport_term(v, &dyadic_block(f, k, &profile)?)?;
    Ok(&outer - &inner)
}

/// `[Δ_k, v] ∂_x f = Δ_k(v ∂_x f) - v ∂_x Δ_k f` in 1D.
pub fn commutator(v: &Field, f: &Field, k: i32) -> Result<Field> {
    commutator_impl(&[v], f, k)
}

/// `[Δ_k, v]·∇f` for a 2D vector field `v`.
pub fn commutator_vector(v: [&Field; 2], f: &Field, k: i32) -> Result<Field> {
    commutator_impl(&v, f, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn lp_norm_of_cosine_over_default_box() {
        let g = UniformPeriodicGrid::line(1024).unwrap();
        let u = Field::from_fn_1d(g, f64::cos).unwrap();
        assert!((lp_norm(&u, 2.0) - (16.0 * PI).sqrt()).abs() < 1e-12);
        assert!((lp_norm(&u, 2.0) - 7.0898154036220635).abs() < 1e-12);
        let one = u.map(|_| 1.0);
        assert_eq!(lp_norm(&one, f64::INFINITY), 1.0);
        assert_eq!(lp_norm(&Field::zeros(g), 1.0), 0.0);
    }

    #[test]
    fn single_mode_blocks() {
        let g = UniformPeriodicGrid::line(1 << 16).unwrap();
        let u = Field::from_fn_1d(g, |x| (1.375 * 128.0 * x).cos()).unwrap();
        let p = CutoffProfile::default();
        let b7 = dyadic_block(&u, 7, &p).unwrap();
        assert!(lp_norm(&(&b7 - &u), 2.0) / lp_norm(&u, 2.0) < 1e-10);
        assert!(dyadic_block(&u, 9, &p).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn unresolved_shell_is_reported() {
        let g = UniformPeriodicGrid::new(1, 64, 6.0).unwrap();
        assert_eq!(g.nyquist(), 64.0 / 12.0);
        assert_eq!(max_resolved_shell(&g), 1);
        let u = Field::zeros(g);
        assert!(matches!(dyadic_block(&u, 2, &CutoffProfile::default()), Err(Error::UnresolvedShell { shell: 2, .. })));
    }

    #[test]
    fn besov_norm_of_single_mode() {
        let g = UniformPeriodicGrid::new(1, 1 << 11, 5.0).unwrap();
        let j = 5;
        let u = Field::from_fn_1d(g, |x| (1.4 * 32.0 * x).cos()).unwrap();
        let idx = BesovIndex::new(1.5, 2.0).unwrap();
        let expected = 2f64.powf(j as f64 * 1.5) * lp_norm(&u, 2.0);
        let got = besov_norm(&u, idx, max_resolved_shell(&g)).unwrap();
        assert!((got - expected).abs() < 1e-10 * expected);
    }
}
