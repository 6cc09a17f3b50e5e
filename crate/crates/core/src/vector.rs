use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::UniformPeriodicGrid;
use crate::littlewood_paley::{self, BesovIndex};
use crate::CutoffProfile;

/// Absolute bound on the spectral divergence of a field tagged divergence-free.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-10;

/// Two-component velocity field on a shared 2D grid.
#[derive(Debug, Clone)]
pub struct VectorField {
    components: [Field; 2],
    divergence_free: bool,
}

impl VectorField {
    pub fn new(u1: Field, u2: Field) -> Result<Self> {
        if u1.grid().dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: u1.grid().dim() });
        }
        u1.check_same_grid(&u2)?;
        Ok(Self { components: [u1, u2], divergence_free: false })
    }

    /// Builds a field and tags it divergence-free after checking the spectral divergence.
    pub fn new_divergence_free(u1: Field, u2: Field) -> Result<Self> {
        let mut v = Self::new(u1, u2)?;
        let divergence = v.max_divergence()?;
        if divergence > DIVERGENCE_TOLERANCE {
            return Err(Error::NonDivergenceFree { divergence });
        }
        v.divergence_free = true;
        Ok(v)
    }

    /// Sets the divergence-free tag according to the measured spectral divergence.
    pub fn retagged(mut self) -> Result<Self> {
        self.divergence_free = self.max_divergence()? <= DIVERGENCE_TOLERANCE;
        Ok(self)
    }

    /// `(∂_2 f, -∂_1 f)`, divergence-free by construction.
    pub fn perp_gradient(f: &Field) -> Result<Self> {
        let mut v = Self::new(f.derivative(1)?, -&f.derivative(0)?)?;
        v.divergence_free = true;
        Ok(v)
    }

    pub fn zeros(grid: UniformPeriodicGrid) -> Result<Self> {
        let mut v = Self::new(Field::zeros(grid), Field::zeros(grid))?;
        v.divergence_free = true;
        Ok(v)
    }

    pub fn grid(&self) -> &UniformPeriodicGrid {
        self.components[0].grid()
    }

    pub fn component(&self, i: usize) -> &Field {
        &self.components[i]
    }

    pub fn components(&self) -> [&Field; 2] {
        [&self.components[0], &self.components[1]]
    }

    pub fn into_components(self) -> [Field; 2] {
        self.components
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    pub fn divergence(&self) -> Result<Field> {
        Ok(&self.components[0].derivative(0)? + &self.components[1].derivative(1)?)
    }

    pub fn max_divergence(&self) -> Result<f64> {
        Ok(self.divergence()?.max_abs())
    }

    /// Scalar vorticity `∂_1 u_2 - ∂_2 u_1`.
    pub fn curl(&self) -> Result<Field> {
        Ok(&self.components[1].derivative(0)? - &self.components[0].derivative(1)?)
    }

    fn combine(&self, other: &Self, f: impl Fn(&Field, &Field) -> Result<Field>) -> Result<Self> {
        Ok(Self {
            components: [f(&self.components[0], &other.components[0])?, f(&self.components[1], &other.components[1])?],
            divergence_free: self.divergence_free && other.divergence_free,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.zip_map(b, |x, y| x + y))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.zip_map(b, |x, y| x - y))
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: f64, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.axpy(c, b))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            components: [self.components[0].scaled(c), self.components[1].scaled(c)],
            divergence_free: self.divergence_free,
        }
    }

    /// Applies the same scalar map to both components. The result is untagged.
    pub fn map_components(&self, f: impl Fn(&Field) -> Result<Field>) -> Result<Self> {
        Ok(Self { components: [f(&self.components[0])?, f(&self.components[1])?], divergence_free: false })
    }

    /// `Δ_j` applied componentwise; a Fourier multiplier keeps the tag.
    pub fn block(&self, j: i32) -> Result<Self> {
        let profile = CutoffProfile::default();
        let mut out = self.map_components(|c| littlewood_paley::dyadic_block(c, j, &profile))?;
        out.divergence_free = self.divergence_free;
        Ok(out)
    }

    /// `L^p` norm of the pointwise Euclidean magnitude.
    pub fn lp_norm(&self, p: f64) -> f64 {
        littlewood_paley::lp_norm_vector(&self.components(), p).expect("components share a grid")
    }

    pub fn besov_norm(&self, idx: BesovIndex, j_max: i32) -> Result<f64> {
        littlewood_paley::besov_norm_vector(&self.components(), idx, j_max)
    }

    /// Kinetic energy `1/2 ∫ |u|^2` over the box.
    pub fn energy(&self) -> f64 {
        0.5 * self.lp_norm(2.0).powi(2)
    }

    pub fn max_abs(&self) -> f64 {
        self.components[0].samples().iter().zip(self.components[1].samples()).fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perp_gradient_is_divergence_free() {
        let g = UniformPeriodicGrid::new(2, 64, 2.0).unwrap();
        let f = Field::from_fn_2d(g, |a, b| (a / 2.0).sin() * (1.5 * b).cos() + (a + b).cos()).unwrap();
        let v = VectorField::perp_gradient(&f).unwrap();
        assert!(v.max_divergence().unwrap() < 1e-12);
        let lap = &f.derivative_power(0, 2).unwrap() + &f.derivative_power(1, 2).unwrap();
        assert!((&v.curl().unwrap() + &lap).max_abs() < 1e-11);
    }

    #[test]
    fn rejects_divergent_fields() {
        let g = UniformPeriodicGrid::new(2, 32, 1.0).unwrap();
        let u1 = Field::from_fn_2d(g, |a, _| a.sin()).unwrap();
        let r = VectorField::new_divergence_free(u1, Field::zeros(g));
        assert!(matches!(r, Err(Error::NonDivergenceFree { .. })));
    }
}
