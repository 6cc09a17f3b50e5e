//! Explicit initial data: spectral profiles, the lacunary 1D and 2D data,
//! their perturbations, and the time sequence at which gaps are measured.
//!
//! Profiles are periodised inverse Fourier transforms of radial symbols,
//! `f(x) = (2π)^{-1} ∫ b(ξ) e^{ixξ} dξ` discretised on the box's frequency
//! lattice. Downstream code only uses ratios such as `φ/φ(0)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rustfft::num_complex::Complex64;

use crate::cutoff::{RadialAnnulus, RadialBump};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::UniformPeriodicGrid;
use crate::interp::BandLimited;
use crate::littlewood_paley::check_shell_resolved;
use crate::vector::VectorField;

/// First shell carrying data.
pub const FIRST_SHELL: i32 = 3;

/// Carrier frequency `11/8 · 2^j` of shell `j`.
pub fn carrier_frequency(j: i32) -> f64 {
    11.0 / 8.0 * 2f64.powi(j)
}

/// Amplitude factor `2^{2s}(2^s - 1)` that normalises the 1D datum to 1 at the origin.
pub fn amplitude(s: f64) -> f64 {
    2f64.powf(2.0 * s) * (2f64.powf(s) - 1.0)
}

/// Low-pass symbol of the 1D envelope: 1 on `|ξ| <= 1/4`, 0 on `|ξ| >= 1/2`.
pub fn envelope_symbol() -> RadialBump {
    RadialBump::new(0.25, 0.5)
}

/// Annular symbol of the 1D perturbation: 1 on `[1/2, 5/8]`, 0 outside `[3/8, 3/4]`.
pub fn perturbation_symbol() -> RadialAnnulus {
    RadialAnnulus::new(0.375, 0.5, 0.625, 0.75)
}

/// Samples `(2π)^{-1} ∫ b(ξ) e^{ixξ} dξ` on a 1D grid (periodised).
pub fn spectral_profile(grid: UniformPeriodicGrid, symbol: impl Fn(f64) -> f64) -> Result<Field> {
    if grid.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: grid.dim() });
    }
    let n = grid.points_per_axis();
    let scale = n as f64 / (2.0 * PI * grid.box_half_width());
    let spec = (0..n)
        .map(|m| {
            let sign = if grid.signed_mode(m) % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(scale * sign * symbol(grid.wavenumber(m)), 0.0)
        })
        .collect();
    Field::from_spectrum(grid, spec)
}

/// The four envelope profiles on one axis.
#[derive(Debug, Clone)]
pub struct ProfileSet {
    pub phi: Field,
    pub psi: Field,
    pub phi1: Field,
    pub psi1: Field,
    pub phi_at_zero: f64,
    pub psi_at_zero: f64,
    pub phi1_at_zero: f64,
    pub psi1_at_zero: f64,
    pub dim: usize,
}

/// Builds the profiles on the axis of `grid` for dimension `d`.
///
/// `phi1` has symbol 1 on `|ξ| <= 4^{-d}`, 0 on `|ξ| >= 2^{-d}`; `psi1` is the
/// perturbation annulus scaled by `1/√d`.
pub fn build_profiles(grid: &UniformPeriodicGrid, d: usize) -> Result<ProfileSet> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let axis = grid.axis();
    if axis.nyquist() < 0.75 {
        return Err(Error::UnresolvedShell { shell: -1, needed: 0.75, nyquist: axis.nyquist() });
    }
    let bump = envelope_symbol();
    let ring = perturbation_symbol();
    let bump1 = RadialBump::new(0.25f64.powi(d as i32), 0.5f64.powi(d as i32));
    let ring1 = ring.scaled(1.0 / (d as f64).sqrt());
    let phi = spectral_profile(axis, |xi| bump.eval(xi))?;
    let psi = spectral_profile(axis, |xi| ring.eval(xi))?;
    let phi1 = spectral_profile(axis, |xi| bump1.eval(xi))?;
    let psi1 = spectral_profile(axis, |xi| ring1.eval(xi))?;
    Ok(ProfileSet {
        phi_at_zero: phi.value_at_origin(),
        psi_at_zero: psi.value_at_origin(),
        phi1_at_zero: phi1.value_at_origin(),
        psi1_at_zero: psi1.value_at_origin(),
        phi,
        psi,
        phi1,
        psi1,
        dim: d,
    })
}

impl ProfileSet {
    pub fn axis(&self) -> &UniformPeriodicGrid {
        self.phi.grid()
    }

    /// `φ/φ(0)`.
    pub fn phi_normalized(&self) -> Field {
        self.phi.scaled(1.0 / self.phi_at_zero)
    }

    /// `ψ/ψ(0)`.
    pub fn psi_normalized(&self) -> Field {
        self.psi.scaled(1.0 / self.psi_at_zero)
    }

    /// `φ_1/φ_1(0)`.
    pub fn phi1_normalized(&self) -> Field {
        self.phi1.scaled(1.0 / self.phi1_at_zero)
    }

    /// `ψ_1/ψ_1(0)`.
    pub fn psi1_normalized(&self) -> Field {
        self.psi1.scaled(1.0 / self.psi1_at_zero)
    }

    fn check_axis(&self, grid: &UniformPeriodicGrid) -> Result<()> {
        if grid.axis() == *self.axis() {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Smallest `k >= 0` such that `f(x) >= threshold · f(0)` on `[0, 2π 2^{-k}]`.
///
/// The check uses the grid points in the interval plus a dense band-limited
/// sweep of 4096 points.
pub fn plateau_scale(profile: &Field, threshold: f64) -> Result<u32> {
    if profile.grid().dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: profile.grid().dim() });
    }
    let f0 = profile.value_at_origin();
    let interp = BandLimited::new(profile);
    for k in 0..40u32 {
        let right = 2.0 * PI * 0.5f64.powi(k as i32);
        let ok = (0..=4096).all(|i| interp.eval(right * i as f64 / 4096.0) >= threshold * f0);
        if ok {
            return Ok(k);
        }
    }
    Err(Error::InvalidParameter("profile has no plateau around the origin".into()))
}

/// Parameters of the 1D lacunary datum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataSpec1D {
    pub s: f64,
    pub j_min: i32,
    pub j_max: i32,
    /// Plateau scale of the envelope.
    pub n0: u32,
    pub gamma: f64,
}

impl DataSpec1D {
    pub fn new(s: f64, j_max: i32, n0: u32) -> Result<Self> {
        if s <= 0.0 || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("s must be positive, got {s}")));
        }
        if j_max < FIRST_SHELL {
            return Err(Error::InvalidParameter(format!("j_max must be >= {FIRST_SHELL}, got {j_max}")));
        }
        Ok(Self { s, j_min: FIRST_SHELL, j_max, n0, gamma: amplitude(s) })
    }

    /// Builds the spec with the envelope's plateau scale found by scanning.
    pub fn scanned(s: f64, j_max: i32, profiles: &ProfileSet) -> Result<Self> {
        Self::new(s, j_max, plateau_scale(&profiles.phi, 0.5)?)
    }

    /// Bound on the neglected shells `j > j_max` at the origin.
    pub fn tail_bound(&self) -> f64 {
        self.gamma * 2f64.powf(-(self.j_max + 1) as f64 * self.s) / (1.0 - 2f64.powf(-self.s))
    }
}

/// Summand `2^{-js} γ φ(x)/φ(0) cos(11/8 · 2^j x)` of the 1D datum.
pub fn summand_1d(spec: &DataSpec1D, profiles: &ProfileSet, j: i32) -> Field {
    let lambda = carrier_frequency(j);
    let c = 2f64.powf(-j as f64 * spec.s) * spec.gamma / profiles.phi_at_zero;
    let x = profiles.axis().axis_coordinates();
    let samples = profiles.phi.samples().iter().zip(&x).map(|(p, &x)| c * p * (lambda * x).cos()).collect();
    Field::new(*profiles.axis(), samples).expect("axis-sized")
}

/// The truncated 1D datum `Σ_{j=3}^{j_max} 2^{-js} γ φ/φ(0) cos(11/8 · 2^j x)`.
pub fn build_u0_1d(spec: &DataSpec1D, profiles: &ProfileSet, grid: &UniformPeriodicGrid) -> Result<Field> {
    if grid.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: grid.dim() });
    }
    profiles.check_axis(grid)?;
    check_shell_resolved(grid, spec.j_max)?;
    let mut acc = Field::zeros(*grid);
    for j in spec.j_min..=spec.j_max {
        acc = &acc + &summand_1d(spec, profiles, j);
    }
    Ok(acc)
}

/// `u0 + ψ/(n ψ(0))` for an already built datum.
pub fn perturb_1d(u0: &Field, n: u32, profiles: &ProfileSet) -> Result<Field> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    u0.axpy(1.0 / n as f64, &profiles.psi_normalized())
}

pub fn build_perturbation_1d(
    spec: &DataSpec1D,
    n: u32,
    profiles: &ProfileSet,
    grid: &UniformPeriodicGrid,
) -> Result<Field> {
    perturb_1d(&build_u0_1d(spec, profiles, grid)?, n, profiles)
}

/// Parameters of the 2D divergence-free datum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataSpec2D {
    pub s: f64,
    pub j_min: i32,
    pub j_max: i32,
    /// Plateau scale of the normalised envelope `φ_1/φ_1(0)`.
    pub m0: u32,
}

impl DataSpec2D {
    pub fn new(s: f64, j_max: i32, m0: u32) -> Result<Self> {
        if s <= 0.0 || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("s must be positive, got {s}")));
        }
        if j_max < FIRST_SHELL {
            return Err(Error::InvalidParameter(format!("j_max must be >= {FIRST_SHELL}, got {j_max}")));
        }
        Ok(Self { s, j_min: FIRST_SHELL, j_max, m0 })
    }

    pub fn scanned(s: f64, j_max: i32, profiles: &ProfileSet) -> Result<Self> {
        Self::new(s, j_max, plateau_scale(&profiles.phi1, 0.5)?)
    }
}

fn check_2d(grid: &UniformPeriodicGrid, profiles: &ProfileSet) -> Result<()> {
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: grid.dim() });
    }
    profiles.check_axis(grid)
}

/// `x1`-factor of the stream function of the 2D datum restricted to shells `js`:
/// `Σ 2^{-j(s+1)} (8/11) sin(11/8 · 2^j x1) φ̄(x1)`.
fn stream_factor_2d(spec: &DataSpec2D, profiles: &ProfileSet, js: impl Iterator<Item = i32>) -> Field {
    let axis = *profiles.axis();
    let x = axis.axis_coordinates();
    let env = profiles.phi1_normalized();
    let mut acc = vec![0.0; x.len()];
    for j in js {
        let lambda = carrier_frequency(j);
        let c = 2f64.powf(-j as f64 * (spec.s + 1.0)) * 8.0 / 11.0;
        for ((a, &xi), e) in acc.iter_mut().zip(&x).zip(env.samples()) {
            *a += c * (lambda * xi).sin() * e;
        }
    }
    Field::new(axis, acc).expect("axis-sized")
}

/// `∇^⊥ (a(x1) b(x2)) = (a b', -a' b)`.
fn perp_gradient_tensor(a: &Field, b: &Field) -> Result<VectorField> {
    let u1 = Field::tensor(a, &b.derivative(0)?)?;
    let u2 = -&Field::tensor(&a.derivative(0)?, b)?;
    VectorField::new_divergence_free(u1, u2)
}

/// Summand `2^{-j(s+1)} ∇^⊥ f_j` of the 2D datum.
pub fn summand_2d(spec: &DataSpec2D, profiles: &ProfileSet, j: i32) -> Result<VectorField> {
    let a = stream_factor_2d(spec, profiles, std::iter::once(j));
    perp_gradient_tensor(&a, &profiles.phi1_normalized())
}

/// The truncated 2D datum `Σ_{j=3}^{j_max} 2^{-j(s+1)} ∇^⊥ f_j` with
/// `f_j = (8/11) sin(11/8 · 2^j x1) φ̄(x1) φ̄(x2)`.
pub fn build_u0_2d(spec: &DataSpec2D, profiles: &ProfileSet, grid: &UniformPeriodicGrid) -> Result<VectorField> {
    check_2d(grid, profiles)?;
    check_shell_resolved(grid, spec.j_max)?;
    let a = stream_factor_2d(spec, profiles, spec.j_min..=spec.j_max);
    perp_gradient_tensor(&a, &profiles.phi1_normalized())
}

/// Stream function of the 2D perturbation,
/// `ψ_1(0)^{-2} (∂^{-1} ψ_1)(x2) ψ_1(x1)`, as its two tensor factors `(x1, x2)`.
pub fn perturbation_stream_factors(profiles: &ProfileSet) -> Result<(Field, Field)> {
    let psi1 = profiles.psi1_normalized();
    let antider = psi1.antiderivative(0)?;
    Ok((psi1, antider))
}

/// `∇^⊥` of the perturbation stream function.
pub fn perturbation_velocity_2d(profiles: &ProfileSet) -> Result<VectorField> {
    let (a, b) = perturbation_stream_factors(profiles)?;
    perp_gradient_tensor(&a, &b)
}

/// `u0 - (1/n) ∇^⊥ Φ̄` for an already built datum.
pub fn perturb_2d(u0: &VectorField, n: u32, profiles: &ProfileSet) -> Result<VectorField> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    u0.axpy(-1.0 / n as f64, &perturbation_velocity_2d(profiles)?)
}

pub fn build_perturbation_2d(
    spec: &DataSpec2D,
    n: u32,
    profiles: &ProfileSet,
    grid: &UniformPeriodicGrid,
) -> Result<VectorField> {
    perturb_2d(&build_u0_2d(spec, profiles, grid)?, n, profiles)
}

/// Parameters of the single datum whose solution is discontinuous in time at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixSpec {
    pub s: f64,
    pub j_min: i32,
    pub j_max: i32,
}

impl AppendixSpec {
    pub fn new(s: f64, j_max: i32) -> Result<Self> {
        DataSpec2D::new(s, j_max, 0)?;
        Ok(Self { s, j_min: FIRST_SHELL, j_max })
    }

    /// Overall factor `2^{2s+3}(2^s - 1)`.
    pub fn amplitude(&self) -> f64 {
        2f64.powf(2.0 * self.s + 3.0) * (2f64.powf(self.s) - 1.0)
    }
}

fn appendix_factors(
    spec: &AppendixSpec,
    profiles: &ProfileSet,
    js: impl Iterator<Item = i32>,
) -> Result<(Field, Field)> {
    let axis = *profiles.axis();
    let x = axis.axis_coordinates();
    let env = profiles.phi1_normalized();
    let mut acc = vec![0.0; x.len()];
    for j in js {
        let lambda = carrier_frequency(j);
        let c = spec.amplitude() * 2f64.powf(-j as f64 * (spec.s + 1.0));
        for ((a, &xi), e) in acc.iter_mut().zip(&x).zip(env.samples()) {
            *a += c * (lambda * xi).cos() * e;
        }
    }
    let second = profiles.psi1_normalized().antiderivative(0)?;
    Ok((Field::new(axis, acc)?, second))
}

/// Summand `j` of the time-discontinuity datum.
pub fn appendix_summand(spec: &AppendixSpec, profiles: &ProfileSet, j: i32) -> Result<VectorField> {
    let (a, b) = appendix_factors(spec, profiles, std::iter::once(j))?;
    perp_gradient_tensor(&a, &b)
}

/// `2^{2s+3}(2^s-1) Σ 2^{-j(s+1)} ∇^⊥[cos(11/8 · 2^j x1) (∂^{-1}ψ_1)(x2)/ψ_1(0) · φ_1(x1)/φ_1(0)]`.
///
/// In two dimensions the envelope depends on `x1` only.
pub fn build_appendix_u0(
    spec: &AppendixSpec,
    profiles: &ProfileSet,
    grid: &UniformPeriodicGrid,
) -> Result<VectorField> {
    check_2d(grid, profiles)?;
    check_shell_resolved(grid, spec.j_max)?;
    let (a, b) = appendix_factors(spec, profiles, spec.j_min..=spec.j_max)?;
    perp_gradient_tensor(&a, &b)
}

/// Frequency `λ_n = 11/8 · 2^n` and time `t_n = (8/11) π n 2^{-n}`, so `λ_n t_n = nπ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSequence {
    pub n: u32,
    pub lambda_n: f64,
    pub t_n: f64,
}

pub fn time_sequence(n: u32) -> Result<TimeSequence> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let lambda_n = carrier_frequency(n as i32);
    let t_n = n as f64 * PI / lambda_n;
    Ok(TimeSequence { n, lambda_n, t_n })
}

/// `1/√2`, the scale of the 2D perturbation annulus.
pub const PLANAR_ANNULUS_SCALE: f64 = FRAC_1_SQRT_2;
