//! Incompressible 2D Euler: Leray projectors, a vorticity-form pseudo-spectral
//! solver, and the frozen-velocity approximants.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::cutoff::CutoffProfile;
use crate::error::{Error, Result};
use crate::fft;
use crate::field::Field;
use crate::fit::fit_order;
use crate::grid::UniformPeriodicGrid;
use crate::interp::{compose_shifted_2d, BandLimited};
use crate::littlewood_paley::{dealiased_product, dyadic_block, BesovIndex};
use crate::transport1d::{CascadeRow, CascadeTable};
pub use crate::vector::{VectorField, DIVERGENCE_TOLERANCE};

/// Courant number of the Euler integrator, `dt = CFL h / max|u|`.
pub const EULER_CFL: f64 = 0.25;

/// Largest `dt |u|_max k_max` accepted for a user-supplied step (RK4 stability on the imaginary axis is 2.8).
pub const RK4_STABILITY: f64 = 2.5;

const TRACE_STEP: f64 = 0.004;

fn require_2d(grid: &UniformPeriodicGrid) -> Result<()> {
    if grid.dim() == 2 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: 2, got: grid.dim() })
    }
}

/// Spectral Leray projector `P = Id - ∇ Δ^{-1} div` and its complement `Q = Id - P`.
#[derive(Debug, Clone)]
pub struct LerayProjector {
    grid: UniformPeriodicGrid,
    k: Vec<f64>,
}

impl LerayProjector {
    pub fn new(grid: UniformPeriodicGrid) -> Result<Self> {
        require_2d(&grid)?;
        Ok(Self { grid, k: grid.derivative_wavenumbers() })
    }

    /// Returns `(P f, Q f)`; the zero frequency is kept in `P f`.
    pub fn split(&self, f: &VectorField) -> Result<(VectorField, VectorField)> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let n = self.grid.points_per_axis();
        let a = f.component(0).spectrum();
        let b = f.component(1).spectrum();
        let len = a.len();
        let mut q1 = vec![Complex64::new(0.0, 0.0); len];
        let mut q2 = vec![Complex64::new(0.0, 0.0); len];
        for i in 0..len {
            let (k1, k2) = (self.k[i % n], self.k[i / n]);
            let kk = k1 * k1 + k2 * k2;
            if kk == 0.0 {
                continue;
            }
            let proj = (a[i] * k1 + b[i] * k2) / kk;
            q1[i] = proj * k1;
            q2[i] = proj * k2;
        }
        let q = VectorField::new(Field::from_spectrum(self.grid, q1)?, Field::from_spectrum(self.grid, q2)?)?;
        let p = f.sub(&q)?.retagged()?;
        Ok((p, q))
    }

    pub fn project(&self, f: &VectorField) -> Result<VectorField> {
        Ok(self.split(f)?.0)
    }

    pub fn complement(&self, f: &VectorField) -> Result<VectorField> {
        Ok(self.split(f)?.1)
    }
}

/// `P f`.
pub fn leray_project(f: &VectorField) -> Result<VectorField> {
    LerayProjector::new(*f.grid())?.project(f)
}

/// Dealiased `(u·∇) v`.
pub fn advection(u: &VectorField, v: &VectorField) -> Result<VectorField> {
    let comp = |i: usize| -> Result<Field> {
        let vi = v.component(i);
        Ok(&dealiased_product(u.component(0), &vi.derivative(0)?)?
            + &dealiased_product(u.component(1), &vi.derivative(1)?)?)
    };
    VectorField::new(comp(0)?, comp(1)?)
}

/// Vorticity and mean flow; the velocity follows by Biot-Savart.
#[derive(Debug, Clone)]
pub struct EulerState {
    pub time: f64,
    pub vorticity: Field,
    pub mean_velocity: [f64; 2],
}

impl EulerState {
    pub fn from_velocity(u: &VectorField, time: f64) -> Result<Self> {
        let n = u.grid().len() as f64;
        let mean = [u.component(0).spectrum()[0].re / n, u.component(1).spectrum()[0].re / n];
        Ok(Self { time, vorticity: u.curl()?, mean_velocity: mean })
    }

    pub fn velocity(&self) -> Result<VectorField> {
        velocity_from_vorticity(&self.vorticity, self.mean_velocity)
    }
}

/// `u = U + ∇^⊥ ψ` with `-Δψ = ω`, the zero mode of `Δ^{-1}` set to 0.
pub fn velocity_from_vorticity(omega: &Field, mean: [f64; 2]) -> Result<VectorField> {
    let grid = *omega.grid();
    require_2d(&grid)?;
    let (u1, u2) = biot_savart(&grid, omega.spectrum(), mean);
    VectorField::new(Field::new(grid, u1)?, Field::new(grid, u2)?)?.retagged()
}

fn biot_savart(grid: &UniformPeriodicGrid, omega_hat: &[Complex64], mean: [f64; 2]) -> (Vec<f64>, Vec<f64>) {
    let n = grid.points_per_axis();
    let k = grid.derivative_wavenumbers();
    let total = grid.len() as f64;
    let mut a = vec![Complex64::new(0.0, 0.0); omega_hat.len()];
    let mut b = vec![Complex64::new(0.0, 0.0); omega_hat.len()];
    for (i, &w) in omega_hat.iter().enumerate() {
        let (k1, k2) = (k[i % n], k[i / n]);
        let kk = k1 * k1 + k2 * k2;
        if kk == 0.0 {
            continue;
        }
        let psi = w / kk;
        a[i] = Complex64::new(0.0, k2) * psi;
        b[i] = -Complex64::new(0.0, k1) * psi;
    }
    a[0] = Complex64::new(mean[0] * total, 0.0);
    b[0] = Complex64::new(mean[1] * total, 0.0);
    (fft::inverse_real(grid, a), fft::inverse_real(grid, b))
}

struct VorticityRhs {
    grid: UniformPeriodicGrid,
    k: Vec<f64>,
    mask: Vec<bool>,
    mean: [f64; 2],
}

impl VorticityRhs {
    fn new(grid: UniformPeriodicGrid, mean: [f64; 2]) -> Self {
        let n = grid.points_per_axis();
        let keep: Vec<bool> = (0..n).map(|m| (grid.signed_mode(m).unsigned_abs() as usize) * 3 < n).collect();
        let mask = (0..grid.len()).map(|i| keep[i % n] && keep[i / n]).collect();
        Self { grid, k: grid.derivative_wavenumbers(), mask, mean }
    }

    /// `-u·∇ω` in spectral form, plus `max|u|`.
    fn eval(&self, w_hat: &[Complex64]) -> (Vec<Complex64>, f64) {
        let n = self.grid.points_per_axis();
        let zero = Complex64::new(0.0, 0.0);
        let masked: Vec<Complex64> = w_hat.iter().zip(&self.mask).map(|(&c, &m)| if m { c } else { zero }).collect();
        let (u1, u2) = biot_savart(&self.grid, &masked, self.mean);
        let d = |axis: usize| -> Vec<f64> {
            let spec = masked
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let kk = if axis == 0 { self.k[i % n] } else { self.k[i / n] };
                    c * Complex64::new(0.0, kk)
                })
                .collect();
            fft::inverse_real(&self.grid, spec)
        };
        let (w1, w2) = (d(0), d(1));
        let umax = u1.iter().zip(&u2).fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)));
        let adv: Vec<f64> = (0..u1.len()).map(|i| u1[i] * w1[i] + u2[i] * w2[i]).collect();
        let out = fft::forward_real(&self.grid, &adv)
            .into_iter()
            .zip(&self.mask)
            .map(|(c, &m)| if m { -c } else { zero })
            .collect();
        (out, umax)
    }

    fn k_max(&self) -> f64 {
        let n = self.grid.points_per_axis();
        (n / 3) as f64 / self.grid.box_half_width() * std::f64::consts::SQRT_2
    }
}

/// Advances the vorticity form of Euler with dealiased pseudo-spectral RK4 and
/// returns velocities at each of the non-negative `times`.
///
/// `dt = None` picks `EULER_CFL h / max|u|` each step; a fixed `dt` is
/// rejected when `dt max|u| k_max` exceeds [`RK4_STABILITY`].
pub fn solve_euler_at(u0: &VectorField, times: &[f64], dt: Option<f64>) -> Result<Vec<VectorField>> {
    require_2d(u0.grid())?;
    let divergence = u0.max_divergence()?;
    if divergence > DIVERGENCE_TOLERANCE {
        return Err(Error::NonDivergenceFree { divergence });
    }
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidParameter("times must be finite and non-negative".into()));
    }
    if let Some(step) = dt {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {step}")));
        }
    }
    let grid = *u0.grid();
    let state0 = EulerState::from_velocity(u0, 0.0)?;
    let rhs = VorticityRhs::new(grid, state0.mean_velocity);
    let h = grid.spacing();
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    let mut out = vec![None; times.len()];
    let mut w = state0.vorticity.spectrum().to_vec();
    let mut now = 0.0;
    for &slot in &order {
        let target = times[slot];
        if target == 0.0 {
            out[slot] = Some(u0.clone());
            continue;
        }
        while now < target {
            let (k1, umax) = rhs.eval(&w);
            let step = match dt {
                Some(step) => {
                    let limit = RK4_STABILITY / (umax * rhs.k_max()).max(f64::MIN_POSITIVE);
                    if step > limit {
                        return Err(Error::CflViolation { dt: step, limit });
                    }
                    step
                }
                None if umax > 0.0 => EULER_CFL * h / umax,
                None => f64::INFINITY,
            };
            let step = step.min(target - now);
            let stage =
                |inc: &[Complex64], c: f64| -> Vec<Complex64> { w.iter().zip(inc).map(|(a, b)| a + b * c).collect() };
            let (k2, _) = rhs.eval(&stage(&k1, 0.5 * step));
            let (k3, _) = rhs.eval(&stage(&k2, 0.5 * step));
            let (k4, _) = rhs.eval(&stage(&k3, step));
            for i in 0..w.len() {
                w[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (step / 6.0);
            }
            now = if step == target - now { target } else { now + step };
        }
        let (u1, u2) = biot_savart(&grid, &w, state0.mean_velocity);
        out[slot] = Some(VectorField::new_divergence_free(Field::new(grid, u1)?, Field::new(grid, u2)?)?);
    }
    Ok(out.into_iter().map(|v| v.expect("every time visited")).collect())
}

pub fn solve_euler(u0: &VectorField, t: f64, dt: Option<f64>) -> Result<VectorField> {
    Ok(solve_euler_at(u0, &[t], dt)?.remove(0))
}

/// Enstrophy `1/2 ∫ ω^2`.
pub fn enstrophy(u: &VectorField) -> Result<f64> {
    let w = u.curl()?;
    Ok(0.5 * w.inner(&w)?)
}

/// Characteristics of the frozen flow `ẋ = u0(x)` traced back from every grid point.
#[derive(Debug, Clone)]
pub struct Characteristics2D {
    pub t: f64,
    pub feet: [Field; 2],
    /// Integral of the vector source along each characteristic, if any.
    pub source_integral: Option<VectorField>,
}

impl Characteristics2D {
    /// `f ∘ X(0)` for a scalar field.
    pub fn pull_back(&self, f: &Field) -> Result<Field> {
        f.check_same_grid(&self.feet[0])?;
        let interp = BandLimited::new(f);
        Field::new(*f.grid(), interp.eval2_many(self.feet[0].samples(), self.feet[1].samples()))
    }

    pub fn pull_back_vector(&self, v: &VectorField) -> Result<VectorField> {
        v.map_components(|c| self.pull_back(c))
    }

    /// Duhamel solution `init ∘ X(0) + ∫ g`.
    pub fn solution(&self, init: &VectorField) -> Result<VectorField> {
        let base = self.pull_back_vector(init)?;
        match &self.source_integral {
            Some(s) => base.add(s),
            None => Ok(base),
        }
    }
}

/// The autonomous flow of a frozen 2D velocity, prepared for backward tracing.
#[derive(Debug, Clone)]
pub struct FrozenFlow2D {
    velocity: VectorField,
    interp: [BandLimited; 2],
    max_gradient: f64,
}

impl FrozenFlow2D {
    pub fn new(u0: &VectorField) -> Result<Self> {
        let mut g = 0.0f64;
        for i in 0..2 {
            for axis in 0..2 {
                g = g.max(u0.component(i).derivative(axis)?.max_abs());
            }
        }
        Ok(Self {
            velocity: u0.clone(),
            interp: [BandLimited::new(u0.component(0)), BandLimited::new(u0.component(1))],
            max_gradient: g,
        })
    }

    /// Traces back from time `t`, integrating a steady vector source when given.
    pub fn trace(&self, t: f64, source: Option<&VectorField>) -> Result<Characteristics2D> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("t must be non-negative, got {t}")));
        }
        let grid = *self.velocity.grid();
        let n = grid.points_per_axis();
        let x = grid.axis_coordinates();
        let mut pts: Vec<[f64; 4]> = (0..grid.len()).map(|i| [x[i % n], x[i / n], 0.0, 0.0]).collect();
        let src = source.map(|s| [BandLimited::new(s.component(0)), BandLimited::new(s.component(1))]);
        let m = if t == 0.0 { 0 } else { ((t * 2.0 * self.max_gradient / TRACE_STEP).ceil() as usize).max(8) };
        let ds = if m == 0 { 0.0 } else { t / m as f64 };
        let [u1, u2] = &self.interp;
        let rate = |y1: f64, y2: f64| -> [f64; 4] {
            let (g1, g2) = match &src {
                Some([a, b]) => (a.eval2(y1, y2), b.eval2(y1, y2)),
                None => (0.0, 0.0),
            };
            [-u1.eval2(y1, y2), -u2.eval2(y1, y2), g1, g2]
        };
        pts.par_iter_mut().for_each(|p| {
            for _ in 0..m {
                let k1 = rate(p[0], p[1]);
                let k2 = rate(p[0] + 0.5 * ds * k1[0], p[1] + 0.5 * ds * k1[1]);
                let k3 = rate(p[0] + 0.5 * ds * k2[0], p[1] + 0.5 * ds * k2[1]);
                let k4 = rate(p[0] + ds * k3[0], p[1] + ds * k3[1]);
                for c in 0..4 {
                    p[c] += ds / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
                }
            }
        });
        let column = |c: usize| Field::new(grid, pts.iter().map(|p| p[c]).collect());
        let source_integral = match src {
            Some(_) => Some(VectorField::new(column(2)?, column(3)?)?),
            None => None,
        };
        Ok(Characteristics2D { t, feet: [column(0)?, column(1)?], source_integral })
    }
}

/// `(Δ_n v)(x - t w(x))` componentwise.
fn shifted_block(v: &VectorField, w: &VectorField, n: u32, t: f64) -> Result<VectorField> {
    let block = v.block(n as i32)?;
    if t == 0.0 {
        return Ok(block);
    }
    let (s1, s2) = (w.component(0).scaled(t), w.component(1).scaled(t));
    block.map_components(|c| compose_shifted_2d(c, &s1, &s2))
}

/// `((Δ_n u0)(x - t u0(x)), (Δ_n u0n)(x - t u0n(x)))`.
pub fn ap4_pair(u0: &VectorField, u0n: &VectorField, n: u32, t: f64) -> Result<(VectorField, VectorField)> {
    Ok((shifted_block(u0, u0, n, t)?, shifted_block(u0n, u0n, n, t)?))
}

/// Approximant-chain errors for Euler against the spectral solution.
pub fn euler_cascade(u0: &VectorField, n: u32, times: &[f64], idx: BesovIndex, j_max: i32) -> Result<CascadeTable> {
    let truths = solve_euler_at(u0, times, None)?;
    let flow = FrozenFlow2D::new(u0)?;
    let forcing = LerayProjector::new(*u0.grid())?.complement(&advection(u0, u0)?)?;
    let block0 = u0.block(n as i32)?;
    let weight = 2f64.powf(n as f64 * idx.s);
    let profile = CutoffProfile::default();
    let mut rows = Vec::with_capacity(times.len());
    for (&t, u) in times.iter().zip(&truths) {
        let chars = flow.trace(t, Some(&forcing))?;
        let ap2 = chars.pull_back_vector(u0)?;
        let ap1 = ap2.add(chars.source_integral.as_ref().expect("source given"))?;
        let ap3 = chars.pull_back_vector(&block0)?;
        let ap4 = shifted_block(u0, u0, n, t)?;
        let ap2_block = ap2.map_components(|c| dyadic_block(c, n as i32, &profile))?;
        rows.push(CascadeRow {
            t,
            err_ap1: u.sub(&ap1)?.besov_norm(idx.shifted(-1.0), j_max)?,
            err_ap2: ap1.sub(&ap2)?.besov_norm(idx, j_max)?,
            err_ap3: weight * ap2_block.sub(&ap3)?.lp_norm(idx.p),
            err_ap4: weight * ap4.sub(&ap3)?.lp_norm(idx.p),
        });
    }
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let orders = std::array::from_fn(|c| {
        let errs: Vec<f64> = rows.iter().map(|r| r.errors()[c]).collect();
        fit_order(&ts, &errs).ok()
    });
    Ok(CascadeTable { n, index: idx, j_max, rows, orders })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> UniformPeriodicGrid {
        UniformPeriodicGrid::new(2, 64, 1.0).unwrap()
    }

    fn stream(a: f64, b: f64) -> f64 {
        (a + 0.3).sin() * (2.0 * b).cos() + 0.5 * (2.0 * a - b).cos()
    }

    #[test]
    fn projector_algebra() {
        let g = grid();
        let f = VectorField::new(
            Field::from_fn_2d(g, |a, b| (a - b).sin() + (3.0 * b).cos()).unwrap(),
            Field::from_fn_2d(g, |a, b| (2.0 * a).cos() * b.sin() + 0.25).unwrap(),
        )
        .unwrap();
        let leray = LerayProjector::new(g).unwrap();
        let (p, q) = leray.split(&f).unwrap();
        assert!(p.add(&q).unwrap().sub(&f).unwrap().max_abs() < 1e-14);
        assert!(leray.project(&p).unwrap().sub(&p).unwrap().max_abs() < 1e-12);
        assert!(p.max_divergence().unwrap() < 1e-10);
        let pot = Field::from_fn_2d(g, stream).unwrap();
        let grad = VectorField::new(pot.derivative(0).unwrap(), pot.derivative(1).unwrap()).unwrap();
        assert!(leray.project(&grad).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn shear_flow_is_steady() {
        let g = grid();
        let u0 = VectorField::new_divergence_free(
            Field::from_fn_2d(g, |_, b| (2.0 * b).sin() + 0.2 * b.cos()).unwrap(),
            Field::zeros(g),
        )
        .unwrap();
        let u = solve_euler(&u0, 0.1, None).unwrap();
        assert!(u.sub(&u0).unwrap().max_abs() < 1e-8);
    }

    #[test]
    fn biot_savart_inverts_curl() {
        let g = grid();
        let u = VectorField::perp_gradient(&Field::from_fn_2d(g, stream).unwrap()).unwrap();
        let w = u.curl().unwrap();
        let back = velocity_from_vorticity(&w, [0.0, 0.0]).unwrap();
        assert!((&back.curl().unwrap() - &w).max_abs() < 1e-12);
        assert!(back.sub(&u).unwrap().max_abs() < 1e-12);
    }
}
