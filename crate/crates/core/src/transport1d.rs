//! One-dimensional Burgers and linear transport solvers.
//!
//! The true Burgers solution comes either from straight characteristics
//! (`x = y + t u0(y)`, no forcing) or from a dealiased pseudo-spectral RK4
//! integrator (any forcing). The frozen-coefficient approximants transport
//! data along the flow of the autonomous field `u0`, traced backward from
//! every grid point with RK4 substeps.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::constructions::time_sequence;
use crate::cutoff::CutoffProfile;
use crate::error::{Error, Result};
use crate::fft;
use crate::field::Field;
use crate::fit::fit_order;
use crate::interp::{compose_shifted, BandLimited};
use crate::littlewood_paley::{besov_norm, dyadic_block, lp_norm, BesovIndex};
use crate::quadrature::composite_gauss_legendre;

/// Smallest admissible `1 + t min u0'`.
pub const SHOCK_MARGIN: f64 = 0.1;

/// Courant number of the spectral integrator, `dt = CFL h / max|u|`.
pub const BURGERS_CFL: f64 = 0.25;

const NEWTON_TOLERANCE: f64 = 1e-13;
const NEWTON_MAX_ITERATIONS: usize = 50;

/// Largest `t max|u0'|` per substep when tracing frozen characteristics.
const TRACE_STEP: f64 = 0.004;

/// Right-hand side `F` of `∂_t u + u ∂_x u = F(u)`.
pub trait RhsHook: Send + Sync + fmt::Debug {
    fn evaluate(&self, u: &Field) -> Field;

    /// Constant `C` in `||F(u)||_{B^s} <= C ||u||_{B^s}`.
    fn besov_bound_const(&self) -> f64;

    /// Constant `C` in `||F(u) - F(v)||_{B^{s-1}} <= C ||u - v||_{B^{s-1}}`.
    fn lipschitz_const(&self) -> f64;

    /// Whether `F` vanishes identically, letting solvers skip its evaluation.
    fn is_zero(&self) -> bool {
        false
    }
}

/// `F ≡ 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroRhs;

impl RhsHook for ZeroRhs {
    fn evaluate(&self, u: &Field) -> Field {
        Field::zeros(*u.grid())
    }

    fn besov_bound_const(&self) -> f64 {
        0.0
    }

    fn lipschitz_const(&self) -> f64 {
        0.0
    }

    fn is_zero(&self) -> bool {
        true
    }
}

/// `F(u) = u`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearRhs;

impl RhsHook for LinearRhs {
    fn evaluate(&self, u: &Field) -> Field {
        u.clone()
    }

    fn besov_bound_const(&self) -> f64 {
        1.0
    }

    fn lipschitz_const(&self) -> f64 {
        1.0
    }
}

fn require_1d(u: &Field) -> Result<()> {
    if u.grid().dim() == 1 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: 1, got: u.grid().dim() })
    }
}

/// `1 + t min u0'`, failing with [`Error::ShockTooClose`] below [`SHOCK_MARGIN`].
pub fn check_monotonicity(u0: &Field, t: f64) -> Result<f64> {
    let margin = 1.0 + t * u0.derivative(0)?.min_value();
    if margin < SHOCK_MARGIN {
        Err(Error::ShockTooClose { margin, required: SHOCK_MARGIN })
    } else {
        Ok(margin)
    }
}

/// Burgers characteristic map `η(x) = x + t u0(x)` and its inverse on the grid.
#[derive(Debug, Clone)]
pub struct FlowMap1D {
    pub t: f64,
    pub velocity: Field,
    pub forward: Field,
    pub inverse: Field,
}

impl FlowMap1D {
    pub fn new(u0: &Field, t: f64) -> Result<Self> {
        require_1d(u0)?;
        check_monotonicity(u0, t)?;
        let grid = *u0.grid();
        let xs = grid.axis_coordinates();
        let forward = Field::new(grid, xs.iter().zip(u0.samples()).map(|(x, u)| x + t * u).collect())?;
        let value = BandLimited::new(u0);
        let slope = BandLimited::new(&u0.derivative(0)?);
        let bound = u0.max_abs();
        let inverse = xs.par_iter().map(|&x| invert_point(x, t, bound, &value, &slope)).collect::<Result<Vec<_>>>()?;
        Ok(Self { t, velocity: u0.clone(), forward, inverse: Field::new(grid, inverse)? })
    }

    /// `max_x |η(η^{-1}(x)) - x|` with `η` evaluated off the grid.
    pub fn round_trip_error(&self) -> f64 {
        let value = BandLimited::new(&self.velocity);
        self.inverse
            .samples()
            .par_iter()
            .zip(self.velocity.grid().axis_coordinates().par_iter())
            .map(|(&y, &x)| (y + self.t * value.eval(y) - x).abs())
            .reduce(|| 0.0, f64::max)
    }

    /// `f ∘ η^{-1}`.
    pub fn pull_back(&self, f: &Field) -> Result<Field> {
        f.check_same_grid(&self.inverse)?;
        Field::new(*f.grid(), BandLimited::new(f).eval_many(self.inverse.samples()))
    }
}

/// Solves `y + t u(y) = x` by Newton iteration, falling back to bisection.
fn invert_point(x: f64, t: f64, bound: f64, value: &BandLimited, slope: &BandLimited) -> Result<f64> {
    let g = |y: f64| y + t * value.eval(y) - x;
    let mut lo = x - t * bound - 1e-12;
    let mut hi = x + t * bound + 1e-12;
    let mut y = x - t * value.eval(x);
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let gy = g(y);
        if gy.abs() <= NEWTON_TOLERANCE {
            return Ok(y);
        }
        if gy > 0.0 {
            hi = hi.min(y);
        } else {
            lo = lo.max(y);
        }
        let next = y - gy / (1.0 + t * slope.eval(y));
        if !(next > lo && next < hi) {
            break;
        }
        y = next;
    }
    let (mut glo, ghi) = (g(lo), g(hi));
    if glo > 0.0 || ghi < 0.0 {
        return Err(Error::NewtonDivergence { x });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm.abs() <= NEWTON_TOLERANCE || hi - lo < 1e-15 {
            return Ok(mid);
        }
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solves Burgers' equation to time `t`.
///
/// Without forcing the solution is `u0 ∘ η^{-1}` along straight characteristics;
/// with a hook the dealiased spectral RK4 integrator is used.
pub fn solve_burgers(u0: &Field, t: f64, rhs: Option<&dyn RhsHook>) -> Result<Field> {
    match rhs {
        None => solve_burgers_characteristics(u0, t),
        Some(hook) => Ok(solve_burgers_spectral(u0, &[t], hook)?.remove(0)),
    }
}

pub fn solve_burgers_characteristics(u0: &Field, t: f64) -> Result<Field> {
    if t == 0.0 {
        return Ok(u0.clone());
    }
    FlowMap1D::new(u0, t)?.pull_back(u0)
}

fn dealias_mask(grid: &crate::grid::UniformPeriodicGrid) -> Vec<bool> {
    let n = grid.points_per_axis();
    (0..n).map(|m| (grid.signed_mode(m).unsigned_abs() as usize) * 3 < n).collect()
}

/// Dealiased pseudo-spectral RK4 for `∂_t u + ∂_x(u^2/2) = F(u)`, returning
/// snapshots at each of the non-negative `times`.
pub fn solve_burgers_spectral(u0: &Field, times: &[f64], rhs: &dyn RhsHook) -> Result<Vec<Field>> {
    require_1d(u0)?;
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidParameter("times must be finite and non-negative".into()));
    }
    let grid = *u0.grid();
    let k = grid.derivative_wavenumbers();
    let mask = dealias_mask(&grid);
    let h = grid.spacing();

    // Returns d(u_hat)/dt and max|u|.
    let evaluate = |u_hat: &[Complex64]| -> (Vec<Complex64>, f64) {
        let masked: Vec<Complex64> =
            u_hat.iter().zip(&mask).map(|(&c, &keep)| if keep { c } else { Complex64::new(0.0, 0.0) }).collect();
        let u = fft::inverse_real(&grid, masked);
        let umax = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let sq = fft::forward_real(&grid, &u.iter().map(|v| 0.5 * v * v).collect::<Vec<_>>());
        let mut out: Vec<Complex64> = sq
            .iter()
            .zip(&k)
            .zip(&mask)
            .map(|((&c, &kk), &keep)| if keep { -Complex64::new(0.0, kk) * c } else { Complex64::new(0.0, 0.0) })
            .collect();
        if !rhs.is_zero() {
            let full = Field::new(grid, fft::inverse_real(&grid, u_hat.to_vec())).expect("grid-sized");
            let forcing = rhs.evaluate(&full);
            out.iter_mut().zip(forcing.spectrum()).for_each(|(o, f)| *o += f);
        }
        (out, umax)
    };

    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    let mut out = vec![None; times.len()];
    let mut state = u0.spectrum().to_vec();
    let mut now = 0.0;
    for &slot in &order {
        let target = times[slot];
        while now < target {
            let (k1, umax) = evaluate(&state);
            let stable = if umax > 0.0 { BURGERS_CFL * h / umax } else { f64::INFINITY };
            let dt = stable.min(target - now);
            let stage = |base: &[Complex64], inc: &[Complex64], c: f64| -> Vec<Complex64> {
                base.iter().zip(inc).map(|(a, b)| a + b * c).collect()
            };
            let (k2, _) = evaluate(&stage(&state, &k1, 0.5 * dt));
            let (k3, _) = evaluate(&stage(&state, &k2, 0.5 * dt));
            let (k4, _) = evaluate(&stage(&state, &k3, dt));
            for i in 0..state.len() {
                state[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
            }
            now = if dt == target - now { target } else { now + dt };
        }
        out[slot] = Some(Field::new(grid, fft::inverse_real(&grid, state.clone()))?);
    }
    Ok(out.into_iter().map(|f| f.expect("every time visited")).collect())
}

/// Source term of a frozen transport problem.
#[derive(Clone, Copy)]
pub enum Source<'a> {
    None,
    /// Time-independent source.
    Steady(&'a Field),
    /// Source depending on time.
    Varying(&'a (dyn Fn(f64) -> Field + Sync)),
}

impl fmt::Debug for Source<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::None => f.write_str("None"),
            Source::Steady(_) => f.write_str("Steady(..)"),
            Source::Varying(_) => f.write_str("Varying(..)"),
        }
    }
}

/// Characteristics of `∂_t w + u0 ∂_x w = g` traced back from every grid point.
#[derive(Debug, Clone)]
pub struct Characteristics {
    pub t: f64,
    /// Foot `X(0)` of the characteristic through each grid point at time `t`.
    pub feet: Field,
    /// `∫_0^t g(τ, X(τ)) dτ` along each characteristic, when a source is present.
    pub source_integral: Option<Field>,
}

impl Characteristics {
    /// `f ∘ X(0)`.
    pub fn pull_back(&self, f: &Field) -> Result<Field> {
        f.check_same_grid(&self.feet)?;
        Field::new(*f.grid(), BandLimited::new(f).eval_many(self.feet.samples()))
    }

    /// Duhamel solution `init ∘ X(0) + ∫ g`.
    pub fn solution(&self, init: &Field) -> Result<Field> {
        let base = self.pull_back(init)?;
        match &self.source_integral {
            Some(s) => Ok(&base + s),
            None => Ok(base),
        }
    }
}

/// The autonomous flow `ẋ = u0(x)` prepared for backward tracing.
#[derive(Debug, Clone)]
pub struct FrozenFlow {
    velocity: Field,
    interp: BandLimited,
    max_gradient: f64,
}

impl FrozenFlow {
    pub fn new(u0: &Field) -> Result<Self> {
        require_1d(u0)?;
        Ok(Self { velocity: u0.clone(), interp: BandLimited::new(u0), max_gradient: u0.derivative(0)?.max_abs() })
    }

    pub fn velocity(&self) -> &Field {
        &self.velocity
    }

    fn substeps(&self, t: f64) -> usize {
        ((t * self.max_gradient / TRACE_STEP).ceil() as usize).max(8)
    }

    /// Traces characteristics back from time `t` to 0, integrating `source` along them.
    pub fn trace(&self, t: f64, source: Source<'_>) -> Result<Characteristics> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("t must be non-negative, got {t}")));
        }
        check_monotonicity(&self.velocity, t)?;
        let grid = *self.velocity.grid();
        let mut x = grid.axis_coordinates();
        let has_source = !matches!(source, Source::None);
        let mut acc = vec![0.0; x.len()];
        if t == 0.0 {
            return Ok(Characteristics {
                t,
                feet: Field::new(grid, x)?,
                source_integral: has_source.then(|| Field::zeros(grid)),
            });
        }
        let steady = match source {
            Source::Steady(g) => Some(BandLimited::new(g)),
            _ => None,
        };
        let at_time = |tau: f64| -> Option<BandLimited> {
            match source {
                Source::Varying(g) => Some(BandLimited::new(&g(tau))),
                _ => None,
            }
        };
        let m = self.substeps(t);
        let ds = t / m as f64;
        let mut g_start = at_time(t);
        for step in 0..m {
            // Backward time s runs from 0 to t; physical time is t - s.
            let s0 = step as f64 * ds;
            let g_mid = at_time(t - s0 - 0.5 * ds);
            let g_end = at_time((t - s0 - ds).max(0.0));
            let ga = steady.as_ref().or(g_start.as_ref());
            let gb = steady.as_ref().or(g_mid.as_ref());
            let gc = steady.as_ref().or(g_end.as_ref());
            let u = &self.interp;
            x.par_iter_mut().zip(acc.par_iter_mut()).for_each(|(xi, ai)| {
                let src = |g: Option<&BandLimited>, y: f64| g.map_or(0.0, |g| g.eval(y));
                let y0 = *xi;
                let k1 = -u.eval(y0);
                let q1 = src(ga, y0);
                let y1 = y0 + 0.5 * ds * k1;
                let k2 = -u.eval(y1);
                let q2 = src(gb, y1);
                let y2 = y0 + 0.5 * ds * k2;
                let k3 = -u.eval(y2);
                let q3 = src(gb, y2);
                let y3 = y0 + ds * k3;
                let k4 = -u.eval(y3);
                let q4 = src(gc, y3);
                *xi = y0 + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                *ai += ds / 6.0 * (q1 + 2.0 * q2 + 2.0 * q3 + q4);
            });
            g_start = g_end;
        }
        Ok(Characteristics {
            t,
            feet: Field::new(grid, x)?,
            source_integral: if has_source { Some(Field::new(grid, acc)?) } else { None },
        })
    }
}

/// Solves `∂_t w + u0 ∂_x w = g`, `w(0) = init`, along frozen characteristics.
pub fn solve_frozen_transport(u0: &Field, init: &Field, rhs: Source<'_>, t: f64) -> Result<Field> {
    init.check_same_grid(u0)?;
    FrozenFlow::new(u0)?.trace(t, rhs)?.solution(init)
}

/// `(Δ_n u0)(x - t u0(x))`.
pub fn ap4_closed_form(u0: &Field, n: u32, t: f64) -> Result<Field> {
    require_1d(u0)?;
    let block = dyadic_block(u0, n as i32, &CutoffProfile::default())?;
    if t == 0.0 {
        return Ok(block);
    }
    compose_shifted(&block, &u0.scaled(t))
}

/// The four approximants at one time.
#[derive(Debug, Clone)]
pub struct ApproximantSet {
    pub t: f64,
    /// Frozen transport of `u0` with source `F(u0)`.
    pub ap1: Field,
    /// Frozen transport of `u0` without source.
    pub ap2: Field,
    /// Frozen transport of `Δ_n u0`, by shell.
    pub ap3: BTreeMap<u32, Field>,
    /// `(Δ_n u0)(x - t u0(x))`, by shell.
    pub ap4: BTreeMap<u32, Field>,
}

pub fn approximants(u0: &Field, shells: &[u32], t: f64, rhs: Option<&dyn RhsHook>) -> Result<ApproximantSet> {
    let flow = FrozenFlow::new(u0)?;
    let forcing = rhs.filter(|h| !h.is_zero()).map(|h| h.evaluate(u0));
    let source = forcing.as_ref().map_or(Source::None, Source::Steady);
    let chars = flow.trace(t, source)?;
    let ap2 = chars.pull_back(u0)?;
    let ap1 = match &chars.source_integral {
        Some(s) => &ap2 + s,
        None => ap2.clone(),
    };
    let profile = CutoffProfile::default();
    let mut ap3 = BTreeMap::new();
    let mut ap4 = BTreeMap::new();
    for &n in shells {
        let block = dyadic_block(u0, n as i32, &profile)?;
        ap3.insert(n, chars.pull_back(&block)?);
        ap4.insert(n, ap4_closed_form(u0, n, t)?);
    }
    Ok(ApproximantSet { t, ap1, ap2, ap3, ap4 })
}

/// Errors of the approximant chain at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeRow {
    pub t: f64,
    /// `||u - ap1||_{B^{s-1}}`.
    pub err_ap1: f64,
    /// `||ap1 - ap2||_{B^s}`.
    pub err_ap2: f64,
    /// `2^{ns} ||Δ_n ap2 - ap3||_{L^p}`.
    pub err_ap3: f64,
    /// `2^{ns} ||ap4 - ap3||_{L^p}`.
    pub err_ap4: f64,
}

impl CascadeRow {
    pub fn errors(&self) -> [f64; 4] {
        [self.err_ap1, self.err_ap2, self.err_ap3, self.err_ap4]
    }
}

/// Cascade errors over a list of times with log-log fitted orders.
#[derive(Debug, Clone)]
pub struct CascadeTable {
    pub n: u32,
    pub index: BesovIndex,
    pub j_max: i32,
    pub rows: Vec<CascadeRow>,
    /// Fitted order of each error column; `None` when the fit is degenerate
    /// (for instance a column that vanishes identically).
    pub orders: [Option<f64>; 4],
}

/// Measures the approximant chain against the true Burgers solution.
///
/// With a hook the true solution comes from the spectral integrator and
/// `ap1` carries the source `F(u0)`; without one, characteristics are used
/// and `ap1 = ap2`.
pub fn cascade_errors(
    u0: &Field,
    n: u32,
    times: &[f64],
    idx: BesovIndex,
    j_max: i32,
    rhs: Option<&dyn RhsHook>,
) -> Result<CascadeTable> {
    let truths = match rhs {
        Some(hook) => solve_burgers_spectral(u0, times, hook)?,
        None => times.iter().map(|&t| solve_burgers_characteristics(u0, t)).collect::<Result<Vec<_>>>()?,
    };
    let profile = CutoffProfile::default();
    let weight = 2f64.powf(n as f64 * idx.s);
    let mut rows = Vec::with_capacity(times.len());
    for (&t, u) in times.iter().zip(&truths) {
        let set = approximants(u0, &[n], t, rhs)?;
        let ap3 = &set.ap3[&n];
        let ap4 = &set.ap4[&n];
        rows.push(CascadeRow {
            t,
            err_ap1: besov_norm(&(u - &set.ap1), idx.shifted(-1.0), j_max)?,
            err_ap2: besov_norm(&(&set.ap1 - &set.ap2), idx, j_max)?,
            err_ap3: weight * lp_norm(&(&dyadic_block(&set.ap2, n as i32, &profile)? - ap3), idx.p),
            err_ap4: weight * lp_norm(&(ap4 - ap3), idx.p),
        });
    }
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let orders = std::array::from_fn(|c| {
        let errs: Vec<f64> = rows.iter().map(|r| r.errors()[c]).collect();
        fit_order(&ts, &errs).ok()
    });
    Ok(CascadeTable { n, index: idx, j_max, rows, orders })
}

/// `||cos(λ_n (x - t_n u0(x)))||_{L^p([0, 2π])}` by composite Gauss-Legendre quadrature.
pub fn verify_cosine_lower_bound(u0: &Field, n: u32, p: f64) -> Result<f64> {
    require_1d(u0)?;
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in [1, inf), got {p}")));
    }
    let seq = time_sequence(n)?;
    let interp = BandLimited::new(u0);
    let panels = (4.0 * seq.lambda_n).ceil() as usize;
    let (xs, ws) = composite_gauss_legendre(0.0, std::f64::consts::TAU, panels);
    let sum: f64 = xs
        .par_iter()
        .zip(ws.par_iter())
        .map(|(&x, &w)| w * (seq.lambda_n * (x - seq.t_n * interp.eval(x))).cos().abs().powf(p))
        .sum();
    Ok(sum.powf(1.0 / p))
}

/// `||cos(λ_n (x1 - t_n f(x)))||_{L^p([0, 2π 2^{-n0}]^2)}` for a 2D field `f`.
pub fn verify_cosine_lower_bound_2d(f: &Field, n: u32, p: f64, n0: u32) -> Result<f64> {
    if f.grid().dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f.grid().dim() });
    }
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in [1, inf), got {p}")));
    }
    let seq = time_sequence(n)?;
    let side = std::f64::consts::TAU * 0.5f64.powi(n0 as i32);
    let interp = BandLimited::new(f);
    let across = ((4.0 * seq.lambda_n * side / std::f64::consts::TAU).ceil() as usize).max(4);
    let (x1s, w1s) = composite_gauss_legendre(0.0, side, across);
    let (x2s, w2s) = composite_gauss_legendre(0.0, side, 16);
    let sum: f64 = x2s
        .par_iter()
        .zip(w2s.par_iter())
        .map(|(&x2, &w2)| {
            x1s.iter()
                .zip(&w1s)
                .map(|(&x1, &w1)| {
                    let phase = seq.lambda_n * (x1 - seq.t_n * interp.eval2(x1, x2));
                    w1 * w2 * phase.cos().abs().powf(p)
                })
                .sum::<f64>()
        })
        .sum();
    Ok(sum.powf(1.0 / p))
}
