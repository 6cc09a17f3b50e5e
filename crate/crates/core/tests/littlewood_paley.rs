use std::f64::consts::PI;

use illposed_core::littlewood_paley::{dealiased_product, max_resolved_shell};
use illposed_core::*;
use proptest::prelude::*;

fn trig_poly(grid: UniformPeriodicGrid, modes: &[(f64, f64, f64)]) -> Field {
    Field::from_fn_1d(grid, |x| modes.iter().map(|&(k, a, ph)| a * (k * x + ph).cos()).sum()).unwrap()
}

/// Frequencies on the lattice of a box with half-width 2, below `limit`.
fn lattice_modes(limit: f64) -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    let top = (limit * 2.0) as u32;
    prop::collection::vec((0..top, -1.0..1.0f64, 0.0..6.0f64), 1..6)
        .prop_map(|v| v.into_iter().map(|(m, a, ph)| (m as f64 / 2.0, a, ph)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_of_unity(r in 0.0..5000.0f64) {
        let c = make_cutoff_pair();
        prop_assert!((c.partial_sum(14, r) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn profiles_stay_in_unit_interval(r in 0.0..10.0f64) {
        let c = make_cutoff_pair();
        prop_assert!((0.0..=1.0).contains(&c.low_pass(r)));
        prop_assert!((0.0..=1.0).contains(&c.annulus(r)));
        if r <= 0.75 { prop_assert_eq!(c.low_pass(r), 1.0); }
        if r >= 4.0 / 3.0 { prop_assert_eq!(c.low_pass(r), 0.0); }
        if !(0.75..=8.0 / 3.0).contains(&r) { prop_assert_eq!(c.annulus(r), 0.0); }
    }

    #[test]
    fn blocks_reconstruct_band_limited_fields(modes in lattice_modes(40.0)) {
        let g = UniformPeriodicGrid::new(1, 1024, 2.0).unwrap();
        let u = trig_poly(g, &modes);
        prop_assume!(lp_norm(&u, 2.0) > 1e-3);
        let top = max_resolved_shell(&g);
        let dec = DyadicDecomposition::new(&u, top, &make_cutoff_pair()).unwrap();
        prop_assert!(lp_norm(&(&dec.reconstruct() - &u), 2.0) / lp_norm(&u, 2.0) <= 1e-10);
    }

    #[test]
    fn distant_blocks_annihilate(modes in lattice_modes(100.0), j in -1i32..6, gap in 2i32..4) {
        let g = UniformPeriodicGrid::new(1, 1024, 2.0).unwrap();
        let u = trig_poly(g, &modes);
        let c = make_cutoff_pair();
        let k = j + gap;
        prop_assume!(k <= max_resolved_shell(&g));
        let jk = dyadic_block(&dyadic_block(&u, j, &c).unwrap(), k, &c).unwrap();
        let kj = dyadic_block(&dyadic_block(&u, k, &c).unwrap(), j, &c).unwrap();
        prop_assert!(jk.max_abs() <= 1e-12);
        prop_assert!(kj.max_abs() <= 1e-12);
    }

    #[test]
    fn block_spectrum_is_supported_in_annulus(modes in lattice_modes(120.0), j in 0i32..6) {
        let g = UniformPeriodicGrid::new(1, 1024, 2.0).unwrap();
        let u = trig_poly(g, &modes);
        let b = dyadic_block(&u, j, &make_cutoff_pair()).unwrap();
        let lo = 0.75 * 2f64.powi(j);
        let hi = 8.0 / 3.0 * 2f64.powi(j);
        let scale = g.len() as f64;
        for (c, r) in b.spectrum().iter().zip(g.frequency_magnitudes()) {
            if r < lo || r > hi {
                prop_assert!(c.norm() / scale <= 1e-14);
            }
        }
    }

    #[test]
    fn lp_norm_is_stable_under_grid_doubling(modes in lattice_modes(20.0), p in prop::sample::select(vec![2.0, 4.0, 6.0])) {
        // Even powers of a band-limited field stay band-limited, so the sums are exact.
        let coarse = UniformPeriodicGrid::new(1, 256, 2.0).unwrap();
        let fine = UniformPeriodicGrid::new(1, 512, 2.0).unwrap();
        let a = lp_norm(&trig_poly(coarse, &modes), p);
        let b = lp_norm(&trig_poly(fine, &modes), p);
        prop_assume!(b > 1e-6);
        prop_assert!((a - b).abs() / b <= 1e-10);
    }
}

#[test]
fn fixed_block_examples() {
    let g = UniformPeriodicGrid::line(1 << 16).unwrap();
    let c = make_cutoff_pair();
    let u = Field::from_fn_1d(g, |x| (1.375 * 128.0 * x).cos()).unwrap();
    let b7 = dyadic_block(&u, 7, &c).unwrap();
    assert!(lp_norm(&(&b7 - &u), 2.0) / lp_norm(&u, 2.0) < 1e-10);
    assert!(dyadic_block(&u, 9, &c).unwrap().max_abs() < 1e-12);
    assert_eq!(dyadic_block(&Field::zeros(g), 5, &c).unwrap().max_abs(), 0.0);
    assert_eq!(c.low_pass(0.5), 1.0);
    assert_eq!(c.annulus(1.4), 1.0);
    assert!((c.partial_sum(20, 100.0) - 1.0).abs() < 1e-12);
}

#[test]
fn cosine_norm_matches_dense_quadrature() {
    let g = UniformPeriodicGrid::line(1024).unwrap();
    let u = Field::from_fn_1d(g, f64::cos).unwrap();
    // Midpoint rule with 10^6 cells on [-16π, 16π].
    let cells = 1_000_000;
    let h = 32.0 * PI / cells as f64;
    let dense: f64 = (0..cells).map(|i| (-16.0 * PI + (i as f64 + 0.5) * h).cos().powi(2) * h).sum();
    assert!((lp_norm(&u, 2.0) - dense.sqrt()).abs() < 1e-9);
    assert!((lp_norm(&u, 2.0) - (16.0 * PI).sqrt()).abs() < 1e-12);
}

#[test]
fn besov_norm_of_single_mode_matches_brute_force() {
    let g = UniformPeriodicGrid::new(1, 1 << 11, 5.0).unwrap();
    let u = Field::from_fn_1d(g, |x| (1.4 * 32.0 * x).cos()).unwrap();
    let idx = BesovIndex::new(2.0, 2.0).unwrap();
    let c = make_cutoff_pair();
    let top = max_resolved_shell(&g);
    let brute = (-1..=top)
        .map(|j| 2f64.powf(2.0 * j as f64) * lp_norm(&dyadic_block(&u, j, &c).unwrap(), 2.0))
        .fold(0.0, f64::max);
    let expected = 2f64.powi(10) * lp_norm(&u, 2.0);
    assert!((besov_norm(&u, idx, top).unwrap() - expected).abs() < 1e-10 * expected);
    assert!((brute - expected).abs() < 1e-10 * expected);
    assert_eq!(besov_norm(&Field::zeros(g), idx, top).unwrap(), 0.0);
}

#[test]
fn unresolved_shell_is_an_error() {
    let g = UniformPeriodicGrid::line(1024).unwrap();
    let u = Field::zeros(g);
    let top = max_resolved_shell(&g);
    assert!(matches!(dyadic_block(&u, top + 1, &make_cutoff_pair()), Err(Error::UnresolvedShell { .. })));
    assert!(besov_norm(&u, BesovIndex::new(2.0, 2.0).unwrap(), top + 1).is_err());
}

#[test]
fn commutator_of_single_mode_has_closed_form() {
    // v = f = cos(a x) with a = 1.4 · 32: Δ_5 f' = f' and Δ_5(v f') = 0, so the
    // commutator is -v f' = (a/2) sin(2 a x).
    let g = UniformPeriodicGrid::new(1, 1 << 11, 5.0).unwrap();
    let a = 1.4 * 32.0;
    let v = Field::from_fn_1d(g, |x| (a * x).cos()).unwrap();
    let got = commutator(&v, &v, 5).unwrap();
    let want = Field::from_fn_1d(g, |x| 0.5 * a * (2.0 * a * x).sin()).unwrap();
    assert!((&got - &want).max_abs() < 1e-10 * a);
}

#[test]
fn commutator_with_constant_vanishes() {
    let g = UniformPeriodicGrid::new(1, 512, 2.0).unwrap();
    let v = Field::from_fn_1d(g, |_| 0.7).unwrap();
    let f = trig_poly(g, &[(3.0, 1.0, 0.2), (7.5, 0.4, 1.0), (20.0, 0.1, 0.0)]);
    for k in 0..4 {
        assert!(commutator(&v, &f, k).unwrap().max_abs() < 1e-12);
    }
}

mod naive {
    use super::*;

    /// Direct `O(N^2)` DFT of real samples.
    pub fn dft(x: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (j, &v)| {
                    let th = -2.0 * PI * (k * j) as f64 / n as f64;
                    acc + Complex64::new(th.cos(), th.sin()) * v
                })
            })
            .collect()
    }

    pub fn idft(c: &[Complex64]) -> Vec<f64> {
        let n = c.len();
        (0..n)
            .map(|j| {
                c.iter()
                    .enumerate()
                    .map(|(k, &v)| {
                        let th = 2.0 * PI * (k * j) as f64 / n as f64;
                        (v * Complex64::new(th.cos(), th.sin())).re
                    })
                    .sum::<f64>()
                    / n as f64
            })
            .collect()
    }

    pub fn signed(k: usize, n: usize) -> i64 {
        if k < n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    pub fn multiply(x: &[f64], half_width: f64, m: impl Fn(i64, f64) -> Complex64) -> Vec<f64> {
        let n = x.len();
        let c: Vec<Complex64> = dft(x)
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                let s = signed(k, n);
                v * m(s, s as f64 / half_width)
            })
            .collect();
        idft(&c)
    }
}

#[test]
fn commutator_matches_naive_dft_path() {
    let n = 256;
    let half_width = 1.0;
    let g = UniformPeriodicGrid::new(1, n, half_width).unwrap();
    let v = trig_poly(g, &[(1.0, 0.8, 0.1), (3.0, 0.3, 2.0), (9.0, 0.05, 0.4)]);
    let f = trig_poly(g, &[(2.0, 1.0, 0.0), (5.0, 0.5, 1.3), (11.0, 0.2, 0.7), (30.0, 0.1, 0.2)]);
    let c = make_cutoff_pair();
    let k = 3;
    let keep = |s: i64| (s.unsigned_abs() as usize) * 3 < n;
    let dealias = |x: &[f64]| naive::multiply(x, half_width, |s, _| if keep(s) { 1.0.into() } else { 0.0.into() });
    let deriv = |x: &[f64]| {
        naive::multiply(x, half_width, |s, xi| if s == -(n as i64) / 2 { 0.0.into() } else { Complex64::new(0.0, xi) })
    };
    let block = |x: &[f64]| naive::multiply(x, half_width, |_, xi| c.block(k, xi.abs()).into());
    let product = |a: &[f64], b: &[f64]| {
        let (a, b) = (dealias(a), dealias(b));
        dealias(&a.iter().zip(&b).map(|(x, y)| x * y).collect::<Vec<_>>())
    };
    let outer = block(&product(v.samples(), &deriv(f.samples())));
    let inner = product(v.samples(), &deriv(&block(f.samples())));
    let naive: Vec<f64> = outer.iter().zip(&inner).map(|(a, b)| a - b).collect();
    let fast = commutator(&v, &f, k).unwrap();
    let err = fast.samples().iter().zip(&naive).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-10, "{err}");
    // The fast product agrees with the direct one as well.
    let direct = product(v.samples(), f.samples());
    let fast_product = dealiased_product(&v, &f).unwrap();
    let err = fast_product.samples().iter().zip(&direct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-12, "{err}");
}

#[test]
fn spectral_round_trip() {
    let g = UniformPeriodicGrid::new(2, 64, 3.0).unwrap();
    let u = Field::from_fn_2d(g, |a, b| (a / 3.0).sin() * (b * 2.0 / 3.0).cos() + 0.1 * a.cos()).unwrap();
    let back = Field::from_spectrum(g, u.spectrum().to_vec()).unwrap();
    let rel = lp_norm(&(&back - &u), 2.0) / lp_norm(&u, 2.0);
    assert!(rel <= 1e-12);
}
