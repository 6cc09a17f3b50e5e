use std::f64::consts::PI;
use std::time::Duration;

use illposed_core::experiments::*;
use illposed_core::*;
use proptest::prelude::*;

fn row(n: u32, init_dist: f64, block_gap: f64, budget: f64) -> GapRow {
    GapRow {
        n,
        t_n: 1.0 / n as f64,
        init_dist,
        block_gap,
        besov_gap: block_gap,
        floor_estimate: 0.1,
        ap4_gap: block_gap,
        cascade_budget: budget,
        origin_gap: 0.0,
    }
}

fn report(shells: Vec<u32>, rows: Vec<GapRow>) -> GapReport {
    GapReport {
        scenario: Scenario::BurgersGap,
        index: BesovIndex::new(2.0, 2.0).unwrap(),
        grid: String::new(),
        shells,
        rows,
        failures: Vec::new(),
        diagnostics: Vec::new(),
        wall_time: Duration::ZERO,
    }
}

proptest! {
    #[test]
    fn fit_recovers_power_laws(c in 0.01..100.0f64, k in -3.0..4.0f64, t0 in 1e-4..1e-1f64) {
        let ts: Vec<f64> = (0..5).map(|i| t0 * 2f64.powi(i)).collect();
        let errs: Vec<f64> = ts.iter().map(|t| c * t.powf(k)).collect();
        prop_assert!((fit_order(&ts, &errs).unwrap() - k).abs() < 1e-9);
    }

    #[test]
    fn scenario_names_round_trip(i in 0usize..5) {
        let s = Scenario::ALL[i];
        prop_assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        prop_assert_eq!(s.to_string(), s.name());
    }
}

#[test]
fn fit_rejects_degenerate_input() {
    assert!(matches!(fit_order(&[1.0, 2.0], &[1.0, 2.0]), Err(Error::DegenerateFit(_))));
    assert!(fit_order(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    assert!(fit_order(&[1.0, 2.0, 3.0], &[1.0, 0.0, 2.0]).is_err());
    assert!(fit_order(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
}

#[test]
fn unknown_scenario_is_rejected() {
    assert!(matches!("navier-stokes".parse::<Scenario>(), Err(Error::InvalidParameter(_))));
}

#[test]
fn config_validation() {
    for s in Scenario::ALL {
        ScenarioConfig::defaults(s).validate().unwrap();
    }
    let mut cfg = ScenarioConfig::defaults(Scenario::BurgersGap);
    cfg.index = BesovIndex::new(1.4, 2.0).unwrap();
    assert!(cfg.validate().is_err());
    let mut cfg = ScenarioConfig::defaults(Scenario::EulerGap);
    cfg.index = BesovIndex::new(1.9, 2.0).unwrap();
    assert!(cfg.validate().is_err());
    let mut cfg = ScenarioConfig::defaults(Scenario::EulerGap);
    cfg.n_list.clear();
    assert!(cfg.validate().is_err());
    cfg.n_list = vec![0, 3];
    assert!(cfg.validate().is_err());
    let mut cfg = ScenarioConfig::defaults(Scenario::LemmaSuite);
    cfg.points_per_axis = 1000;
    assert!(cfg.validate().is_err());
    cfg.points_per_axis = 1 << 12;
    cfg.box_half_width = -1.0;
    assert!(cfg.validate().is_err());
}

#[test]
fn check_semantics() {
    assert!(Check::at_most("a", 1.0, 1.0).passed());
    assert!(!Check::at_most("a", 1.5, 1.0).passed());
    assert!(Check::at_least("b", 2.0, 1.0).passed());
    assert_eq!(Check::at_least("b", 2.0, 1.0).margin(), 1.0);
    assert_eq!(Check::at_most("a", 1.5, 1.0).margin(), -0.5);
    assert!(!Check::at_most("a", f64::NAN, 1.0).passed());
    assert!(!Check::at_least("a", f64::NAN, 1.0).passed());
    assert_eq!(Check::at_most("gap", 0.5, 1.0).to_string(), "pass gap: 5.000000e-1 <= 1.000000e0");
    assert!(Check::at_least("gap", 0.5, 1.0).to_string().starts_with("FAIL gap"));
}

#[test]
fn report_checks_on_synthetic_rows() {
    let good = report(vec![4, 8], vec![row(4, 0.5, 2.0, 3.0), row(8, 0.25, 1.5, 2.0)]);
    assert!(good.init_law_spread().abs() < 1e-15);
    assert_eq!(good.floor_ratio(|r| r.block_gap), 0.75);
    assert!(good.passed(), "{:?}", good.checks());

    let growing = report(vec![4, 8], vec![row(4, 0.5, 2.0, 3.0), row(8, 0.25, 1.5, 4.0)]);
    assert!(!growing.passed());

    let collapsing = report(vec![4, 8], vec![row(4, 0.5, 2.0, 3.0), row(8, 0.25, 0.5, 2.0)]);
    assert!(!collapsing.passed());

    // The first shell failed, so there is nothing to compare against.
    let missing = report(vec![4, 8], vec![row(8, 0.25, 1.5, 2.0)]);
    assert!(missing.floor_ratio(|r| r.block_gap).is_nan());
    assert!(!missing.passed());
    assert!(report(vec![], vec![]).init_law_spread().is_nan());
}

#[test]
fn runners_refuse_other_scenarios() {
    let cfg = ScenarioConfig::defaults(Scenario::EulerGap);
    assert!(matches!(run_burgers_gap(&cfg), Err(Error::InvalidParameter(_))));
    assert!(run_cascade_orders(&cfg).is_err());
    assert!(run_lemma_suite(&ScenarioConfig::defaults(Scenario::TimeDiscontinuity)).is_err());
}

#[test]
fn sine_floor_for_constant_phase() {
    let g = UniformPeriodicGrid::square(64).unwrap();
    let c = 0.3;
    let u1 = Field::from_fn_2d(g, |_, _| c).unwrap();
    // |sin(a - πc) - sin a| = 2 |sin(πc/2) cos(a - πc/2)| averaged over whole periods.
    let exact = 2.0 * (PI * c / 2.0).sin() * (PI * 2.0 * PI).sqrt();
    let got = sine_difference_floor(&u1, 5, 2.0, 0).unwrap();
    assert!((got / exact - 1.0).abs() < 1e-10, "{got} vs {exact}");
    assert_eq!(sine_difference_floor(&Field::zeros(g), 5, 2.0, 1).unwrap(), 0.0);
    assert!(sine_difference_floor(&Field::zeros(UniformPeriodicGrid::line(64).unwrap()), 5, 2.0, 0).is_err());
}

#[test]
fn small_burgers_gap_run() {
    let mut cfg = ScenarioConfig::defaults(Scenario::BurgersGap);
    cfg.points_per_axis = 1 << 16;
    cfg.j_max = 9;
    cfg.n_list = vec![9, 8];
    let rep = run_burgers_gap(&cfg).unwrap();
    assert!(rep.failures.is_empty());
    assert_eq!(rep.shells, vec![8, 9]);
    assert_eq!(rep.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![8, 9]);
    assert!(rep.init_law_spread() < 1e-10);
    for r in &rep.rows {
        assert!(r.block_gap <= r.besov_gap + 1e-12);
        assert!(r.ap4_gap > 0.0 && r.cascade_budget > 0.0);
        assert_eq!(r.floor_estimate, 2f64.powf(-0.5 - 3.0));
    }
    assert!(rep.diagnostics.iter().any(|d| d.name == "plateau_scale" && d.value == 1.0));
}

#[test]
fn unresolved_cells_are_recorded_not_fatal() {
    let mut cfg = ScenarioConfig::defaults(Scenario::BurgersGap);
    cfg.points_per_axis = 1 << 15;
    cfg.j_max = 8;
    cfg.n_list = vec![8, 12];
    let rep = run_burgers_gap(&cfg).unwrap();
    assert_eq!(rep.failures.len(), 1);
    assert_eq!(rep.failures[0].n, 12);
    assert!(matches!(rep.failures[0].error, Error::UnresolvedShell { .. }));
    assert!(!rep.passed());
}

#[test]
fn small_cascade_orders() {
    let mut cfg = ScenarioConfig::defaults(Scenario::CascadeOrders);
    cfg.points_per_axis = 1 << 15;
    cfg.j_max = 8;
    let tables = run_cascade_orders(&cfg).unwrap();
    assert_eq!(tables.len(), 1);
    let orders = tables[0].orders.map(|o| o.unwrap());
    for (got, want) in orders.iter().zip([2.0, 1.0, 1.0, 2.0]) {
        assert!((got - want).abs() < 0.1, "{orders:?}");
    }
    let checks = cascade_checks(&tables[0]);
    assert_eq!(checks.len(), 8);
    assert!(checks.iter().all(Check::passed));
    let datum = scenario_datum(&cfg).unwrap();
    assert!((datum.value_at_origin() - 1.0).abs() < 0.1);
}

#[test]
fn planar_datum_is_a_vorticity() {
    let mut cfg = ScenarioConfig::defaults(Scenario::EulerGap);
    cfg.j_max = 3;
    let w = scenario_datum(&cfg).unwrap();
    assert_eq!(w.grid().dim(), 2);
    assert!(w.max_abs() > 0.0);
    assert!(scenario_datum(&ScenarioConfig::defaults(Scenario::LemmaSuite)).is_err());
}
