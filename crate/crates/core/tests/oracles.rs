mod common;

use common::{first_drop, simpson};
use modeq::extensions::{hybrid_model_map, ChosenModel};
use modeq::imperfect_tech::{configuration, k_grid, x1k_ad, x2k_sub, CurvePoint};
use modeq::model_core::{fixed_point_participation, utility};
use modeq::perfect_eq::{alpha_s, solve_sub_perfect};
use modeq::planner::{
    alpha_p, delta_w, solve_planner_imperfect, welfare_imperfect, welfare_perfect,
};
use modeq::sweep::{figure_data, sweep_table, FigureOverrides, SweepConfig, SweepModel};
use modeq::{Execution, ModelParams};

fn objectives(curve: &[CurvePoint]) -> Vec<f64> {
    curve.iter().map(|pt| pt.equilibrium.objective).collect()
}

#[test]
fn x1_matches_fixed_point_near_perfect() {
    let params = ModelParams::new(0.2, 0.25, 0.3).with_k(0.45);
    let base = fixed_point_participation(0.8, 0.0, &params, 100_000).unwrap();
    let x1 = x1k_ad(0.8, &params);
    assert!((0.0..=0.8).contains(&x1));
    assert!(
        (base.segments()[0].lo - x1).abs() < 2e-5,
        "{base:?} vs {x1}"
    );
}

#[test]
fn x2_sub_matches_fixed_point() {
    let params = ModelParams::new(0.2, 0.25, 0.3).with_k(0.2);
    let base = fixed_point_participation(0.5, 0.05, &params, 100_000).unwrap();
    let x2 = x2k_sub(0.05, &params);
    let top = base.segments().last().unwrap();
    assert!((top.lo - x2).abs() < 2e-5, "{base:?} vs {x2}");
    assert_eq!(top.hi, 1.0);
}

#[test]
fn imperfect_welfare_matches_quadrature_at_zero_accuracy() {
    let params = ModelParams::new(0.2, 0.25, 0.3).with_k(0.0);
    for y in [0.3, 0.6, 0.9] {
        let base = fixed_point_participation(y, 0.0, &params, 100_000).unwrap();
        let exact = configuration(y, 0.0, &params).base;
        let q: f64 = exact
            .segments()
            .iter()
            .map(|s| simpson(|x| utility(x, y, 0.0, &exact, &params), s.lo, s.hi, 10_000))
            .sum();
        assert!((welfare_imperfect(y, &params) - q).abs() < 1e-6, "y = {y}");
        assert!((base.measure() - exact.measure()).abs() < 4e-5);
    }
}

#[test]
fn perfect_welfare_matches_quadrature() {
    let params = ModelParams::new(0.2, 0.25, 0.3);
    for y in [0.4, 0.7, 1.0] {
        let lo = common::marginal_bisect(y, 0.2, 0.25);
        let q = simpson(|x| common::utility_interval(x, y, 0.2, 0.25), lo, y, 10_000);
        assert!((welfare_perfect(y, &params) - q).abs() < 1e-9);
    }
}

#[test]
fn welfare_gain_decreasing_in_alpha() {
    for v in [0.1, 0.25, 0.4] {
        let top = (v / 2.0f64).sqrt();
        let gains: Vec<f64> = (0..=100)
            .map(|i| delta_w(top * i as f64 / 100.0, v))
            .collect();
        assert!(gains.windows(2).all(|w| w[1] < w[0]), "v = {v}");
        assert!(alpha_p(v).unwrap() < top);
    }
}

#[test]
fn welfare_nondecreasing_in_accuracy() {
    let params = ModelParams::new(0.2, 0.25, 0.3);
    let ks = k_grid(0.01).unwrap();
    let curve = solve_planner_imperfect(&params, &ks, Execution::default()).unwrap();
    assert_eq!(first_drop(&objectives(&curve), 1e-6), None);
}

#[test]
fn hybrid_map_extremes() {
    let params = ModelParams::new(0.1, 0.25, 0.3);
    let map = hybrid_model_map(
        &params,
        &[0.001, 0.05, 0.1, 5.0],
        &[0.1, 1.0],
        Execution::default(),
    )
    .unwrap();
    for row in &map.rows {
        assert_eq!(
            row.cells[0],
            ChosenModel::Subscription,
            "delta = {}",
            row.delta
        );
        assert_eq!(*row.cells.last().unwrap(), ChosenModel::Advertising);
    }
    assert!(map.rows[0].a2.is_none());
    assert!(map.rows[1].cells.contains(&ChosenModel::Hybrid));
}

#[test]
fn sub_sweep_never_moderates_without_accuracy() {
    let mut cfg = SweepConfig::new(SweepModel::Sub, "unused.csv");
    cfg.k = Some(vec![0.0]);
    let t = sweep_table(&cfg, Execution::default()).unwrap();
    assert!(!t.rows.is_empty());
    assert!(t.rows.iter().all(|r| !r.equilibrium.moderated));
}

#[test]
fn sub_sweep_matches_perfect_at_half() {
    let mut cfg = SweepConfig::new(SweepModel::Sub, "unused.csv");
    cfg.k = Some(vec![0.5]);
    cfg.alpha = Some(vec![0.0, 0.2]);
    let t = sweep_table(&cfg, Execution::Sequential).unwrap();
    for r in &t.rows {
        let e = solve_sub_perfect(&ModelParams::new(r.alpha, r.v, r.c)).unwrap();
        assert!((r.equilibrium.objective - e.objective).abs() < 1e-12);
        assert!(r.alpha <= alpha_s(r.v).unwrap());
    }
}

#[test]
fn figure_ad_profit_has_interior_peak() {
    let f = figure_data("pi_k_ad", &FigureOverrides::default(), Execution::default()).unwrap();
    let profit = f.column("profit").unwrap();
    let (i, _) =
        profit.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |b, (i, &p)| if p > b.1 { (i, p) } else { b },
        );
    assert!(i > 0 && i + 1 < profit.len(), "peak at index {i}");
}

#[test]
fn figure_zeta_curves_cross_once() {
    let f = figure_data(
        "zeta_vs_alpha",
        &FigureOverrides::default(),
        Execution::default(),
    )
    .unwrap();
    let zb = f.column("zeta_bar").unwrap();
    let zh = f.column("zeta_hat").unwrap();
    let signs: Vec<bool> = zb.iter().zip(&zh).map(|(a, b)| a > b).collect();
    let flips = signs.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(flips, 1);
    assert!(signs[0]);
}

#[test]
fn figure_m1_m2_series() {
    let f = figure_data(
        "m1_m2_xbar_vs_k",
        &FigureOverrides::default(),
        Execution::default(),
    )
    .unwrap();
    assert_eq!(f.columns, vec!["k", "m1", "m2", "avg_extremeness"]);
    assert_eq!(f.rows.len(), 51);
    let m1 = f.column("m1").unwrap();
    let m2 = f.column("m2").unwrap();
    assert!(m1.iter().zip(&m2).any(|(a, b)| a < b));
}

#[test]
fn figure_overrides_apply() {
    let o = FigureOverrides {
        c: Some(0.5),
        ..FigureOverrides::default()
    };
    let f = figure_data("pi_k_ad", &o, Execution::Sequential).unwrap();
    let profit = f.column("profit").unwrap();
    let top = profit.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(*profit.last().unwrap(), top);
}
