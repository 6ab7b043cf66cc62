use proptest::prelude::*;

use modeq::extensions::{boycott_policy_numeric, solve_ad_boycott, solve_hybrid};
use modeq::imperfect_tech::{
    configuration, solve_ad_imperfect, solve_sub_imperfect, x1k_ad, x2k_ad,
};
use modeq::model_core::{marginal_user_ad, utility};
use modeq::numerics::{maximize_scalar, ScalarProblem};
use modeq::perfect_eq::{ad_base_unmoderated, solve_ad_perfect, sub_profit_unmoderated};
use modeq::sweep::fmt9;
use modeq::{Execution, ModelParams, Segment, UserBase};

/// Valid `(alpha, v, c)` with `v < c <= alpha + 2v`.
fn params() -> impl Strategy<Value = ModelParams> {
    (0.0..1.0f64, 0.02..0.48f64, 0.001..1.0f64)
        .prop_map(|(alpha, v, t)| ModelParams::new(alpha, v, v + t * (alpha + v)))
}

proptest! {
    #[test]
    fn user_base_is_normalized(raw in prop::collection::vec((-0.2..1.2f64, -0.2..1.2f64), 0..8)) {
        let b = UserBase::from_segments(raw.iter().map(|&(a, b)| Segment::new(a.min(b), a.max(b))));
        let segs = b.segments();
        prop_assert!(b.measure() <= 1.0 + 1e-12);
        for s in segs {
            prop_assert!(s.lo >= 0.0 && s.hi <= 1.0 && s.lo < s.hi);
        }
        for w in segs.windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
    }

    #[test]
    fn marginal_user_has_zero_utility(p in params(), y in 0.0..1.0f64) {
        let x = marginal_user_ad(y, &p);
        prop_assert!((0.0..=y).contains(&x));
        let base = UserBase::interval(x, y);
        let u = utility(x, y, 0.0, &base, &p);
        if x > 0.0 && x < y {
            prop_assert!(u.abs() < 1e-9, "u = {}", u);
        } else if x == 0.0 {
            prop_assert!(u >= -1e-9);
        }
    }

    #[test]
    fn imperfect_boundaries_in_range(p in params(), k in 0.0..0.5f64, y in 0.0..1.0f64) {
        let p = p.with_k(k);
        let (x2, _) = x2k_ad(&p);
        let x1 = x1k_ad(y, &p);
        prop_assert!((0.0..=1.0).contains(&x2));
        prop_assert!((0.0..=y).contains(&x1));
        let conf = configuration(y, 0.0, &p);
        let expected = if y < x2 { (y - x1) + (1.0 - x2) } else { 1.0 - x1 };
        prop_assert!((conf.base.measure() - expected).abs() < 1e-12);
    }

    #[test]
    fn ad_equilibrium_is_valid(p in params(), k in 0.0..=0.5f64) {
        let p = p.with_k(k);
        let e = solve_ad_imperfect(&p).unwrap();
        prop_assert!(e.validate().is_ok(), "{:?}", e.validate());
        prop_assert!(e.objective >= p.zeta * ad_base_unmoderated(p.alpha, p.v) - 1e-12);
        prop_assert!((0.0..=1.0).contains(&e.avg_extremeness));
        prop_assert_eq!(e.moderated, e.policy_y < 1.0);
    }

    #[test]
    fn sub_equilibrium_is_valid(p in params(), k in 0.0..=0.5f64) {
        let p = p.with_k(k);
        let e = solve_sub_imperfect(&p).unwrap();
        prop_assert!(e.validate().is_ok(), "{:?}", e.validate());
        prop_assert!(e.price.is_some());
        prop_assert!(e.objective >= sub_profit_unmoderated(p.alpha, p.v) - 1e-12);
    }

    #[test]
    fn scalar_max_beats_grid(a in -1.0..1.0f64, b in -1.0..1.0f64, c in -1.0..1.0f64) {
        let f = |x: f64| a * x * x + b * x + c * (5.0 * x).sin();
        let (x, v) = maximize_scalar(&ScalarProblem::new(f, 0.0, 1.0));
        prop_assert!((0.0..=1.0).contains(&x));
        prop_assert!((f(x) - v).abs() < 1e-15);
        for i in 0..=100 {
            prop_assert!(v >= f(i as f64 / 100.0) - 1e-12);
        }
    }

    #[test]
    fn fmt9_round_trips(x in -10.0..10.0f64) {
        let s = fmt9(x);
        prop_assert!(!s.starts_with("-0.000000000"));
        prop_assert!((s.parse::<f64>().unwrap() - x).abs() <= 5e-10 + 1e-15);
    }

    #[test]
    fn execution_modes_agree(xs in prop::collection::vec(0.0..1.0f64, 0..64)) {
        let f = |x: &f64| (x * 7.0).sin();
        prop_assert_eq!(Execution::Sequential.map(&xs, f), Execution::Parallel.map(&xs, f));
    }

    #[test]
    fn boycott_closed_form_is_optimal(p in params(), ap in 0.01..1.0f64, beta in 0.001..2.0f64) {
        let p = p.with_boycott(ap, beta);
        let e = solve_ad_boycott(&p).unwrap();
        let (_, best) = boycott_policy_numeric(&p);
        prop_assert!(e.objective >= best - 1e-9, "{} < {}", e.objective, best);
        prop_assert!(e.objective >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hybrid_at_least_advertising(p in params(), delta in 0.05..=1.0f64, a in 0.01..2.0f64) {
        let p = p.with_delta(delta).with_a(a);
        let h = solve_hybrid(&p).unwrap();
        let ad = solve_ad_perfect(&p.with_zeta(a)).unwrap();
        prop_assert!(h.profit >= ad.objective - 1e-12);
        prop_assert!(h.free_segment.lo <= h.free_segment.hi + 1e-12);
        prop_assert!(h.free_segment.hi <= h.paid_segment.lo + 1e-12);
        prop_assert!(h.paid_segment.hi <= h.policy_y + 1e-12);
    }
}
