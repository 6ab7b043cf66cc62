//! Welfare-maximizing moderation.
//!
//! Welfare is the sum of participating users' utilities. Platform profit and
//! advertiser surplus are not included.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::imperfect_tech::{check_k_grid, configuration, x1k_ad, x2k_ad, CurvePoint};
use crate::model_core::{
    avg_extremeness, is_perfect, marginal_user_ad, pruned_masses, Equilibrium, ModelParams, Regime,
    UserBase, TOL,
};
use crate::numerics::{bisect, maximize_scalar, ScalarProblem, BISECT_TOL};
use crate::perfect_eq::{alpha_s, unmoderated};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareOutcome {
    pub policy_y: f64,
    pub welfare: f64,
    /// Alpha below which the planner moderates.
    pub alpha_p: f64,
    /// Net utility contribution of the user at the cutoff.
    pub contribution_at_cutoff: f64,
    pub moderated: bool,
}

/// `∫_lo^hi (a0 + a1 x + a2 x^2) dx`.
fn poly_integral(a0: f64, a1: f64, a2: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    a0 * (hi - lo) + a1 * (hi * hi - lo * lo) / 2.0 + a2 * (hi.powi(3) - lo.powi(3)) / 3.0
}

fn welfare_at(y: f64, alpha: f64, v: f64) -> f64 {
    let lo = crate::model_core::marginal_user(y, alpha, v);
    poly_integral(v - 0.5 * y * y, alpha, 0.5, lo, y)
}

/// Welfare with perfect technology and cutoff `y`.
pub fn welfare_perfect(y: f64, params: &ModelParams) -> f64 {
    welfare_at(y, params.alpha, params.v)
}

/// Welfare without moderation.
pub fn welfare_unmoderated(alpha: f64, v: f64) -> f64 {
    let s = (alpha * alpha - 2.0 * v + 1.0).sqrt();
    (alpha * alpha * (s - alpha) + s + v * (3.0 * alpha - 2.0 * s + 3.0) - 1.0) / 3.0
}

/// Interior cutoff solving `alpha y + v - y^2 = 0`.
pub fn interior_policy(alpha: f64, v: f64) -> f64 {
    0.5 * (alpha + (alpha * alpha + 4.0 * v).sqrt())
}

/// Welfare gain of the interior cutoff over no moderation.
pub fn delta_w(alpha: f64, v: f64) -> f64 {
    welfare_at(interior_policy(alpha, v), alpha, v) - welfare_unmoderated(alpha, v)
}

/// Alpha below which the planner moderates.
pub fn alpha_p(v: f64) -> Result<f64> {
    if !(v > 0.0 && v < 0.5) {
        return Err(Error::InvalidParams(format!(
            "v must satisfy 0 < v < 1/2 (got {v})"
        )));
    }
    bisect(|a| delta_w(a, v), 0.0, (v / 2.0).sqrt(), BISECT_TOL).map_err(|_| {
        Error::BracketFailure(format!("planner threshold has no sign change at v = {v}"))
    })
}

/// Utility of the user at `x` plus the harm her content does to the less
/// extreme participants below her, with everyone in `[x_P(y), y]` on board.
///
/// At `x = y` this is the marginal welfare of relaxing the cutoff.
pub fn net_utility_contribution(x: f64, y: f64, params: &ModelParams) -> f64 {
    let lo = marginal_user_ad(y, params);
    let own = params.alpha * x + params.v - 0.5 * (y * y - x * x);
    own - x * (x - lo).max(0.0)
}

pub fn solve_planner_perfect(params: &ModelParams) -> Result<WelfareOutcome> {
    params.validate()?;
    let (alpha, v) = (params.alpha, params.v);
    let ap = alpha_p(v)?;
    let (y, welfare, moderated) = if alpha < ap {
        let y = interior_policy(alpha, v);
        (y, welfare_at(y, alpha, v), true)
    } else {
        (1.0, welfare_unmoderated(alpha, v), false)
    };
    Ok(WelfareOutcome {
        policy_y: y,
        welfare,
        alpha_p: ap,
        contribution_at_cutoff: net_utility_contribution(y, y, params),
        moderated,
    })
}

/// Welfare with accuracy `params.k` and cutoff `y`.
pub fn welfare_imperfect(y: f64, params: &ModelParams) -> f64 {
    let (alpha, v, c, k) = (params.alpha, params.v, params.c, params.k);
    let (hi, lo) = (0.5 + k, 0.5 - k);
    let (x2, _) = x2k_ad(params);
    let x1 = x1k_ad(y, params);
    let s = if y < x2 { x2 } else { y };
    let moderate = poly_integral(
        -lo * c + v - hi * 0.5 * y * y - lo * 0.5 * (1.0 - s * s),
        hi * alpha,
        hi * 0.5,
        x1,
        y,
    );
    let extreme = poly_integral(-hi * c + v - lo * 0.5, lo * alpha, lo * 0.5, s, 1.0);
    moderate + extreme
}

/// Planner outcome at accuracy `params.k`, found numerically over `y`.
pub fn solve_planner_at_k(params: &ModelParams) -> Result<Equilibrium> {
    params.validate()?;
    let regime = if params.alpha > alpha_s(params.v)? {
        Regime::OutOfScope
    } else {
        Regime::InScope
    };
    let (y, w) = maximize_scalar(&ScalarProblem::new(
        |y| welfare_imperfect(y, params),
        0.0,
        1.0,
    ));
    let w0 = welfare_unmoderated(params.alpha, params.v);
    if w > w0 + TOL {
        let k = params.k;
        let (user_base, x1, x2) = if is_perfect(k) {
            let x1 = marginal_user_ad(y, params);
            (UserBase::interval(x1, y), x1, 1.0)
        } else {
            let conf = configuration(y, 0.0, params);
            (conf.base, conf.x1, conf.x2.max(y))
        };
        let (m1, m2) = pruned_masses(&user_base, y, k);
        Ok(Equilibrium {
            policy_y: y,
            moderated: true,
            price: None,
            objective: w,
            avg_extremeness: avg_extremeness(&user_base, y, k)?,
            user_base,
            x1,
            x2,
            pruned_extreme: m1,
            pruned_moderate: m2,
            regime,
        })
    } else {
        let mut e = unmoderated(marginal_user_ad(1.0, params), w0, None);
        e.regime = regime;
        Ok(e)
    }
}

/// Planner outcome along `k_grid`.
pub fn solve_planner_imperfect(
    params: &ModelParams,
    k_grid: &[f64],
    exec: Execution,
) -> Result<Vec<CurvePoint>> {
    check_k_grid(k_grid)?;
    exec.try_map(k_grid, |&k| {
        Ok(CurvePoint {
            k,
            equilibrium: solve_planner_at_k(&params.with_k(k))?,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
        let n = panels * 2;
        let h = (hi - lo) / n as f64;
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(lo + h * i as f64);
        }
        s * h / 3.0
    }

    #[test]
    fn w0_matches_quadrature() {
        let p = ModelParams::new(0.2, 0.25, 0.3);
        let lo = marginal_user_ad(1.0, &p);
        let q = simpson(|x| 0.2 * x + 0.25 - 0.5 * (1.0 - x * x), lo, 1.0, 10_000);
        let w0 = welfare_unmoderated(0.2, 0.25);
        assert!((w0 - 0.096272).abs() < 1e-6, "{w0}");
        assert!((w0 - q).abs() < 1e-9);
        assert!((welfare_perfect(1.0, &p) - w0).abs() < 1e-12);
    }

    #[test]
    fn welfare_gain_at_zero_alpha() {
        let p = ModelParams::new(0.0, 0.25, 0.3);
        let d = welfare_perfect(0.5, &p) - welfare_perfect(1.0, &p);
        assert!((d - 0.048816).abs() < 1e-6, "{d}");
    }

    #[test]
    fn foc_at_interior_point() {
        let p = ModelParams::new(0.0, 0.25, 0.3);
        let h = 1e-6;
        let d = (welfare_perfect(0.5 + h, &p) - welfare_perfect(0.5 - h, &p)) / (2.0 * h);
        assert!(d.abs() < 1e-8, "{d}");
    }

    #[test]
    fn perfect_examples() {
        let o = solve_planner_perfect(&ModelParams::new(0.0, 0.25, 0.3)).unwrap();
        assert!((o.policy_y - 0.5).abs() < 1e-12 && o.moderated);
        let p = ModelParams::new(0.05, 0.25, 0.3);
        assert!(delta_w(0.05, 0.25) > 0.0);
        let o = solve_planner_perfect(&p).unwrap();
        assert!((o.policy_y - 0.525625).abs() < 1e-6, "{}", o.policy_y);
        assert!(o.alpha_p < (0.25f64 / 2.0).sqrt());
        assert!(o.contribution_at_cutoff.abs() < 1e-10);
    }

    #[test]
    fn contribution_signs() {
        let p = ModelParams::new(0.0, 0.25, 0.3);
        assert!((net_utility_contribution(0.6, 0.6, &p) + 0.11).abs() < 1e-12);
        assert!(net_utility_contribution(0.4, 0.4, &p) > 0.0);
        assert!(net_utility_contribution(0.5, 0.5, &p).abs() < 1e-12);
    }

    #[test]
    fn k_half_matches_perfect() {
        for &(alpha, v, c) in &[
            (0.0, 0.25, 0.3),
            (0.05, 0.25, 0.3),
            (0.2, 0.25, 0.3),
            (0.1, 0.4, 0.5),
        ] {
            let p = ModelParams::new(alpha, v, c);
            let perfect = solve_planner_perfect(&p).unwrap();
            let numeric = solve_planner_at_k(&p).unwrap();
            assert!(
                (perfect.policy_y - numeric.policy_y).abs() < 1e-6,
                "{alpha} {v}"
            );
            assert!((perfect.welfare - numeric.objective).abs() < 1e-9);
        }
    }

    #[test]
    fn imperfect_reduces_to_perfect_welfare_at_half() {
        let p = ModelParams::new(0.2, 0.25, 0.3);
        for y in [0.1, 0.5, 0.8, 1.0] {
            assert!((welfare_imperfect(y, &p) - welfare_perfect(y, &p)).abs() < 1e-12);
        }
    }
}
