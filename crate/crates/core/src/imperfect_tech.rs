//! Equilibria under imperfect moderation technology, `0 <= k < 1/2`.
//!
//! Content at or below the cutoff survives with probability `1/2 + k`,
//! content above it with probability `1/2 - k`. Participants then form up to
//! two segments: moderate users `[x1, y]` and extreme users `[x2, 1]`.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model_core::{
    avg_extremeness, is_perfect, marginal_user_ad, marginal_user_sub, pruned_masses, Equilibrium,
    ModelParams, Regime, Segment, UserBase, TOL,
};
use crate::numerics::{maximize_scalar, ScalarProblem};
use crate::perfect_eq::{
    ad_base_unmoderated, alpha_s, solve_ad_perfect, solve_sub_perfect, sub_price_unmoderated,
    sub_profit_unmoderated, unmoderated,
};

/// Shift applied to open price bounds.
const OPEN_SHIFT: f64 = 1e-9;

/// Accuracy at or above which the extreme segment is `[1, 1]` when `p = 0`.
pub fn k_bar(params: &ModelParams) -> f64 {
    (params.alpha + 2.0 * params.v - params.c) / (2.0 * (params.alpha + params.c))
}

/// Fee at or above which no extreme user participates.
pub fn p1k(params: &ModelParams) -> f64 {
    let k = params.k;
    params.v + params.alpha * (0.5 - k) - params.c * (0.5 + k)
}

/// Fee at or below which the moderate segment reaches down to 0 with the
/// cutoff at `x2`.
pub fn p2k(params: &ModelParams) -> f64 {
    let (a, v, c, k) = (params.alpha, params.v, params.c, params.k);
    let s = 2.0 * k + 1.0;
    let root = (8.0 * c * k * s + a * a * (1.0 - 2.0 * k).powi(2)).sqrt();
    v - 0.25 - c * (12.0 * k * k + 1.0) / (2.0 * s)
        + 2.0 * a * (1.0 - 2.0 * k) * k * root / (s * s)
        + 0.5 * k * (1.0 - 4.0 * a * a * (1.0 - 8.0 * k / (s * s)))
}

/// Lower end of the extreme segment given net reading utility `w = v - p`.
fn x2_for(params: &ModelParams, w: f64) -> f64 {
    let (a, c, k) = (params.alpha, params.c, params.k);
    if is_perfect(k) {
        return 1.0;
    }
    let r = a * a + 1.0 + (2.0 * c * (1.0 + 2.0 * k) - 4.0 * w) / (1.0 - 2.0 * k);
    (r.max(0.0).sqrt() - a).clamp(0.0, 1.0)
}

/// Lower marginal user for cutoff `y` given the extreme segment start `x2`.
fn x1_for(y: f64, params: &ModelParams, w: f64, x2: f64) -> f64 {
    let (a, c, k) = (params.alpha, params.c, params.k);
    let t = if y < x2 { x2 } else { y };
    let inner = ((1.0 - 2.0 * k) * (2.0 * c + 1.0 - t * t) - 4.0 * w) / (1.0 + 2.0 * k);
    let r = a * a + (y * y + (2.0 * a * y).min(inner)).max(0.0);
    (r.sqrt() - a).clamp(0.0, y.max(0.0))
}

/// Largest cutoff at which every moderate user participates; 0 when none.
fn y_hat_for(params: &ModelParams, w: f64, x2: f64) -> f64 {
    let k = params.k;
    let r = (4.0 * w - (1.0 - 2.0 * k) * (2.0 * params.c + 1.0 - x2 * x2)) / (1.0 + 2.0 * k);
    r.max(0.0).sqrt()
}

/// `(x2, k_bar)` under advertising.
pub fn x2k_ad(params: &ModelParams) -> (f64, f64) {
    (x2_for(params, params.v), k_bar(params))
}

pub fn x1k_ad(y: f64, params: &ModelParams) -> f64 {
    x1_for(y, params, params.v, x2_for(params, params.v))
}

pub fn x2k_sub(p: f64, params: &ModelParams) -> f64 {
    x2_for(params, params.v - p)
}

pub fn x1k_sub(y: f64, p: f64, params: &ModelParams) -> f64 {
    let w = params.v - p;
    x1_for(y, params, w, x2_for(params, w))
}

/// `ŷ` under advertising.
pub fn y_hat_ad(params: &ModelParams) -> f64 {
    y_hat_for(params, params.v, x2_for(params, params.v))
}

/// `ŷ` under subscription at fee `p`.
pub fn y_hat_sub(p: f64, params: &ModelParams) -> f64 {
    let w = params.v - p;
    y_hat_for(params, w, x2_for(params, w))
}

/// Participation for a given cutoff and fee.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub y: f64,
    pub x1: f64,
    pub x2: f64,
    pub base: UserBase,
}

pub fn configuration(y: f64, p: f64, params: &ModelParams) -> Configuration {
    let w = params.v - p;
    let x2 = x2_for(params, w);
    let x1 = x1_for(y, params, w, x2);
    let base = if y < x2 {
        UserBase::from_segments([Segment::new(x1, y), Segment::new(x2, 1.0)])
    } else {
        UserBase::interval(x1, 1.0)
    };
    Configuration { y, x1, x2, base }
}

fn regime(params: &ModelParams) -> Result<Regime> {
    Ok(if params.alpha > alpha_s(params.v)? {
        Regime::OutOfScope
    } else {
        Regime::InScope
    })
}

fn moderated_equilibrium(
    conf: Configuration,
    objective: f64,
    price: Option<f64>,
    k: f64,
    regime: Regime,
) -> Result<Equilibrium> {
    let (m1, m2) = pruned_masses(&conf.base, conf.y, k);
    Ok(Equilibrium {
        policy_y: conf.y,
        moderated: true,
        price,
        objective,
        avg_extremeness: avg_extremeness(&conf.base, conf.y, k)?,
        x1: conf.x1,
        // With y >= x2 the extreme users start right above the cutoff.
        x2: conf.x2.max(conf.y),
        user_base: conf.base,
        pruned_extreme: m1,
        pruned_moderate: m2,
        regime,
    })
}

/// Advertising equilibrium for accuracy `params.k`.
pub fn solve_ad_imperfect(params: &ModelParams) -> Result<Equilibrium> {
    params.validate()?;
    let regime = regime(params)?;
    if is_perfect(params.k) {
        return Ok(Equilibrium {
            regime,
            ..solve_ad_perfect(params)?
        });
    }
    let x2 = x2_for(params, params.v);
    let yh = y_hat_ad(params);
    let mut candidates = [x2, yh];
    candidates.sort_by(f64::total_cmp);
    let mut best: Option<(Configuration, f64)> = None;
    for y in candidates {
        let conf = configuration(y, 0.0, params);
        let m = conf.base.measure();
        if best.as_ref().is_none_or(|(_, b)| m > b + TOL) {
            best = Some((conf, m));
        }
    }
    let (conf, base) = best.expect("two candidates");
    let open = ad_base_unmoderated(params.alpha, params.v);
    if base > open + TOL {
        moderated_equilibrium(conf, params.zeta * base, None, params.k, regime)
    } else {
        let x1 = marginal_user_ad(1.0, params);
        let mut e = unmoderated(x1, params.zeta * (1.0 - x1), None);
        e.regime = regime;
        Ok(e)
    }
}

/// The five price regimes of the subscription problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcase {
    /// `p > p1k`, cutoff 1.
    S1a,
    /// `p > p1k`, cutoff `ŷ`.
    S1b,
    /// `p2k < p <= p1k`, cutoff `x2`.
    S2a,
    /// `p2k < p <= p1k`, cutoff `ŷ`.
    S2b,
    /// `0 < p <= p2k`, full coverage with cutoff `x2`.
    S3,
}

impl Subcase {
    pub const ALL: [Subcase; 5] = [
        Subcase::S1a,
        Subcase::S1b,
        Subcase::S2a,
        Subcase::S2b,
        Subcase::S3,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Subcase::S1a => "1a",
            Subcase::S1b => "1b",
            Subcase::S2a => "2a",
            Subcase::S2b => "2b",
            Subcase::S3 => "3",
        }
    }

    /// Fee interval `[lo, hi]`; `None` when empty.
    pub fn band(&self, params: &ModelParams) -> Option<(f64, f64)> {
        let p_max = params.v + params.alpha + 1.0;
        let (p1, p2) = (p1k(params), p2k(params));
        let (lo, hi) = match self {
            Subcase::S1a | Subcase::S1b => ((p1 + OPEN_SHIFT).max(0.0), p_max),
            Subcase::S2a | Subcase::S2b => ((p2 + OPEN_SHIFT).max(0.0), p1),
            Subcase::S3 => (OPEN_SHIFT, p2),
        };
        (hi > lo).then_some((lo, hi))
    }

    /// Cutoff the platform picks at fee `p` in this regime.
    pub fn policy(&self, p: f64, params: &ModelParams) -> f64 {
        let w = params.v - p;
        match self {
            Subcase::S1a => 1.0,
            Subcase::S1b => y_hat_for(params, w, 1.0),
            Subcase::S2a | Subcase::S3 => x2_for(params, w),
            Subcase::S2b => y_hat_for(params, w, x2_for(params, w)),
        }
    }

    /// Profit at fee `p` in this regime.
    pub fn profit(&self, p: f64, params: &ModelParams) -> f64 {
        let w = params.v - p;
        match self {
            Subcase::S1a => p * (1.0 - x1_for(1.0, params, w, 1.0)),
            Subcase::S1b => p * y_hat_for(params, w, 1.0),
            Subcase::S2a => {
                let x2 = x2_for(params, w);
                p * (1.0 - x1_for(x2, params, w, x2))
            }
            Subcase::S2b => {
                let x2 = x2_for(params, w);
                p * (y_hat_for(params, w, x2) + 1.0 - x2)
            }
            Subcase::S3 => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubcaseResult {
    pub label: Subcase,
    pub price: f64,
    pub policy_y: f64,
    pub profit: f64,
}

/// Best fee within each nonempty subcase band.
pub fn sub_subcases(params: &ModelParams) -> Vec<SubcaseResult> {
    Subcase::ALL
        .iter()
        .filter_map(|&s| {
            let (lo, hi) = s.band(params)?;
            let (p, profit) = maximize_scalar(&ScalarProblem::new(|p| s.profit(p, params), lo, hi));
            Some(SubcaseResult {
                label: s,
                price: p,
                policy_y: s.policy(p, params),
                profit,
            })
        })
        .collect()
}

/// Subscription equilibrium for accuracy `params.k`.
pub fn solve_sub_imperfect(params: &ModelParams) -> Result<Equilibrium> {
    params.validate()?;
    let regime = regime(params)?;
    if is_perfect(params.k) {
        return Ok(Equilibrium {
            regime,
            ..solve_sub_perfect(params)?
        });
    }
    let mut best: Option<SubcaseResult> = None;
    for r in sub_subcases(params) {
        if best.is_none_or(|b| r.profit > b.profit) {
            best = Some(r);
        }
    }
    let open = sub_profit_unmoderated(params.alpha, params.v);
    match best {
        Some(b) if b.profit > open + TOL => {
            let conf = configuration(b.policy_y, b.price, params);
            moderated_equilibrium(conf, b.profit, Some(b.price), params.k, regime)
        }
        _ => {
            let p = sub_price_unmoderated(params.alpha, params.v);
            let x1 = marginal_user_sub(1.0, p, params);
            let mut e = unmoderated(x1, open, Some(p));
            e.regime = regime;
            Ok(e)
        }
    }
}

/// Revenue model for accuracy curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TechModel {
    Ad,
    Sub,
}

impl TechModel {
    pub fn solve(&self, params: &ModelParams) -> Result<Equilibrium> {
        match self {
            TechModel::Ad => solve_ad_imperfect(params),
            TechModel::Sub => solve_sub_imperfect(params),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub k: f64,
    pub equilibrium: Equilibrium,
}

/// `{0, step, ..., 1/2}`.
pub fn k_grid(step: f64) -> Result<Vec<f64>> {
    crate::sweep::even_grid(0.0, 0.5, step, "k")
}

/// Equilibrium at each accuracy in `k_grid`, in grid order.
pub fn profit_curve_k(
    model: TechModel,
    params: &ModelParams,
    k_grid: &[f64],
    exec: Execution,
) -> Result<Vec<CurvePoint>> {
    check_k_grid(k_grid)?;
    exec.try_map(k_grid, |&k| {
        Ok(CurvePoint {
            k,
            equilibrium: model.solve(&params.with_k(k))?,
        })
    })
}

pub(crate) fn check_k_grid(k_grid: &[f64]) -> Result<()> {
    if k_grid.is_empty() {
        return Err(Error::InvalidGrid("k grid is empty".into()));
    }
    if k_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "k grid must be strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Accuracy maximizing the objective; ties go to the larger `k`.
pub fn optimal_k(
    model: TechModel,
    params: &ModelParams,
    k_grid: &[f64],
    exec: Execution,
) -> Result<(f64, f64)> {
    let curve = profit_curve_k(model, params, k_grid, exec)?;
    Ok(best_k(&curve))
}

pub(crate) fn best_k(curve: &[CurvePoint]) -> (f64, f64) {
    let top = curve
        .iter()
        .map(|pt| pt.equilibrium.objective)
        .fold(f64::NEG_INFINITY, f64::max);
    curve
        .iter()
        .rev()
        .find(|pt| pt.equilibrium.objective >= top - 1e-12)
        .map(|pt| (pt.k, pt.equilibrium.objective))
        .expect("nonempty curve")
}
