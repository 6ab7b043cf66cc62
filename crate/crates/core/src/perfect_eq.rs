//! Closed-form equilibria under perfect moderation technology.

use crate::error::{Error, Result};
use crate::model_core::{
    marginal_user_ad, marginal_user_sub, Equilibrium, ModelParams, Regime, UserBase, TOL,
};
use crate::numerics::{bisect, BISECT_TOL};

/// Per-`v` critical values, with `zeta_bar`/`zeta_hat` evaluated at one `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSet {
    /// Advertising moderation threshold `sqrt(2v)`.
    pub alpha_a: f64,
    /// Subscription moderation threshold.
    pub alpha_s: f64,
    /// Alpha at which `zeta_bar` and `zeta_hat` cross.
    pub alpha_1: f64,
    /// ARPU above which advertising wins when moderation is allowed.
    pub zeta_bar: f64,
    /// ARPU above which advertising wins when moderation is banned.
    pub zeta_hat: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevenueModel {
    Advertising,
    Subscription,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevenueChoice {
    pub model: RevenueModel,
    pub zeta_bar: f64,
    pub zeta_hat: f64,
}

fn check_v(v: f64) -> Result<()> {
    if v > 0.0 && v < 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "v must satisfy 0 < v < 1/2 (got {v})"
        )))
    }
}

/// User base without moderation: `1 + alpha - sqrt(alpha^2 + 1 - 2v)`.
pub fn ad_base_unmoderated(alpha: f64, v: f64) -> f64 {
    1.0 + alpha - (alpha * alpha + 1.0 - 2.0 * v).sqrt()
}

/// Profit-maximizing fee when the platform does not moderate.
pub fn sub_price_unmoderated(alpha: f64, v: f64) -> f64 {
    let r = 2.0 * (2.0 - 3.0 * v + 2.0 * alpha * alpha + alpha);
    ((1.0 + alpha) * r.sqrt() - 2.0 * (1.0 - 3.0 * v + alpha * alpha - alpha)) / 9.0
}

/// Subscription profit with fee `p` and no moderation.
pub fn sub_profit_unmoderated_at(alpha: f64, v: f64, p: f64) -> f64 {
    p * (1.0 + alpha - (alpha * alpha + 1.0 - 2.0 * (v - p)).sqrt())
}

/// Best subscription profit without moderation.
pub fn sub_profit_unmoderated(alpha: f64, v: f64) -> f64 {
    sub_profit_unmoderated_at(alpha, v, sub_price_unmoderated(alpha, v))
}

/// Subscription profit with moderation at `sqrt(2v/3)` and fee `2v/3`.
pub fn sub_profit_moderated(v: f64) -> f64 {
    (2.0 * v / 3.0).powf(1.5)
}

/// Alpha below which a subscription platform moderates.
pub fn alpha_s(v: f64) -> Result<f64> {
    check_v(v)?;
    let target = sub_profit_moderated(v);
    let hi = (2.0 * v).sqrt() - 1e-9;
    bisect(
        |a| sub_profit_unmoderated(a, v) - target,
        1e-9,
        hi,
        BISECT_TOL,
    )
    .map_err(|_| {
        Error::BracketFailure(format!(
            "subscription threshold has no sign change at v = {v}"
        ))
    })
}

/// Best advertising user base (profit per unit ARPU).
fn ad_base_best(alpha: f64, v: f64) -> f64 {
    (2.0 * v).sqrt().max(ad_base_unmoderated(alpha, v))
}

/// Best subscription profit, moderation allowed.
fn sub_profit_best(alpha: f64, v: f64) -> f64 {
    sub_profit_moderated(v).max(sub_profit_unmoderated(alpha, v))
}

/// ARPU at which advertising and subscription tie, moderation allowed.
pub fn zeta_bar(alpha: f64, v: f64) -> f64 {
    sub_profit_best(alpha, v) / ad_base_best(alpha, v)
}

/// ARPU at which advertising and subscription tie, moderation banned.
pub fn zeta_hat(alpha: f64, v: f64) -> f64 {
    sub_profit_unmoderated(alpha, v) / ad_base_unmoderated(alpha, v)
}

/// Alpha at which `zeta_bar` and `zeta_hat` cross.
pub fn alpha_1(v: f64) -> Result<f64> {
    let hi = alpha_s(v)? - 1e-9;
    bisect(|a| zeta_bar(a, v) - zeta_hat(a, v), 1e-9, hi, BISECT_TOL).map_err(|_| {
        Error::BracketFailure(format!(
            "revenue-model crossover has no sign change at v = {v}"
        ))
    })
}

pub fn thresholds(v: f64, alpha: f64) -> Result<ThresholdSet> {
    check_v(v)?;
    Ok(ThresholdSet {
        alpha_a: (2.0 * v).sqrt(),
        alpha_s: alpha_s(v)?,
        alpha_1: alpha_1(v)?,
        zeta_bar: zeta_bar(alpha, v),
        zeta_hat: zeta_hat(alpha, v),
    })
}

/// Advertising equilibrium with perfect technology.
pub fn solve_ad_perfect(params: &ModelParams) -> Result<Equilibrium> {
    params.validate()?;
    let (alpha, v) = (params.alpha, params.v);
    let moderated_base = (2.0 * v).sqrt();
    let open_base = ad_base_unmoderated(alpha, v);
    if moderated_base > open_base + TOL {
        let y = moderated_base;
        Ok(Equilibrium {
            policy_y: y,
            moderated: true,
            price: None,
            objective: params.zeta * y,
            user_base: UserBase::interval(0.0, y),
            x1: 0.0,
            x2: 1.0,
            avg_extremeness: y / 2.0,
            pruned_extreme: 0.0,
            pruned_moderate: 0.0,
            regime: Regime::InScope,
        })
    } else {
        let x1 = marginal_user_ad(1.0, params);
        Ok(unmoderated(x1, params.zeta * (1.0 - x1), None))
    }
}

/// Subscription equilibrium with perfect technology.
pub fn solve_sub_perfect(params: &ModelParams) -> Result<Equilibrium> {
    params.validate()?;
    let (alpha, v) = (params.alpha, params.v);
    let moderated = sub_profit_moderated(v);
    let open = sub_profit_unmoderated(alpha, v);
    if moderated > open + TOL {
        let y = (2.0 * v / 3.0).sqrt();
        let p = 2.0 * v / 3.0;
        let x1 = marginal_user_sub(y, p, params);
        Ok(Equilibrium {
            policy_y: y,
            moderated: true,
            price: Some(p),
            objective: moderated,
            user_base: UserBase::interval(x1, y),
            x1,
            x2: 1.0,
            avg_extremeness: (x1 + y) / 2.0,
            pruned_extreme: 0.0,
            pruned_moderate: 0.0,
            regime: Regime::InScope,
        })
    } else {
        let p = sub_price_unmoderated(alpha, v);
        let x1 = marginal_user_sub(1.0, p, params);
        Ok(unmoderated(x1, open, Some(p)))
    }
}

/// Outcome with no moderation: everyone above `x1` participates, nothing is
/// pruned.
pub(crate) fn unmoderated(x1: f64, objective: f64, price: Option<f64>) -> Equilibrium {
    Equilibrium {
        policy_y: 1.0,
        moderated: false,
        price,
        objective,
        user_base: UserBase::interval(x1, 1.0),
        x1,
        x2: 1.0,
        avg_extremeness: (x1 + 1.0) / 2.0,
        pruned_extreme: 0.0,
        pruned_moderate: 0.0,
        regime: Regime::InScope,
    }
}

/// Advertising vs subscription for the given ARPU `zeta`.
pub fn revenue_model_choice(params: &ModelParams, allow_moderation: bool) -> Result<RevenueChoice> {
    params.validate()?;
    let zb = zeta_bar(params.alpha, params.v);
    let zh = zeta_hat(params.alpha, params.v);
    let cut = if allow_moderation { zb } else { zh };
    let model = if params.zeta > cut {
        RevenueModel::Advertising
    } else {
        RevenueModel::Subscription
    };
    Ok(RevenueChoice {
        model,
        zeta_bar: zb,
        zeta_hat: zh,
    })
}
