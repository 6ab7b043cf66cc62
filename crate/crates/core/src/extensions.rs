//! Hybrid (ads plus paid tier) revenue model and the advertiser boycott.
//!
//! Both extensions assume perfect moderation technology. In this module the
//! per-user ad value is `params.a` (hybrid) or `a' - beta * xbar` (boycott);
//! `params.zeta` is not read.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model_core::{
    marginal_user, marginal_user_ad, Equilibrium, ModelParams, Regime, Segment, UserBase, TOL,
};
use crate::numerics::{maximize_box2, maximize_scalar, Box2Options, ScalarProblem};
use crate::perfect_eq::{solve_ad_perfect, solve_sub_perfect};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChosenModel {
    Advertising,
    Hybrid,
    Subscription,
}

impl ChosenModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChosenModel::Advertising => "advertising",
            ChosenModel::Hybrid => "hybrid",
            ChosenModel::Subscription => "subscription",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridEquilibrium {
    pub policy_y: f64,
    pub price: Option<f64>,
    /// Users on the free, ad-supported tier.
    pub free_segment: Segment,
    /// Users paying for the ad-free tier.
    pub paid_segment: Segment,
    pub profit: f64,
    pub chosen_model: ChosenModel,
}

/// Lowest paying user: solves `delta * U(x) = p`, clipped to `[x^H(y), y]`.
pub fn hybrid_paid_marginal(y: f64, p: f64, params: &ModelParams) -> f64 {
    let lo = marginal_user_ad(y, params);
    let root = marginal_user(y, params.alpha, params.v - p / params.delta);
    root.clamp(lo, y)
}

pub fn hybrid_profit(y: f64, p: f64, params: &ModelParams) -> f64 {
    let lo = marginal_user_ad(y, params);
    let x_hat = hybrid_paid_marginal(y, p, params);
    params.a * (x_hat - lo) + p * (y - x_hat)
}

fn ad_outcome(params: &ModelParams) -> Result<Equilibrium> {
    let mut e = solve_ad_perfect(&params.with_zeta(1.0))?;
    e.objective *= params.a;
    Ok(e)
}

fn advertising_only(ad: &Equilibrium) -> HybridEquilibrium {
    HybridEquilibrium {
        policy_y: ad.policy_y,
        price: None,
        free_segment: Segment::new(ad.x1, ad.policy_y),
        paid_segment: Segment::new(ad.policy_y, ad.policy_y),
        profit: ad.objective,
        chosen_model: ChosenModel::Advertising,
    }
}

/// Hybrid equilibrium. Falls back to advertising only when nobody would pay
/// or the paid tier does not raise profit.
pub fn solve_hybrid(params: &ModelParams) -> Result<HybridEquilibrium> {
    params.validate()?;
    if params.delta == 0.0 {
        return Err(Error::DeltaZero);
    }
    let ad = ad_outcome(params)?;
    let p_max = params.delta * (params.alpha + params.v);
    let ((y, p), best) = maximize_box2(
        |y, p| hybrid_profit(y, p, params),
        (0.0, 1.0),
        (0.0, p_max),
        Box2Options::default(),
    );
    let x_hat = hybrid_paid_marginal(y, p, params);
    if best <= ad.objective + TOL || y - x_hat <= 1e-9 {
        return Ok(advertising_only(&ad));
    }
    let lo = marginal_user_ad(y, params);
    let chosen_model = if x_hat - lo <= 1e-9 {
        ChosenModel::Subscription
    } else {
        ChosenModel::Hybrid
    };
    Ok(HybridEquilibrium {
        policy_y: y,
        price: Some(p),
        free_segment: Segment::new(lo, x_hat),
        paid_segment: Segment::new(x_hat, y),
        profit: best,
        chosen_model,
    })
}

/// One `delta` row of the revenue-model map.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridRow {
    pub delta: f64,
    /// Chosen model at each `a` of the grid.
    pub cells: Vec<ChosenModel>,
    /// First `a` where advertising beats subscription, ignoring the hybrid.
    pub a1: Option<f64>,
    /// First `a` where the hybrid is chosen.
    pub a2: Option<f64>,
    /// Last `a` where the hybrid is chosen.
    pub a3: Option<f64>,
    /// First `a` where the hybrid optimum moderates (`y < 1`).
    pub a_hat_empirical: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridRegimeMap {
    pub a_grid: Vec<f64>,
    pub rows: Vec<HybridRow>,
    /// Smallest `delta` whose row contains a hybrid cell.
    pub delta_bar: Option<f64>,
    pub a2_nonincreasing: bool,
    pub a3_nondecreasing: bool,
}

fn check_ascending(grid: &[f64], name: &str) -> Result<()> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid(format!(
            "{name} grid must be nonempty and ascending"
        )));
    }
    Ok(())
}

/// Compares advertising, subscription and hybrid at every `(a, delta)`.
pub fn hybrid_model_map(
    params: &ModelParams,
    a_grid: &[f64],
    delta_grid: &[f64],
    exec: Execution,
) -> Result<HybridRegimeMap> {
    check_ascending(a_grid, "a")?;
    check_ascending(delta_grid, "delta")?;
    let sub = solve_sub_perfect(params)?.objective;
    let cells: Vec<(f64, f64)> = delta_grid
        .iter()
        .flat_map(|&d| a_grid.iter().map(move |&a| (d, a)))
        .collect();
    let solved = exec.try_map(&cells, |&(delta, a)| {
        let p = params.with_a(a).with_delta(delta);
        let ad = ad_outcome(&p)?.objective;
        let h = if delta == 0.0 {
            None
        } else {
            Some(solve_hybrid(&p)?)
        };
        Ok((ad, h))
    })?;

    let step = |g: &[f64]| g.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let a_step = step(a_grid);
    let mut rows = Vec::with_capacity(delta_grid.len());
    for (r, &delta) in delta_grid.iter().enumerate() {
        let row = &solved[r * a_grid.len()..(r + 1) * a_grid.len()];
        let mut out = HybridRow {
            delta,
            cells: Vec::with_capacity(a_grid.len()),
            a1: None,
            a2: None,
            a3: None,
            a_hat_empirical: None,
        };
        for (&a, (ad, h)) in a_grid.iter().zip(row) {
            if out.a1.is_none() && *ad > sub {
                out.a1 = Some(a);
            }
            let hybrid = h
                .filter(|h| h.chosen_model == ChosenModel::Hybrid)
                .filter(|h| h.profit > ad.max(sub) + TOL);
            let choice = if hybrid.is_some() {
                ChosenModel::Hybrid
            } else if *ad > sub {
                ChosenModel::Advertising
            } else {
                ChosenModel::Subscription
            };
            if choice == ChosenModel::Hybrid {
                out.a2.get_or_insert(a);
                out.a3 = Some(a);
            }
            if out.a_hat_empirical.is_none() && h.is_some_and(|h| h.policy_y < 1.0 - 1e-6) {
                out.a_hat_empirical = Some(a);
            }
            out.cells.push(choice);
        }
        rows.push(out);
    }

    let delta_bar = rows.iter().find(|r| r.a2.is_some()).map(|r| r.delta);
    let banded: Vec<&HybridRow> = rows.iter().filter(|r| r.a2.is_some()).collect();
    let a2_nonincreasing = banded
        .windows(2)
        .all(|w| w[1].a2.unwrap() <= w[0].a2.unwrap() + a_step + 1e-12);
    let a3_nondecreasing = banded
        .windows(2)
        .all(|w| w[1].a3.unwrap() + a_step + 1e-12 >= w[0].a3.unwrap());
    Ok(HybridRegimeMap {
        a_grid: a_grid.to_vec(),
        rows,
        delta_bar,
        a2_nonincreasing,
        a3_nondecreasing,
    })
}

/// Advertising profit when the ad value falls with average extremeness.
pub fn boycott_profit(y: f64, params: &ModelParams) -> f64 {
    let lo = marginal_user_ad(y, params);
    (params.a_prime - params.beta * (lo + y) / 2.0) * (y - lo)
}

/// Profit-maximizing policy under the boycott.
pub fn boycott_policy(params: &ModelParams) -> f64 {
    let (alpha, v, a, b) = (params.alpha, params.v, params.a_prime, params.beta);
    let r = (2.0 * v).sqrt();
    if b <= a / r {
        if alpha <= r {
            return r;
        }
        let b1 = a * ((1.0 + alpha * alpha - 2.0 * v).sqrt() - 1.0) / alpha;
        let b2 = a * (1.0 / r - 1.0 / alpha);
        if b <= b1 {
            1.0
        } else if b <= b2 {
            a * ((alpha * alpha - 2.0 * v) / (alpha * b * (2.0 * a + alpha * b))).sqrt()
        } else {
            r
        }
    } else {
        a / b
    }
}

fn boycott_equilibrium(y: f64, params: &ModelParams) -> Equilibrium {
    let x1 = marginal_user_ad(y, params);
    Equilibrium {
        policy_y: y,
        moderated: y < 1.0,
        price: None,
        objective: boycott_profit(y, params),
        user_base: UserBase::interval(x1, y),
        x1,
        x2: 1.0,
        avg_extremeness: (x1 + y) / 2.0,
        pruned_extreme: 0.0,
        pruned_moderate: 0.0,
        regime: Regime::InScope,
    }
}

/// Advertising equilibrium under the boycott.
pub fn solve_ad_boycott(params: &ModelParams) -> Result<Equilibrium> {
    params.validate()?;
    if !(params.a_prime > 0.0 && params.beta > 0.0) {
        return Err(Error::InvalidParams(format!(
            "boycott needs a' > 0 and beta > 0 (got a' = {}, beta = {})",
            params.a_prime, params.beta
        )));
    }
    let e = boycott_equilibrium(boycott_policy(params), params);
    if e.objective < 0.0 {
        let mut empty = boycott_equilibrium(0.0, params);
        empty.objective = 0.0;
        return Ok(empty);
    }
    Ok(e)
}

/// Numeric maximizer of [`boycott_profit`], for cross-checks.
pub fn boycott_policy_numeric(params: &ModelParams) -> (f64, f64) {
    maximize_scalar(&ScalarProblem::new(|y| boycott_profit(y, params), 0.0, 1.0))
}
