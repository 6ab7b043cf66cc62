use crate::error::{Error, Result};

use super::{ModelParams, UserBase};

/// Probability that content at `x` survives moderation with cutoff `y`
/// (`1 - q_k`).
pub fn survival(x: f64, y: f64, k: f64) -> f64 {
    if x <= y {
        0.5 + k
    } else {
        0.5 - k
    }
}

/// Posting utility net of the expected pruning cost.
pub(crate) fn posting_term(x: f64, y: f64, params: &ModelParams) -> f64 {
    let s = survival(x, y, params.k);
    params.alpha * x * s - params.c * (1.0 - s)
}

fn first_moment(lo: f64, hi: f64) -> f64 {
    0.5 * (hi * hi - lo * lo)
}

fn zeroth_moment(lo: f64, hi: f64) -> f64 {
    hi - lo
}

/// `∫ m(t) (1 - q_k(t)) dt` over the part of `base` above `from`.
fn survival_weighted(base: &UserBase, from: f64, y: f64, k: f64, m: fn(f64, f64) -> f64) -> f64 {
    let moderate: f64 = base.pieces_within(from, y).map(|s| m(s.lo, s.hi)).sum();
    let extreme: f64 = base
        .pieces_within(from.max(y), 1.0)
        .map(|s| m(s.lo, s.hi))
        .sum();
    (0.5 + k) * moderate + (0.5 - k) * extreme
}

/// Net utility of a user at `x` facing cutoff `y`, fee `p` and participant set
/// `base`. Reading disutility counts surviving content more extreme than `x`.
pub fn utility(x: f64, y: f64, p: f64, base: &UserBase, params: &ModelParams) -> f64 {
    let reading = params.v - survival_weighted(base, x, y, params.k, first_moment);
    posting_term(x, y, params) + reading - p
}

/// Lowest participating user when everyone in `(x, y]` participates and
/// content above `y` is removed: `w` is the reading utility net of any fee.
pub fn marginal_user(y: f64, alpha: f64, w: f64) -> f64 {
    if y * y < 2.0 * w {
        return 0.0;
    }
    let r = alpha * alpha + y * y - 2.0 * w;
    (r.max(0.0).sqrt() - alpha).clamp(0.0, y.max(0.0))
}

/// `x^A(y)` under advertising.
pub fn marginal_user_ad(y: f64, params: &ModelParams) -> f64 {
    marginal_user(y, params.alpha, params.v)
}

/// `x^S(y, p)` under subscription.
pub fn marginal_user_sub(y: f64, p: f64, params: &ModelParams) -> f64 {
    marginal_user(y, params.alpha, params.v - p)
}

/// Survival-weighted mean extremeness of surviving content.
pub fn avg_extremeness(base: &UserBase, y: f64, k: f64) -> Result<f64> {
    if base.measure() <= 0.0 {
        return Err(Error::EmptyBase);
    }
    let den = survival_weighted(base, 0.0, y, k, zeroth_moment);
    if den <= 0.0 {
        return Err(Error::EmptyBase);
    }
    Ok(survival_weighted(base, 0.0, y, k, first_moment) / den)
}

/// `(M1, M2)`: mass of extreme content pruned and of moderate content pruned.
pub fn pruned_masses(base: &UserBase, y: f64, k: f64) -> (f64, f64) {
    let above = base.measure() - base.measure_within(0.0, y);
    let below = base.measure_within(0.0, y);
    ((0.5 + k) * above.max(0.0), (0.5 - k) * below)
}
