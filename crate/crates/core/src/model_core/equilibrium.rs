use crate::error::{Error, Result};

use super::UserBase;

/// Whether a parameter tuple lies in the regime the closed forms describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    InScope,
    OutOfScope,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::InScope => "in_scope",
            Regime::OutOfScope => "out_of_scope",
        }
    }
}

/// A solved outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    /// Moderation cutoff `y*`.
    pub policy_y: f64,
    /// True when the moderation branch was chosen over "no moderation".
    pub moderated: bool,
    /// Subscription fee, if any.
    pub price: Option<f64>,
    /// Profit or welfare.
    pub objective: f64,
    pub user_base: UserBase,
    /// Lower marginal user.
    pub x1: f64,
    /// Lower end of the extreme segment, 1 when there is none.
    pub x2: f64,
    pub avg_extremeness: f64,
    /// `M1`: extreme content pruned.
    pub pruned_extreme: f64,
    /// `M2`: moderate content pruned.
    pub pruned_moderate: f64,
    pub regime: Regime,
}

const SLACK: f64 = 1e-9;

impl Equilibrium {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Invariant(m));
        let finite = [
            self.policy_y,
            self.objective,
            self.x1,
            self.x2,
            self.avg_extremeness,
            self.pruned_extreme,
            self.pruned_moderate,
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return fail(format!("non-finite field in {self:?}"));
        }
        if !(-SLACK..=1.0 + SLACK).contains(&self.policy_y) {
            return fail(format!("policy_y = {} outside [0, 1]", self.policy_y));
        }
        if self.x1 > self.policy_y + SLACK {
            return fail(format!(
                "x1 = {} above policy_y = {}",
                self.x1, self.policy_y
            ));
        }
        if self.x2 < self.policy_y - SLACK && (self.x2 - 1.0).abs() > SLACK {
            return fail(format!(
                "x2 = {} below policy_y = {}",
                self.x2, self.policy_y
            ));
        }
        if let Some(p) = self.price {
            if !p.is_finite() || p < -SLACK {
                return fail(format!("price = {p} is negative"));
            }
        }
        let m = self.user_base.measure();
        if !(0.0..=1.0 + SLACK).contains(&m) {
            return fail(format!("user base measure {m} outside [0, 1]"));
        }
        if m > 0.0 && !(self.x1 - SLACK..=1.0 + SLACK).contains(&self.avg_extremeness) {
            return fail(format!(
                "avg_extremeness = {} outside [x1, 1]",
                self.avg_extremeness
            ));
        }
        if self.pruned_extreme < -SLACK || self.pruned_moderate < -SLACK {
            return fail("negative pruned mass".into());
        }
        Ok(())
    }
}
