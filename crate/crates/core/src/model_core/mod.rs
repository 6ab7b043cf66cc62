//! Domain types, user utility and marginal users.

mod equilibrium;
mod oracle;
mod params;
mod user_base;
mod utility;

pub use equilibrium::{Equilibrium, Regime};
pub use oracle::fixed_point_participation;
pub use params::ModelParams;
pub use user_base::{Segment, UserBase};
pub use utility::{
    avg_extremeness, marginal_user, marginal_user_ad, marginal_user_sub, pruned_masses, survival,
    utility,
};

/// Absolute tolerance for threshold and profit comparisons.
pub const TOL: f64 = 1e-10;

/// Accuracy at or above which technology is treated as perfect.
pub(crate) fn is_perfect(k: f64) -> bool {
    k >= 0.5 - 1e-12
}
