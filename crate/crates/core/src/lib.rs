//! Equilibrium solvers for a social-media platform that chooses a content
//! moderation cutoff, a revenue model and (optionally) a subscription price.
//!
//! Users sit on an extremeness index `x` in `[0, 1]`. They get utility from
//! posting, from reading, and lose utility when reading content more extreme
//! than their own. The platform prunes content beyond a cutoff `y`, either
//! perfectly or with an imperfect classifier of accuracy `k`.
//!
//! Modules:
//! - [`model_core`]: parameters, user bases, utility and marginal users,
//!   plus a discretized fixed-point oracle.
//! - [`numerics`]: bisection and grid-plus-golden maximization.
//! - [`perfect_eq`]: closed-form equilibria under perfect technology.
//! - [`imperfect_tech`]: equilibria for `k < 1/2`.
//! - [`planner`]: welfare-maximizing moderation.
//! - [`extensions`]: hybrid revenue model and advertiser boycott.
//! - [`sweep`]: parameter sweeps, CSV output and figure data.

pub mod error;
pub mod exec;
pub mod extensions;
pub mod imperfect_tech;
pub mod model_core;
pub mod numerics;
pub mod perfect_eq;
pub mod planner;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model_core::{Equilibrium, ModelParams, Regime, Segment, UserBase};
