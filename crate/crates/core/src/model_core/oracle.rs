use crate::error::{Error, Result};

use super::utility::{posting_term, survival};
use super::{ModelParams, Segment, UserBase};

/// Discretized fulfilled-expectations participation.
///
/// Users are `n_users` atoms of mass `1/n_users` at the cell midpoints. All
/// atoms start as participants; each round sweeps from the most extreme atom
/// down and drops any atom whose utility is negative given the current set
/// (ties stay in). A user's utility depends only on more extreme participants,
/// so one sweep reaches the largest fixed point and the next confirms it.
/// Survivors are returned as the union of their cells.
pub fn fixed_point_participation(
    y: f64,
    p: f64,
    params: &ModelParams,
    n_users: usize,
) -> Result<UserBase> {
    params.validate()?;
    if n_users < 100 {
        return Err(Error::InvalidParams(format!(
            "n_users must be at least 100 (got {n_users})"
        )));
    }
    let n = n_users as f64;
    let mass = 1.0 / n;
    let atoms: Vec<f64> = (0..n_users).map(|i| (i as f64 + 0.5) / n).collect();
    let mut alive = vec![true; n_users];
    let limit = n_users + 10;
    for _ in 0..limit {
        let mut changed = false;
        // Surviving content strictly above the current atom.
        let mut above = 0.0;
        for i in (0..n_users).rev() {
            let x = atoms[i];
            let u = posting_term(x, y, params) + params.v - above - p;
            let keep = u >= 0.0;
            if keep != alive[i] {
                alive[i] = keep;
                changed = true;
            }
            if alive[i] {
                above += x * survival(x, y, params.k) * mass;
            }
        }
        if !changed {
            return Ok(UserBase::from_segments(
                alive
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .map(|(i, _)| Segment::new(i as f64 / n, (i + 1) as f64 / n)),
            ));
        }
    }
    Err(Error::NonConvergence(limit))
}
