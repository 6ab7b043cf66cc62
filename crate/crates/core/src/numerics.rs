//! Deterministic root finding and derivative-free maximization.
//!
//! Objectives in this crate are piecewise smooth with at most a couple of
//! local maxima, so a dense grid followed by local golden-section refinement
//! is reliable and reproducible.

use crate::error::{Error, Result};

pub const GRID_STEPS: usize = 2000;
pub const REFINE_ITERS: usize = 60;
pub const BOX_GRID: usize = 200;
pub const BISECT_TOL: f64 = 1e-9;

const BISECT_MAX_ITERS: usize = 400;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// A bounded scalar maximization problem.
#[derive(Debug, Clone, Copy)]
pub struct ScalarProblem<F> {
    pub objective: F,
    pub lo: f64,
    pub hi: f64,
    pub grid_steps: usize,
    pub refine_iters: usize,
}

impl<F: Fn(f64) -> f64> ScalarProblem<F> {
    pub fn new(objective: F, lo: f64, hi: f64) -> Self {
        ScalarProblem {
            objective,
            lo,
            hi,
            grid_steps: GRID_STEPS,
            refine_iters: REFINE_ITERS,
        }
    }

    pub fn grid_steps(mut self, n: usize) -> Self {
        self.grid_steps = n.max(10);
        self
    }

    pub fn refine_iters(mut self, n: usize) -> Self {
        self.refine_iters = n;
        self
    }
}

/// Root of a sign-changing function on `[lo, hi]`, to within `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..BISECT_MAX_ITERS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn score(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Grid scan then golden-section refinement around the best grid cell.
/// Ties go to the smaller argument; the result is never worse than the best
/// grid point.
pub fn maximize_scalar<F: Fn(f64) -> f64>(p: &ScalarProblem<F>) -> (f64, f64) {
    let f = |x: f64| score((p.objective)(x));
    if !(p.hi > p.lo) {
        return (p.lo, f(p.lo));
    }
    let n = p.grid_steps.max(10);
    let step = (p.hi - p.lo) / n as f64;
    let at = |i: usize| if i == n { p.hi } else { p.lo + step * i as f64 };
    let (mut best_i, mut best_v) = (0, f(p.lo));
    for i in 1..=n {
        let v = f(at(i));
        if v > best_v {
            best_i = i;
            best_v = v;
        }
    }
    let mut best_x = at(best_i);
    let mut a = at(best_i.saturating_sub(1));
    let mut b = at((best_i + 1).min(n));
    let keep = |x: f64, v: f64, bx: &mut f64, bv: &mut f64| {
        if v > *bv || (v == *bv && x < *bx) {
            *bx = x;
            *bv = v;
        }
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    keep(c, fc, &mut best_x, &mut best_v);
    keep(d, fd, &mut best_x, &mut best_v);
    for _ in 0..p.refine_iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            keep(c, fc, &mut best_x, &mut best_v);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            keep(d, fd, &mut best_x, &mut best_v);
        }
    }
    (best_x, best_v)
}

/// Options for [`maximize_box2`].
#[derive(Debug, Clone, Copy)]
pub struct Box2Options {
    /// Grid steps along each axis.
    pub grid: (usize, usize),
    /// Golden-section iterations per axis.
    pub refine_iters: usize,
}

impl Default for Box2Options {
    fn default() -> Self {
        Box2Options {
            grid: (BOX_GRID, BOX_GRID),
            refine_iters: REFINE_ITERS,
        }
    }
}

/// Maximizes `f(x, y)` on a rectangle.
///
/// The first coordinate is searched over the profile `g(x) = max_y f(x, y)`,
/// each profile value coming from a grid-plus-golden search along `y`. This
/// follows diagonal ridges, which coordinate-wise passes cannot climb. Ties go
/// to the lexicographically smallest argument.
pub fn maximize_box2<F: Fn(f64, f64) -> f64>(
    f: F,
    x_bounds: (f64, f64),
    y_bounds: (f64, f64),
    opts: Box2Options,
) -> ((f64, f64), f64) {
    let inner = |x: f64| {
        let p = ScalarProblem::new(|y| f(x, y), y_bounds.0, y_bounds.1)
            .grid_steps(opts.grid.1)
            .refine_iters(opts.refine_iters);
        maximize_scalar(&p)
    };
    let outer = ScalarProblem::new(|x| inner(x).1, x_bounds.0, x_bounds.1)
        .grid_steps(opts.grid.0)
        .refine_iters(opts.refine_iters);
    let (x, _) = maximize_scalar(&outer);
    let (y, v) = inner(x);
    ((x, y), v)
}
