//! Independent oracles shared by the integration tests. Nothing here calls the
//! crate's closed forms or its optimizers.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Perfect-technology utility of `x` when everyone in `[x, y]` participates
/// and reading is worth `w`.
pub fn utility_interval(x: f64, y: f64, alpha: f64, w: f64) -> f64 {
    alpha * x + w - 0.5 * (y * y - x * x)
}

/// Lowest participant by bisection on the utility, which rises in `x`.
pub fn marginal_bisect(y: f64, alpha: f64, w: f64) -> f64 {
    if utility_interval(0.0, y, alpha, w) >= 0.0 {
        return 0.0;
    }
    if utility_interval(y, y, alpha, w) < 0.0 {
        return y;
    }
    let (mut lo, mut hi) = (0.0, y);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if utility_interval(mid, y, alpha, w) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Dense grid then repeated local zooms around the best point.
pub fn dense_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let mut best = (lo, f(lo));
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let mut width = (hi - lo) / n as f64;
    for _ in 0..25 {
        let (a, b) = ((best.0 - width).max(lo), (best.0 + width).min(hi));
        for i in 0..=20 {
            let x = a + (b - a) * i as f64 / 20.0;
            let v = f(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        width /= 4.0;
    }
    best
}

/// Brute-force advertising optimum `(y, base)` with perfect technology.
pub fn brute_ad(alpha: f64, v: f64) -> (f64, f64) {
    dense_max(|y| y - marginal_bisect(y, alpha, v), 0.0, 1.0, 20_000)
}

/// Brute-force subscription optimum `(y, p, profit)` with perfect technology.
pub fn brute_sub(alpha: f64, v: f64) -> (f64, f64, f64) {
    let p_max = alpha + v;
    let best_p = |y: f64| {
        dense_max(
            |p| p * (y - marginal_bisect(y, alpha, v - p)),
            0.0,
            p_max,
            200,
        )
    };
    let (y, profit) = dense_max(|y| best_p(y).1, 0.0, 1.0, 200);
    (y, best_p(y).0, profit)
}

/// Composite Simpson rule.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let n = panels * 2;
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + h * i as f64);
    }
    s * h / 3.0
}

/// First index where the sequence drops by more than `tol`.
pub fn first_drop(values: &[f64], tol: f64) -> Option<usize> {
    values
        .windows(2)
        .position(|w| w[1] < w[0] - tol)
        .map(|i| i + 1)
}
