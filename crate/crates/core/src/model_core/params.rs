use crate::error::{Error, Result};

use super::TOL;

/// Exogenous parameters.
///
/// `zeta` is the advertising value per user in the main model. The hybrid and
/// boycott extensions use `a` and `a_prime`/`beta` instead; both are stored
/// rather than aliased.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Posting-utility slope.
    pub alpha: f64,
    /// Maximum reading utility.
    pub v: f64,
    /// Psychological cost of having content pruned.
    pub c: f64,
    /// Advertising value per user.
    pub zeta: f64,
    /// Technology accuracy, `1/2` is perfect.
    pub k: f64,
    /// Ad-aversion discount for free users in the hybrid model.
    pub delta: f64,
    /// Advertising value per user in the hybrid model.
    pub a: f64,
    /// Boycott intercept.
    pub a_prime: f64,
    /// Boycott slope.
    pub beta: f64,
}

impl ModelParams {
    /// Parameters with perfect technology, `zeta = a = a_prime = 1`,
    /// `delta = 1` and no boycott. Not validated until a solver runs.
    pub fn new(alpha: f64, v: f64, c: f64) -> Self {
        ModelParams {
            alpha,
            v,
            c,
            zeta: 1.0,
            k: 0.5,
            delta: 1.0,
            a: 1.0,
            a_prime: 1.0,
            beta: 0.0,
        }
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn with_zeta(mut self, zeta: f64) -> Self {
        self.zeta = zeta;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_a(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    pub fn with_boycott(mut self, a_prime: f64, beta: f64) -> Self {
        self.a_prime = a_prime;
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("alpha", self.alpha),
            ("v", self.v),
            ("c", self.c),
            ("zeta", self.zeta),
            ("k", self.k),
            ("delta", self.delta),
            ("a", self.a),
            ("a_prime", self.a_prime),
            ("beta", self.beta),
        ];
        for (name, x) in fields {
            if !x.is_finite() {
                return Err(invalid(format!("{name} must be finite (got {x})")));
            }
        }
        if self.alpha < 0.0 {
            return Err(invalid(format!("alpha must be >= 0 (got {})", self.alpha)));
        }
        if !(self.v > 0.0 && self.v < 0.5) {
            return Err(invalid(format!(
                "v must satisfy 0 < v < 1/2 (got {})",
                self.v
            )));
        }
        if self.c <= self.v {
            return Err(invalid(format!(
                "c must exceed v (got c = {}, v = {})",
                self.c, self.v
            )));
        }
        if self.c > self.alpha + 2.0 * self.v + TOL {
            return Err(invalid(format!(
                "c must satisfy c <= alpha + 2v = {} (got {})",
                self.alpha + 2.0 * self.v,
                self.c
            )));
        }
        if !(0.0..=0.5).contains(&self.k) {
            return Err(invalid(format!("k must lie in [0, 1/2] (got {})", self.k)));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(invalid(format!(
                "delta must lie in [0, 1] (got {})",
                self.delta
            )));
        }
        if self.zeta <= 0.0 {
            return Err(invalid(format!("zeta must be > 0 (got {})", self.zeta)));
        }
        for (name, x) in [
            ("a", self.a),
            ("a_prime", self.a_prime),
            ("beta", self.beta),
        ] {
            if x < 0.0 {
                return Err(invalid(format!("{name} must be >= 0 (got {x})")));
            }
        }
        Ok(())
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidParams(msg)
}
