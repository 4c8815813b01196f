//! Explicit density inequalities: the integer totient lower bound and the
//! normal-element density function f(n, x).

use crate::arith::totient;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Euler–Mascheroni constant, 16 significant digits.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Outcome of a one-sided inequality `lhs ≥ rhs` (or `lhs > rhs`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub pass: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub margin: f64,
}

impl BoundCheck {
    fn at_least(lhs: f64, rhs: f64) -> Self {
        Self { pass: lhs >= rhs, lhs, rhs, margin: lhs - rhs }
    }
}

/// φ(m)/m ≥ (3 / (e^γ π²)) / log log m, for m ≥ 10.
pub fn totient_lower_bound_check(m: u64) -> Result<BoundCheck> {
    if m < 10 {
        return Err(Error::OutOfDomain(format!("totient bound needs m >= 10, got {m}")));
    }
    let lhs = totient(m) as f64 / m as f64;
    let rhs = 3.0 / (EULER_GAMMA.exp() * PI * PI) / (m as f64).ln().ln();
    Ok(BoundCheck::at_least(lhs, rhs))
}

/// f(n, x) = (1 - 1/x)^n - 1/(5 · log 5 · log x^n), required positive on
/// x ≥ 3, 2 ≤ n ≤ x - 1. `lhs` is the first term, `rhs` the second, and the
/// margin is f itself; `pass` means strictly positive.
pub fn normal_density_bound_check(x: f64, n: u64) -> Result<BoundCheck> {
    if x.is_nan() || x < 3.0 || n < 2 || n as f64 > x - 1.0 {
        return Err(Error::OutOfDomain(format!(
            "density function needs x >= 3 and 2 <= n <= x - 1, got x = {x}, n = {n}"
        )));
    }
    let lhs = (1.0 - 1.0 / x).powf(n as f64);
    let rhs = 1.0 / (5.0 * 5f64.ln() * n as f64 * x.ln());
    let margin = lhs - rhs;
    Ok(BoundCheck { pass: margin > 0.0, lhs, rhs, margin })
}
