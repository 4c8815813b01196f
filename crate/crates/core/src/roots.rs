//! Roots of unity evaluated from exact integer phase indices.
//!
//! Every exponential `exp(2πi·k/m)` in the crate goes through here so that the
//! phase is reduced modulo `m` in integer arithmetic before it ever becomes a
//! float. Long character sums then carry no accumulated angle drift.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// `exp(2πi · k/m)` for an arbitrary signed phase numerator.
pub fn unit_root(k: i128, m: u64) -> Complex64 {
    let r = k.rem_euclid(m as i128) as f64;
    Complex64::from_polar(1.0, TAU * r / m as f64)
}

/// Precomputed table of the `m`-th roots of unity, indexed by `k mod m`.
#[derive(Debug, Clone)]
pub struct RootTable {
    m: u64,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(m: u64) -> Self {
        assert!(m >= 1, "root table order must be positive");
        let roots = (0..m).map(|k| unit_root(k as i128, m)).collect();
        Self { m, roots }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    #[inline]
    pub fn get(&self, k: u64) -> Complex64 {
        self.roots[(k % self.m) as usize]
    }

    /// Root for a signed phase numerator.
    #[inline]
    pub fn signed(&self, k: i64) -> Complex64 {
        self.roots[k.rem_euclid(self.m as i64) as usize]
    }
}
