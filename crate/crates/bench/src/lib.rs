//! Benchmark fixtures shared by the criterion targets.

use salemfield::{build_field, Complex64, FieldSpec};

/// Default-modulus field; panics on invalid parameters.
pub fn field(p: u64, k: u32, n: u32) -> FieldSpec {
    build_field(p, k, n, None).expect("benchmark field parameters are valid")
}

/// A deterministic, non-symmetric test signal of length `m`.
pub fn signal(m: usize) -> Vec<Complex64> {
    (0..m).map(|t| Complex64::new(((t * 7 + 3) % 11) as f64 - 5.0, ((t * t) % 13) as f64 / 13.0)).collect()
}
