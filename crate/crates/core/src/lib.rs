//! Finite-field spectral toolkit.
//!
//! Classifies elements of F_{q^n} as primitive, normal or primitive normal,
//! evaluates the divisor-sum and divisor-free characteristic functions of
//! those classes, and computes finite Fourier transforms of the resulting
//! indicator sets to measure how Salem-like (spectrally flat) they are.
//!
//! Layers, bottom up:
//!
//! - [`arith`]: integer primality, factoring, φ, μ.
//! - [`field`]: [`FieldSpec`] / [`FieldElement`], Frobenius, trace, additive characters.
//! - [`poly`]: polynomials over F_q, factorization, μ_q and Φ_q, density bounds.
//! - [`class`]: orders, Frobenius annihilators, discrete logs, the four indicators.
//! - [`spectral`]: transforms, Gauss sums, Salem/Weyl statistics, bound checks.

pub mod arith;
pub mod class;
mod error;
pub mod field;
pub mod poly;
pub mod roots;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{additive_character, build_field, FieldElement, FieldSpec};
pub use num_complex::Complex64;

/// Default cap on domain size for exhaustive scans.
pub const DEFAULT_CAP: u64 = 1 << 16;
