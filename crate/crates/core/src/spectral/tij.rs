//! The four-way split of Ĉ(β) = Σ_α ψ_β(α)·Ψ(α)·Ψ_q(α) by whether the two
//! kernel frequencies t₁ (primitive kernel) and t₂ (normal kernel) vanish.
//!
//! Both indicators are taken in their divisor-free form. The zero element
//! has no logarithm; it is given the value q^n - 1, which no admissible
//! target equals once q^n ≥ 3, so both kernels vanish there while the α-sum
//! still runs over the whole field.

use super::Check;
use crate::class::{find_primitive_normal, Classifier, DetectionKernel, LogTable, NormalDivisorFree, PrimitiveDivisorFree};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::roots::RootTable;
use num_complex::Complex64;
use rayon::prelude::*;

/// Tolerance for the vanishing of T00 and for the partition identity.
pub const TIJ_TOLERANCE: f64 = 1e-6;

/// The four subsums at one frequency β, their total, and Ĉ(β) computed
/// directly from the primitive normal census.
#[derive(Debug, Clone, PartialEq)]
pub struct TijParts {
    pub beta: u64,
    /// t₁ = 0, t₂ = 0.
    pub t00: Complex64,
    /// t₁ ≠ 0, t₂ = 0.
    pub t01: Complex64,
    /// t₁ = 0, t₂ ≠ 0.
    pub t10: Complex64,
    /// t₁ ≠ 0, t₂ ≠ 0.
    pub t11: Complex64,
    pub total: Complex64,
    pub direct: Complex64,
}

impl TijParts {
    pub fn checks(&self) -> [Check; 2] {
        let partition = (self.total - self.direct).norm() / self.direct.norm().max(1.0);
        [
            Check::at_most("t00_vanishes", self.t00.norm(), TIJ_TOLERANCE),
            Check::at_most("partition", partition, TIJ_TOLERANCE),
        ]
    }

    pub fn pass(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }
}

/// Per-field precomputation: for every α the t = 0 and t ≠ 0 parts of both
/// kernel sums, so each β costs one pass over the field.
#[derive(Debug, Clone)]
pub struct TijContext {
    spec: FieldSpec,
    tau: FieldElement,
    /// [A₀B₀, A₁B₀, A₀B₁, A₁B₁] per canonical α index.
    products: Vec<[Complex64; 4]>,
    pn_members: Vec<u64>,
    roots: RootTable,
}

impl TijContext {
    /// τ = η = the smallest primitive normal element.
    pub fn new(spec: &FieldSpec, cap: u64) -> Result<Self> {
        let size = spec.order();
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        if size < 3 {
            return Err(Error::OutOfDomain("the decomposition needs q^n >= 3".into()));
        }
        let classifier = Classifier::new(spec)?;
        let tau = find_primitive_normal(spec);
        let table = LogTable::full(&tau)?;
        let kernel = DetectionKernel::new(size);
        let prim = PrimitiveDivisorFree::new(&table, &kernel)?;
        let norm = NormalDivisorFree::new(&classifier, &tau, &table, &kernel)?;
        let sentinel = size - 1;
        let products = (0..size)
            .into_par_iter()
            .map(|a| {
                let log = table.log_index(a).unwrap_or(sentinel);
                let [a0, a1] = prim.parts_for_log(log);
                let [b0, b1] = norm.parts_for_log(log);
                [a0 * b0, a1 * b0, a0 * b1, a1 * b1]
            })
            .collect();
        let census = classifier.census(cap)?;
        let pn_members = census
            .primitive_normal()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64)
            .collect();
        Ok(Self { spec: spec.clone(), tau, products, pn_members, roots: RootTable::new(spec.p()) })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// The primitive normal fixture used as log base and as η.
    pub fn tau(&self) -> &FieldElement {
        &self.tau
    }

    pub fn decompose(&self, beta: &FieldElement) -> Result<TijParts> {
        if !beta.spec().same(&self.spec) {
            return Err(Error::SpecMismatch);
        }
        if beta.is_zero() {
            return Err(Error::OutOfDomain("the decomposition needs beta != 0".into()));
        }
        let functional = self.spec.trace_functional(beta);
        let mut parts = [Complex64::new(0.0, 0.0); 4];
        for (a, prods) in self.products.iter().enumerate() {
            let psi = self.roots.get(self.spec.trace_with(&functional, a as u64));
            for (acc, v) in parts.iter_mut().zip(prods) {
                *acc += psi * v;
            }
        }
        let direct = self
            .pn_members
            .iter()
            .map(|&a| self.roots.get(self.spec.trace_with(&functional, a)))
            .sum();
        let [t00, t01, t10, t11] = parts;
        Ok(TijParts { beta: beta.index(), t00, t01, t10, t11, total: t00 + t01 + t10 + t11, direct })
    }
}

/// One-shot decomposition at β; build a [`TijContext`] to sweep many β.
pub fn tij_decomposition(spec: &FieldSpec, beta: &FieldElement, cap: u64) -> Result<TijParts> {
    TijContext::new(spec, cap)?.decompose(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_field;
    use crate::DEFAULT_CAP;

    #[test]
    fn f8_every_beta() {
        let f = build_field(2, 1, 3, None).unwrap();
        let ctx = TijContext::new(&f, DEFAULT_CAP).unwrap();
        assert_eq!(ctx.tau(), &f.element(vec![1, 1, 0]).unwrap());
        for beta in f.elements().skip(1) {
            let t = ctx.decompose(&beta).unwrap();
            assert!(t.t00.norm() < 1e-6, "{t:?}");
            assert!(t.pass(), "{t:?}");
        }
        assert!(ctx.decompose(&f.zero()).is_err());
    }

    #[test]
    fn f4_beta_one() {
        let f = build_field(2, 1, 2, None).unwrap();
        let t = tij_decomposition(&f, &f.one(), DEFAULT_CAP).unwrap();
        assert!(t.pass());
        assert!(t.total.norm() <= 2.0 + 1e-9);
    }

    #[test]
    fn tiny_field_is_rejected() {
        let f = build_field(2, 1, 1, None).unwrap();
        assert!(TijContext::new(&f, DEFAULT_CAP).is_err());
    }
}
