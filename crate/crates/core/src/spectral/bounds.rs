//! Additive character sums over product sets and over multiplicative cosets.

use super::{Check, Domain, IndicatorSet};
use crate::class::LogTable;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::roots::RootTable;
use num_complex::Complex64;

fn field_of(set: &IndicatorSet) -> Result<&FieldSpec> {
    match set.domain() {
        Domain::Field(spec) => Ok(spec),
        Domain::ZMod(_) => Err(Error::DomainMismatch),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilinearReport {
    /// |Σ_{v∈V} Σ_{u∈U} ψ_β(uv)|.
    pub sum_abs: f64,
    /// √(q^n · #U · #V).
    pub bound: f64,
    pub check: Check,
}

/// |Σ_{v∈V} Σ_{u∈U} ψ_β(uv)| ≤ √(q^n·#U·#V) for the nontrivial ψ_β.
pub fn bilinear_bound_check(u: &IndicatorSet, v: &IndicatorSet, beta: &FieldElement) -> Result<BilinearReport> {
    let spec = field_of(u)?;
    if !field_of(v)?.same(spec) || !beta.spec().same(spec) {
        return Err(Error::DomainMismatch);
    }
    if beta.is_zero() {
        return Err(Error::TrivialCharacter);
    }
    let roots = RootTable::new(spec.p());
    let us = u.members();
    let mut total = Complex64::new(0.0, 0.0);
    for vi in v.members() {
        // ψ_β(uv) = exp(2πi·Tr(u·vβ)/p)
        let functional = spec.trace_functional(&(&spec.from_index(vi) * beta));
        for &ui in &us {
            total += roots.get(spec.trace_with(&functional, ui));
        }
    }
    let bound = (spec.order() as f64 * u.cardinality() as f64 * v.cardinality() as f64).sqrt();
    let sum_abs = total.norm();
    // slack for rounding in the floating-point sum
    let check = Check::at_most("bilinear_bound", sum_abs, bound + 1e-9 * bound.max(1.0));
    Ok(BilinearReport { sum_abs, bound, check })
}

/// The coset shift·H of the subgroup H ⊂ F_{q^n}^× of order d.
pub fn subgroup_coset(table: &LogTable, d: u64, shift: &FieldElement) -> Result<IndicatorSet> {
    let order = table.group_order();
    if d == 0 || !order.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, order });
    }
    if shift.is_zero() {
        return Err(Error::ZeroElement);
    }
    let spec = table.base().spec();
    let step = table.base().pow(order / d);
    let mut g = shift.clone();
    let mut members = Vec::with_capacity(d as usize);
    for _ in 0..d {
        members.push(g.index());
        g = &g * &step;
    }
    IndicatorSet::from_members(Domain::Field(spec.clone()), members)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IncompleteSumReport {
    /// |Σ_{u∈U} ψ_β(u)|.
    pub sum_abs: f64,
    /// q^{n/2}.
    pub bound: f64,
    pub check: Check,
}

/// |Σ_{u∈U} ψ_β(u)| against q^{n/2}. The bound is a theorem for cosets of
/// multiplicative subgroups; for arbitrary U the report only measures.
pub fn incomplete_sum_check(u: &IndicatorSet, beta: &FieldElement) -> Result<IncompleteSumReport> {
    let spec = field_of(u)?;
    if !beta.spec().same(spec) {
        return Err(Error::DomainMismatch);
    }
    if beta.is_zero() {
        return Err(Error::TrivialCharacter);
    }
    let roots = RootTable::new(spec.p());
    let functional = spec.trace_functional(beta);
    let total: Complex64 = u.members().into_iter().map(|a| roots.get(spec.trace_with(&functional, a))).sum();
    let bound = (spec.order() as f64).sqrt();
    let sum_abs = total.norm();
    let check = Check::at_most("incomplete_sum_bound", sum_abs, bound + 1e-9 * bound);
    Ok(IncompleteSumReport { sum_abs, bound, check })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_field;
    use crate::class::find_primitive_root;

    #[test]
    fn bilinear_examples() {
        let f = build_field(2, 1, 3, None).unwrap();
        let units = IndicatorSet::from_members(Domain::Field(f.clone()), 1..8).unwrap();
        let r = bilinear_bound_check(&units, &units, &f.one()).unwrap();
        // each inner sum over u ≠ 0 is -1
        assert!((r.sum_abs - 7.0).abs() < 1e-9);
        assert!((r.bound - (8.0f64 * 49.0).sqrt()).abs() < 1e-12);
        assert!(r.check.pass);

        let zero = IndicatorSet::from_members(Domain::Field(f.clone()), [0]).unwrap();
        let r = bilinear_bound_check(&zero, &units, &f.gen()).unwrap();
        assert!((r.sum_abs - 7.0).abs() < 1e-12 && r.check.pass);
        assert_eq!(bilinear_bound_check(&zero, &units, &f.zero()).unwrap_err(), Error::TrivialCharacter);
    }

    #[test]
    fn cosets_obey_the_incomplete_bound() {
        let f = build_field(2, 1, 6, None).unwrap();
        let table = LogTable::full(&find_primitive_root(&f)).unwrap();
        for d in [1u64, 3, 7, 9, 21, 63] {
            for shift in f.elements().skip(1).step_by(11) {
                let coset = subgroup_coset(&table, d, &shift).unwrap();
                assert_eq!(coset.cardinality(), d);
                for beta in f.elements().skip(1).step_by(5) {
                    assert!(incomplete_sum_check(&coset, &beta).unwrap().check.pass);
                }
            }
        }
        assert!(subgroup_coset(&table, 5, &f.one()).is_err());
    }

    #[test]
    fn arbitrary_sets_can_exceed_the_incomplete_bound() {
        // the kernel of the trace form is a set of size q^n/p with full sum
        let f = build_field(2, 1, 6, None).unwrap();
        let beta = f.one();
        let functional = f.trace_functional(&beta);
        let kernel = (0..f.order()).filter(|&a| f.trace_with(&functional, a) == 0);
        let u = IndicatorSet::from_members(Domain::Field(f.clone()), kernel).unwrap();
        let r = incomplete_sum_check(&u, &beta).unwrap();
        assert!((r.sum_abs - 32.0).abs() < 1e-9);
        assert!(!r.check.pass);
    }
}
