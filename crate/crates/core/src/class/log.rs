use crate::arith;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use std::collections::HashMap;

/// Discrete logarithms to a fixed primitive base τ.
///
/// Below the cap the whole table is materialized (one slot per canonical
/// element index); above it queries run baby-step giant-step with step
/// ⌈√(q^n - 1)⌉.
#[derive(Debug, Clone)]
pub struct LogTable {
    base: FieldElement,
    group_order: u64,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Full(Vec<u64>),
    Bsgs { step: u64, baby: HashMap<u64, u64>, giant: FieldElement },
}

impl LogTable {
    /// Full table if q^n ≤ `cap`, otherwise baby-step giant-step.
    pub fn new(base: &FieldElement, cap: u64) -> Result<Self> {
        if base.spec().order() <= cap {
            Self::full(base)
        } else {
            Self::bsgs(base)
        }
    }

    pub fn full(base: &FieldElement) -> Result<Self> {
        let group_order = check_primitive(base)?;
        let spec = base.spec();
        let mut table = vec![u64::MAX; spec.order() as usize];
        let mut g = spec.one();
        for e in 0..group_order {
            table[g.index() as usize] = e;
            g = &g * base;
        }
        Ok(Self { base: base.clone(), group_order, kind: Kind::Full(table) })
    }

    pub fn bsgs(base: &FieldElement) -> Result<Self> {
        let group_order = check_primitive(base)?;
        let step = (group_order as f64).sqrt().ceil() as u64;
        let step = (step.saturating_sub(1)..=step + 1)
            .find(|s| s * s >= group_order)
            .expect("integer square root bracket");
        let mut baby = HashMap::with_capacity(step as usize);
        let mut g = base.spec().one();
        for j in 0..step {
            baby.entry(g.index()).or_insert(j);
            g = &g * base;
        }
        let giant = base.pow(step).inv()?;
        Ok(Self { base: base.clone(), group_order, kind: Kind::Bsgs { step, baby, giant } })
    }

    pub fn base(&self) -> &FieldElement {
        &self.base
    }

    /// q^n - 1.
    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn is_full(&self) -> bool {
        matches!(self.kind, Kind::Full(_))
    }

    /// log_τ(a) in [0, q^n - 2].
    pub fn log(&self, a: &FieldElement) -> Result<u64> {
        if !a.spec().same(self.base.spec()) {
            return Err(Error::SpecMismatch);
        }
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        match &self.kind {
            Kind::Full(table) => Ok(table[a.index() as usize]),
            Kind::Bsgs { step, baby, giant } => {
                let mut gamma = a.clone();
                for i in 0..*step {
                    if let Some(&j) = baby.get(&gamma.index()) {
                        return Ok((i * step + j) % self.group_order);
                    }
                    gamma = &gamma * giant;
                }
                unreachable!("a primitive base generates every nonzero element")
            }
        }
    }

    /// log_τ of the element with canonical index `index`; `None` for zero.
    pub fn log_index(&self, index: u64) -> Option<u64> {
        match &self.kind {
            Kind::Full(table) => Some(table[index as usize]).filter(|&e| e != u64::MAX),
            Kind::Bsgs { .. } => self.log(&self.base.spec().from_index(index)).ok(),
        }
    }
}

fn check_primitive(base: &FieldElement) -> Result<u64> {
    if base.is_zero() {
        return Err(Error::NotPrimitive);
    }
    let group_order = base.spec().order() - 1;
    let primitive = arith::prime_factors(group_order)
        .into_iter()
        .all(|r| !base.pow(group_order / r).is_one())
        && base.pow(group_order).is_one();
    if primitive {
        Ok(group_order)
    } else {
        Err(Error::NotPrimitive)
    }
}

pub fn discrete_log(table: &LogTable, a: &FieldElement) -> Result<u64> {
    table.log(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_field;

    #[test]
    fn log_examples_in_f8() {
        let f = build_field(2, 1, 3, None).unwrap();
        let tau = f.gen();
        for t in [LogTable::full(&tau).unwrap(), LogTable::bsgs(&tau).unwrap()] {
            assert_eq!(t.log(&tau).unwrap(), 1);
            assert_eq!(t.log(&f.one()).unwrap(), 0);
            let x2x = f.element(vec![0, 1, 1]).unwrap();
            assert_eq!(discrete_log(&t, &x2x).unwrap(), 4);
            assert_eq!(t.log(&f.zero()).unwrap_err(), Error::ZeroElement);
        }
        assert!(LogTable::new(&tau, 8).unwrap().is_full());
        assert!(!LogTable::new(&tau, 7).unwrap().is_full());
    }

    #[test]
    fn non_primitive_base_is_rejected() {
        let f = build_field(3, 1, 2, None).unwrap();
        assert_eq!(LogTable::full(&f.gen()).unwrap_err(), Error::NotPrimitive);
        assert_eq!(LogTable::bsgs(&f.one()).unwrap_err(), Error::NotPrimitive);
        assert_eq!(LogTable::full(&f.zero()).unwrap_err(), Error::NotPrimitive);
    }

    #[test]
    fn round_trip_both_strategies() {
        for (p, k, n) in [(2u64, 1u32, 8u32), (3, 1, 5), (2, 2, 3), (7, 1, 3), (2, 1, 1)] {
            let f = build_field(p, k, n, None).unwrap();
            let tau = crate::class::find_primitive_root(&f);
            let full = LogTable::full(&tau).unwrap();
            let bsgs = LogTable::bsgs(&tau).unwrap();
            for a in f.elements().skip(1) {
                let e = full.log(&a).unwrap();
                assert!(e < f.order() - 1 || f.order() == 2);
                assert_eq!(tau.pow(e), a);
                assert_eq!(bsgs.log(&a).unwrap(), e);
                assert_eq!(full.log_index(a.index()), Some(e));
            }
            assert_eq!(full.log_index(0), None);
            assert_eq!(bsgs.log_index(0), None);
        }
    }
}
