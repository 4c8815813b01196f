//! Element classes of F_{q^n}: multiplicative order, Frobenius order
//! polynomial, primitivity and normality, plus discrete logarithms and the
//! characteristic functions of the primitive and normal classes.

mod indicator;
mod log;

pub use indicator::{
    mult_character, psi_normal_divisor, psi_normal_divisorfree, psi_primitive_divisor,
    psi_primitive_divisorfree, round_indicator, DetectionKernel, NormalDivisorFree,
    NormalDivisorSum, PrimitiveDivisorFree, PrimitiveDivisorSum, INTEGRITY_TOLERANCE,
};
pub use log::{discrete_log, LogTable};

use crate::arith::{self, totient};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::{divisors_of, factor_poly, totient_poly, Factorization, PolyQ};
use rayon::prelude::*;

/// Classification of a single nonzero element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub element: FieldElement,
    pub mult_order: u64,
    pub frob_order: PolyQ,
    pub is_primitive: bool,
    pub is_normal: bool,
    pub is_primitive_normal: bool,
}

/// Per-field context: the factorization of q^n - 1 and the divisors of
/// x^n - 1 are computed once and reused for every element.
#[derive(Debug, Clone)]
pub struct Classifier {
    spec: FieldSpec,
    group_order: u64,
    group_primes: Vec<u64>,
    xn1: PolyQ,
    xn1_factors: Factorization,
    xn1_divisors: Vec<PolyQ>,
    normal_total: u64,
}

impl Classifier {
    pub fn new(spec: &FieldSpec) -> Result<Self> {
        let group_order = spec.order() - 1;
        let xn1 = PolyQ::x_pow_minus_one(spec, spec.n() as usize);
        let xn1_factors = factor_poly(&xn1)?;
        let xn1_divisors = divisors_of(&xn1_factors);
        let normal_total = totient_poly(&xn1)?;
        Ok(Self {
            spec: spec.clone(),
            group_order,
            group_primes: arith::prime_factors(group_order),
            xn1,
            xn1_factors,
            xn1_divisors,
            normal_total,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// q^n - 1.
    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn x_n_minus_one(&self) -> &PolyQ {
        &self.xn1
    }

    pub fn factorization(&self) -> &Factorization {
        &self.xn1_factors
    }

    /// Monic divisors of x^n - 1 in canonical order.
    pub fn divisors(&self) -> &[PolyQ] {
        &self.xn1_divisors
    }

    /// φ(q^n - 1), the number of primitive elements.
    pub fn primitive_total(&self) -> u64 {
        totient(self.group_order)
    }

    /// Φ_q(x^n - 1), the number of normal elements.
    pub fn normal_total(&self) -> u64 {
        self.normal_total
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.spec().same(&self.spec) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    /// Least e ≥ 1 with a^e = 1, by stripping prime factors from q^n - 1.
    pub fn multiplicative_order(&self, a: &FieldElement) -> Result<u64> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut e = self.group_order;
        for &r in &self.group_primes {
            while e.is_multiple_of(r) && a.pow(e / r).is_one() {
                e /= r;
            }
        }
        Ok(e)
    }

    /// Position in [`divisors`](Self::divisors) of the Frobenius order of `a`.
    pub fn frobenius_order_rank(&self, a: &FieldElement) -> Result<usize> {
        self.check(a)?;
        if a.is_zero() {
            return Ok(0);
        }
        // a, a^q, ..., a^{q^n}: divisors reach degree n
        let mut conj = Vec::with_capacity(self.spec.n() as usize + 1);
        let mut c = a.clone();
        for _ in 0..=self.spec.n() {
            let next = c.frobenius_q();
            conj.push(c);
            c = next;
        }
        let rank = self
            .xn1_divisors
            .iter()
            .position(|h| h.act_on_conjugates(&conj).is_zero())
            .expect("x^n - 1 annihilates every element");
        Ok(rank)
    }

    /// Minimal monic h | x^n - 1 with h∘a = 0; the unit polynomial for a = 0.
    pub fn frobenius_order(&self, a: &FieldElement) -> Result<PolyQ> {
        Ok(self.xn1_divisors[self.frobenius_order_rank(a)?].clone())
    }

    pub fn is_primitive(&self, a: &FieldElement) -> Result<bool> {
        if a.is_zero() {
            self.check(a)?;
            return Ok(false);
        }
        Ok(self.multiplicative_order(a)? == self.group_order)
    }

    pub fn is_normal(&self, a: &FieldElement) -> Result<bool> {
        Ok(self.frobenius_order_rank(a)? == self.xn1_divisors.len() - 1)
    }

    pub fn is_primitive_normal(&self, a: &FieldElement) -> Result<bool> {
        Ok(self.is_primitive(a)? && self.is_normal(a)?)
    }

    pub fn classify(&self, a: &FieldElement) -> Result<ClassificationRecord> {
        let mult_order = self.multiplicative_order(a)?;
        let frob_order = self.frobenius_order(a)?;
        let is_primitive = mult_order == self.group_order;
        let is_normal = frob_order == self.xn1;
        Ok(ClassificationRecord {
            element: a.clone(),
            mult_order,
            frob_order,
            is_primitive,
            is_normal,
            is_primitive_normal: is_primitive && is_normal,
        })
    }

    /// Primitive and normal flags of every element, indexed canonically.
    pub fn census(&self, cap: u64) -> Result<Census> {
        let size = self.spec.order();
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        let flags: Vec<(bool, bool)> = (0..size)
            .into_par_iter()
            .map(|i| {
                let a = self.spec.from_index(i);
                let prim = self.is_primitive(&a).expect("same field");
                let norm = self.is_normal(&a).expect("same field");
                (prim, norm)
            })
            .collect();
        let (primitive, normal) = flags.into_iter().unzip();
        Ok(Census { primitive, normal })
    }
}

/// Exhaustive class membership, indexed by canonical element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub primitive: Vec<bool>,
    pub normal: Vec<bool>,
}

impl Census {
    pub fn primitive_normal(&self) -> Vec<bool> {
        self.primitive.iter().zip(&self.normal).map(|(&a, &b)| a && b).collect()
    }

    pub fn counts(&self) -> ClassCounts {
        let count = |v: &[bool]| v.iter().filter(|&&b| b).count() as u64;
        ClassCounts {
            primitive: count(&self.primitive),
            normal: count(&self.normal),
            primitive_normal: count(&self.primitive_normal()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub primitive: u64,
    pub normal: u64,
    pub primitive_normal: u64,
}

/// Exhaustive (primitive, normal, primitive normal) counts.
pub fn count_classes(spec: &FieldSpec, cap: u64) -> Result<ClassCounts> {
    let size = spec.order();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    Ok(Classifier::new(spec)?.census(cap)?.counts())
}

pub fn multiplicative_order(a: &FieldElement) -> Result<u64> {
    Classifier::new(a.spec())?.multiplicative_order(a)
}

pub fn frobenius_order_poly(a: &FieldElement) -> Result<PolyQ> {
    Classifier::new(a.spec())?.frobenius_order(a)
}

pub fn is_primitive(a: &FieldElement) -> bool {
    Classifier::new(a.spec()).and_then(|c| c.is_primitive(a)).expect("own field")
}

pub fn is_normal(a: &FieldElement) -> bool {
    Classifier::new(a.spec()).and_then(|c| c.is_normal(a)).expect("own field")
}

pub fn is_primitive_normal(a: &FieldElement) -> bool {
    is_primitive(a) && is_normal(a)
}

fn first_matching(spec: &FieldSpec, pred: impl Fn(&Classifier, &FieldElement) -> bool) -> FieldElement {
    let c = Classifier::new(spec).expect("x^n - 1 factors over every field");
    (1..spec.order())
        .map(|i| spec.from_index(i))
        .find(|a| pred(&c, a))
        .expect("the class is nonempty in every finite field")
}

/// Smallest primitive element in canonical order; cached on the field.
pub fn find_primitive_root(spec: &FieldSpec) -> FieldElement {
    if let Some(a) = spec.primitive_hint() {
        return a;
    }
    let a = first_matching(spec, |c, a| c.is_primitive(a).unwrap());
    spec.set_primitive_hint(&a);
    a
}

/// Smallest normal element in canonical order.
pub fn find_normal_element(spec: &FieldSpec) -> FieldElement {
    first_matching(spec, |c, a| c.is_normal(a).unwrap())
}

/// Smallest primitive normal element in canonical order.
pub fn find_primitive_normal(spec: &FieldSpec) -> FieldElement {
    first_matching(spec, |c, a| c.is_primitive_normal(a).unwrap())
}
