//! Finite fields F_{q^n} with q = p^k, realized as F_p[x]/(f) with deg f = k·n.
//!
//! A [`FieldSpec`] is a cheap, shareable handle to an immutable field
//! description. [`FieldElement`]s carry a handle to their field and refuse to
//! mix with elements of a different one.
//!
//! Elements have a canonical integer index `Σ c_i p^i` (coefficient of `x^0`
//! least significant). Every enumeration in the crate walks fields in this
//! order, which is what makes searches and reports deterministic.

mod fp_poly;

use crate::arith::{self, mul_mod};
use crate::error::{Error, Result};
use crate::roots::unit_root;
use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

struct FieldInner {
    p: u64,
    k: u32,
    n: u32,
    degree: usize,
    q: u64,
    order: u64,
    modulus: Vec<u64>,
    /// Tr(x^m) for m in 0..2·degree-1; makes Tr bilinear-form evaluation cheap.
    trace_powers: Vec<u64>,
    subfield: OnceLock<Subfield>,
    primitive_hint: OnceLock<Vec<u64>>,
}

/// The elements of F_q inside F_{q^n}, sorted by canonical index.
#[derive(Debug, Clone)]
pub struct Subfield {
    indices: Vec<u64>,
    rank: HashMap<u64, u64>,
}

impl Subfield {
    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    /// Position of an element (by canonical index) in the sorted subfield.
    pub fn rank_of(&self, index: u64) -> Option<u64> {
        self.rank.get(&index).copied()
    }
}

/// Immutable description of F_{q^n}.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.0.p)
            .field("k", &self.0.k)
            .field("n", &self.0.n)
            .field("modulus", &self.modulus_string())
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for FieldSpec {}

/// Build F_{q^n} with q = p^k.
///
/// Without an explicit modulus the smallest monic irreducible of degree k·n
/// (by canonical index) is chosen. A supplied modulus is checked for degree,
/// monicity and irreducibility; nothing is trusted from input.
pub fn build_field(p: u64, k: u32, n: u32, modulus: Option<&[u64]>) -> Result<FieldSpec> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 || n == 0 {
        return Err(Error::ZeroDegree { k, n });
    }
    let degree = (k as usize) * (n as usize);
    let order = u32::try_from(degree)
        .ok()
        .and_then(|d| p.checked_pow(d))
        .filter(|&o| o < (1u64 << 63))
        .ok_or(Error::FieldTooLarge { p, degree: degree as u32 })?;
    let q = p.pow(k);

    let modulus = match modulus {
        Some(m) => {
            let mut m = m.to_vec();
            fp_poly::trim(&mut m);
            if m.iter().any(|&c| c >= p) {
                return Err(Error::OutOfDomain("modulus coefficient not reduced mod p".into()));
            }
            if m.len() != degree + 1 {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: m.len().saturating_sub(1),
                });
            }
            if m[degree] != 1 {
                return Err(Error::NonMonic);
            }
            if !fp_poly::is_irreducible(&m, p) {
                return Err(Error::Reducible(p));
            }
            m
        }
        None => fp_poly::smallest_irreducible(degree, p),
    };

    let mut spec = FieldSpec(Arc::new(FieldInner {
        p,
        k,
        n,
        degree,
        q,
        order,
        modulus,
        trace_powers: Vec::new(),
        subfield: OnceLock::new(),
        primitive_hint: OnceLock::new(),
    }));
    // Tr(x^m) for m < 2D-1, by the defining sum Σ a^{p^i}.
    let traces = {
        let x = spec.gen();
        let mut pw = spec.one();
        let mut traces = Vec::with_capacity(2 * degree);
        for _ in 0..2 * degree - 1 {
            traces.push(pw.trace_abs_direct());
            pw = &pw * &x;
        }
        traces
    };
    Arc::get_mut(&mut spec.0)
        .expect("no outstanding handles during construction")
        .trace_powers = traces;
    Ok(spec)
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn n(&self) -> u32 {
        self.0.n
    }

    /// q = p^k, the size of the base field.
    pub fn q(&self) -> u64 {
        self.0.q
    }

    /// q^n, the number of elements.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// k·n, the degree over the prime field.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn modulus_string(&self) -> String {
        format_poly(&self.0.modulus, "x")
    }

    /// Whether two handles describe the same field.
    pub fn same(&self, other: &FieldSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.k == other.0.k
                && self.0.n == other.0.n
                && self.0.modulus == other.0.modulus)
    }

    fn raw(&self, coeffs: Vec<u64>) -> FieldElement {
        FieldElement { spec: self.clone(), coeffs }
    }

    pub fn zero(&self) -> FieldElement {
        self.raw(vec![0; self.0.degree])
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1)
    }

    /// Embedding of an integer residue into the prime field.
    pub fn constant(&self, c: u64) -> FieldElement {
        let mut v = vec![0; self.0.degree];
        v[0] = c % self.0.p;
        self.raw(v)
    }

    /// The class of `x`, the polynomial-basis generator.
    pub fn gen(&self) -> FieldElement {
        if self.0.degree == 1 {
            // x ≡ -m_0 modulo a linear modulus
            return self.constant((self.0.p - self.0.modulus[0]) % self.0.p);
        }
        let mut v = vec![0; self.0.degree];
        v[1] = 1;
        self.raw(v)
    }

    /// Element from a coefficient vector of length k·n with entries in [0, p).
    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.0.degree {
            return Err(Error::BadLength { expected: self.0.degree, found: coeffs.len() });
        }
        if coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::OutOfDomain("coefficient not reduced mod p".into()));
        }
        Ok(self.raw(coeffs))
    }

    /// Element with canonical index `index`.
    ///
    /// # Panics
    ///
    /// Panics if `index >= q^n`.
    pub fn from_index(&self, mut index: u64) -> FieldElement {
        assert!(index < self.0.order, "index {index} out of range for field of order {}", self.0.order);
        let p = self.0.p;
        let coeffs = (0..self.0.degree)
            .map(|_| {
                let c = index % p;
                index /= p;
                c
            })
            .collect();
        self.raw(coeffs)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.order).map(move |i| self.from_index(i))
    }

    /// Tr(x^m) for m in 0..2·degree-1.
    pub fn trace_powers(&self) -> &[u64] {
        &self.0.trace_powers
    }

    /// Linear functional `w` with Tr(α·β) = Σ_i α_i w_i (mod p).
    pub fn trace_functional(&self, beta: &FieldElement) -> Vec<u64> {
        let p = self.0.p;
        let t = &self.0.trace_powers;
        (0..self.0.degree)
            .map(|i| {
                beta.coeffs
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &b)| (acc + mul_mod(b, t[i + j], p)) % p)
            })
            .collect()
    }

    /// Tr(α·β) for the element with index `alpha` against a precomputed
    /// [`trace_functional`](Self::trace_functional).
    pub fn trace_with(&self, functional: &[u64], mut alpha: u64) -> u64 {
        let p = self.0.p;
        let mut acc = 0u64;
        for &w in functional {
            let c = alpha % p;
            alpha /= p;
            acc = (acc + mul_mod(c, w, p)) % p;
        }
        acc
    }

    /// The subfield F_q as a sorted list of canonical indices.
    pub fn subfield(&self) -> &Subfield {
        self.0.subfield.get_or_init(|| {
            let mut indices: Vec<u64> = if self.0.k == 1 {
                (0..self.0.p).collect()
            } else {
                let gamma = self.subfield_generator();
                let mut v = vec![0u64];
                let mut g = self.one();
                for _ in 0..self.0.q - 1 {
                    v.push(g.index());
                    g = &g * &gamma;
                }
                v
            };
            indices.sort_unstable();
            let rank = indices.iter().enumerate().map(|(r, &i)| (i, r as u64)).collect();
            Subfield { indices, rank }
        })
    }

    /// A generator of F_q^×, found as a norm a^{(q^n-1)/(q-1)} of full order q-1.
    fn subfield_generator(&self) -> FieldElement {
        let q = self.0.q;
        let e = (self.0.order - 1) / (q - 1);
        let factors = arith::prime_factors(q - 1);
        (1..self.0.order)
            .map(|i| self.from_index(i).pow(e))
            .find(|g| factors.iter().all(|&r| !g.pow((q - 1) / r).is_one()))
            .expect("F_q^x is cyclic")
    }

    /// Whether `a` lies in F_q (fixed by a ↦ a^q).
    pub fn in_subfield(&self, a: &FieldElement) -> bool {
        &a.pow(self.0.q) == a
    }

    pub(crate) fn primitive_hint(&self) -> Option<FieldElement> {
        self.0.primitive_hint.get().map(|c| self.raw(c.clone()))
    }

    pub(crate) fn set_primitive_hint(&self, a: &FieldElement) {
        let _ = self.0.primitive_hint.set(a.coeffs.clone());
    }

    fn reduce(&self, mut r: Vec<u64>) -> Vec<u64> {
        let d = self.0.degree;
        let p = self.0.p;
        let f = &self.0.modulus;
        for i in (d..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for j in 0..d {
                r[i - d + j] = (r[i - d + j] + mulp(neg, f[j], p)) % p;
            }
        }
        r.truncate(d);
        r.resize(d, 0);
        r
    }
}

#[inline]
fn mulp(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        (a * b) % p
    } else {
        mul_mod(a, b, p)
    }
}

/// An element of F_{q^n}: a reduced coefficient vector tied to its field.
#[derive(Clone)]
pub struct FieldElement {
    spec: FieldSpec,
    coeffs: Vec<u64>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.spec.same(&other.spec)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({})", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.coeffs, "x"))
    }
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Canonical index Σ c_i p^i.
    pub fn index(&self) -> u64 {
        let p = self.spec.0.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.spec.same(&other.spec) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        let p = self.spec.0.p;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| (a + b) % p).collect();
        Ok(self.spec.raw(coeffs))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        let p = self.spec.0.p;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| (a + p - b) % p).collect();
        Ok(self.spec.raw(coeffs))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        let p = self.spec.0.p;
        let d = self.spec.0.degree;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulp(a, b, p)) % p;
            }
        }
        Ok(self.spec.raw(self.spec.reduce(prod)))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.checked_mul(&other.inv()?)
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.spec.0.order - 2))
    }

    /// Square-and-multiply power with a nonnegative exponent; `a^0 = 1`.
    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut acc = self.spec.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplication by a prime-field scalar.
    pub fn scale(&self, c: u64) -> FieldElement {
        let p = self.spec.0.p;
        let c = c % p;
        self.spec.raw(self.coeffs.iter().map(|&a| mulp(a, c, p)).collect())
    }

    /// a ↦ a^q, the generator of Gal(F_{q^n}/F_q).
    pub fn frobenius_q(&self) -> FieldElement {
        self.pow(self.spec.0.q)
    }

    /// Absolute trace to F_p, via the precomputed traces of the basis.
    pub fn trace_abs(&self) -> u64 {
        let p = self.spec.0.p;
        let t = &self.spec.0.trace_powers;
        self.coeffs
            .iter()
            .zip(t)
            .fold(0, |acc, (&c, &tr)| (acc + mul_mod(c, tr, p)) % p)
    }

    /// Absolute trace by its definition Σ_{i<kn} a^{p^i}.
    pub fn trace_abs_direct(&self) -> u64 {
        let mut acc = self.spec.zero();
        let mut conj = self.clone();
        for _ in 0..self.spec.0.degree {
            acc = &acc + &conj;
            conj = conj.pow(self.spec.0.p);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }
}

/// ψ_β(α) = exp(2πi·Tr(αβ)/p).
pub fn additive_character(beta: &FieldElement, alpha: &FieldElement) -> Result<Complex64> {
    let prod = beta.checked_mul(alpha)?;
    Ok(unit_root(prod.trace_abs() as i128, beta.spec.0.p))
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;

            /// # Panics
            ///
            /// Panics when the operands belong to different fields; use the
            /// `checked_*` method to get an error instead.
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field element operands from different fields")
            }
        }

        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        let p = self.spec.0.p;
        self.spec.raw(self.coeffs.iter().map(|&a| (p - a) % p).collect())
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Render a coefficient vector (low degree first) as a polynomial string.
pub(crate) fn format_poly(coeffs: &[u64], var: &str) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> FieldSpec {
        build_field(2, 1, 3, None).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(f8().modulus(), &[1, 1, 0, 1]);
        assert_eq!(f8().modulus_string(), "x^3 + x + 1");
        let f3 = build_field(3, 1, 1, None).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
        assert_eq!(f3.order(), 3);
        assert_eq!(build_field(3, 1, 2, None).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn supplied_modulus() {
        let f = build_field(2, 1, 3, Some(&[1, 0, 1, 1])).unwrap();
        assert_eq!(f.modulus_string(), "x^3 + x^2 + 1");
        assert_eq!(build_field(2, 1, 3, Some(&[1, 0, 0, 1])).unwrap_err(), Error::Reducible(2));
        assert!(matches!(
            build_field(2, 1, 3, Some(&[1, 1, 1])),
            Err(Error::DegreeMismatch { expected: 3, found: 2 })
        ));
        assert_eq!(build_field(3, 1, 2, Some(&[1, 0, 2])).unwrap_err(), Error::NonMonic);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(build_field(4, 1, 2, None).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(build_field(2, 1, 0, None), Err(Error::ZeroDegree { .. })));
        assert!(matches!(build_field(2, 1, 64, None), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn arithmetic_in_f8() {
        let f = f8();
        let x = f.gen();
        let x2 = &x * &x;
        assert_eq!((&x * &x2).coeffs(), &[1, 1, 0]); // x^3 = x + 1
        assert!(x.pow(7).is_one());
        assert!(f.one().inv().unwrap().is_one());
        assert_eq!(f.zero().inv().unwrap_err(), Error::DivisionByZero);
        assert_eq!(x.pow(4).to_string(), "x^2 + x");
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = f8().gen();
        let b = build_field(2, 1, 3, Some(&[1, 0, 1, 1])).unwrap().gen();
        assert_eq!(a.checked_mul(&b).unwrap_err(), Error::SpecMismatch);
        assert_eq!(additive_character(&a, &b).unwrap_err(), Error::SpecMismatch);
        // separately built but identical fields are the same field
        assert!(a.checked_add(&f8().gen()).is_ok());
    }

    #[test]
    fn frobenius_and_trace() {
        let f = f8();
        let x = f.gen();
        assert_eq!(x.frobenius_q(), &x * &x);
        let a = &x + &f.one();
        assert_eq!(a.trace_abs(), 1);
        assert_eq!(a.trace_abs_direct(), 1);
        assert_eq!(f.zero().trace_abs(), 0);

        let f4 = build_field(2, 1, 2, None).unwrap();
        assert_eq!(f4.gen().trace_abs(), 1);
    }

    #[test]
    fn trace_shortcut_matches_definition() {
        for (p, k, n) in [(2, 1, 4), (3, 1, 3), (5, 1, 2), (2, 2, 2), (3, 2, 2), (7, 1, 1)] {
            let f = build_field(p, k, n, None).unwrap();
            for a in f.elements() {
                assert_eq!(a.trace_abs(), a.trace_abs_direct());
            }
        }
    }

    #[test]
    fn trace_functional_matches_product_trace() {
        let f = build_field(3, 1, 3, None).unwrap();
        for b in f.elements().step_by(5) {
            let w = f.trace_functional(&b);
            for a in f.elements() {
                assert_eq!(f.trace_with(&w, a.index()), (&a * &b).trace_abs());
            }
        }
    }

    #[test]
    fn additive_character_examples() {
        let f = f8();
        let a = &f.gen() + &f.one();
        let v = additive_character(&f.one(), &a).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        for alpha in f.elements() {
            assert!((additive_character(&f.zero(), &alpha).unwrap() - 1.0).norm() < 1e-15);
        }
        for beta in f.elements().skip(1) {
            let s: Complex64 = f.elements().map(|al| additive_character(&beta, &al).unwrap()).sum();
            assert!(s.norm() < 1e-9);
        }
    }

    #[test]
    fn subfield_enumeration() {
        let f = build_field(2, 2, 2, None).unwrap(); // F_16 over F_4
        let sub = f.subfield();
        assert_eq!(sub.indices().len(), 4);
        for &i in sub.indices() {
            assert!(f.in_subfield(&f.from_index(i)));
        }
        let inside = f.elements().filter(|a| f.in_subfield(a)).count();
        assert_eq!(inside, 4);
        assert_eq!(f8().subfield().indices(), &[0, 1]);
    }

    #[test]
    fn index_round_trip() {
        let f = build_field(5, 1, 3, None).unwrap();
        for i in 0..f.order() {
            assert_eq!(f.from_index(i).index(), i);
        }
    }
}
