//! Dense polynomials over the base field F_q of a [`FieldSpec`].
//!
//! Coefficients are elements of F_{q^n} lying in the subfield F_q (the fixed
//! field of a ↦ a^q), so one arithmetic layer serves both k = 1 and k > 1.
//! This is the F_q[x]-module side of the theory: x^n - 1 and its divisors act
//! on F_{q^n} through a ↦ a^q.

mod bounds;
mod factor;

pub use bounds::{normal_density_bound_check, totient_lower_bound_check, BoundCheck, EULER_GAMMA};
pub use factor::{divisors_of, factor_poly, mobius_poly, totient_poly, Factorization};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use std::cmp::Ordering;
use std::fmt;

/// Polynomial over F_q, low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyQ {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyQ({self})")
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        // over a prime base field coefficients are plain residues
        let prime_base = self.spec.k() == 1;
        let var = if prime_base { "x" } else { "X" };
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = if prime_base {
                c.coeffs()[0].to_string()
            } else {
                format!("{{{c}}}")
            };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (c.is_one(), i) {
                (_, 0) => coeff,
                (true, _) => mono,
                (false, _) => format!("{coeff}{mono}"),
            });
        }
        f.write_str(&terms.join(" + "))
    }
}

impl PolyQ {
    fn from_raw(spec: &FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { spec: spec.clone(), coeffs }
    }

    pub fn zero(spec: &FieldSpec) -> Self {
        Self { spec: spec.clone(), coeffs: Vec::new() }
    }

    pub fn one(spec: &FieldSpec) -> Self {
        Self::constant(spec.one())
    }

    /// The constant polynomial `c`; `c` must lie in F_q.
    pub fn constant(c: FieldElement) -> Self {
        let spec = c.spec().clone();
        Self::from_raw(&spec, vec![c])
    }

    /// The monomial `x`.
    pub fn x(spec: &FieldSpec) -> Self {
        Self::from_raw(spec, vec![spec.zero(), spec.one()])
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(spec: &FieldSpec, n: usize) -> Self {
        let mut coeffs = vec![spec.zero(); n + 1];
        coeffs[0] = -spec.one();
        coeffs[n] = if n == 0 { spec.zero() } else { spec.one() };
        Self::from_raw(spec, coeffs)
    }

    /// Polynomial with prime-field coefficients (residues mod p, low degree first).
    pub fn from_residues(spec: &FieldSpec, residues: &[u64]) -> Self {
        Self::from_raw(spec, residues.iter().map(|&c| spec.constant(c)).collect())
    }

    /// Polynomial from F_q coefficients; every coefficient is checked to lie in F_q.
    pub fn from_coeffs(spec: &FieldSpec, coeffs: Vec<FieldElement>) -> Result<Self> {
        for c in &coeffs {
            if !c.spec().same(spec) {
                return Err(Error::SpecMismatch);
            }
            if !spec.in_subfield(c) {
                return Err(Error::NotInSubfield);
            }
        }
        Ok(Self::from_raw(spec, coeffs))
    }

    /// The polynomial of degree < `len` whose base-q digits (by subfield rank,
    /// x^0 least significant) spell `index`.
    pub fn from_index(spec: &FieldSpec, mut index: u64, len: usize) -> Self {
        let sub = spec.subfield().indices();
        let q = spec.q();
        let coeffs = (0..len)
            .map(|_| {
                let r = index % q;
                index /= q;
                spec.from_index(sub[r as usize])
            })
            .collect();
        Self::from_raw(spec, coeffs)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Monic associate; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let li = l.inv().expect("leading coefficient is nonzero");
                self.scale(&li)
            }
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::from_raw(&self.spec, self.coeffs.iter().map(|a| a * c).collect())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec.same(&other.spec) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = self.spec.zero();
        let coeffs = (0..len)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Ok(Self::from_raw(&self.spec, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = self.spec.zero();
        let coeffs = (0..len)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Ok(Self::from_raw(&self.spec, coeffs))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.spec));
        }
        let mut coeffs = vec![self.spec.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Ok(Self::from_raw(&self.spec, coeffs))
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check(divisor)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut quot = vec![self.spec.zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * b);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_raw(&self.spec, quot), Self::from_raw(&self.spec, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::OutOfDomain(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Result<Self> {
        let mut acc = Self::one(&self.spec).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?.rem(modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?.rem(modulus)?;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(i as u64))
            .collect();
        Self::from_raw(&self.spec, coeffs)
    }

    /// `h` with `h(x)^p = self`; requires every exponent with a nonzero
    /// coefficient to be a multiple of p.
    pub(crate) fn pth_root(&self) -> Self {
        let p = self.spec.p() as usize;
        // c^{1/p} = c^{q/p} on F_q
        let root_exp = self.spec.q() / self.spec.p();
        let coeffs = self.coeffs.iter().step_by(p).map(|c| c.pow(root_exp)).collect();
        Self::from_raw(&self.spec, coeffs)
    }

    /// The F_q[x]-module action on F_{q^n}: h∘a = Σ h_i a^{q^i}.
    pub fn act_on(&self, a: &FieldElement) -> Result<FieldElement> {
        if !a.spec().same(&self.spec) {
            return Err(Error::SpecMismatch);
        }
        let mut acc = self.spec.zero();
        let mut conj = a.clone();
        for (i, h) in self.coeffs.iter().enumerate() {
            if !h.is_zero() {
                acc = &acc + &(h * &conj);
            }
            if i + 1 < self.coeffs.len() {
                conj = conj.frobenius_q();
            }
        }
        Ok(acc)
    }

    /// Same action given the precomputed conjugates a, a^q, a^{q^2}, ...
    pub fn act_on_conjugates(&self, conjugates: &[FieldElement]) -> FieldElement {
        self.coeffs
            .iter()
            .zip(conjugates)
            .filter(|(h, _)| !h.is_zero())
            .fold(self.spec.zero(), |acc, (h, c)| &acc + &(h * c))
    }

    /// Ranks of the coefficients in the sorted subfield, high degree first.
    fn rank_key(&self) -> Vec<u64> {
        let sub = self.spec.subfield();
        self.coeffs
            .iter()
            .rev()
            .map(|c| sub.rank_of(c.index()).expect("coefficient lies in F_q"))
            .collect()
    }

    /// Canonical order: by degree, then by base-q index of the coefficients.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.rank_key().cmp(&other.rank_key()))
    }
}

/// Monic gcd; any common divisor of `a` and `b` divides it.
pub fn poly_gcd(a: &PolyQ, b: &PolyQ) -> Result<PolyQ> {
    a.check(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = x.rem(&y)?;
        x = y;
        y = r;
    }
    Ok(x.monic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_field;

    fn f3() -> FieldSpec {
        build_field(3, 1, 1, None).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let f = f3();
        let a = PolyQ::from_residues(&f, &[2, 0, 1]); // x^2 - 1
        let b = PolyQ::from_residues(&f, &[2, 1]); // x - 1
        assert_eq!(poly_gcd(&a, &b).unwrap(), b);
        assert_eq!(poly_gcd(&a, &PolyQ::one(&f)).unwrap(), PolyQ::one(&f));
        let c = PolyQ::x_pow_minus_one(&f, 3);
        assert_eq!(poly_gcd(&c, &c).unwrap(), c);
        let z = PolyQ::zero(&f);
        assert_eq!(poly_gcd(&z, &z).unwrap_err(), Error::ZeroGcd);
        // gcd(0, 2x + 2) is the monic x + 1
        let g = poly_gcd(&z, &PolyQ::from_residues(&f, &[2, 2])).unwrap();
        assert_eq!(g, PolyQ::from_residues(&f, &[1, 1]));
    }

    #[test]
    fn division_identity() {
        let f = build_field(5, 1, 1, None).unwrap();
        for ia in 0..200u64 {
            for ib in [1u64, 7, 30, 77, 126] {
                let a = PolyQ::from_index(&f, ia, 4);
                let b = PolyQ::from_index(&f, ib, 4);
                let (q, r) = a.div_rem(&b).unwrap();
                assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
                assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
            }
        }
    }

    #[test]
    fn display() {
        let f = f3();
        assert_eq!(PolyQ::x_pow_minus_one(&f, 2).to_string(), "x^2 + 2");
        assert_eq!(PolyQ::zero(&f).to_string(), "0");
        assert_eq!(PolyQ::from_residues(&f, &[1, 2, 0, 1]).to_string(), "x^3 + 2x + 1");
    }

    #[test]
    fn monic_is_idempotent() {
        let f = build_field(7, 1, 1, None).unwrap();
        let a = PolyQ::from_residues(&f, &[3, 5, 4]);
        let m = a.monic();
        assert!(m.is_monic());
        assert_eq!(m.monic(), m);
    }

    #[test]
    fn action_on_f8() {
        let f = build_field(2, 1, 3, None).unwrap();
        let h = PolyQ::from_residues(&f, &[1, 1, 1]);
        assert!(h.act_on(&f.gen()).unwrap().is_zero());
        let one = PolyQ::one(&f);
        assert_eq!(one.act_on(&f.gen()).unwrap(), f.gen());
    }

    #[test]
    fn coefficients_outside_subfield_are_rejected() {
        let f = build_field(2, 2, 2, None).unwrap();
        let err = PolyQ::from_coeffs(&f, vec![f.one(), f.gen()]).unwrap_err();
        assert_eq!(err, Error::NotInSubfield);
    }

    #[test]
    fn canonical_order() {
        let f = f3();
        let a = PolyQ::from_residues(&f, &[1, 1]);
        let b = PolyQ::from_residues(&f, &[2, 1]);
        let c = PolyQ::from_residues(&f, &[0, 0, 1]);
        assert_eq!(a.canonical_cmp(&b), Ordering::Less);
        assert_eq!(b.canonical_cmp(&c), Ordering::Less);
        assert_eq!(PolyQ::one(&f).canonical_cmp(&a), Ordering::Less);
    }
}
