//! Factorization over F_q: square-free decomposition, distinct-degree
//! splitting, then equal-degree splitting driven by an enumeration of
//! residues in canonical order instead of random sampling.

use super::{poly_gcd, PolyQ};
use crate::error::{Error, Result};
use crate::field::FieldElement;

/// `unit · Π factor^exponent`, factors monic irreducible, pairwise distinct,
/// sorted canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(PolyQ, u32)>,
    pub unit: FieldElement,
}

impl Factorization {
    /// Multiply the factorization back out.
    pub fn reconstruct(&self) -> PolyQ {
        let mut acc = PolyQ::constant(self.unit.clone());
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(f).expect("same field");
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Number of distinct irreducible factors.
    pub fn distinct(&self) -> usize {
        self.factors.len()
    }
}

pub fn factor_poly(g: &PolyQ) -> Result<Factorization> {
    match g.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(_) => {}
    }
    let unit = g.leading().expect("nonzero").clone();
    let f = g.monic();
    let mut factors: Vec<(PolyQ, u32)> = Vec::new();
    for (part, mult) in squarefree(&f)? {
        for (block, d) in distinct_degree(&part)? {
            for irr in equal_degree(&block, d)? {
                match factors.iter_mut().find(|(h, _)| *h == irr) {
                    Some((_, e)) => *e += mult,
                    None => factors.push((irr, mult)),
                }
            }
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(Factorization { factors, unit })
}

/// Square-free decomposition of a monic polynomial in characteristic p.
fn squarefree(f: &PolyQ) -> Result<Vec<(PolyQ, u32)>> {
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return Ok(out);
    }
    let deriv = f.derivative();
    let mut c = poly_gcd(f, &deriv)?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1u32;
    while !w.is_one() {
        let y = poly_gcd(&w, &c)?;
        let fac = w.exact_div(&y)?;
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac, i));
        }
        c = c.exact_div(&y)?;
        w = y;
        i += 1;
    }
    if !c.is_one() {
        let p = f.spec().p() as u32;
        for (g, m) in squarefree(&c.pth_root())? {
            out.push((g, m * p));
        }
    }
    Ok(out)
}

/// Split a square-free monic polynomial into blocks whose irreducible factors
/// all share one degree.
fn distinct_degree(f: &PolyQ) -> Result<Vec<(PolyQ, usize)>> {
    let spec = f.spec();
    let q = spec.q();
    let x = PolyQ::x(spec);
    let mut rest = f.clone();
    let mut h = x.rem(&rest)?;
    let mut out = Vec::new();
    let mut d = 1usize;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(q, &rest)?;
        let g = poly_gcd(&rest, &h.sub(&x)?)?;
        if !g.is_one() {
            rest = rest.exact_div(&g)?;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((rest, deg));
    }
    Ok(out)
}

/// Split a product of distinct monic irreducibles of degree `d`.
fn equal_degree(f: &PolyQ, d: usize) -> Result<Vec<PolyQ>> {
    let deg = f.degree().unwrap_or(0);
    if deg == d {
        return Ok(vec![f.clone()]);
    }
    let spec = f.spec();
    let q = spec.q();
    let one = PolyQ::one(spec);
    let space = q.checked_pow(deg as u32).ok_or(Error::Overflow("splitting search space"))?;
    // constants never split; start at the first non-constant residue
    for idx in q..space {
        let a = PolyQ::from_index(spec, idx, deg);
        let b = if q % 2 == 1 {
            // a^{(q^d-1)/2} = (a · a^q ⋯ a^{q^{d-1}})^{(q-1)/2}
            let mut norm = one.clone();
            let mut conj = a.clone();
            for i in 0..d {
                norm = norm.mul(&conj)?.rem(f)?;
                if i + 1 < d {
                    conj = conj.pow_mod(q, f)?;
                }
            }
            norm.pow_mod((q - 1) / 2, f)?.sub(&one)?
        } else {
            // trace to F_2: Σ_{i < k·d} a^{2^i}
            let steps = spec.k() as usize * d;
            let mut acc = PolyQ::zero(spec);
            let mut sq = a.clone();
            for _ in 0..steps {
                acc = acc.add(&sq)?;
                sq = sq.mul(&sq)?.rem(f)?;
            }
            acc
        };
        if b.is_zero() {
            continue;
        }
        let g = poly_gcd(f, &b)?;
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < deg {
            let mut parts = equal_degree(&g, d)?;
            parts.extend(equal_degree(&f.exact_div(&g)?, d)?);
            return Ok(parts);
        }
    }
    unreachable!("some residue separates any two distinct irreducible factors")
}

/// All monic divisors, sorted by degree then canonical index.
pub fn divisors_of(fac: &Factorization) -> Vec<PolyQ> {
    let spec = fac.unit.spec();
    let mut divs = vec![PolyQ::one(spec)];
    for (f, e) in &fac.factors {
        let len = divs.len();
        let mut pw = PolyQ::one(spec);
        for _ in 0..*e {
            pw = pw.mul(f).expect("same field");
            for i in 0..len {
                let d = divs[i].mul(&pw).expect("same field");
                divs.push(d);
            }
        }
    }
    divs.sort_by(|a, b| a.canonical_cmp(b));
    divs
}

/// Polynomial Möbius function μ_q.
pub fn mobius_poly(d: &PolyQ) -> Result<i32> {
    match d.degree() {
        None => Err(Error::ZeroGcd),
        Some(0) => Ok(1),
        Some(_) => Ok(mobius_of(&factor_poly(d)?)),
    }
}

pub(crate) fn mobius_of(fac: &Factorization) -> i32 {
    if !fac.is_squarefree() {
        0
    } else if fac.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Polynomial totient Φ_q(g) = q^{deg g} Π_{r | g} (1 - q^{-deg r}).
///
/// Counts residues s with deg s < deg g and monic gcd(s, g) = 1.
pub fn totient_poly(g: &PolyQ) -> Result<u64> {
    match g.degree() {
        None | Some(0) => Err(Error::ConstantPolynomial),
        Some(_) => totient_of(&factor_poly(g)?),
    }
}

/// Φ_q from a factorization; the empty factorization (g = 1) gives 1.
pub(crate) fn totient_of(fac: &Factorization) -> Result<u64> {
    let q = fac.unit.spec().q();
    fac.factors.iter().try_fold(1u64, |acc, (r, e)| {
        let norm = q
            .checked_pow(r.degree().expect("nonzero") as u32)
            .ok_or(Error::Overflow("polynomial norm"))?;
        let local = norm
            .checked_pow(e - 1)
            .and_then(|v| v.checked_mul(norm - 1))
            .ok_or(Error::Overflow("polynomial totient"))?;
        acc.checked_mul(local).ok_or(Error::Overflow("polynomial totient"))
    })
}
