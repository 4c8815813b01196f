//! Spectra of the quadratic residues, the primitive roots mod p and the
//! primitive normal elements of F_{q^n}, with their Gauss-sum checks.

use super::{dft_zmod, Check, Domain, IndicatorSet, Spectrum, PARSEVAL_TOLERANCE};
use crate::arith::{is_prime, omega, totient};
use crate::build_field;
use crate::class::{find_primitive_root, Classifier, LogTable};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::roots::{unit_root, RootTable};
use num_complex::Complex64;

/// Tolerance for spectrum values that are integers in exact arithmetic.
const EXACT_TOLERANCE: f64 = 1e-9;
/// Tolerance for closed-form and modulus comparisons.
const CLOSED_FORM_TOLERANCE: f64 = 1e-6;

fn odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::OutOfDomain("p must be an odd prime".into()));
    }
    Ok(())
}

/// Nonzero quadratic residues mod an odd prime p.
pub fn qr_indicator(p: u64) -> Result<IndicatorSet> {
    odd_prime(p)?;
    IndicatorSet::from_members(Domain::ZMod(p), (1..=(p - 1) / 2).map(|t| t * t % p))
}

#[derive(Debug, Clone)]
pub struct QrReport {
    pub p: u64,
    pub set: IndicatorSet,
    pub spectrum: Spectrum,
    /// G = Σ_{t≠0} χ(t)·exp(2πi·t/p) for the quadratic character χ.
    pub gauss_sum: Complex64,
    /// Largest |κ̂(s) - (-1/2 + χ(s)G/2)| over s ≠ 0.
    pub closed_form_error: f64,
    pub checks: Vec<Check>,
}

impl QrReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Spectrum of the quadratic residues against its closed form.
pub fn qr_spectrum_check(p: u64) -> Result<QrReport> {
    let set = qr_indicator(p)?;
    let spectrum = dft_zmod(&set.as_function());
    let roots = RootTable::new(p);
    let chi = |t: u64| if set.contains(t % p) { 1.0 } else { -1.0 };
    let gauss_sum: Complex64 = (1..p).map(|t| roots.get(t) * chi(t)).sum();
    let closed_form_error = (1..p)
        .map(|s| {
            // χ(s^{-1}) = χ(s)
            let expected = Complex64::new(-0.5, 0.0) + gauss_sum * (chi(s) / 2.0);
            (spectrum.coeffs[s as usize] - expected).norm()
        })
        .fold(0.0, f64::max);
    let half = ((p - 1) / 2) as f64;
    let checks = vec![
        Check::close("value_at_zero", spectrum.value_at_zero, half, EXACT_TOLERANCE),
        Check::at_most("closed_form", closed_form_error, CLOSED_FORM_TOLERANCE),
        Check::at_most("sup_nonzero_bound", spectrum.sup_nonzero, ((p as f64).sqrt() + 1.0) / 2.0 + EXACT_TOLERANCE),
        Check::at_most("plancherel", spectrum.plancherel_error(), PARSEVAL_TOLERANCE),
    ];
    Ok(QrReport { p, set, spectrum, gauss_sum, closed_form_error, checks })
}

fn prime_field_logs(p: u64) -> Result<LogTable> {
    let f = build_field(p, 1, 1, None)?;
    LogTable::full(&find_primitive_root(&f))
}

/// G(ψ_a, χ_j) = Σ_{z≠0} ψ_a(z)·χ_j(z) mod p, with ψ_a(z) = exp(2πi·az/p)
/// and χ_j(z) = exp(2πi·j·ind(z)/(p-1)) for the smallest primitive root.
pub fn gauss_sum_mod_p(p: u64, j: u64, a: u64) -> Result<Complex64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if j.is_multiple_of(p - 1) || a.is_multiple_of(p) {
        return Err(Error::TrivialCharacter);
    }
    let logs = prime_field_logs(p)?;
    gauss_mod_p_with(&logs, p, j, a)
}

fn gauss_mod_p_with(logs: &LogTable, p: u64, j: u64, a: u64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for z in 1..p {
        let ind = logs.log_index(z).expect("nonzero residue");
        acc += unit_root((a as i128 * z as i128) % p as i128, p) * unit_root(j as i128 * ind as i128, p - 1);
    }
    Ok(acc)
}

/// Largest ||G| - √p| over all nontrivial multiplicative characters mod p
/// (additive character z ↦ exp(2πi·z/p)).
pub fn gauss_modulus_check(p: u64) -> Result<Check> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let logs = prime_field_logs(p)?;
    let root_p = (p as f64).sqrt();
    let mut worst = 0.0f64;
    for j in 1..p - 1 {
        let g = gauss_mod_p_with(&logs, p, j, 1)?;
        worst = worst.max((g.norm() - root_p).abs());
    }
    Ok(Check::at_most("gauss_modulus", worst, CLOSED_FORM_TOLERANCE))
}

/// Σ_{z≠0} ψ_β(z)·χ(z) on F_{q^n}, χ the character of order d with index j.
pub fn gauss_sum_field(table: &LogTable, d: u64, j: u64, beta: &FieldElement) -> Result<Complex64> {
    if beta.is_zero() || d == 1 {
        return Err(Error::TrivialCharacter);
    }
    let spec = beta.spec();
    let functional = spec.trace_functional(beta);
    let roots = RootTable::new(spec.p());
    let mut acc = Complex64::new(0.0, 0.0);
    for z in spec.elements().skip(1) {
        let chi = crate::class::mult_character(d, j, table, &z)?;
        acc += roots.get(spec.trace_with(&functional, z.index())) * chi;
    }
    Ok(acc)
}

/// Primitive roots mod p, classified in the prime field F_p.
pub fn primroot_indicator(p: u64) -> Result<IndicatorSet> {
    let f = build_field(p, 1, 1, None)?;
    let census = Classifier::new(&f)?.census(p)?;
    // with modulus x the canonical index of an element is its residue
    IndicatorSet::new(Domain::ZMod(p), census.primitive)
}

#[derive(Debug, Clone)]
pub struct PrimrootReport {
    pub p: u64,
    pub set: IndicatorSet,
    pub spectrum: Spectrum,
    /// 2^{ω(p-1)}·√p.
    pub bound: f64,
    pub checks: Vec<Check>,
}

impl PrimrootReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn primroot_spectrum_check(p: u64) -> Result<PrimrootReport> {
    odd_prime(p)?;
    let set = primroot_indicator(p)?;
    let spectrum = dft_zmod(&set.as_function());
    let bound = 2f64.powi(omega(p - 1) as i32) * (p as f64).sqrt();
    let checks = vec![
        Check::close("value_at_zero", spectrum.value_at_zero, totient(p - 1) as f64, EXACT_TOLERANCE),
        Check::at_most("sup_nonzero_bound", spectrum.sup_nonzero, bound),
        Check::at_most("plancherel", spectrum.plancherel_error(), PARSEVAL_TOLERANCE),
    ];
    Ok(PrimrootReport { p, set, spectrum, bound, checks })
}

#[derive(Debug, Clone)]
pub struct PnReport {
    pub spec: FieldSpec,
    pub primitive_count: u64,
    pub normal_count: u64,
    pub pn_count: u64,
    /// φ(q^n-1)·Φ_q(x^n-1)/q^n, the main term of the count.
    pub main_term: f64,
    pub set: IndicatorSet,
    pub spectrum: Spectrum,
    /// sup_{β≠0}|Ĉ(β)| / q^{n/2}.
    pub scaled_sup: f64,
    /// 2^{ω(q^n-1) + r}, r the number of distinct irreducible factors of x^n - 1.
    pub bound_constant: f64,
    pub checks: Vec<Check>,
}

impl PnReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Spectrum of the primitive normal elements of F_{q^n}.
pub fn pn_spectrum(spec: &FieldSpec, cap: u64) -> Result<PnReport> {
    let size = spec.order();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    let classifier = Classifier::new(spec)?;
    let census = classifier.census(cap)?;
    let counts = census.counts();
    let set = IndicatorSet::new(Domain::Field(spec.clone()), census.primitive_normal())?;
    let spectrum = set.spectrum(cap)?;
    let q_half = (size as f64).sqrt();
    let scaled_sup = spectrum.sup_nonzero / q_half;
    let r = classifier.factorization().distinct() as i32;
    let bound_constant = 2f64.powi(omega(size - 1) as i32 + r);
    let pn = counts.primitive_normal as f64;
    let checks = vec![
        Check::close("value_at_zero", spectrum.value_at_zero, pn, EXACT_TOLERANCE),
        Check::at_most("parseval", spectrum.plancherel_error(), PARSEVAL_TOLERANCE),
        Check::at_most("scaled_sup_bound", scaled_sup, bound_constant),
        Check::at_most("weyl_ratio", spectrum.weyl_ratio, 1.0),
    ];
    Ok(PnReport {
        spec: spec.clone(),
        primitive_count: counts.primitive,
        normal_count: counts.normal,
        pn_count: counts.primitive_normal,
        main_term: classifier.primitive_total() as f64 * classifier.normal_total() as f64 / size as f64,
        set,
        spectrum,
        scaled_sup,
        bound_constant,
        checks,
    })
}
