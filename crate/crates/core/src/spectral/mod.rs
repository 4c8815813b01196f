//! Finite Fourier transforms of functions on Z/m and on F_{q^n}, spectra of
//! the arithmetic indicator sets, and the character-sum checks built on them.
//!
//! Sign and scale: forward transforms use exp(+2πi·st/m), inverse transforms
//! (1/m)·exp(-2πi·st/m). Field transforms pair α with β through
//! ψ_β(α) = exp(2πi·Tr(αβ)/p). All sums are direct; phases are reduced in
//! integer arithmetic before evaluation.

mod bounds;
mod sets;
mod tij;

pub use bounds::{bilinear_bound_check, incomplete_sum_check, subgroup_coset, BilinearReport, IncompleteSumReport};
pub use sets::{
    gauss_sum_field, gauss_sum_mod_p, gauss_modulus_check, pn_spectrum, primroot_indicator,
    primroot_spectrum_check, qr_indicator, qr_spectrum_check, PnReport, PrimrootReport, QrReport,
};
pub use tij::{tij_decomposition, TijContext, TijParts, TIJ_TOLERANCE};

use crate::class::DetectionKernel;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::roots::RootTable;
use num_complex::Complex64;
use rayon::prelude::*;

/// Absolute tolerance for transform round trips and the kernel identity.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-9;
/// Relative tolerance for Parseval and Plancherel.
pub const PARSEVAL_TOLERANCE: f64 = 1e-6;
/// Default Salem-ratio cap used by [`salem_verdict`] reports.
pub const DEFAULT_SALEM_CAP: f64 = 4.0;

/// A named numeric check: `observed` compared against `limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub observed: f64,
    pub limit: f64,
    /// `limit - observed`; nonnegative exactly when the check passes.
    pub margin: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `observed ≤ limit`.
    pub fn at_most(name: &'static str, observed: f64, limit: f64) -> Self {
        let margin = limit - observed;
        Self { name, observed, limit, margin, pass: observed <= limit }
    }

    /// Passes when `|observed - expected| ≤ tol`; `limit` holds the tolerance.
    pub fn close(name: &'static str, observed: f64, expected: f64, tol: f64) -> Self {
        Self::at_most(name, (observed - expected).abs(), tol)
    }
}

/// Where an indicator set or function lives.
#[derive(Debug, Clone)]
pub enum Domain {
    ZMod(u64),
    Field(FieldSpec),
}

impl Domain {
    pub fn size(&self) -> u64 {
        match self {
            Domain::ZMod(m) => *m,
            Domain::Field(f) => f.order(),
        }
    }

    pub fn same(&self, other: &Domain) -> bool {
        match (self, other) {
            (Domain::ZMod(a), Domain::ZMod(b)) => a == b,
            (Domain::Field(a), Domain::Field(b)) => a.same(b),
            _ => false,
        }
    }
}

/// A subset of Z/m or F_{q^n} as a membership vector over canonical indices.
#[derive(Debug, Clone)]
pub struct IndicatorSet {
    domain: Domain,
    membership: Vec<bool>,
    cardinality: u64,
}

impl IndicatorSet {
    pub fn new(domain: Domain, membership: Vec<bool>) -> Result<Self> {
        if membership.len() as u64 != domain.size() {
            return Err(Error::BadLength { expected: domain.size() as usize, found: membership.len() });
        }
        let cardinality = membership.iter().filter(|&&b| b).count() as u64;
        Ok(Self { domain, membership, cardinality })
    }

    /// The set holding the given indices; indices out of range are an error.
    pub fn from_members(domain: Domain, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let size = domain.size();
        let mut membership = vec![false; size as usize];
        for i in members {
            if i >= size {
                return Err(Error::OutOfDomain(format!("member {i} outside a domain of size {size}")));
            }
            membership[i as usize] = true;
        }
        Self::new(domain, membership)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn membership(&self) -> &[bool] {
        &self.membership
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    pub fn contains(&self, index: u64) -> bool {
        self.membership.get(index as usize).copied().unwrap_or(false)
    }

    /// Member indices in increasing order.
    pub fn members(&self) -> Vec<u64> {
        (0..self.membership.len() as u64).filter(|&i| self.membership[i as usize]).collect()
    }

    /// The indicator as a complex-valued function.
    pub fn as_function(&self) -> Vec<Complex64> {
        self.membership.iter().map(|&b| Complex64::new(if b { 1.0 } else { 0.0 }, 0.0)).collect()
    }

    /// Transform of the indicator over its own domain.
    pub fn spectrum(&self, cap: u64) -> Result<Spectrum> {
        let f = self.as_function();
        match &self.domain {
            Domain::ZMod(_) => Ok(dft_zmod(&f)),
            Domain::Field(spec) => dft_field(spec, &f, cap),
        }
    }
}

/// Transform coefficients and their summary statistics.
///
/// `weight` is Σ|f|², which is the cardinality when f is a 0/1 indicator; the
/// Salem ratio is `sup_nonzero / √weight` and the Weyl ratio
/// `sup_nonzero / domain size`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub coeffs: Vec<Complex64>,
    pub value_at_zero: f64,
    pub sup_nonzero: f64,
    /// Frequency attaining `sup_nonzero` (smallest on ties).
    pub argsup: Option<u64>,
    /// Σ|coeffs|².
    pub mass: f64,
    pub weight: f64,
    pub salem_ratio: f64,
    pub weyl_ratio: f64,
}

impl Spectrum {
    pub fn from_coeffs(coeffs: Vec<Complex64>, weight: f64) -> Self {
        let mut sup = 0.0f64;
        let mut argsup = None;
        for (s, c) in coeffs.iter().enumerate().skip(1) {
            let a = c.norm();
            if argsup.is_none() || a > sup {
                sup = a;
                argsup = Some(s as u64);
            }
        }
        let mass = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let size = coeffs.len() as f64;
        Self {
            value_at_zero: coeffs.first().map_or(0.0, |c| c.re),
            sup_nonzero: sup,
            argsup,
            mass,
            weight,
            salem_ratio: if weight > 0.0 { sup / weight.sqrt() } else { f64::NAN },
            weyl_ratio: sup / size,
            coeffs,
        }
    }

    pub fn size(&self) -> u64 {
        self.coeffs.len() as u64
    }

    /// Relative deviation of Σ|f̂|² from size · Σ|f|².
    pub fn plancherel_error(&self) -> f64 {
        let expected = self.size() as f64 * self.weight;
        (self.mass - expected).abs() / expected.max(f64::MIN_POSITIVE)
    }
}

fn weight_of(f: &[Complex64]) -> f64 {
    f.iter().map(|c| c.norm_sqr()).sum()
}

/// f̂(s) = Σ_t f(t)·exp(2πi·st/m), by direct summation.
pub fn dft_zmod(f: &[Complex64]) -> Spectrum {
    Spectrum::from_coeffs(transform(f, 1), weight_of(f))
}

/// f(t) = (1/m) Σ_s f̂(s)·exp(-2πi·st/m).
pub fn inverse_dft_zmod(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = 1.0 / coeffs.len() as f64;
    transform(coeffs, -1).into_iter().map(|c| c * scale).collect()
}

fn transform(f: &[Complex64], sign: i64) -> Vec<Complex64> {
    let m = f.len() as u64;
    if m == 0 {
        return Vec::new();
    }
    let roots = RootTable::new(m);
    (0..m)
        .into_par_iter()
        .map(|s| {
            let mut phase = 0u64;
            let mut acc = Complex64::new(0.0, 0.0);
            for &v in f {
                acc += v * roots.signed(sign * phase as i64);
                phase = (phase + s) % m;
            }
            acc
        })
        .collect()
}

/// f̂(β) = Σ_α f(α)·ψ_β(α) over F_{q^n}, `f` indexed canonically.
pub fn dft_field(spec: &FieldSpec, f: &[Complex64], cap: u64) -> Result<Spectrum> {
    let size = spec.order();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    if f.len() as u64 != size {
        return Err(Error::BadLength { expected: size as usize, found: f.len() });
    }
    let support: Vec<(u64, Complex64)> = f
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
        .map(|(i, &v)| (i as u64, v))
        .collect();
    let roots = RootTable::new(spec.p());
    let coeffs = (0..size)
        .into_par_iter()
        .map(|b| {
            let functional = spec.trace_functional(&spec.from_index(b));
            support
                .iter()
                .map(|&(a, v)| v * roots.get(spec.trace_with(&functional, a)))
                .sum()
        })
        .collect();
    Ok(Spectrum::from_coeffs(coeffs, weight_of(f)))
}

/// Largest |inverse(forward(f)) - f|.
pub fn round_trip_error(f: &[Complex64]) -> f64 {
    let back = inverse_dft_zmod(&dft_zmod(f).coeffs);
    back.iter().zip(f).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Σ_s f̂(s)·conj(ĝ(s)) against m·Σ_t f(t)·conj(g(t)) on Z/m.
///
/// The error is scaled by m·‖f‖·‖g‖, the Cauchy–Schwarz bound on either
/// side, so orthogonal pairs are judged on the same footing as f = g.
pub fn parseval_check(f: &[Complex64], g: &[Complex64]) -> Result<Check> {
    if f.len() != g.len() {
        return Err(Error::DomainMismatch);
    }
    let m = f.len() as f64;
    let fh = dft_zmod(f).coeffs;
    let gh = dft_zmod(g).coeffs;
    let lhs: Complex64 = fh.iter().zip(&gh).map(|(a, b)| a * b.conj()).sum();
    let rhs: Complex64 = f.iter().zip(g).map(|(a, b)| a * b.conj()).sum::<Complex64>() * m;
    let scale = (m * weight_of(f).sqrt() * weight_of(g).sqrt()).max(f64::MIN_POSITIVE);
    Ok(Check::at_most("parseval", (lhs - rhs).norm() / scale, PARSEVAL_TOLERANCE))
}

/// Σ|f̂|² against m·Σ|f|².
pub fn plancherel_check(f: &[Complex64]) -> Check {
    Check::at_most("plancherel", dft_zmod(f).plancherel_error(), PARSEVAL_TOLERANCE)
}

/// (1/m) Σ_t Σ_s ω^{t(n-s)} f(s) = f(n) at every n; reports the largest error.
///
/// The t-sum is the detection kernel at n - s, so each point costs O(m) once
/// the kernel is tabulated.
pub fn kernel_identity_check(f: &[Complex64]) -> Check {
    let m = f.len() as u64;
    let kernel = DetectionKernel::new(m.max(1));
    let worst = (0..m)
        .map(|n| {
            let k: Complex64 = f
                .iter()
                .enumerate()
                .map(|(s, &v)| v * kernel.value(n as i64 - s as i64))
                .sum();
            (k - f[n as usize]).norm()
        })
        .fold(0.0, f64::max);
    Check::at_most("kernel_identity", worst, ROUND_TRIP_TOLERANCE)
}

/// Salem/Weyl summary of an indicator set against a reporting cap.
#[derive(Debug, Clone, PartialEq)]
pub struct SalemVerdict {
    pub cardinality: u64,
    pub domain_size: u64,
    pub sup_nonzero: f64,
    pub salem_ratio: f64,
    pub weyl_ratio: f64,
    pub constant_cap: f64,
    /// `salem_ratio ≤ constant_cap`; false for the empty set.
    pub within_cap: bool,
    /// The ratio is undefined on the empty set.
    pub empty: bool,
}

pub fn salem_verdict(set: &IndicatorSet, constant_cap: f64, cap: u64) -> Result<SalemVerdict> {
    let spectrum = set.spectrum(cap)?;
    Ok(verdict_from(&spectrum, set.cardinality(), constant_cap))
}

pub fn verdict_from(spectrum: &Spectrum, cardinality: u64, constant_cap: f64) -> SalemVerdict {
    let empty = cardinality == 0;
    SalemVerdict {
        cardinality,
        domain_size: spectrum.size(),
        sup_nonzero: spectrum.sup_nonzero,
        salem_ratio: spectrum.salem_ratio,
        weyl_ratio: spectrum.weyl_ratio,
        constant_cap,
        within_cap: !empty && spectrum.salem_ratio <= constant_cap,
        empty,
    }
}
