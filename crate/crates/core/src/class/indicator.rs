//! The four characteristic functions: divisor sums over multiplicative and
//! additive characters, and the divisor-free forms built on the q^n-point
//! detection kernel. Each evaluator returns the raw complex sum; rounding to
//! {0, 1} goes through [`round_indicator`], which refuses values that are not
//! integral to within [`INTEGRITY_TOLERANCE`].

use super::{Classifier, LogTable};
use crate::arith::{self, gcd, mobius, totient};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::{mobius_poly, totient_poly, PolyQ};
use crate::roots::{unit_root, RootTable};
use crate::DEFAULT_CAP;
use num_complex::Complex64;

/// Largest accepted distance between an indicator sum and its rounding.
pub const INTEGRITY_TOLERANCE: f64 = 1e-6;

/// Round a characteristic-function value to 0 or 1.
pub fn round_indicator(raw: Complex64, what: &'static str) -> Result<bool> {
    let r = raw.re.round().clamp(0.0, 1.0);
    let residual = (raw.re - r).abs().max(raw.im.abs());
    if residual >= INTEGRITY_TOLERANCE {
        return Err(Error::NumericalIntegrity { what, residual });
    }
    Ok(r == 1.0)
}

/// χ(a) = exp(2πi · j · log_τ(a) / d) for a character of order d | q^n - 1,
/// with χ(0) = 0.
pub fn mult_character(d: u64, j: u64, table: &LogTable, a: &FieldElement) -> Result<Complex64> {
    let order = table.group_order();
    if d == 0 || !order.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, order });
    }
    if j == 0 || j > d || gcd(j, d) != 1 {
        return Err(Error::OutOfDomain(format!("character index {j} is not a unit mod {d}")));
    }
    if a.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let log = table.log(a)?;
    Ok(unit_root(j as i128 * log as i128, d))
}

/// The detection kernel (1/m) Σ_{t=0}^{m-1} exp(2πi·Δ·t/m), tabulated for
/// every residue of Δ and split into its t = 0 and t ≠ 0 parts.
#[derive(Debug, Clone)]
pub struct DetectionKernel {
    m: u64,
    rest: Vec<Complex64>,
}

impl DetectionKernel {
    /// O(m²): every tabulated value is a direct m-term sum.
    pub fn new(m: u64) -> Self {
        assert!(m >= 1, "kernel modulus must be positive");
        let roots = RootTable::new(m);
        let scale = 1.0 / m as f64;
        let rest = (0..m)
            .map(|r| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut phase = 0u64;
                for _ in 1..m {
                    phase = (phase + r) % m;
                    acc += roots.get(phase);
                }
                acc * scale
            })
            .collect();
        Self { m, rest }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// The t = 0 term, 1/m.
    pub fn head(&self) -> f64 {
        1.0 / self.m as f64
    }

    /// Σ over t ≠ 0, for the integer Δ.
    pub fn tail(&self, delta: i64) -> Complex64 {
        self.rest[delta.rem_euclid(self.m as i64) as usize]
    }

    /// The whole kernel at Δ: 1 at Δ ≡ 0, 0 otherwise (up to rounding).
    pub fn value(&self, delta: i64) -> Complex64 {
        self.tail(delta) + self.head()
    }

    /// Σ_{s ∈ targets} kernel(s - log), as its (t = 0, t ≠ 0) parts.
    pub fn sum_parts(&self, targets: &[u64], log: u64) -> [Complex64; 2] {
        let head = Complex64::new(targets.len() as f64 * self.head(), 0.0);
        let tail = targets.iter().map(|&s| self.tail(s as i64 - log as i64)).sum();
        [head, tail]
    }
}

fn nonzero(a: &FieldElement) -> Result<()> {
    if a.is_zero() {
        Err(Error::ZeroElement)
    } else {
        Ok(())
    }
}

/// (φ(N)/N) Σ_{d | N} (μ(d)/φ(d)) Σ_{ord χ = d} χ(a) with N = q^n - 1.
#[derive(Debug, Clone)]
pub struct PrimitiveDivisorSum<'a> {
    table: &'a LogTable,
    prefactor: f64,
    terms: Vec<(u64, f64)>,
}

impl<'a> PrimitiveDivisorSum<'a> {
    pub fn new(table: &'a LogTable) -> Self {
        let order = table.group_order();
        // μ(d) = 0 kills every non-squarefree d
        let terms = arith::divisors(order)
            .into_iter()
            .filter(|&d| mobius(d) != 0)
            .map(|d| (d, mobius(d) as f64 / totient(d) as f64))
            .collect();
        Self { table, prefactor: totient(order) as f64 / order as f64, terms }
    }

    pub fn eval(&self, a: &FieldElement) -> Result<Complex64> {
        nonzero(a)?;
        let log = self.table.log(a)? as i128;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(d, w) in &self.terms {
            let inner: Complex64 = (1..=d)
                .filter(|&j| gcd(j, d) == 1)
                .map(|j| unit_root(j as i128 * log, d))
                .sum();
            acc += inner * w;
        }
        Ok(acc * self.prefactor)
    }

    pub fn indicator(&self, a: &FieldElement) -> Result<bool> {
        round_indicator(self.eval(a)?, "primitive divisor-sum indicator")
    }
}

/// Σ_{1 ≤ s ≤ q^n-1, gcd(s, q^n-1) = 1} kernel(s - log_τ a), kernel modulus q^n.
#[derive(Debug, Clone)]
pub struct PrimitiveDivisorFree<'a> {
    table: &'a LogTable,
    kernel: &'a DetectionKernel,
    targets: Vec<u64>,
}

impl<'a> PrimitiveDivisorFree<'a> {
    pub fn new(table: &'a LogTable, kernel: &'a DetectionKernel) -> Result<Self> {
        let order = table.group_order();
        if kernel.modulus() != order + 1 {
            return Err(Error::DomainMismatch);
        }
        // logs live in [0, order); reducing s keeps F_2, where s = order = 1, detectable
        let targets = (1..=order).filter(|&s| gcd(s, order) == 1).map(|s| s % order).collect();
        Ok(Self { table, kernel, targets })
    }

    /// The coprime exponents s the kernel compares against.
    pub fn targets(&self) -> &[u64] {
        &self.targets
    }

    /// Kernel sum for a given log value, split at t = 0.
    pub fn parts_for_log(&self, log: u64) -> [Complex64; 2] {
        self.kernel.sum_parts(&self.targets, log)
    }

    pub fn eval(&self, a: &FieldElement) -> Result<Complex64> {
        nonzero(a)?;
        let [head, tail] = self.parts_for_log(self.table.log(a)?);
        Ok(head + tail)
    }

    pub fn indicator(&self, a: &FieldElement) -> Result<bool> {
        round_indicator(self.eval(a)?, "primitive divisor-free indicator")
    }
}

/// (Φ_q(x^n-1)/q^n) Σ_{d | x^n-1} (μ_q(d)/Φ_q(d)) Σ_{Ord ψ = d} ψ(a), where
/// Ord ψ_β is the Frobenius order polynomial of β.
#[derive(Debug, Clone)]
pub struct NormalDivisorSum {
    spec: FieldSpec,
    prefactor: f64,
    roots: RootTable,
    /// (canonical index of β, μ_q(Ord β)/Φ_q(Ord β)), nonzero weights only.
    weighted: Vec<(u64, f64)>,
}

impl NormalDivisorSum {
    pub fn new(classifier: &Classifier, cap: u64) -> Result<Self> {
        let spec = classifier.spec().clone();
        let size = spec.order();
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        let weights = classifier
            .divisors()
            .iter()
            .map(|d| {
                let mu = mobius_poly(d)?;
                let phi = if d.is_one() { 1 } else { totient_poly(d)? };
                Ok(mu as f64 / phi as f64)
            })
            .collect::<Result<Vec<f64>>>()?;
        let mut weighted = Vec::new();
        for b in 0..size {
            let w = weights[classifier.frobenius_order_rank(&spec.from_index(b))?];
            if w != 0.0 {
                weighted.push((b, w));
            }
        }
        Ok(Self {
            prefactor: classifier.normal_total() as f64 / size as f64,
            roots: RootTable::new(spec.p()),
            spec,
            weighted,
        })
    }

    pub fn eval(&self, a: &FieldElement) -> Result<Complex64> {
        nonzero(a)?;
        if !a.spec().same(&self.spec) {
            return Err(Error::SpecMismatch);
        }
        let functional = self.spec.trace_functional(a);
        let acc: Complex64 = self
            .weighted
            .iter()
            .map(|&(b, w)| self.roots.get(self.spec.trace_with(&functional, b)) * w)
            .sum();
        Ok(acc * self.prefactor)
    }

    pub fn indicator(&self, a: &FieldElement) -> Result<bool> {
        round_indicator(self.eval(a)?, "normal divisor-sum indicator")
    }
}

/// Σ_{deg s < n, gcd(s, x^n-1) = 1} kernel(log_τ(s∘η) - log_τ a), kernel
/// modulus q^n.
#[derive(Debug, Clone)]
pub struct NormalDivisorFree<'a> {
    table: &'a LogTable,
    kernel: &'a DetectionKernel,
    targets: Vec<u64>,
}

impl<'a> NormalDivisorFree<'a> {
    pub fn new(
        classifier: &Classifier,
        eta: &FieldElement,
        table: &'a LogTable,
        kernel: &'a DetectionKernel,
    ) -> Result<Self> {
        let spec = classifier.spec();
        if kernel.modulus() != spec.order() || table.group_order() + 1 != spec.order() {
            return Err(Error::DomainMismatch);
        }
        if !classifier.is_normal(eta)? {
            return Err(Error::NotNormal);
        }
        let n = spec.n() as usize;
        let mut conj = Vec::with_capacity(n);
        let mut c = eta.clone();
        for _ in 0..n {
            let next = c.frobenius_q();
            conj.push(c);
            c = next;
        }
        let xn1 = classifier.x_n_minus_one();
        let mut targets = Vec::new();
        for idx in 1..spec.order() {
            let s = PolyQ::from_index(spec, idx, n);
            if crate::poly::poly_gcd(&s, xn1)?.is_one() {
                targets.push(table.log(&s.act_on_conjugates(&conj))?);
            }
        }
        Ok(Self { table, kernel, targets })
    }

    /// log_τ(s∘η) for every admissible s, in canonical order of s.
    pub fn targets(&self) -> &[u64] {
        &self.targets
    }

    pub fn parts_for_log(&self, log: u64) -> [Complex64; 2] {
        self.kernel.sum_parts(&self.targets, log)
    }

    pub fn eval(&self, a: &FieldElement) -> Result<Complex64> {
        nonzero(a)?;
        let [head, tail] = self.parts_for_log(self.table.log(a)?);
        Ok(head + tail)
    }

    pub fn indicator(&self, a: &FieldElement) -> Result<bool> {
        round_indicator(self.eval(a)?, "normal divisor-free indicator")
    }
}

fn default_table(spec: &FieldSpec) -> Result<LogTable> {
    LogTable::new(&super::find_primitive_root(spec), DEFAULT_CAP)
}

/// Divisor-sum primitive indicator at `a`, with τ the smallest primitive element.
pub fn psi_primitive_divisor(a: &FieldElement) -> Result<u8> {
    nonzero(a)?;
    let table = default_table(a.spec())?;
    Ok(PrimitiveDivisorSum::new(&table).indicator(a)? as u8)
}

pub fn psi_primitive_divisorfree(a: &FieldElement, table: &LogTable) -> Result<u8> {
    nonzero(a)?;
    let kernel = DetectionKernel::new(a.spec().order());
    Ok(PrimitiveDivisorFree::new(table, &kernel)?.indicator(a)? as u8)
}

pub fn psi_normal_divisor(a: &FieldElement) -> Result<u8> {
    nonzero(a)?;
    let c = Classifier::new(a.spec())?;
    Ok(NormalDivisorSum::new(&c, DEFAULT_CAP)?.indicator(a)? as u8)
}

pub fn psi_normal_divisorfree(a: &FieldElement, eta: &FieldElement, table: &LogTable) -> Result<u8> {
    nonzero(a)?;
    let c = Classifier::new(a.spec())?;
    let kernel = DetectionKernel::new(a.spec().order());
    Ok(NormalDivisorFree::new(&c, eta, table, &kernel)?.indicator(a)? as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_field;
    use crate::class::find_primitive_root;

    fn f8() -> FieldSpec {
        build_field(2, 1, 3, None).unwrap()
    }

    fn el(spec: &FieldSpec, c: &[u64]) -> FieldElement {
        spec.element(c.to_vec()).unwrap()
    }

    #[test]
    fn kernel_detects_zero() {
        for m in [2u64, 7, 12, 64] {
            let k = DetectionKernel::new(m);
            assert!((k.value(0) - 1.0).norm() < 1e-12);
            for d in 1..m as i64 {
                assert!(k.value(d).norm() < 1e-12);
                assert!(k.value(-d).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rounding_rejects_non_integral_values() {
        assert!(round_indicator(Complex64::new(1.0 + 1e-9, -1e-9), "t").unwrap());
        assert!(!round_indicator(Complex64::new(-1e-9, 0.0), "t").unwrap());
        assert!(matches!(
            round_indicator(Complex64::new(0.5, 0.0), "t"),
            Err(Error::NumericalIntegrity { .. })
        ));
        assert!(round_indicator(Complex64::new(1.0, 1e-3), "t").is_err());
        assert!(round_indicator(Complex64::new(2.0, 0.0), "t").is_err());
    }

    #[test]
    fn character_examples() {
        let f = f8();
        let t = LogTable::full(&f.gen()).unwrap();
        for a in f.elements().skip(1) {
            assert!((mult_character(1, 1, &t, &a).unwrap() - 1.0).norm() < 1e-15);
        }
        let chi = mult_character(7, 1, &t, &f.gen()).unwrap();
        assert!((chi - unit_root(1, 7)).norm() < 1e-15);
        assert_eq!(mult_character(7, 1, &t, &f.zero()).unwrap(), Complex64::new(0.0, 0.0));
        assert!(matches!(mult_character(3, 1, &t, &f.gen()), Err(Error::NotDivisor { .. })));
        assert!(mult_character(7, 7, &t, &f.gen()).is_err());

        let f9 = build_field(3, 1, 2, None).unwrap();
        let tau = find_primitive_root(&f9);
        let t9 = LogTable::full(&tau).unwrap();
        assert!((mult_character(2, 1, &t9, &tau).unwrap() + 1.0).norm() < 1e-15);
    }

    #[test]
    fn primitive_indicator_examples() {
        let f = f8();
        assert_eq!(psi_primitive_divisor(&f.one()).unwrap(), 0);
        assert_eq!(psi_primitive_divisor(&f.gen()).unwrap(), 1);
        let f9 = build_field(3, 1, 2, None).unwrap();
        assert_eq!(psi_primitive_divisor(&f9.gen()).unwrap(), 0);
        assert_eq!(psi_primitive_divisor(&f.zero()).unwrap_err(), Error::ZeroElement);

        let t = LogTable::full(&f.gen()).unwrap();
        assert_eq!(psi_primitive_divisorfree(&f.gen(), &t).unwrap(), 1);
        assert_eq!(psi_primitive_divisorfree(&el(&f, &[0, 1, 1]), &t).unwrap(), 1);
        let tau9 = find_primitive_root(&f9);
        let t9 = LogTable::full(&tau9).unwrap();
        let a = tau9.pow(2);
        assert_eq!(t9.log(&a).unwrap(), 2);
        assert_eq!(psi_primitive_divisorfree(&a, &t9).unwrap(), 0);
    }

    #[test]
    fn normal_indicator_examples() {
        let f = f8();
        let eta = el(&f, &[1, 1, 0]);
        assert_eq!(psi_normal_divisor(&eta).unwrap(), 1);
        assert_eq!(psi_normal_divisor(&f.gen()).unwrap(), 0);
        assert_eq!(psi_normal_divisor(&f.one()).unwrap(), 0);

        let t = LogTable::full(&f.gen()).unwrap();
        assert_eq!(psi_normal_divisorfree(&eta, &eta, &t).unwrap(), 1);
        assert_eq!(psi_normal_divisorfree(&el(&f, &[1, 0, 1]), &eta, &t).unwrap(), 1);
        assert_eq!(psi_normal_divisorfree(&f.gen(), &eta, &t).unwrap(), 0);
        assert_eq!(psi_normal_divisorfree(&f.gen(), &f.gen(), &t).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn four_way_agreement_on_small_fields() {
        for (p, k, n) in [(2u64, 1u32, 4u32), (3, 1, 3), (2, 2, 2), (5, 1, 2), (3, 2, 1), (2, 1, 1)] {
            let f = build_field(p, k, n, None).unwrap();
            let c = Classifier::new(&f).unwrap();
            let table = LogTable::full(&find_primitive_root(&f)).unwrap();
            let kernel = DetectionKernel::new(f.order());
            let eta = crate::class::find_normal_element(&f);
            let pds = PrimitiveDivisorSum::new(&table);
            let pdf = PrimitiveDivisorFree::new(&table, &kernel).unwrap();
            let nds = NormalDivisorSum::new(&c, DEFAULT_CAP).unwrap();
            let ndf = NormalDivisorFree::new(&c, &eta, &table, &kernel).unwrap();
            for a in f.elements().skip(1) {
                let prim = c.is_primitive(&a).unwrap();
                let norm = c.is_normal(&a).unwrap();
                assert_eq!(pds.indicator(&a).unwrap(), prim, "{a}");
                assert_eq!(pdf.indicator(&a).unwrap(), prim, "{a}");
                assert_eq!(nds.indicator(&a).unwrap(), norm, "{a}");
                assert_eq!(ndf.indicator(&a).unwrap(), norm, "{a}");
            }
        }
    }
}
