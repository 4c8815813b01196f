use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use salemfield::arith::{primes_in, totient};
use salemfield::class::{
    find_primitive_normal, Classifier, DetectionKernel, LogTable, NormalDivisorFree, NormalDivisorSum,
    PrimitiveDivisorFree, PrimitiveDivisorSum, INTEGRITY_TOLERANCE,
};
use salemfield::poly::{normal_density_bound_check, totient_lower_bound_check};
use salemfield::spectral::{
    bilinear_bound_check, pn_spectrum, primroot_spectrum_check, qr_spectrum_check, verdict_from, Check, Domain,
    IndicatorSet, PnReport, Spectrum, TijContext, DEFAULT_SALEM_CAP, TIJ_TOLERANCE,
};
use salemfield::{build_field, Complex64, FieldSpec};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::report::{check, exact, float, Report};

/// Largest field on which `classify` cross-validates the four indicators;
/// the divisor-free forms cost O(q^n) per element.
pub const CROSS_VALIDATION_LIMIT: u64 = 4096;
/// Largest field on which the T_ij decomposition is run over every β.
pub const TIJ_LIMIT: u64 = 4096;

const TOTIENT_RANGE: (u64, u64) = (10, 100_000);
const DENSITY_X: (u64, u64) = (3, 1000);
const DENSITY_MAX_N: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    Qr,
    Primroot,
    Pn,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Qr => "qr",
            Target::Primroot => "primroot",
            Target::Pn => "pn",
        }
    }
}

pub struct Params {
    pub p: Option<u64>,
    pub k: u32,
    pub n: Option<u32>,
    pub prime_range: Option<(u64, u64)>,
    pub fields: Option<Vec<(u64, u32, u32)>>,
    pub cap: u64,
    pub seed: u64,
    pub trials: usize,
}

impl Params {
    fn field(&self) -> CliResult<FieldSpec> {
        let (Some(p), Some(n)) = (self.p, self.n) else {
            return Err(CliError::Usage("this command needs -p and -n".into()));
        };
        Ok(build_field(p, self.k, n, None)?)
    }

    fn prime(&self) -> CliResult<u64> {
        self.p.ok_or_else(|| CliError::Usage("this command needs -p".into()))
    }

    fn within_cap(&self, spec: &FieldSpec) -> CliResult<()> {
        if spec.order() > self.cap {
            return Err(salemfield::Error::CapExceeded { size: spec.order(), cap: self.cap }.into());
        }
        Ok(())
    }
}

pub fn label(spec: &FieldSpec) -> String {
    if spec.k() == 1 {
        format!("GF({}^{})", spec.p(), spec.n())
    } else {
        format!("GF(({}^{})^{})", spec.p(), spec.k(), spec.n())
    }
}

fn spectrum_summary(s: &Spectrum) -> Value {
    json!({
        "domain_size": s.size(),
        "value_at_zero": float(s.value_at_zero),
        "sup_nonzero": float(s.sup_nonzero),
        "argsup": s.argsup,
        "salem_ratio": float(s.salem_ratio),
        "weyl_ratio": float(s.weyl_ratio),
    })
}

fn salem_verdict(s: &Spectrum, cardinality: u64) -> Value {
    let v = verdict_from(s, cardinality, DEFAULT_SALEM_CAP);
    json!({
        "constant_cap": float(v.constant_cap),
        "salem_ratio": float(v.salem_ratio),
        "within_cap": v.within_cap,
        "empty": v.empty,
    })
}

fn complex(c: Complex64) -> Value {
    json!({"re": float(c.re), "im": float(c.im), "abs": float(c.norm())})
}

// ---------------------------------------------------------------- field

pub fn field_record(spec: &FieldSpec) -> CliResult<Value> {
    let classifier = Classifier::new(spec)?;
    let fixture = find_primitive_normal(spec);
    let factors: Vec<Value> = classifier
        .factorization()
        .factors
        .iter()
        .map(|(f, e)| json!({"factor": f.to_string(), "multiplicity": e}))
        .collect();
    let order = classifier.multiplicative_order(&fixture)?;
    let frob = classifier.frobenius_order(&fixture)?.degree().unwrap_or(0) as u64;
    Ok(json!({
        "target": label(spec),
        "p": spec.p(),
        "k": spec.k(),
        "n": spec.n(),
        "q": spec.q(),
        "order": spec.order(),
        "modulus": spec.modulus_string(),
        "x_n_minus_one": factors,
        "normal_total": classifier.normal_total(),
        "primitive_total": classifier.primitive_total(),
        "fixture": {"element": fixture.to_string(), "index": fixture.index()},
        "checks": [
            exact("fixture_multiplicative_order", order, spec.order() - 1),
            exact("fixture_frobenius_degree", frob, spec.n() as u64),
        ],
    }))
}

pub fn cmd_field(params: &Params, report: &mut Report) -> CliResult<()> {
    let spec = params.field()?;
    params.within_cap(&spec)?;
    let record = report.stage("field", || field_record(&spec))?;
    report.push(record);
    Ok(())
}

// ---------------------------------------------------------------- classify

struct CrossValidation {
    disagreements: u64,
    max_residual: f64,
}

fn cross_validate(spec: &FieldSpec, classifier: &Classifier, census: &salemfield::class::Census) -> CliResult<CrossValidation> {
    let tau = find_primitive_normal(spec);
    let table = LogTable::full(&tau)?;
    let kernel = DetectionKernel::new(spec.order());
    let pd = PrimitiveDivisorSum::new(&table);
    let pf = PrimitiveDivisorFree::new(&table, &kernel)?;
    let nd = NormalDivisorSum::new(classifier, spec.order())?;
    let nf = NormalDivisorFree::new(classifier, &tau, &table, &kernel)?;
    let results: Vec<(bool, f64)> = (1..spec.order())
        .into_par_iter()
        .map(|i| -> salemfield::Result<(bool, f64)> {
            let a = spec.from_index(i);
            let raw = [pd.eval(&a)?, pf.eval(&a)?, nd.eval(&a)?, nf.eval(&a)?];
            let expected = [census.primitive[i as usize], census.primitive[i as usize], census.normal[i as usize], census.normal[i as usize]];
            let mut residual = 0.0f64;
            let mut agree = true;
            for (r, e) in raw.iter().zip(expected) {
                let rounded = r.re.round();
                residual = residual.max((r - Complex64::new(rounded, 0.0)).norm());
                agree &= (rounded == 1.0) == e;
            }
            Ok((agree, residual))
        })
        .collect::<salemfield::Result<_>>()?;
    Ok(CrossValidation {
        disagreements: results.iter().filter(|(ok, _)| !ok).count() as u64,
        max_residual: results.iter().map(|r| r.1).fold(0.0, f64::max),
    })
}

pub fn classify_record(spec: &FieldSpec, cap: u64, report: &mut Report) -> CliResult<Value> {
    let classifier = Classifier::new(spec)?;
    let census = report.stage("census", || classifier.census(cap))?;
    let counts = census.counts();
    let size = spec.order() as f64;
    let mut checks = vec![
        exact("primitive_count", counts.primitive, classifier.primitive_total()),
        exact("normal_count", counts.normal, classifier.normal_total()),
    ];
    let cross = if spec.order() <= CROSS_VALIDATION_LIMIT {
        let cv = report.stage("cross_validation", || cross_validate(spec, &classifier, &census))?;
        checks.push(exact("cross_validation_disagreements", cv.disagreements, 0));
        checks.push(check(&Check::at_most("indicator_integrity", cv.max_residual, INTEGRITY_TOLERANCE)));
        json!({"status": "ok", "elements": spec.order() - 1, "disagreements": cv.disagreements, "max_residual": float(cv.max_residual)})
    } else {
        json!({"status": "skipped", "reason": format!("field larger than {CROSS_VALIDATION_LIMIT}")})
    };
    Ok(json!({
        "target": label(spec),
        "order": spec.order(),
        "primitive_count": counts.primitive,
        "normal_count": counts.normal,
        "pn_count": counts.primitive_normal,
        "primitive_density": float(classifier.primitive_total() as f64 / size),
        "normal_density": float(classifier.normal_total() as f64 / size),
        "pn_density": float(counts.primitive_normal as f64 / size),
        "cross_validation": cross,
        "checks": checks,
    }))
}

pub fn cmd_classify(params: &Params, report: &mut Report) -> CliResult<()> {
    let spec = params.field()?;
    params.within_cap(&spec)?;
    let record = classify_record(&spec, params.cap, report)?;
    report.push(record);
    Ok(())
}

// ---------------------------------------------------------------- spectrum

pub fn write_coeffs(path: &Path, s: &Spectrum) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(["index", "re", "im", "abs"])?;
    for (i, c) in s.coeffs.iter().enumerate() {
        w.write_record([i.to_string(), format!("{:.16e}", c.re), format!("{:.16e}", c.im), format!("{:.16e}", c.norm())])?;
    }
    w.flush()?;
    Ok(())
}

fn tij_record(spec: &FieldSpec, cap: u64) -> CliResult<Value> {
    if spec.order() > TIJ_LIMIT || spec.order() < 3 {
        return Ok(json!({"status": "skipped", "reason": format!("decomposition runs on 3 <= q^n <= {TIJ_LIMIT}")}));
    }
    let ctx = TijContext::new(spec, cap)?;
    let parts: Vec<_> = spec
        .elements()
        .skip(1)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|b| ctx.decompose(&b))
        .collect::<salemfield::Result<_>>()?;
    let mut worst_t00 = (0.0f64, 0u64);
    let mut worst_partition = (0.0f64, 0u64);
    for t in &parts {
        let [t00, partition] = t.checks();
        if t00.observed > worst_t00.0 {
            worst_t00 = (t00.observed, t.beta);
        }
        if partition.observed > worst_partition.0 {
            worst_partition = (partition.observed, t.beta);
        }
    }
    Ok(json!({
        "status": "ok",
        "tau": ctx.tau().to_string(),
        "frequencies": parts.len(),
        "worst_t00_beta": worst_t00.1,
        "worst_partition_beta": worst_partition.1,
        "checks": [
            check(&Check::at_most("t00_vanishes", worst_t00.0, TIJ_TOLERANCE)),
            check(&Check::at_most("partition", worst_partition.0, TIJ_TOLERANCE)),
        ],
    }))
}

fn pn_record(spec: &FieldSpec, r: &PnReport) -> Value {
    let offending: Vec<Value> = r
        .checks
        .iter()
        .filter(|c| !c.pass && c.name == "scaled_sup_bound")
        .filter_map(|_| r.spectrum.argsup)
        .map(|b| json!({"index": b, "element": spec.from_index(b).to_string()}))
        .collect();
    json!({
        "target": format!("pn {}", label(spec)),
        "primitive_count": r.primitive_count,
        "normal_count": r.normal_count,
        "pn_count": r.pn_count,
        "main_term": float(r.main_term),
        "cardinality": r.set.cardinality(),
        "spectrum": spectrum_summary(&r.spectrum),
        "scaled_sup": float(r.scaled_sup),
        "bound_constant": float(r.bound_constant),
        "offending_beta": offending,
        "salem_verdict": salem_verdict(&r.spectrum, r.set.cardinality()),
        "checks": r.checks.iter().map(check).collect::<Vec<_>>(),
    })
}

pub fn cmd_spectrum(params: &Params, target: Target, report: &mut Report) -> CliResult<Option<Spectrum>> {
    match target {
        Target::Qr => {
            let p = params.prime()?;
            if p > params.cap {
                return Err(salemfield::Error::CapExceeded { size: p, cap: params.cap }.into());
            }
            let r = report.stage("spectrum", || qr_spectrum_check(p))?;
            report.push(json!({
                "target": format!("qr mod {p}"),
                "cardinality": r.set.cardinality(),
                "spectrum": spectrum_summary(&r.spectrum),
                "gauss_sum": complex(r.gauss_sum),
                "closed_form_error": float(r.closed_form_error),
                "salem_verdict": salem_verdict(&r.spectrum, r.set.cardinality()),
                "checks": r.checks.iter().map(check).collect::<Vec<_>>(),
            }));
            Ok(Some(r.spectrum))
        }
        Target::Primroot => {
            let p = params.prime()?;
            if p > params.cap {
                return Err(salemfield::Error::CapExceeded { size: p, cap: params.cap }.into());
            }
            let r = report.stage("spectrum", || primroot_spectrum_check(p))?;
            report.push(json!({
                "target": format!("primroot mod {p}"),
                "cardinality": r.set.cardinality(),
                "spectrum": spectrum_summary(&r.spectrum),
                "bound": float(r.bound),
                "salem_verdict": salem_verdict(&r.spectrum, r.set.cardinality()),
                "checks": r.checks.iter().map(check).collect::<Vec<_>>(),
            }));
            Ok(Some(r.spectrum))
        }
        Target::Pn => {
            let spec = params.field()?;
            params.within_cap(&spec)?;
            let r = report.stage("spectrum", || pn_spectrum(&spec, params.cap))?;
            let mut record = pn_record(&spec, &r);
            let tij = report.stage("tij", || tij_record(&spec, params.cap))?;
            record["tij"] = tij;
            report.push(record);
            Ok(Some(r.spectrum))
        }
    }
}

// ---------------------------------------------------------------- salem-scan

fn skipped(target: String, size: u64, reason: String) -> Value {
    json!({"target": target, "domain_size": size, "status": "skipped", "reason": reason})
}

fn scan_row(target: String, s: &Spectrum, cardinality: u64, checks: Vec<Value>) -> Value {
    json!({
        "target": target,
        "domain_size": s.size(),
        "status": "ok",
        "cardinality": cardinality,
        "sup_nonzero": float(s.sup_nonzero),
        "salem_ratio": float(s.salem_ratio),
        "weyl_ratio": float(s.weyl_ratio),
        "checks": checks,
    })
}

fn scan_targets(params: &Params, target: Target) -> CliResult<Vec<ScanItem>> {
    match target {
        Target::Qr | Target::Primroot => {
            let (lo, hi) = params
                .prime_range
                .ok_or_else(|| CliError::Usage(format!("salem-scan --target {} needs --prime-range", target.name())))?;
            Ok(primes_in(lo, hi).into_iter().map(ScanItem::Prime).collect())
        }
        Target::Pn => {
            if let Some(fields) = &params.fields {
                return Ok(fields.iter().map(|&(p, k, n)| ScanItem::Field(p, k, n)).collect());
            }
            match (params.prime_range, params.n) {
                (Some((lo, hi)), Some(n)) => {
                    Ok(primes_in(lo, hi).into_iter().map(|p| ScanItem::Field(p, params.k, n)).collect())
                }
                _ => Err(CliError::Usage("salem-scan --target pn needs --fields, or --prime-range with -n".into())),
            }
        }
    }
}

enum ScanItem {
    Prime(u64),
    Field(u64, u32, u32),
}

fn scan_one(params: &Params, target: Target, item: &ScanItem) -> CliResult<Value> {
    match *item {
        ScanItem::Prime(p) => {
            let name = format!("{} mod {p}", target.name());
            if p > params.cap {
                return Ok(skipped(name, p, format!("exceeds cap {}", params.cap)));
            }
            if p == 2 {
                return Ok(skipped(name, p, "needs an odd prime".into()));
            }
            if target == Target::Qr {
                let r = qr_spectrum_check(p)?;
                let half = ((p - 1) / 2) as f64;
                // sup ≤ (√p+1)/2 with #E = (p-1)/2
                let bound = ((p as f64).sqrt() + 1.0) / (2.0 * half.sqrt());
                let mut checks: Vec<Value> = r.checks.iter().map(check).collect();
                checks.push(check(&Check::at_most("salem_ratio_closed_form", r.spectrum.salem_ratio, bound + 1e-12)));
                Ok(scan_row(name, &r.spectrum, r.set.cardinality(), checks))
            } else {
                let r = primroot_spectrum_check(p)?;
                Ok(scan_row(name, &r.spectrum, r.set.cardinality(), r.checks.iter().map(check).collect()))
            }
        }
        ScanItem::Field(p, k, n) => {
            let spec = build_field(p, k, n, None)?;
            let name = format!("pn {}", label(&spec));
            if spec.order() > params.cap {
                return Ok(skipped(name, spec.order(), format!("exceeds cap {}", params.cap)));
            }
            let r = pn_spectrum(&spec, params.cap)?;
            let mut checks = vec![exact("value_at_zero_is_pn_count", r.spectrum.value_at_zero.round() as u64, r.pn_count)];
            checks.extend(r.checks.iter().map(check));
            Ok(scan_row(name, &r.spectrum, r.set.cardinality(), checks))
        }
    }
}

fn weyl_trend(rows: &[Value]) -> Value {
    let mut points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r["status"] == "ok")
        .filter_map(|r| Some((r["domain_size"].as_f64()?, r["weyl_ratio"].as_f64()?)))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let steps = points.windows(2);
    let increases = steps.clone().filter(|w| w[1].1 > w[0].1).count();
    let decreases = steps.filter(|w| w[1].1 < w[0].1).count();
    // least-squares slope of log(weyl) against log(size)
    let logs: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    let slope = if logs.len() >= 2 {
        let m = logs.len() as f64;
        let (sx, sy) = logs.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
        let (mx, my) = (sx / m, sy / m);
        let cov: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let var: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if var > 0.0 { float(cov / var) } else { Value::Null }
    } else {
        Value::Null
    };
    json!({
        "points": points.len(),
        "increases": increases,
        "decreases": decreases,
        "nonincreasing": increases == 0,
        "log_log_slope": slope,
    })
}

pub fn cmd_salem_scan(params: &Params, target: Target, report: &mut Report) -> CliResult<()> {
    let items = scan_targets(params, target)?;
    for item in &items {
        let row = report.stage("scan", || scan_one(params, target, item))?;
        report.push(row);
    }
    let rows = report.records().to_vec();
    let skipped = rows.iter().filter(|r| r["status"] == "skipped").count();
    report.summarize("rows", json!(rows.len()));
    report.summarize("skipped", json!(skipped));
    report.summarize("weyl_trend", weyl_trend(&rows));
    Ok(())
}

// ---------------------------------------------------------------- bounds-check

fn violations_record(target: &str, points: u64, violations: u64, worst: (f64, Value), extra: Value) -> Value {
    let mut record = json!({
        "target": target,
        "points": points,
        "violations": violations,
        "min_margin": float(worst.0),
        "argmin": worst.1,
        "checks": [exact("violations", violations, 0)],
    });
    if let (Some(r), Value::Object(extra)) = (record.as_object_mut(), extra) {
        r.extend(extra);
    }
    record
}

fn totient_sweep() -> CliResult<Value> {
    let (lo, hi) = TOTIENT_RANGE;
    let results: Vec<(u64, salemfield::poly::BoundCheck)> = (lo..=hi)
        .into_par_iter()
        .map(|m| totient_lower_bound_check(m).map(|b| (m, b)))
        .collect::<salemfield::Result<_>>()?;
    let violations = results.iter().filter(|(_, b)| !b.pass).count() as u64;
    let (m, b) = results.iter().min_by(|a, b| a.1.margin.total_cmp(&b.1.margin)).expect("nonempty range");
    Ok(violations_record(
        "totient_lower_bound",
        results.len() as u64,
        violations,
        (b.margin, json!({"m": m, "phi": totient(*m)})),
        json!({"range": [lo, hi]}),
    ))
}

fn density_grid() -> CliResult<Value> {
    let (lo, hi) = DENSITY_X;
    let grid: Vec<(u64, u64)> = (lo..=hi).flat_map(|x| (2..=(x - 1).min(DENSITY_MAX_N)).map(move |n| (x, n))).collect();
    let results: Vec<(u64, u64, salemfield::poly::BoundCheck)> = grid
        .into_par_iter()
        .map(|(x, n)| normal_density_bound_check(x as f64, n).map(|b| (x, n, b)))
        .collect::<salemfield::Result<_>>()?;
    let violations = results.iter().filter(|r| !r.2.pass).count() as u64;
    let (x, n, b) = results.iter().min_by(|a, b| a.2.margin.total_cmp(&b.2.margin)).expect("nonempty grid");
    Ok(violations_record(
        "density_inequality",
        results.len() as u64,
        violations,
        (b.margin, json!({"x": x, "n": n})),
        json!({"x_range": [lo, hi], "max_n": DENSITY_MAX_N}),
    ))
}

/// A random nonempty subset: a uniform density, then independent membership.
pub fn random_subset(spec: &FieldSpec, rng: &mut ChaCha8Rng) -> CliResult<IndicatorSet> {
    loop {
        let density: f64 = rng.gen();
        let members: Vec<u64> = (0..spec.order()).filter(|_| rng.gen_bool(density)).collect();
        if !members.is_empty() {
            return Ok(IndicatorSet::from_members(Domain::Field(spec.clone()), members)?);
        }
    }
}

fn bilinear_trials(spec: &FieldSpec, trials: usize, seed: u64) -> CliResult<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut worst = (f64::INFINITY, Value::Null);
    let mut max_ratio = 0.0f64;
    for trial in 0..trials {
        let u = random_subset(spec, &mut rng)?;
        let v = random_subset(spec, &mut rng)?;
        let beta = spec.from_index(rng.gen_range(1..spec.order()));
        let r = bilinear_bound_check(&u, &v, &beta)?;
        max_ratio = max_ratio.max(r.sum_abs / r.bound);
        if !r.check.pass {
            violations += 1;
        }
        if r.check.margin < worst.0 {
            worst = (r.check.margin, json!({"trial": trial, "beta": beta.index(), "u": u.cardinality(), "v": v.cardinality()}));
        }
    }
    Ok(violations_record(
        &format!("bilinear {}", label(spec)),
        trials as u64,
        violations,
        worst,
        json!({"seed": seed, "max_ratio": float(max_ratio)}),
    ))
}

pub fn cmd_bounds_check(params: &Params, report: &mut Report) -> CliResult<()> {
    let totient = report.stage("totient_sweep", totient_sweep)?;
    report.push(totient);
    let density = report.stage("density_grid", density_grid)?;
    report.push(density);
    let fields = params.fields.clone().unwrap_or_else(|| vec![(2, 1, 4)]);
    for (i, (p, k, n)) in fields.into_iter().enumerate() {
        let spec = build_field(p, k, n, None)?;
        params.within_cap(&spec)?;
        // one stream per field, so adding a field leaves the others unchanged
        let seed = params.seed.wrapping_add(i as u64);
        let record = report.stage("bilinear", || bilinear_trials(&spec, params.trials, seed))?;
        report.push(record);
    }
    Ok(())
}

// ---------------------------------------------------------------- report

pub fn cmd_report(params: &Params, report: &mut Report) -> CliResult<Option<Spectrum>> {
    let spec = params.field()?;
    params.within_cap(&spec)?;
    let field = report.stage("field", || field_record(&spec))?;
    report.push(field);
    let classify = classify_record(&spec, params.cap, report)?;
    report.push(classify);
    cmd_spectrum(params, Target::Pn, report)
}
