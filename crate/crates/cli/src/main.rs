//! `salemfield`: classify finite-field elements, compute spectra of the
//! arithmetic indicator sets, and run the bound suites.

mod commands;
mod error;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use commands::{Params, Target};
use error::{CliError, CliResult};
use report::Report;

#[derive(Parser, Debug)]
#[command(name = "salemfield", version, about = "Primitive normal elements and Salem spectra over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Modulus, x^n - 1 factorization, class totals and the primitive normal fixture.
    Field,
    /// Exhaustive census with indicator cross-validation.
    Classify,
    /// Spectrum of one indicator set.
    Spectrum {
        #[arg(value_enum)]
        target: Target,
    },
    /// Spectrum statistics across a range of primes or fields.
    SalemScan {
        #[arg(long, value_enum, default_value_t = Target::Pn)]
        target: Target,
    },
    /// Totient sweep, density grid and randomized bilinear trials.
    BoundsCheck,
    /// field + classify + pn spectrum for one field.
    Report,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Opts {
    /// Characteristic.
    #[arg(short = 'p', global = true)]
    p: Option<u64>,
    /// Base field F_q with q = p^k.
    #[arg(short = 'k', global = true, default_value_t = 1)]
    k: u32,
    /// Extension degree over F_q.
    #[arg(short = 'n', global = true)]
    n: Option<u32>,
    /// Inclusive prime range lo:hi.
    #[arg(long, global = true, value_parser = parse_range)]
    prime_range: Option<(u64, u64)>,
    /// Comma-separated field list p:n or p:n:k.
    #[arg(long, global = true, value_parser = parse_fields)]
    fields: Option<FieldList>,
    /// Domain-size limit for exhaustive work.
    #[arg(long, global = true, env = "SALEMFIELD_CAP", default_value_t = salemfield::DEFAULT_CAP)]
    cap: u64,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Randomized trials per field in bounds-check.
    #[arg(long, global = true, default_value_t = 1000)]
    trials: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Full spectrum as CSV (index, re, im, abs); the path defaults to one
    /// derived from --out.
    #[arg(long, global = true, num_args = 0..=1)]
    dump_coeffs: Option<Option<PathBuf>>,
    /// Record wall-clock time per stage (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone)]
struct FieldList(Vec<(u64, u32, u32)>);

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = lo.trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("hi: {e}"))?;
    Ok((lo, hi))
}

fn parse_fields(s: &str) -> Result<FieldList, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{item}: {e}"));
        match parts.as_slice() {
            [p, n] => out.push((num(p)?, 1, num(n)? as u32)),
            [p, n, k] => out.push((num(p)?, num(k)? as u32, num(n)? as u32)),
            _ => return Err(format!("{item}: expected p:n or p:n:k")),
        }
    }
    Ok(FieldList(out))
}

impl Cli {
    fn command_name(&self) -> &'static str {
        match self.command {
            Command::Field => "field",
            Command::Classify => "classify",
            Command::Spectrum { .. } => "spectrum",
            Command::SalemScan { .. } => "salem-scan",
            Command::BoundsCheck => "bounds-check",
            Command::Report => "report",
        }
    }

    /// Echo of everything that affects report content; workers and the
    /// output path do not.
    fn config(&self) -> Map<String, Value> {
        let o = &self.opts;
        let target = match self.command {
            Command::Spectrum { target } | Command::SalemScan { target } => Some(target.name()),
            _ => None,
        };
        let fields = o.fields.as_ref().map(|f| {
            f.0.iter().map(|(p, k, n)| format!("{p}:{n}:{k}")).collect::<Vec<_>>()
        });
        let value = json!({
            "command": self.command_name(),
            "target": target,
            "p": o.p,
            "k": o.k,
            "n": o.n,
            "prime_range": o.prime_range.map(|(lo, hi)| [lo, hi]),
            "fields": fields,
            "cap": o.cap,
            "seed": o.seed,
            "trials": o.trials,
            "format": match o.format { Format::Json => "json", Format::Csv => "csv" },
        });
        match value {
            Value::Object(m) => m,
            _ => unreachable!(),
        }
    }

    fn params(&self) -> Params {
        let o = &self.opts;
        Params {
            p: o.p,
            k: o.k,
            n: o.n,
            prime_range: o.prime_range,
            fields: o.fields.as_ref().map(|f| f.0.clone()),
            cap: o.cap,
            seed: o.seed,
            trials: o.trials,
        }
    }

    fn coeffs_path(&self) -> Option<PathBuf> {
        let explicit = self.opts.dump_coeffs.as_ref()?;
        Some(explicit.clone().unwrap_or_else(|| match &self.opts.out {
            Some(out) => out.with_extension("coeffs.csv"),
            None => PathBuf::from("spectrum-coeffs.csv"),
        }))
    }
}

fn run(cli: &Cli) -> CliResult<bool> {
    if let Some(w) = cli.opts.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let coeffs = cli.coeffs_path();
    if coeffs.is_some() && !matches!(cli.command, Command::Spectrum { .. } | Command::Report) {
        return Err(CliError::Usage("--dump-coeffs applies to spectrum and report".into()));
    }
    let params = cli.params();
    let mut report = Report::new(cli.config(), cli.opts.timing);
    let spectrum = match cli.command {
        Command::Field => commands::cmd_field(&params, &mut report).map(|_| None),
        Command::Classify => commands::cmd_classify(&params, &mut report).map(|_| None),
        Command::Spectrum { target } => commands::cmd_spectrum(&params, target, &mut report),
        Command::SalemScan { target } => commands::cmd_salem_scan(&params, target, &mut report).map(|_| None),
        Command::BoundsCheck => commands::cmd_bounds_check(&params, &mut report).map(|_| None),
        Command::Report => commands::cmd_report(&params, &mut report),
    }?;
    if let (Some(path), Some(s)) = (coeffs, spectrum) {
        commands::write_coeffs(&path, &s)?;
    }
    let mut sink: Box<dyn Write> = match &cli.opts.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.opts.format {
        Format::Json => report.write_json(&mut *sink)?,
        Format::Csv => report.write_csv(&mut *sink)?,
    }
    sink.flush()?;
    let failures = report.failures();
    for f in &failures {
        eprintln!("check failed: {f}");
    }
    Ok(failures.is_empty())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
