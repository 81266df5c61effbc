//! `racsim`: sampling, CDF evaluation, validation and loop-count benchmarks.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

mod format;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use racsim::sampler::{Mode, DEFAULT_LOOP_CAP};
use racsim::validate::{self, Suite, ValidationConfig};
use racsim::{CopulaSpec, Error, Generator, MeasureSpec, Sampler, SharedMeasure, SimplexLaw};

#[derive(Parser, Debug)]
#[command(name = "racsim", version, about = "Exact simulation of reciprocal Archimedean copulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw samples and write them as CSV.
    Sample(SampleArgs),
    /// Evaluate the copula distribution function at one point.
    Cdf(CdfArgs),
    /// Run a validation suite and print a JSON-lines report.
    Validate(ValidateArgs),
    /// Estimate the mean number of loop iterations.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// Radial measure as JSON, or `@path` to read it from a file.
    #[arg(long)]
    measure: String,
    /// Dimension; may be omitted when the measure fixes it.
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    /// Simplex law as JSON; non-uniform laws produce raw max-id output.
    #[arg(long)]
    simplex: Option<String>,
    #[arg(long)]
    n: usize,
    #[arg(long, env = "RACSIM_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the raw vector `y` instead of `u = F(y)`.
    #[arg(long)]
    raw: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = DEFAULT_LOOP_CAP)]
    loop_cap: usize,
}

#[derive(Args, Debug)]
struct CdfArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    /// Comma-separated point in `[0, 1]^d`.
    #[arg(long, allow_hyphen_values = true)]
    u: String,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// One of margins, copula, oracle, loops, singular, williamson, all.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Points per draw of the truncation oracle.
    #[arg(long = "K", alias = "k", default_value_t = validate::DEFAULT_ORACLE_POINTS)]
    oracle_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scales the sampler's pseudo-inverse by this factor (negative control).
    #[arg(long, hide = true)]
    corrupt_inverse: Option<f64>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long)]
    simplex: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, env = "RACSIM_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config { .. }
            | Error::Argument(_)
            | Error::Domain { .. }
            | Error::OutOfRange { .. }
            | Error::Unsupported(_)
            | Error::Capacity { .. } => 2,
            Error::Bracket { .. }
            | Error::Numeric { .. }
            | Error::LoopCap { .. }
            | Error::Partial { .. } => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::runtime(format!("i/o error: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Cdf(a) => cmd_cdf(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Parsed measure with its JSON form and the resolved dimension.
struct ResolvedMeasure {
    json: Value,
    measure: SharedMeasure,
    dim: usize,
}

fn resolve_measure(args: &MeasureArgs) -> CliResult<ResolvedMeasure> {
    let text = match args.measure.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("configuration error in `measure`: cannot read {path}: {e}")))?,
        None => args.measure.clone(),
    };
    let json: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("configuration error in `measure`: {e}")))?;
    let spec = MeasureSpec::from_value(json.clone())?;
    let dim = args.dim.or(spec.dim()).ok_or_else(|| {
        Failure::usage("configuration error in `dim`: the measure does not fix a dimension; pass --dim")
    })?;
    if dim < 2 {
        return Err(Failure::usage(format!("configuration error in `dim`: need at least 2, got {dim}")));
    }
    let measure = spec.build(Some(dim))?;
    Ok(ResolvedMeasure { json, measure, dim })
}

fn resolve_simplex(arg: &Option<String>) -> CliResult<(Value, SimplexLaw)> {
    match arg {
        None => Ok((json!({"simplex": "uniform"}), SimplexLaw::Uniform)),
        Some(text) => {
            let value: Value = serde_json::from_str(text)
                .map_err(|e| Failure::usage(format!("configuration error in `simplex`: {e}")))?;
            let law = SimplexLaw::from_json(text)?;
            Ok((value, law))
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p).map_err(|e| {
            Failure::usage(format!("configuration error in `out`: cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_sample(a: SampleArgs) -> CliResult<u8> {
    let m = resolve_measure(&a.measure)?;
    let (simplex_json, law) = resolve_simplex(&a.simplex)?;
    if a.n == 0 {
        return Err(Failure::usage("configuration error in `n`: need at least one sample"));
    }
    if a.threads == 0 {
        return Err(Failure::usage("configuration error in `threads`: need at least one thread"));
    }
    let raw = a.raw || !law.is_uniform();
    if !raw && m.measure.total_mass().is_finite() {
        return Err(Failure::usage(
            "configuration error in `measure`: finite radial measures do not define a copula; pass --raw",
        ));
    }
    let sampler = if raw {
        Sampler::max_id(m.measure.clone(), m.dim, law)?
    } else {
        Sampler::copula(m.measure.clone(), m.dim)?
    }
    .with_loop_cap(a.loop_cap);
    let mode = match sampler.mode() {
        Mode::Copula => "copula",
        Mode::MaxId => "maxid",
    };
    let metadata = json!({
        "command": "sample",
        "measure": m.json,
        "dim": m.dim,
        "simplex": simplex_json,
        "n": a.n,
        "seed": a.seed,
        "output": if raw { "y" } else { "u" },
        "mode": mode,
        "loop_cap": a.loop_cap,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let (rows, _) = sampler.sample_batch(a.n, a.seed, a.threads)?;

    let mut out = open_output(&a.out)?;
    writeln!(out, "# {metadata}")?;
    let prefix = if raw { "y" } else { "u" };
    let header: Vec<String> = (1..=m.dim).map(|i| format!("{prefix}{i}")).collect();
    writeln!(out, "{},loops", header.join(","))?;
    let mut line = String::new();
    for r in &rows {
        line.clear();
        let values = if raw { &r.y } else { &r.u };
        for v in values {
            line.push_str(&format::round_trip(*v));
            line.push(',');
        }
        line.push_str(&r.loops.to_string());
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(0)
}

fn parse_point(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|s| {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("configuration error in `u`: cannot parse '{s}'")))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Failure::usage(format!(
                    "configuration error in `u`: coordinate {v} is outside [0, 1]"
                )));
            }
            Ok(v)
        })
        .collect()
}

fn cmd_cdf(a: CdfArgs) -> CliResult<u8> {
    let u = parse_point(&a.u)?;
    let m = resolve_measure(&a.measure)?;
    if u.len() != m.dim {
        return Err(Failure::usage(format!(
            "configuration error in `u`: {} coordinates given for dimension {}",
            u.len(),
            m.dim
        )));
    }
    if m.measure.total_mass().is_finite() {
        return Err(Failure::usage(
            "configuration error in `measure`: finite radial measures do not define a copula",
        ));
    }
    let spec = CopulaSpec::new(Generator::new(m.measure, m.dim)?);
    let value = spec.copula_cdf(&u)?;
    println!("{}", format::significant12(value));
    Ok(0)
}

fn cmd_validate(a: ValidateArgs) -> CliResult<u8> {
    let suite: Suite = a.suite.parse()?;
    if a.threads == 0 || a.oracle_points == 0 {
        return Err(Failure::usage("configuration error: threads and K must be at least 1"));
    }
    let config = ValidationConfig {
        threads: a.threads,
        oracle_points: a.oracle_points,
        corrupt_inverse: a.corrupt_inverse,
    };
    let report = validate::run_suite(suite, &config)?;
    let mut out = open_output(&a.out)?;
    for entry in &report {
        writeln!(out, "{}", entry.to_json_line())?;
    }
    out.flush()?;
    Ok(if report.iter().all(|e| e.pass) { 0 } else { 1 })
}

fn cmd_bench(a: BenchArgs) -> CliResult<u8> {
    let m = resolve_measure(&a.measure)?;
    let (simplex_json, law) = resolve_simplex(&a.simplex)?;
    if a.threads == 0 {
        return Err(Failure::usage("configuration error in `threads`: need at least one thread"));
    }
    let start = Instant::now();
    let b = validate::loop_count_benchmark(m.measure, m.dim, law, a.n, a.seed, a.threads)?;
    let per_sample = start.elapsed().as_secs_f64() / a.n as f64;
    let report = json!({
        "measure": m.json,
        "dim": m.dim,
        "simplex": simplex_json,
        "n": a.n,
        "seed": a.seed,
        "mean_loops": b.mean,
        "std_error": b.std_error,
        "ci95": [b.ci.0, b.ci.1],
        "reference": b.reference,
        "wall_time_per_sample_s": per_sample,
    });
    println!("{report}");
    Ok(0)
}
