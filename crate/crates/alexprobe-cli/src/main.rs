//! Command-line frontend: classify matrix files, run censuses and type
//! searches over model spaces, and check Euclidean embeddability.
//!
//! Exit codes are stable: 0 = success (including Degenerate classifications
//! and completed scans), 1 = I/O, parse, or usage failure, 2 = invalid
//! metric, 3 = negative verdict (search exhausted its budget, or the array
//! does not embed).

mod report;
mod spec_arg;

use alexprobe::classify::{classify_array, DEFAULT_HULL_EPS};
use alexprobe::forms::{
    associated_form, negative_index, realize_points, spectrum, DEFAULT_SPECTRAL_TOL,
};
use alexprobe::metric::{
    parse_matrix, validate_metric, DistanceMatrix, MetricError, DEFAULT_TRIANGLE_SLACK,
};
use alexprobe::search::{census, find_type, SearchTarget, DEFAULT_SEARCH_STEP};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::Rng;
use report::{Payload, Report};
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_INVALID_METRIC: i32 = 2;
const EXIT_NEGATIVE: i32 = 3;

/// Valid targets for `search`, as exposed on the command line.
const CLI_TARGETS: &str = "quadra3, quadra4, penta3, penta4, penta5";

#[derive(Parser)]
#[command(name = "alexprobe", version, about = "Classify 4- and 5-point metric arrays and probe model spaces for comparison types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a 3x3, 4x4, or 5x5 distance matrix file
    Classify(ClassifyArgs),
    /// Sample a model space and tally classification outcomes
    Scan(ScanArgs),
    /// Search a model space for an array of a target type
    Search(SearchArgs),
    /// Check Euclidean embeddability of an n-point matrix (n <= 16)
    EmbedCheck(EmbedArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Print the JSON report on stdout (human summary moves to stderr)
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Distance matrix file (whitespace/comma separated, '#' comments)
    path: PathBuf,
    /// Relative spectral tolerance
    #[arg(long, default_value_t = DEFAULT_SPECTRAL_TOL)]
    tol: f64,
    /// Relative tolerance for hull predicates
    #[arg(long, default_value_t = DEFAULT_HULL_EPS)]
    eps: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Space spec: inline grammar, inline JSON, or @file (see README)
    #[arg(long)]
    space: String,
    /// Points per sampled array
    #[arg(long, value_parser = clap::value_parser!(u64).range(4..=5))]
    arity: u64,
    /// Number of arrays to sample
    #[arg(long)]
    samples: u64,
    /// RNG seed (randomized when omitted; always echoed in the report)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SPECTRAL_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_HULL_EPS)]
    eps: f64,
    /// Worker threads (default: all cores; env ALEXPROBE_THREADS)
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SearchArgs {
    /// Space spec: inline grammar, inline JSON, or @file (see README)
    #[arg(long)]
    space: String,
    /// Target type: quadra3, quadra4, penta3, penta4, or penta5
    #[arg(long)]
    target: String,
    /// Evaluation budget
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    /// RNG seed (randomized when omitted; always echoed in the report)
    #[arg(long)]
    seed: Option<u64>,
    /// Initial Gaussian perturbation step in model coordinates
    #[arg(long, default_value_t = DEFAULT_SEARCH_STEP)]
    step: f64,
    /// Worker threads (default: all cores; env ALEXPROBE_THREADS)
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EmbedArgs {
    /// Distance matrix file (n <= 16)
    path: PathBuf,
    /// Write realized coordinates (one point per line) here when embeddable
    #[arg(long, value_name = "PATH")]
    realize: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SPECTRAL_TOL)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            EXIT_USAGE
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Search(args) => cmd_search(args),
        Command::EmbedCheck(args) => cmd_embed_check(args),
    }
}

/// Configures the global rayon pool from --threads or ALEXPROBE_THREADS.
fn configure_threads(threads: Option<usize>) -> Result<()> {
    let threads = threads.or_else(|| {
        std::env::var("ALEXPROBE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    Ok(())
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| rand::rng().random())
}

/// Writes the report per the output flags; human summaries have already
/// gone to stderr or stdout by the time this runs.
fn emit_report(report: &Report, output: &OutputArgs) -> Result<()> {
    let json = serde_json::to_string_pretty(report).context("serializing report")?;
    if output.json {
        println!("{json}");
    }
    if let Some(path) = &output.out {
        fs::write(path, json.as_bytes())
            .with_context(|| format!("writing report to {}", path.display()))?;
    }
    Ok(())
}

/// Prints the human-readable result line(s): to stderr when stdout carries
/// the JSON report, to stdout otherwise.
fn emit_human(output: &OutputArgs, text: &str) {
    if output.json {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
}

fn load_matrix(path: &PathBuf) -> Result<Vec<Vec<f64>>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_matrix(&text).with_context(|| format!("parsing {}", path.display()))?)
}

/// Validates a raw matrix; on violation prints the full list and emits an
/// InvalidMetric report, returning the exit code instead of a matrix.
fn validate_or_report(
    raw: &[Vec<f64>],
    tol: f64,
    started: Instant,
    output: &OutputArgs,
) -> Result<std::result::Result<DistanceMatrix, i32>> {
    match validate_metric(raw, DEFAULT_TRIANGLE_SLACK) {
        Ok(d) => Ok(Ok(d)),
        Err(MetricError::Violations(violations)) => {
            emit_human(output, "invalid metric:");
            for v in &violations {
                emit_human(output, &format!("  {v}"));
            }
            let report = Report::new(
                None,
                tol,
                None,
                started.elapsed().as_secs_f64(),
                Payload::InvalidMetric { violations },
            );
            emit_report(&report, output)?;
            Ok(Err(EXIT_INVALID_METRIC))
        }
        Err(other) => Err(other.into()),
    }
}

fn cmd_classify(args: ClassifyArgs) -> Result<i32> {
    let started = Instant::now();
    let raw = load_matrix(&args.path)?;
    let n = raw.len();
    if !(3..=5).contains(&n) {
        eprintln!("error: unsupported arity for classification; use embed-check");
        return Ok(EXIT_USAGE);
    }
    let d = match validate_or_report(&raw, args.tol, started, &args.output)? {
        Ok(d) => d,
        Err(code) => return Ok(code),
    };

    if n == 3 {
        // a valid triple is Euclidean iff its form is PSD; no combinatorial
        // type exists below four points
        let form = associated_form(&d, 2).expect("base in range");
        let s = spectrum(&form, args.tol);
        let psd = negative_index(&s).count == 0;
        emit_human(
            &args.output,
            &format!(
                "{} (eigenvalues: {})",
                if psd { "PSD" } else { "not PSD" },
                format_floats(&s.eigenvalues)
            ),
        );
        let report = Report::new(
            None,
            args.tol,
            Some(args.eps),
            started.elapsed().as_secs_f64(),
            Payload::TriangleCheck {
                psd,
                eigenvalues: s.eigenvalues,
            },
        );
        emit_report(&report, &args.output)?;
        return Ok(EXIT_OK);
    }

    let c = classify_array(&d, args.tol, args.eps)?;
    let mut lines = format!(
        "{}\neigenvalues: {}",
        c.comparison_type.label(),
        format_floats(&c.eigenvalues)
    );
    if let Some(proj) = &c.projection {
        if !proj.hull.is_empty() {
            let hull: Vec<String> = proj.hull.iter().map(|i| i.to_string()).collect();
            lines.push_str(&format!("\nhull order: {}", hull.join(" ")));
        }
    }
    emit_human(&args.output, &lines);
    let report = Report::new(
        None,
        args.tol,
        Some(args.eps),
        started.elapsed().as_secs_f64(),
        Payload::from_classification(n, &c),
    );
    emit_report(&report, &args.output)?;
    Ok(EXIT_OK)
}

fn cmd_scan(args: ScanArgs) -> Result<i32> {
    configure_threads(args.threads)?;
    let started = Instant::now();
    let spec = spec_arg::parse_space_arg(&args.space)?;
    let seed = resolve_seed(args.seed);
    let c = census(&spec, args.arity as usize, args.samples, seed, args.tol, args.eps)?;

    let mut summary = format!(
        "census: {} arity {} samples {} seed {}",
        args.space, args.arity, args.samples, seed
    );
    for (tag, count) in &c.counts {
        summary.push_str(&format!("\n  {:<14} {}", tag.label(), count));
    }
    for (reason, count) in &c.degenerate_reasons {
        summary.push_str(&format!("\n  Degenerate({reason}) {count}"));
    }
    emit_human(&args.output, &summary);

    let report = Report::new(
        Some(seed),
        args.tol,
        Some(args.eps),
        started.elapsed().as_secs_f64(),
        Payload::Census { census: c },
    );
    emit_report(&report, &args.output)?;
    Ok(EXIT_OK)
}

fn cmd_search(args: SearchArgs) -> Result<i32> {
    configure_threads(args.threads)?;
    let started = Instant::now();
    let spec = spec_arg::parse_space_arg(&args.space)?;
    let target = match SearchTarget::parse(&args.target) {
        Ok(t @ (SearchTarget::Quadra3
        | SearchTarget::Quadra4
        | SearchTarget::Penta3
        | SearchTarget::Penta4
        | SearchTarget::Penta5)) => t,
        _ => {
            eprintln!(
                "error: '{}' is not a searchable target; valid targets: {CLI_TARGETS}",
                args.target
            );
            return Ok(EXIT_USAGE);
        }
    };
    let seed = resolve_seed(args.seed);
    let result = find_type(&spec, target, args.budget, seed, args.step)?;

    let summary = if result.found {
        format!(
            "found {target} after {} evaluations (margin {:.3e}, seed {seed})",
            result.evaluations, result.margin
        )
    } else {
        format!(
            "no {target} found within {} evaluations (seed {seed}); absence is not proven",
            result.evaluations
        )
    };
    emit_human(&args.output, &summary);
    if let Some(array) = &result.array {
        emit_human(&args.output, array.to_text().trim_end());
    }

    let found = result.found;
    let report = Report::new(
        Some(seed),
        DEFAULT_SPECTRAL_TOL,
        Some(DEFAULT_HULL_EPS),
        started.elapsed().as_secs_f64(),
        Payload::Search {
            space: spec,
            target,
            budget: args.budget,
            step: args.step,
            result,
        },
    );
    emit_report(&report, &args.output)?;
    Ok(if found { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_embed_check(args: EmbedArgs) -> Result<i32> {
    let started = Instant::now();
    let raw = load_matrix(&args.path)?;
    let d = match validate_or_report(&raw, args.tol, started, &args.output)? {
        Ok(d) => d,
        Err(code) => return Ok(code),
    };
    let n = d.n();
    let form = associated_form(&d, n - 1).expect("base in range");
    let s = spectrum(&form, args.tol);
    let embeddable = negative_index(&s).count == 0;
    let min_eigenvalue = s.eigenvalues[0];

    let coordinates = if embeddable {
        let pts = realize_points(&d)?;
        if let Some(path) = &args.realize {
            let mut text = String::new();
            for p in &pts {
                let line: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
                text.push_str(&line.join(" "));
                text.push('\n');
            }
            fs::write(path, text.as_bytes())
                .with_context(|| format!("writing coordinates to {}", path.display()))?;
        }
        Some(pts)
    } else {
        None
    };

    emit_human(
        &args.output,
        &format!(
            "{} (eigenvalues: {})",
            if embeddable {
                "embeddable".to_string()
            } else {
                format!("not embeddable; most negative eigenvalue {min_eigenvalue:e}")
            },
            format_floats(&s.eigenvalues)
        ),
    );

    let report = Report::new(
        None,
        args.tol,
        None,
        started.elapsed().as_secs_f64(),
        Payload::EmbedCheck {
            n,
            embeddable,
            eigenvalues: s.eigenvalues.clone(),
            min_eigenvalue,
            coordinates,
        },
    );
    emit_report(&report, &args.output)?;
    Ok(if embeddable { EXIT_OK } else { EXIT_NEGATIVE })
}

fn format_floats(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:.6e}"))
        .collect::<Vec<_>>()
        .join(", ")
}
