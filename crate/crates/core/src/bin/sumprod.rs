//! Command-line front end: set generation, per-set statistics, batch
//! verification suites, and exponent-ratio sweeps.
//!
//! Exit codes: 0 all checks passed, 1 an exact assertion was violated,
//! 2 usage or parse error. Asymptotic observations are report-only and
//! never affect the exit code.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sumprod_core::gen::{generate, parse_family_spec, parse_generator_spec};
use sumprod_core::geometry::ClaimVertices;
use sumprod_core::rational::{parse_rational, rat, Rational};
use sumprod_core::report::{bound_report, BoundReport};
use sumprod_core::set::{read_set_file, render_set};
use sumprod_core::suite::{run_suite, sweep, RunConfig, SuiteKind};
use sumprod_core::Error;

#[derive(Parser)]
#[command(name = "sumprod", version, about = "exact sum/product set laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Sector half-width as a rational p/q.
    #[arg(long, default_value = "1/100", value_parser = parse_eps)]
    epsilon: Rational,
    /// Seed for all randomized generation.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
}

fn parse_eps(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s)?;
    if r <= rat(0, 1) {
        return Err("epsilon must be positive".into());
    }
    Ok(r)
}

#[derive(Subcommand)]
enum Command {
    /// Generate a set and print it in the set file format.
    Gen {
        /// Generator spec: ap:start,step,n | gp:start,ratio,n |
        /// lattice:w,h | random:n | sector:n
        spec: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sizes, energies and observed exponent ratios for a set file.
    Stats {
        /// Path to a set file (`re im` per line).
        file: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run a verification suite over a generated family.
    Verify {
        /// identities | claim | incidence | all
        #[arg(long)]
        suite: String,
        /// Family spec `kind:n_max`, e.g. mixed:16 or sector:12.
        #[arg(long, default_value = "mixed:12")]
        family: String,
        /// Number of sets to generate and check.
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Restrict the construction's tree vertices to the popular ratio
        /// lines instead of the full ratio set.
        #[arg(long)]
        popular: bool,
        /// Directory for counterexample artifacts.
        #[arg(long)]
        artifacts: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// One statistics row per size over a family.
    Sweep {
        /// Family spec `kind:n_max` (n_max ignored; sizes come from --sizes).
        #[arg(long, default_value = "ap:8")]
        family: String,
        /// Comma-separated sizes, e.g. 4,8,16,32.
        #[arg(long)]
        sizes: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn emit(common: &CommonOpts, text: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn budget_from_env() -> Result<Option<u64>, Error> {
    match std::env::var("SUMPROD_BUDGET_MS") {
        Ok(v) => v
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::BadParams(format!("bad SUMPROD_BUDGET_MS value {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn rows_to_text(rows: &[BoundReport], format: &str) -> String {
    if format == "csv" {
        let mut out = String::from(BoundReport::csv_header());
        out.push('\n');
        for r in rows {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    } else {
        let vals: Vec<_> = rows.iter().map(|r| r.to_json()).collect();
        format!("{}\n", serde_json::to_string_pretty(&vals).unwrap())
    }
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { spec, common } => {
            let generator = parse_generator_spec(&spec, common.seed, &common.epsilon)?;
            let set = generate(&generator)?;
            emit(&common, &render_set(&set))?;
            Ok(true)
        }
        Command::Stats { file, common } => {
            let set = read_set_file(&file)?;
            let id = file
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "set".into());
            let report = bound_report(&id, &set)?;
            let text = if common.format == "csv" {
                format!("{}\n{}\n", BoundReport::csv_header(), report.csv_row())
            } else {
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report.to_json()).unwrap()
                )
            };
            emit(&common, &text)?;
            Ok(true)
        }
        Command::Verify {
            suite,
            family,
            count,
            popular,
            artifacts,
            common,
        } => {
            let cfg = RunConfig {
                suite: SuiteKind::parse(&suite)?,
                family: parse_family_spec(&family)?,
                count,
                seed: common.seed,
                epsilon: common.epsilon.clone(),
                claim_vertices: if popular {
                    ClaimVertices::PopularLines
                } else {
                    ClaimVertices::FullRatioSet
                },
                budget_ms: budget_from_env()?,
                artifact_dir: artifacts,
            };
            let outcome = run_suite(&cfg)?;
            let mut text = outcome.lines.join("\n");
            text.push('\n');
            emit(&common, &text)?;
            Ok(outcome.passed)
        }
        Command::Sweep {
            family,
            sizes,
            common,
        } => {
            let spec = parse_family_spec(&family)?;
            let sizes: Vec<usize> = sizes
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::BadParams(format!("bad size {s:?}")))
                })
                .collect::<Result<_, _>>()?;
            let rows = sweep(
                spec,
                &sizes,
                common.seed,
                &common.epsilon,
                budget_from_env()?,
            )?;
            let format = if common.format == "json" { "json" } else { "csv" };
            emit(&common, &rows_to_text(&rows, format))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
