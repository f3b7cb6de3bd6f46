use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use wradius_core::{BoundId, ComplexMatrix, SweepPolicy, Verdict};
use wradius_harness::analyze::{analyze, AnalyzeConfig, ChainReport, MatrixDigest};
use wradius_harness::corpus::{verify_corpus, CorpusConfig, CorpusSummary, DEFAULT_COUNT, DEFAULT_SEED};
use wradius_harness::export::{export_range, ExportFormat};
use wradius_harness::generate::{fixture, generate, GeneratorSpec, Kind};
use wradius_harness::io::{read_matrix_file, sig17, to_report_json, write_file, write_matrix};
use wradius_harness::search::{sharpness_search, SearchConfig};
use wradius_harness::{HarnessError, Result};

/// Upper slack on a sharpness ratio before it counts as a violated bound.
const RATIO_SLACK: f64 = 1e-7;

#[derive(Debug, Parser)]
#[command(name = "wradius", version, about = "Numerical radius bound analysis and corpus verification")]
struct Cli {
    /// Sweep refinement tolerance (relative accuracy of w).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Number of coarse sweep angles.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Power-mean exponents, comma separated.
    #[arg(long = "r", global = true, value_delimiter = ',')]
    r: Option<Vec<f64>>,

    /// Output format; which formats apply depends on the subcommand.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Suppress status lines on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every bound and equality test on one matrix.
    Analyze {
        /// Matrix file in the JSON matrix format.
        #[arg(required_unless_present = "example", conflicts_with = "example")]
        file: Option<PathBuf>,
        /// Built-in example: ex_i, ex_ii, shift3, th13_b, diag_1_i, e12.
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze a generated corpus and summarize every invariant.
    Verify {
        #[arg(long, default_value_t = DEFAULT_COUNT)]
        count: usize,
        /// Inclusive dimension range, e.g. 2..8.
        #[arg(long, default_value = "2..8")]
        dims: DimRange,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Comma-separated ensemble kinds (default: all six).
        #[arg(long, value_delimiter = ',')]
        kinds: Option<Vec<String>>,
        /// Directory for failing matrices and their digests.
        #[arg(long)]
        replay_dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export boundary points of the numerical range.
    Range {
        #[arg(required_unless_present = "example", conflicts_with = "example")]
        file: Option<PathBuf>,
        #[arg(long)]
        example: Option<String>,
        #[arg(long, default_value_t = 360)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Hill-climb towards matrices where a bound is tight.
    Search {
        #[arg(long)]
        bound: String,
        #[arg(long, default_value_t = 5000)]
        iters: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated matrix to a file.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long, required_unless_present = "example")]
        dim: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy)]
struct DimRange(usize, usize);

impl FromStr for DimRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad dimension '{t}': {e}"));
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!("dimension range '{s}' must satisfy 1 <= lo <= hi"));
        }
        Ok(DimRange(lo, hi))
    }
}

/// Exit status of a finished command.
enum Outcome {
    Pass,
    VerdictFailure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::VerdictFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Applies `WRADIUS_THREADS`; `0` runs everything on the calling thread.
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("WRADIUS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| HarnessError::Config(format!("WRADIUS_THREADS must be a nonnegative integer, got '{raw}'")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build_global()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

impl Cli {
    fn policy(&self) -> SweepPolicy {
        let mut p = SweepPolicy::default();
        if let Some(tol) = self.tol {
            p.tol = tol;
        }
        if let Some(grid) = self.grid {
            p.grid_n = grid;
        }
        p
    }

    fn analyze_config(&self) -> Result<AnalyzeConfig> {
        let mut cfg = AnalyzeConfig {
            policy: self.policy(),
            ..AnalyzeConfig::default()
        };
        if let Some(r) = &self.r {
            cfg.r_list = r.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn format_or(&self, default: Format, allowed: &[Format], command: &str) -> Result<Format> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(HarnessError::Config(format!("--format {f:?} is not supported by '{command}'").to_lowercase()))
        }
    }

    fn status(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(file: Option<&Path>, example: Option<&str>) -> Result<(ComplexMatrix, MatrixDigest)> {
    match (file, example) {
        (_, Some(id)) => {
            let a = fixture(id)?;
            let n = a.dim();
            Ok((a, MatrixDigest::example(id, n)))
        }
        (Some(path), None) => {
            let a = read_matrix_file(path)?;
            let n = a.dim();
            Ok((a, MatrixDigest::file(&path.display().to_string(), n)))
        }
        (None, None) => Err(HarnessError::Config("a matrix file or --example is required".into())),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze { file, example, out } => {
            let format = cli.format_or(Format::Json, &[Format::Json, Format::Csv], "analyze")?;
            let config = cli.analyze_config()?;
            let (a, digest) = load(file.as_deref(), example.as_deref())?;
            let report = analyze(&a, digest, &config)?;
            let text = match format {
                Format::Csv => report_csv(&report),
                _ => to_report_json(&report)?,
            };
            emit(out.as_deref(), &text)?;
            let failed: Vec<&str> = report.failed_verdicts().map(|v| v.id.as_str()).collect();
            cli.status(&format!(
                "{}: w^2 = {}, {} verdicts, {} failed, {} errors",
                report.input.digest.label(),
                sig17(report.w_sq),
                report.verdicts.len(),
                failed.len(),
                report.errors.len()
            ));
            for id in &failed {
                cli.status(&format!("  FAIL {id}"));
            }
            for e in &report.errors {
                cli.status(&format!("  ERROR {e}"));
            }
            Ok(if report.passed() { Outcome::Pass } else { Outcome::VerdictFailure })
        }
        Command::Verify {
            count,
            dims,
            seed,
            kinds,
            replay_dir,
            out,
        } => {
            let format = cli.format_or(Format::Json, &[Format::Json, Format::Csv], "verify")?;
            let kinds = match kinds {
                Some(list) => list.iter().map(|k| k.parse::<Kind>()).collect::<Result<Vec<_>>>()?,
                None => Kind::ENSEMBLES.to_vec(),
            };
            let config = CorpusConfig {
                count: *count,
                dim_min: dims.0,
                dim_max: dims.1,
                seed: *seed,
                kinds,
                analyze: cli.analyze_config()?,
                replay_dir: replay_dir.clone(),
            };
            let summary = verify_corpus(&config)?;
            let text = match format {
                Format::Csv => summary_csv(&summary),
                _ => to_report_json(&summary)?,
            };
            emit(out.as_deref(), &text)?;
            cli.status(&format!(
                "corpus of {} (seed {}): {} passed, {} failed, {} violations",
                summary.count, summary.master_seed, summary.matrices_passed, summary.matrices_failed, summary.violations
            ));
            Ok(if summary.passed() { Outcome::Pass } else { Outcome::VerdictFailure })
        }
        Command::Range {
            file,
            example,
            points,
            out,
        } => {
            let format = match cli.format_or(Format::Csv, &[Format::Csv, Format::Svg], "range")? {
                Format::Svg => ExportFormat::Svg,
                _ => ExportFormat::Csv,
            };
            let (a, digest) = load(file.as_deref(), example.as_deref())?;
            let text = export_range(&a, *points, format, &cli.policy())?;
            write_file(out, &text)?;
            cli.status(&format!("{}: {} boundary points -> {}", digest.label(), points, out.display()));
            Ok(Outcome::Pass)
        }
        Command::Search {
            bound,
            iters,
            seed,
            dim,
            out,
        } => {
            let format = cli.format_or(Format::Json, &[Format::Json, Format::Csv], "search")?;
            let bound: BoundId = bound.parse()?;
            let config = SearchConfig {
                n: *dim,
                iters: *iters,
                seed: *seed,
                policy: cli.policy(),
                ..SearchConfig::default()
            };
            let result = sharpness_search(bound, &config)?;
            let text = match format {
                Format::Csv => format!(
                    "{},{},{},{},{}\n",
                    result.bound,
                    result.n,
                    result.seed,
                    result.iters,
                    sig17(result.ratio)
                ),
                _ => to_report_json(&result)?,
            };
            emit(out.as_deref(), &text)?;
            cli.status(&format!("{}: best ratio {} after {} iterations", result.bound, sig17(result.ratio), result.iters));
            Ok(if result.ratio <= 1.0 + RATIO_SLACK {
                Outcome::Pass
            } else {
                Outcome::VerdictFailure
            })
        }
        Command::Gen {
            kind,
            dim,
            seed,
            scale,
            example,
            out,
        } => {
            cli.format_or(Format::Json, &[Format::Json], "gen")?;
            let kind: Kind = kind.parse()?;
            let spec = if kind == Kind::Fixture {
                let id = example
                    .as_deref()
                    .ok_or_else(|| HarnessError::Config("--kind paper_example needs --example".into()))?;
                GeneratorSpec::example(id)
            } else {
                GeneratorSpec {
                    scale: *scale,
                    ..GeneratorSpec::new(kind, dim.unwrap_or(0), *seed)
                }
            };
            let a = generate(&spec)?;
            write_file(out, &write_matrix(&a))?;
            cli.status(&format!("{kind} n={} -> {}", a.dim(), out.display()));
            Ok(Outcome::Pass)
        }
    }
}

fn verdict_row(out: &mut String, v: &Verdict) {
    let status = match v.status {
        wradius_core::Status::Pass => "pass",
        wradius_core::Status::Fail => "fail",
        wradius_core::Status::Skipped => "skipped",
    };
    let _ = writeln!(out, "verdict,{},{},{},{},{}", v.id, status, sig17(v.lhs), sig17(v.rhs), sig17(v.margin));
}

/// `section,key,value` rows. Verdict rows carry the status followed by `lhs,rhs,margin`.
fn report_csv(r: &ChainReport) -> String {
    let mut out = String::new();
    let mut row = |section: &str, key: &str, value: f64| {
        let _ = writeln!(out, "{section},{key},{}", sig17(value));
    };
    let lo = &r.lower_bounds;
    for (k, v) in [
        ("kittaneh_lower", lo.kittaneh_lower),
        ("th1_L1", lo.th1_l1),
        ("th1_L2", lo.th1_l2),
        ("cor1", lo.cor1),
        ("beta1", lo.beta1),
        ("beta2", lo.beta2),
        ("beta_max", lo.beta_max),
        ("remark_refined", lo.remark_refined),
        ("theor16", lo.theor16),
        ("thn16", lo.thn16),
        ("thp_limit", lo.thp_limit),
        ("theor17", lo.theor17),
    ] {
        row("lower_bounds", k, v);
    }
    for p in &lo.thp {
        row("lower_bounds", &format!("thp[r={}]", p.r), p.value);
    }
    let up = &r.upper_bounds;
    for (k, v) in [
        ("kittaneh_upper", up.kittaneh_upper),
        ("dragomir", up.dragomir),
        ("th13", up.th13),
        ("th14_as_sq", up.th14_as_sq),
        ("thp1_as_sq", up.thp1_as_sq),
    ] {
        row("upper_bounds", k, v);
    }
    row("w_sq", "w_sq", r.w_sq);
    for v in &r.verdicts {
        verdict_row(&mut out, v);
    }
    out
}

/// One row per invariant family: `id,pass,fail,skipped,worst_margin`.
fn summary_csv(s: &CorpusSummary) -> String {
    let mut out = String::new();
    for inv in &s.invariants {
        let margin = inv.worst_margin.map_or_else(String::new, sig17);
        let _ = writeln!(out, "{},{},{},{},{}", inv.id, inv.pass, inv.fail, inv.skipped, margin);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_range_parsing() {
        let r: DimRange = "2..8".parse().unwrap();
        assert_eq!((r.0, r.1), (2, 8));
        let r: DimRange = "3..=5".parse().unwrap();
        assert_eq!((r.0, r.1), (3, 5));
        let r: DimRange = "4".parse().unwrap();
        assert_eq!((r.0, r.1), (4, 4));
        assert!("5..2".parse::<DimRange>().is_err());
        assert!("0..2".parse::<DimRange>().is_err());
        assert!("a..b".parse::<DimRange>().is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
