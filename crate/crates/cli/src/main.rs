//! `wsat`: weak saturation numbers, closures and matroid lower bounds from the command line.
//!
//! Every run writes one JSON report (to `--out` or stdout) and appends a line to the
//! ledger `./runs.ndjson` (override with `WSAT_LEDGER`). Exit codes: 0 success,
//! 1 bad input, 2 timeout (partial bounds reported), 3 verification failure.

mod inputs;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wsat_core::experiments::{affine_tail_fit, remark_check};
use wsat_core::field::DEFAULT_PRIME;
use wsat_core::hyper_tools::{appendix_missing_edges, clique_wsat_formula, sharpness};
use wsat_core::lift::{lift_bound, lift_upper_transfer, LiftReport};
use wsat_core::matroid::{full_rank, rank, verify_weakly_saturated, MatroidOracle, RankReport, VerificationReport};
use wsat_core::patterns::with_multiplicity;
use wsat_core::percolation::closure;
use wsat_core::solver::{wsat_bnb, wsat_bounds, wsat_exhaustive, SolveOptions, EXHAUSTIVE_CAP};
use wsat_core::{Error, PatternFamily, UniformHypergraph};

#[derive(Parser, Serialize)]
#[command(name = "wsat", version, about = "Weak saturation numbers and matroid lower bounds")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    #[serde(skip)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Weak saturation number of a host for a pattern family.
    Wsat(WsatArgs),
    /// Lower bound through the k-fold multigraph lift.
    Lift(LiftArgs),
    /// Rank of a matroid on the host, optionally verified against patterns.
    Rank(RankArgs),
    /// Bootstrap percolation closure of a start graph.
    Closure(ClosureArgs),
    /// Sharpness of a pattern with a witness.
    Sharpness {
        #[arg(long)]
        pattern: String,
    },
    /// The disjoint-union family built from a tight cycle and a clique.
    AppendixFamily {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        v1: usize,
        #[arg(long)]
        v2: usize,
    },
    /// C(n, r) - C(n - s + r, r).
    Formula {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
    },
    /// Compares wsat on G(n, p) with wsat on K_n over seeded trials.
    Remark(RemarkArgs),
    /// Affine tail fit of `n:f` samples.
    Affine {
        /// Comma-separated `n:f` pairs, or a file of them.
        #[arg(long)]
        samples: String,
    },
}

#[derive(Args, Serialize, Clone)]
struct MatroidArgs {
    /// `count`, `linear` or `file:<path>`; repeatable where several bounds are allowed.
    #[arg(long)]
    matroid: Vec<String>,
    /// Count matroid slots per vertex.
    #[arg(long)]
    q: Option<u32>,
    /// Count matroid with q = C(k, 2); for `lift` also the lift multiplicity.
    #[arg(long)]
    k: Option<u32>,
    /// Dimension of the linear construction (default: pattern order minus r).
    #[arg(long)]
    d: Option<usize>,
    /// Field prime for linear matroids.
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    /// Exhaustive when the host is small enough, branch and bound otherwise.
    Exact,
    Bnb,
    Exhaustive,
    /// Certified lower bounds against the constructed upper bound.
    Bounds,
}

#[derive(Args, Serialize)]
struct WsatArgs {
    #[arg(long)]
    host: String,
    /// Pattern; repeat for a family.
    #[arg(long, required = true)]
    pattern: Vec<String>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Seconds before branch and bound reports an interval.
    #[arg(long)]
    timeout: Option<f64>,
    #[command(flatten)]
    matroid: MatroidArgs,
}

#[derive(Args, Serialize)]
struct LiftArgs {
    #[arg(long)]
    host: String,
    #[arg(long)]
    pattern: String,
    /// A weakly saturated seed of the simple host whose k-fold lift is checked.
    #[arg(long)]
    upper: Option<String>,
    #[command(flatten)]
    matroid: MatroidArgs,
}

#[derive(Args, Serialize)]
struct RankArgs {
    #[arg(long)]
    host: String,
    /// Subgraph of the host whose rank is reported (default: the host).
    #[arg(long)]
    subset: Option<String>,
    /// Patterns to verify the matroid against.
    #[arg(long)]
    pattern: Vec<String>,
    #[command(flatten)]
    matroid: MatroidArgs,
}

#[derive(Args, Serialize)]
struct ClosureArgs {
    #[arg(long)]
    host: String,
    #[arg(long)]
    start: String,
    #[arg(long, required = true)]
    pattern: Vec<String>,
}

#[derive(Args, Serialize)]
struct RemarkArgs {
    #[arg(long)]
    n: usize,
    /// Edge probability.
    #[arg(long)]
    p: f64,
    #[arg(long, default_value = "clique:3")]
    pattern: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-trial timeout in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Also write one CSV row per trial here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct FormulaReport {
    n: usize,
    r: usize,
    s: usize,
    value: u64,
}

#[derive(Serialize)]
struct AppendixReport {
    r: usize,
    v1: usize,
    v2: usize,
    missing_edges: usize,
    components: usize,
    hypergraph: UniformHypergraph,
}

#[derive(Serialize)]
struct LiftCliReport {
    #[serde(flatten)]
    report: LiftReport,
    /// Size of the lifted seed when `--upper` was given and its lift percolates.
    transfer: Option<usize>,
}

#[derive(Serialize)]
struct RankCliReport {
    matroid: String,
    #[serde(flatten)]
    rank: RankReport,
    verification: Option<VerificationReport>,
}

fn timeout(secs: Option<f64>) -> Result<SolveOptions> {
    let timeout = match secs {
        Some(s) if !(s >= 0.0 && s.is_finite()) => bail!("timeout must be a non-negative number of seconds"),
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    Ok(SolveOptions { timeout })
}

fn family(specs: &[String]) -> Result<PatternFamily> {
    let patterns = specs.iter().map(|s| inputs::hypergraph(s)).collect::<Result<Vec<_>>>()?;
    Ok(PatternFamily::with_labels(patterns, specs.iter().cloned().map(Some).collect())?)
}

fn matroids(args: &MatroidArgs, host: &UniformHypergraph, pattern_n: usize) -> Result<Vec<Box<dyn MatroidOracle>>> {
    args.matroid.iter().map(|m| inputs::matroid(m, host, args, pattern_n)).collect()
}

fn one_matroid(args: &MatroidArgs, host: &UniformHypergraph, pattern_n: usize, default: &str) -> Result<Box<dyn MatroidOracle>> {
    match args.matroid.as_slice() {
        [] => inputs::matroid(default, host, args, pattern_n),
        [m] => inputs::matroid(m, host, args, pattern_n),
        _ => bail!("exactly one --matroid is expected here"),
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Wsat(a) => {
            let host = inputs::hypergraph(&a.host)?;
            let fam = family(&a.pattern)?;
            let ms = matroids(&a.matroid, &host, fam.max_vertices())?;
            let refs: Vec<&dyn MatroidOracle> = ms.iter().map(|m| m.as_ref()).collect();
            let opts = timeout(a.timeout)?;
            let rep = match a.mode {
                Mode::Exhaustive => wsat_exhaustive(&host, &fam)?,
                Mode::Exact if host.instance_count() <= EXHAUSTIVE_CAP && refs.is_empty() => wsat_exhaustive(&host, &fam)?,
                Mode::Exact | Mode::Bnb => wsat_bnb(&host, &fam, &refs, opts)?,
                Mode::Bounds => wsat_bounds(&host, &fam, &refs)?,
            };
            let code = if rep.timed_out { 2 } else { 0 };
            emit(cli, "wsat", &rep, code)
        }
        Command::Lift(a) => {
            let g = inputs::hypergraph(&a.host)?;
            let f = inputs::hypergraph(&a.pattern)?;
            let k = a.matroid.k.context("lift needs --k")?;
            let gk = with_multiplicity(&g, k)?;
            let m = one_matroid(&a.matroid, &gk, f.n(), "count")?;
            let report = lift_bound(&g, &f, k, m.as_ref())?;
            let transfer = match &a.upper {
                Some(spec) => Some(lift_upper_transfer(&g, &f, k, &inputs::hypergraph(spec)?)?),
                None => None,
            };
            emit(cli, "lift", &LiftCliReport { report, transfer }, 0)
        }
        Command::Rank(a) => {
            let host = inputs::hypergraph(&a.host)?;
            let fam = if a.pattern.is_empty() { None } else { Some(family(&a.pattern)?) };
            let pattern_n = fam.as_ref().map_or(0, |f| f.max_vertices());
            let m = one_matroid(&a.matroid, &host, pattern_n, "linear")?;
            let rank = match &a.subset {
                Some(spec) => rank(m.as_ref(), &inputs::hypergraph(spec)?.instances())?,
                None => full_rank(m.as_ref()),
            };
            let verification = match &fam {
                Some(f) => Some(verify_weakly_saturated(m.as_ref(), &host, f, None)?),
                None => None,
            };
            let code = if verification.as_ref().is_some_and(|v| !v.verified) { 3 } else { 0 };
            emit(
                cli,
                "rank",
                &RankCliReport {
                    matroid: m.describe(),
                    rank,
                    verification,
                },
                code,
            )
        }
        Command::Closure(a) => {
            let host = inputs::hypergraph(&a.host)?;
            let start = inputs::hypergraph(&a.start)?;
            emit(cli, "closure", &closure(&host, &start, &family(&a.pattern)?)?, 0)
        }
        Command::Sharpness { pattern } => emit(cli, "sharpness", &sharpness(&inputs::hypergraph(pattern)?)?, 0),
        Command::AppendixFamily { r, v1, v2 } => {
            let missing = appendix_missing_edges(*r, *v1, *v2)?.len();
            let hypergraph = wsat_core::hyper_tools::appendix_family(*r, *v1, *v2)?;
            let report = AppendixReport {
                r: *r,
                v1: *v1,
                v2: *v2,
                missing_edges: missing,
                components: missing + 1,
                hypergraph,
            };
            emit(cli, "appendix-family", &report, 0)
        }
        Command::Formula { n, r, s } => {
            let value = clique_wsat_formula(*n, *r, *s)?;
            emit(cli, "formula", &FormulaReport { n: *n, r: *r, s: *s, value }, 0)
        }
        Command::Remark(a) => {
            let f = inputs::hypergraph(&a.pattern)?;
            let summary = remark_check(a.n, a.p, &f, a.trials, a.seed, timeout(a.timeout)?)?;
            if let Some(path) = &a.csv {
                write_csv(path, &summary.rows)?;
            }
            emit(cli, "remark", &summary, 0)
        }
        Command::Affine { samples } => emit(cli, "affine", &affine_tail_fit(&inputs::samples(samples)?)?, 0),
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn emit<T: Serialize>(cli: &Cli, name: &str, result: &T, code: u8) -> Result<u8> {
    output::emit(name, cli, result, cli.out.as_deref(), code as i32)?;
    Ok(code)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Unverified(_) | Error::SelfVerification(_) | Error::Percolation(_) | Error::Degenerate(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
