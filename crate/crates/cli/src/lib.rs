//! The `ndl` command-line tool. Every subcommand maps onto one `ndl-core`
//! operation; see [`run`] for the exit-code contract.

mod input;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ndl_core::caps::{check_cap, SizeCaps};
use ndl_core::factors::phi_with_witness;
use ndl_core::hamiltonize::DEFAULT_BUDGET_CONSTANT;
use ndl_core::mixing::verify_mixing;
use ndl_core::permanent::{bregman_bound, regular_upper, vdw_lower, LogBound};
use ndl_core::{
    certify, factor_histogram, hamilton_count_exact, janson_expectation_gnm,
    monte_carlo_gnp, perfect_matching_count, permanent_exact,
    phi_estimate_report, random_two_factor, replay, tail_diagnostics, trend_table,
    two_factor_to_hamilton, weighted_cycle_cover_sum, write_edge_list, Error, Graph,
    ReplayOutcome, ZeroOneMatrix,
};
use serde::Serialize;

pub use input::GeneratorArgs;
use render::Rendered;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "ndl", version, about = "Spectral certificates and exact Hamilton-cycle counts for small regular graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Exponent slack in the first growth condition.
    #[arg(long, global = true, default_value_t = 0.1)]
    pub epsilon: f64,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Lowers every exact-counter vertex cap (NDL_SIZE_CAP does the same).
    #[arg(long, global = true)]
    pub size_cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph as an edge list.
    Gen {
        #[command(flatten)]
        generator: GeneratorArgs,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Spectral certificate of a regular graph.
    Certify(InputArgs),
    /// Check the expander mixing lemma on sampled vertex-set pairs.
    Mixing {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Multiply the certified lambda before checking (values below 1 are a negative control).
        #[arg(long, default_value_t = 1.0)]
        lambda_scale: f64,
    },
    /// Exact permanent of the adjacency matrix with its bounds.
    Permanent(InputArgs),
    /// Exact counts.
    Count {
        #[arg(value_enum)]
        what: CountKind,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Maximum 2-factor count over induced subgraphs on k vertices.
    Phi {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
        /// Also walk the spectral estimate chain with t = n - k removed vertices.
        #[arg(long)]
        estimate: bool,
    },
    /// Turn a random 2-factor into a Hamilton cycle by rotations.
    Hamiltonize {
        #[command(flatten)]
        input: InputArgs,
        /// Seed for the 2-factor; defaults to --seed.
        #[arg(long)]
        factor_seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET_CONSTANT)]
        budget_constant: f64,
    },
    /// Exact counts against every bound, with pass/fail checks.
    Report(InputArgs),
    /// Split of the weighted 2-factor sum at the component-count threshold.
    Tail(InputArgs),
    /// Random-graph expectations and trend tables.
    Experiment {
        #[command(subcommand)]
        which: Experiment,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    Hamilton,
    Matchings,
    TwoFactors,
    Weighted,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Monte Carlo mean of the Hamilton-cycle count in G(n, p).
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Expected Hamilton-cycle count in G(n, m).
    Gnm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Normalized Hamilton counts over random-regular graphs.
    Trend {
        #[arg(long, value_delimiter = ',', default_values_t = [10, 12, 14, 16, 18, 20])]
        ns: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 6])]
        ds: Vec<usize>,
    },
}

/// A graph given either as an edge-list file or by generator flags.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge-list file, or `-` for stdin.
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub generator: GeneratorArgs,
}

/// What went wrong, sorted by exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<Rendered, Failure>;

/// Parses `args` and runs the subcommand. Returns 0 on success, 1 when a
/// checked mathematical invariant fails, and 2 on usage or input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
                return EXIT_OK;
            }
            let _ = write!(err, "{text}");
            return EXIT_USAGE;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let _ = out.write_all(r.body.as_bytes());
            if let Some(msg) = &r.violation {
                let _ = writeln!(err, "invariant violated: {msg}");
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn caps(cli: &Cli) -> Result<SizeCaps, Failure> {
    let caps = SizeCaps::from_env()?;
    Ok(match cli.size_cap {
        Some(limit) => caps.lowered_to(limit),
        None => caps,
    })
}

fn execute(cli: &Cli) -> Outcome {
    let caps = caps(cli)?;
    let fmt = cli.format;
    match &cli.command {
        Command::Gen { generator, output } => {
            let g = generator.generate(cli.seed)?.ok_or_else(|| {
                Failure::Usage("gen needs --family".into())
            })?;
            let text = write_edge_list(&g);
            match output {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    Ok(Rendered::ok(String::new()))
                }
                None => Ok(Rendered::ok(text)),
            }
        }
        Command::Certify(input) => {
            let g = input.load(cli.seed)?;
            Rendered::record(fmt, &certify(&g, cli.epsilon)?)
        }
        Command::Mixing { input, samples, lambda_scale } => {
            let g = input.load(cli.seed)?;
            if !(lambda_scale.is_finite() && *lambda_scale > 0.0) {
                return Err(Failure::Usage("--lambda-scale must be positive".into()));
            }
            let cert = certify(&g, cli.epsilon)?;
            let cert = cert.with_lambda(cert.lambda * lambda_scale);
            let report = verify_mixing(&g, &cert, *samples, cli.seed)?;
            let violations = report.violations;
            let r = Rendered::record(fmt, &report)?;
            Ok(r.violated_if(violations > 0, || format!("{violations} mixing violations")))
        }
        Command::Permanent(input) => {
            let g = input.load(cli.seed)?;
            check_cap("permanent", g.n(), caps.permanent)?;
            permanent(&g, fmt)
        }
        Command::Count { what, input } => {
            let g = input.load(cli.seed)?;
            count(&g, *what, &caps, fmt)
        }
        Command::Phi { input, k, estimate } => {
            let g = input.load(cli.seed)?;
            check_cap("phi", g.n(), caps.phi)?;
            phi(&g, *k, *estimate, fmt)
        }
        Command::Hamiltonize { input, factor_seed, budget_constant } => {
            if fmt == Format::Csv {
                return Err(Failure::Usage("traces are JSON-only; use --format json or text".into()));
            }
            let g = input.load(cli.seed)?;
            hamiltonize(&g, cli.epsilon, factor_seed.unwrap_or(cli.seed), *budget_constant, fmt)
        }
        Command::Report(input) => {
            let g = input.load(cli.seed)?;
            let report = ndl_core::experiments::bounds_report_with_caps(&g, cli.epsilon, &caps)?;
            let ok = report.ok();
            let failed = failed_checks(&report.checks);
            Ok(Rendered::record(fmt, &report)?.violated_if(!ok, || failed))
        }
        Command::Tail(input) => {
            let g = input.load(cli.seed)?;
            check_cap("tail", g.n(), caps.enumeration)?;
            Rendered::record(fmt, &tail_diagnostics(&g)?)
        }
        Command::Experiment { which } => experiment(which, cli, &caps),
    }
}

fn failed_checks(checks: &[ndl_core::Check]) -> String {
    let names: Vec<&str> = checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
    format!("failed checks: {}", names.join(", "))
}

#[derive(Serialize)]
struct PermanentOutput {
    n: usize,
    permanent: String,
    bregman_upper: LogBound,
    #[serde(skip_serializing_if = "Option::is_none")]
    vdw_lower: Option<LogBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    regular_upper: Option<LogBound>,
    sandwich_holds: bool,
}

fn permanent(g: &Graph, fmt: Format) -> Outcome {
    let per = permanent_exact(&ZeroOneMatrix::adjacency(g))?;
    let bregman = bregman_bound(g.degrees());
    let (vdw, reg) = match g.regular_degree() {
        Some(d) => (Some(vdw_lower(g.n(), d)?), Some(regular_upper(g.n(), d)?)),
        None => (None, None),
    };
    let tol = ndl_core::experiments::BOUND_TOL;
    let holds = bregman.admits(&per, tol) && vdw.as_ref().is_none_or(|b| b.admits(&per, tol));
    if fmt == Format::Text {
        return Ok(Rendered::ok(format!("{per}\n")).violated_if(!holds, || "permanent sandwich".into()));
    }
    let out = PermanentOutput {
        n: g.n(),
        permanent: per.to_string(),
        bregman_upper: bregman,
        vdw_lower: vdw,
        regular_upper: reg,
        sandwich_holds: holds,
    };
    Ok(Rendered::record(fmt, &out)?.violated_if(!holds, || "permanent sandwich".into()))
}

#[derive(Serialize)]
struct CountOutput {
    count: &'static str,
    n: usize,
    value: String,
}

fn count(g: &Graph, what: CountKind, caps: &SizeCaps, fmt: Format) -> Outcome {
    let n = g.n();
    let (label, value) = match what {
        CountKind::Hamilton => {
            check_cap("count hamilton", n, caps.hamilton)?;
            ("hamilton", hamilton_count_exact(g)?)
        }
        CountKind::Matchings => {
            check_cap("count matchings", n, caps.matching)?;
            ("matchings", perfect_matching_count(g)?)
        }
        CountKind::Weighted => {
            check_cap("count weighted", n, caps.enumeration)?;
            ("weighted", weighted_cycle_cover_sum(g)?)
        }
        CountKind::TwoFactors => {
            check_cap("count two-factors", n, caps.enumeration)?;
            let hist = factor_histogram(g)?;
            return match fmt {
                Format::Text => Ok(Rendered::ok(format!("{}\n", hist.total))),
                Format::Json => Rendered::record(fmt, &hist),
                Format::Csv => Rendered::csv_rows(
                    &["components", "count"],
                    hist.counts.iter().map(|(s, c)| vec![s.to_string(), c.to_string()]),
                ),
            };
        }
    };
    match fmt {
        Format::Text => Ok(Rendered::ok(format!("{value}\n"))),
        _ => Rendered::record(fmt, &CountOutput { count: label, n, value: value.to_string() }),
    }
}

#[derive(Serialize)]
struct PhiOutput {
    n: usize,
    k: usize,
    phi: String,
    /// Vertices of a maximizing induced subgraph.
    witness: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimate: Option<ndl_core::PhiEstimateReport>,
}

fn phi(g: &Graph, k: usize, estimate: bool, fmt: Format) -> Outcome {
    let (value, witness) = phi_with_witness(g, k)?;
    let estimate = if estimate {
        let t = g.n() - k;
        Some(phi_estimate_report(g, t)?)
    } else {
        None
    };
    let violated = estimate.as_ref().is_some_and(|e| !e.ok());
    let msg = estimate.as_ref().map(|e| failed_checks(&e.checks)).unwrap_or_default();
    if fmt == Format::Text && estimate.is_none() {
        return Ok(Rendered::ok(format!("{value}\n")));
    }
    let out = PhiOutput { n: g.n(), k, phi: value.to_string(), witness: witness.to_vec(), estimate };
    Ok(Rendered::record(fmt, &out)?.violated_if(violated, || msg))
}

#[derive(Serialize)]
struct HamiltonizeOutput {
    factor_seed: u64,
    budget_constant: f64,
    /// `None` when the graph has no 2-factor at all.
    factor: Option<Vec<Vec<usize>>>,
    success: bool,
    replay_verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<ndl_core::RotationTrace>,
}

fn hamiltonize(g: &Graph, epsilon: f64, seed: u64, budget_constant: f64, fmt: Format) -> Outcome {
    let cert = certify(g, epsilon)?;
    let Some(f) = random_two_factor(g, seed) else {
        let out = HamiltonizeOutput {
            factor_seed: seed,
            budget_constant,
            factor: None,
            success: false,
            replay_verified: false,
            trace: None,
        };
        return Rendered::record(fmt, &out);
    };
    let trace = two_factor_to_hamilton(g, &f, &cert, budget_constant)?;
    let (verified, inconsistent) = match replay(g, &f, &trace) {
        Ok(ReplayOutcome::HamiltonCycle(c)) => (trace.success && c == trace.hamilton_cycle, None),
        Ok(ReplayOutcome::Partial(_)) => (false, trace.success.then(|| "trace did not close".to_string())),
        Err(e) => (false, Some(e.to_string())),
    };
    let mismatch = inconsistent.is_some() || (trace.success && !verified);
    let out = HamiltonizeOutput {
        factor_seed: seed,
        budget_constant,
        factor: Some(f.components().to_vec()),
        success: trace.success,
        replay_verified: verified,
        trace: Some(trace),
    };
    let msg = inconsistent.unwrap_or_else(|| "replay disagrees with the reported cycle".into());
    Ok(Rendered::record(fmt, &out)?.violated_if(mismatch, || msg))
}

#[derive(Serialize)]
struct GnmOutput {
    n: usize,
    m: usize,
    ln_expectation: f64,
    expectation: f64,
}

fn experiment(which: &Experiment, cli: &Cli, caps: &SizeCaps) -> Outcome {
    let fmt = cli.format;
    match which {
        Experiment::Gnp { n, p, trials } => {
            check_cap("experiment gnp", *n, caps.monte_carlo)?;
            Rendered::record(fmt, &monte_carlo_gnp(*n, *p, *trials, cli.seed)?)
        }
        Experiment::Gnm { n, m } => {
            let ln = janson_expectation_gnm(*n, *m)?;
            Rendered::record(fmt, &GnmOutput { n: *n, m: *m, ln_expectation: ln, expectation: ln.exp() })
        }
        Experiment::Trend { ns, ds } => {
            if let Some(&n) = ns.iter().max() {
                check_cap("experiment trend", n, caps.hamilton)?;
            }
            let rows = trend_table(ns, ds, cli.seed, cli.epsilon)?;
            match fmt {
                Format::Csv => Rendered::csv_serialize(&rows),
                Format::Json => Rendered::record(fmt, &rows),
                Format::Text => Ok(Rendered::ok(render::trend_text(&rows))),
            }
        }
    }
}
