//! Command line front end over the library: sequence verification, exact
//! searches, maximum-diameter construction, and seeded sampling.
//!
//! Every report echoes the run configuration, so an artifact names the seed
//! and budget that produced it. Sample reports carry no wall-clock fields;
//! the same seed gives byte-identical output. Exit codes: 0 for success or
//! a valid sequence, 1 for a definitive negative answer, 2 for unusable
//! input, 3 for a budget that ran out before the question was settled.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use xtrail::hypergraph::DGraph;
use xtrail::randwalk::{
    fractional_decomposition, greedy_approx_decomposition, sample_path, stationarity_check,
    RandwalkError,
};
use xtrail::search::{
    find_euler_tour, find_euler_trail, johnson_longest_induced_path, max_diameter_complex,
    SearchBudget, SearchMode, SearchReport,
};
use xtrail::trails::VertexSeq;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "xtrail",
    version,
    about = "Extra-tight trails, tours, and maximum-diameter complexes"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Seed for every random draw in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Wall-clock cap for searches, in seconds.
    #[arg(long, global = true, default_value_t = 60.0)]
    budget_secs: f64,
    /// Node-expansion cap for searches; unlimited when absent.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// exhaustive closes the whole tree; first-found stops at a witness.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// json for machines, text for reading.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker cap. Every current code path is single-threaded, so values
    /// above 1 change nothing; the flag is validated and echoed.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    FirstFound,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check a sequence file against a host graph file.
    Verify {
        /// Sequence: line 1 "d k open|closed", line 2 the k vertices.
        seq: PathBuf,
        /// Host graph JSON: {"n": .., "d": .., "edges": [[..], ..]}.
        host: PathBuf,
    },
    /// Exact backtracking searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Build a maximum-diameter strongly connected 2-complex on n vertices,
    /// by tour search plus facet deletion when a covering tour exists and
    /// by the longest-snake route otherwise, with its certificate.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Seeded experiments on complete hosts.
    #[command(subcommand)]
    Sample(SampleCmd),
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Extra-tight Euler tour of the host.
    Tour {
        #[command(flatten)]
        host: HostArgs,
    },
    /// Extra-tight Euler trail with prescribed end tuples.
    Trail {
        #[command(flatten)]
        host: HostArgs,
        /// Start tuple, outermost vertex first, e.g. 1,2
        #[arg(long, value_delimiter = ',', required = true)]
        start: Vec<u32>,
        /// Finish tuple, outermost vertex first, e.g. 6,5
        #[arg(long, value_delimiter = ',', required = true)]
        finish: Vec<u32>,
    },
    /// Longest induced path in the Johnson graph J(n, k).
    Johnson {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Maximum-diameter 2-complex search; same pipeline as construct.
    Diameter {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Args)]
struct HostArgs {
    /// Host graph JSON file; replaces --n/--d.
    #[arg(long, conflicts_with_all = ["n", "d"])]
    host: Option<PathBuf>,
    /// Complete host on n vertices.
    #[arg(long)]
    n: Option<u32>,
    /// Uniformity of the complete host.
    #[arg(long, default_value_t = 2)]
    d: usize,
}

impl HostArgs {
    fn load(&self) -> Result<DGraph, String> {
        match (&self.host, self.n) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                DGraph::from_json(&text)
                    .map_err(|e| format!("cannot parse {}: {e}", path.display()))
            }
            (None, Some(n)) => {
                DGraph::complete(n, self.d).map_err(|e| format!("bad complete host: {e}"))
            }
            (None, None) => Err("provide a host: --host FILE or --n N [--d D]".into()),
        }
    }
}

#[derive(Subcommand)]
enum SampleCmd {
    /// Long windowed walk on K_n with a stationarity report.
    Walk {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        /// Normality parameter checked on the decomposition.
        #[arg(long, default_value_t = 0.9)]
        mu: f64,
    },
    /// Extra-tight paths of order t drawn from the conditioned walk.
    Paths {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0.9)]
        mu: f64,
    },
    /// Greedy edge-disjoint packing of order-t paths with leftover stats.
    Decomp {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        t: usize,
        /// Leftover degree target and end-multiplicity cap, as a fraction of n.
        #[arg(long, default_value_t = 0.25)]
        gamma: f64,
    },
}

/// The configuration echo carried by every report.
#[derive(Serialize)]
struct RunConfig {
    seed: u64,
    budget: SearchBudget,
    format: &'static str,
    threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<usize>,
}

/// One finished command: a machine report, a text rendering, an exit code.
struct Outcome {
    command: &'static str,
    report: Value,
    text: String,
    code: u8,
    gamma: Option<f64>,
    mu: Option<f64>,
    t: Option<usize>,
}

impl Outcome {
    fn new(command: &'static str, report: Value, text: String, code: u8) -> Self {
        Outcome {
            command,
            report,
            text,
            code,
            gamma: None,
            mu: None,
            t: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.run.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(EXIT_INPUT);
    }
    let budget = SearchBudget {
        max_seconds: Some(cli.run.budget_secs),
        max_nodes: cli.run.budget_nodes,
        mode: match cli.run.mode {
            ModeArg::Exhaustive => SearchMode::Exhaustive,
            ModeArg::FirstFound => SearchMode::FirstFound,
        },
    };
    match dispatch(&cli, &budget) {
        Ok(outcome) => {
            let config = RunConfig {
                seed: cli.run.seed,
                budget,
                format: match cli.run.format {
                    FormatArg::Json => "json",
                    FormatArg::Text => "text",
                },
                threads: cli.run.threads,
                gamma: outcome.gamma,
                mu: outcome.mu,
                t: outcome.t,
            };
            match emit(&cli.run, &config, &outcome) {
                Ok(()) => ExitCode::from(outcome.code),
                Err(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(EXIT_INPUT)
                }
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn emit(run: &RunArgs, config: &RunConfig, outcome: &Outcome) -> Result<(), String> {
    let body = match run.format {
        FormatArg::Json => {
            let doc = json!({
                "command": outcome.command,
                "config": config,
                "report": outcome.report,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
            s.push('\n');
            s
        }
        FormatArg::Text => format!("{}\n", outcome.text),
    };
    match &run.out {
        Some(path) => {
            fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli, budget: &SearchBudget) -> Result<Outcome, String> {
    match &cli.command {
        Command::Verify { seq, host } => cmd_verify(seq, host),
        Command::Search(kind) => cmd_search(kind, budget),
        Command::Construct { n, d } => cmd_construct(*n, *d, budget),
        Command::Sample(kind) => cmd_sample(kind, cli.run.seed),
    }
}

fn cmd_verify(seq_path: &PathBuf, host_path: &PathBuf) -> Result<Outcome, String> {
    let seq_text = fs::read_to_string(seq_path)
        .map_err(|e| format!("cannot read {}: {e}", seq_path.display()))?;
    let seq = VertexSeq::parse_text(&seq_text)
        .map_err(|e| format!("cannot parse {}: {e}", seq_path.display()))?;
    let host_text = fs::read_to_string(host_path)
        .map_err(|e| format!("cannot read {}: {e}", host_path.display()))?;
    let host = DGraph::from_json(&host_text)
        .map_err(|e| format!("cannot parse {}: {e}", host_path.display()))?;

    match seq.validate(&host) {
        Ok(report) => {
            let code = if report.valid { EXIT_OK } else { EXIT_NEGATIVE };
            let text = if report.valid {
                format!(
                    "valid extra-tight {}: covers {} edges of the host",
                    if seq.is_closed() { "tour" } else { "trail" },
                    report.covered.len()
                )
            } else {
                format!(
                    "invalid: {} duplicate coverages, {} edges missing from the host",
                    report.duplicates.len(),
                    report.missing_from_host.len()
                )
            };
            Ok(Outcome::new(
                "verify",
                serde_json::to_value(&report).expect("reports serialize"),
                text,
                code,
            ))
        }
        Err(e) => Ok(Outcome::new(
            "verify",
            json!({ "valid": false, "error": e.to_string() }),
            format!("invalid: {e}"),
            EXIT_NEGATIVE,
        )),
    }
}

/// Exit code for a tour or trail search: a witness is success, an exhausted
/// empty search is a definitive no, anything else ran out of budget.
fn search_code(report: &SearchReport) -> u8 {
    if report.found.is_some() {
        EXIT_OK
    } else if report.exhausted {
        EXIT_NEGATIVE
    } else {
        EXIT_BUDGET
    }
}

fn search_text(report: &SearchReport) -> String {
    match &report.found {
        Some(seq) => format!("found {:?} after {} nodes", seq, report.nodes),
        None if report.exhausted => format!(
            "none: search space exhausted after {} nodes, {} obstructions",
            report.nodes,
            report.obstructions.len()
        ),
        None => format!("budget exceeded after {} nodes", report.nodes),
    }
}

fn cmd_search(kind: &SearchCmd, budget: &SearchBudget) -> Result<Outcome, String> {
    match kind {
        SearchCmd::Tour { host } => {
            let g = host.load()?;
            let report = find_euler_tour(&g, budget).map_err(|e| e.to_string())?;
            Ok(Outcome::new(
                "search tour",
                serde_json::to_value(&report).expect("reports serialize"),
                search_text(&report),
                search_code(&report),
            ))
        }
        SearchCmd::Trail {
            host,
            start,
            finish,
        } => {
            let g = host.load()?;
            let report =
                find_euler_trail(&g, start, finish, budget).map_err(|e| e.to_string())?;
            Ok(Outcome::new(
                "search trail",
                serde_json::to_value(&report).expect("reports serialize"),
                search_text(&report),
                search_code(&report),
            ))
        }
        SearchCmd::Johnson { n, k } => {
            let report =
                johnson_longest_induced_path(*n, *k, budget).map_err(|e| e.to_string())?;
            let code = if report.exhausted { EXIT_OK } else { EXIT_BUDGET };
            let text = format!(
                "longest induced path in J({n},{k}): length {} over {} nodes{}",
                report.length,
                report.nodes,
                if report.exhausted {
                    ""
                } else {
                    " (budget exceeded, best found so far)"
                }
            );
            Ok(Outcome::new(
                "search johnson",
                serde_json::to_value(&report).expect("reports serialize"),
                text,
                code,
            ))
        }
        SearchCmd::Diameter { n } => construct_outcome(*n, budget, "search diameter"),
    }
}

fn cmd_construct(n: u32, d: usize, budget: &SearchBudget) -> Result<Outcome, String> {
    if d != 2 {
        return Err(format!(
            "construction is implemented for 2-complexes only, got d = {d}"
        ));
    }
    construct_outcome(n, budget, "construct")
}

fn construct_outcome(
    n: u32,
    budget: &SearchBudget,
    command: &'static str,
) -> Result<Outcome, String> {
    let result = max_diameter_complex(n, budget).map_err(|e| e.to_string())?;
    // An extremal certificate proves optimality against the bound even when
    // the underlying search stopped early, so only the case of a spent
    // budget and a short diameter is inconclusive.
    let settled = result.certificate.extremal || result.exhausted;
    let code = if settled { EXIT_OK } else { EXIT_BUDGET };
    let text = format!(
        "{:?} complex on {n} vertices: diameter {:?} against bound {}, extremal: {}{}",
        result.method,
        result.certificate.diameter,
        result.certificate.bound,
        result.certificate.extremal,
        if settled {
            ""
        } else {
            " (budget exceeded, best found so far)"
        }
    );
    Ok(Outcome::new(
        command,
        serde_json::to_value(&result).expect("reports serialize"),
        text,
        code,
    ))
}

fn cmd_sample(kind: &SampleCmd, seed: u64) -> Result<Outcome, String> {
    match kind {
        SampleCmd::Walk { n, d, steps, mu } => {
            let g = DGraph::complete(*n, *d).map_err(|e| e.to_string())?;
            let x = fractional_decomposition(&g, *mu).map_err(|e| e.to_string())?;
            let report = stationarity_check(&g, &x, *steps, seed).map_err(|e| e.to_string())?;
            let text = format!(
                "walk of {steps} steps on K_{n}: max deviation {:.6} against tolerance {:.6}, within: {}",
                report.max_deviation, report.tolerance, report.within_tolerance
            );
            let mut out = Outcome::new(
                "sample walk",
                serde_json::to_value(&report).expect("reports serialize"),
                text,
                EXIT_OK,
            );
            out.mu = Some(*mu);
            Ok(out)
        }
        SampleCmd::Paths {
            n,
            d,
            t,
            count,
            mu,
        } => {
            let g = DGraph::complete(*n, *d).map_err(|e| e.to_string())?;
            let x = fractional_decomposition(&g, *mu).map_err(|e| e.to_string())?;
            let mut paths = Vec::new();
            for i in 0..*count {
                match sample_path(&g, &x, *t, seed.wrapping_add(i)) {
                    Ok(p) => paths.push(p),
                    Err(RandwalkError::RejectionCapExceeded { attempts }) => {
                        return Ok(Outcome::new(
                            "sample paths",
                            json!({
                                "error": format!(
                                    "rejection sampling missed the all-distinct event {attempts} times"
                                ),
                                "drawn": paths.len(),
                            }),
                            format!("gave up after {attempts} rejected walks"),
                            EXIT_BUDGET,
                        ));
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
            let text = format!("{} extra-tight paths of order {t} on K_{n}", paths.len());
            let mut out = Outcome::new(
                "sample paths",
                json!({ "n": n, "d": d, "t": t, "count": count, "paths": paths }),
                text,
                EXIT_OK,
            );
            out.mu = Some(*mu);
            out.t = Some(*t);
            Ok(out)
        }
        SampleCmd::Decomp { n, d, t, gamma } => {
            let g = DGraph::complete(*n, *d).map_err(|e| e.to_string())?;
            let report =
                greedy_approx_decomposition(&g, *t, *gamma, seed).map_err(|e| e.to_string())?;
            let text = format!(
                "{} paths cover {} of {} edges of K_{n}; leftover max degree {} (cap {}), end cap {}",
                report.paths.len(),
                report.covered_edges,
                g.len(),
                report.leftover_max_degree,
                (*gamma * *n as f64),
                report.end_cap
            );
            let mut out = Outcome::new(
                "sample decomp",
                serde_json::to_value(&report).expect("reports serialize"),
                text,
                EXIT_OK,
            );
            out.gamma = Some(*gamma);
            out.t = Some(*t);
            Ok(out)
        }
    }
}
