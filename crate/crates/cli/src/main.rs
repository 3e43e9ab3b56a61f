//! Command-line entry point: run mechanisms on graph files, generate graphs,
//! and execute the verification suites.
//!
//! Exit codes: 0 success, 2 usage error, 3 input error, 4 contract or
//! property violation, 5 nontermination.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mechnet::myerson::{discretize, run_mechanism, DiscretizationConfig, MechanismResult};
use mechnet::oracle::{Suite, SuiteConfig};
use mechnet::{BidVector, Error, ExecutionModel, Mechanism, Objective, Rat, WeightedGraph};

const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_VIOLATION: u8 = 4;
const EXIT_NONTERMINATION: u8 = 5;

#[derive(Parser)]
#[command(
    name = "mechnet",
    version,
    about = "Truthful distributed mechanisms on a round-synchronous simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mechanism on a graph file and emit the result as JSON.
    Run(RunArgs),
    /// Generate a graph file deterministically from a seed.
    Gen(GenArgs),
    /// Run a verification suite; nonzero exit on any violation.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MechName {
    Mwis,
    Mwvc,
    Mwds,
    Slot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelName {
    Local,
    Congest,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    mechanism: MechName,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = ModelName::Local)]
    model: ModelName,
    /// CONGEST budget constant; required with --model congest.
    #[arg(long)]
    congest_constant: Option<u64>,
    /// Rates file for the slot mechanism: one rational per line, best first.
    #[arg(long)]
    rates: Option<PathBuf>,
    /// Discretization step as a rational like 1/2 (binary mechanisms only).
    #[arg(long)]
    epsilon: Option<String>,
    /// Override the bids (comma-separated grid values); defaults to weights.
    #[arg(long)]
    bids: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reject executions beyond this many rounds.
    #[arg(long)]
    max_rounds: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Path,
    Cycle,
    Star,
    Grid,
    Gnp,
    Regular,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Node count (path, cycle, star, gnp, regular).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Edge probability for gnp.
    #[arg(long)]
    p: Option<f64>,
    /// Degree for regular graphs.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 3)]
    weight_bound: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: truthful, monotone, prices, approx, rounds, equivalence.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// quick trims the corpus for fast feedback; default matches the
    /// acceptance corpus.
    #[arg(long, default_value = "default")]
    scope: String,
    /// JSON-lines report destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("mechnet: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::GraphFormat { .. }
        | Error::InvalidGraph(_)
        | Error::InvalidInput(_)
        | Error::BruteForceCap(_) => EXIT_INPUT,
        Error::NonTermination { .. } => EXIT_NONTERMINATION,
        Error::CongestionViolation { .. }
        | Error::ContractViolation(_)
        | Error::MonotonicityViolation { .. }
        | Error::Internal(_) => EXIT_VIOLATION,
    }
}

fn usage(message: &str) -> Result<ExitCode, Error> {
    eprintln!("mechnet: {message}");
    Ok(ExitCode::from(EXIT_USAGE))
}

fn parse_rational(text: &str) -> Result<Rat, Error> {
    let bad = || Error::InvalidInput(format!("cannot parse rational {text:?}; use p or p/q"));
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        Ok(Rat::new(num, den))
    } else {
        let num: i64 = text.trim().parse().map_err(|_| bad())?;
        Ok(Rat::from_integer(num))
    }
}

fn read_rates(path: &PathBuf) -> Result<Vec<Rat>, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .filter(|line| !line.trim().is_empty())
        .map(parse_rational)
        .collect()
}

fn parse_bids(text: &str, g: &WeightedGraph) -> Result<BidVector, Error> {
    let values: Result<Vec<u32>, Error> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad bid {part:?}")))
        })
        .collect();
    let bids = BidVector(values?);
    bids.validate_for(g)?;
    Ok(bids)
}

fn build_mechanism(
    name: MechName,
    g: &WeightedGraph,
    model: &ExecutionModel,
    rates: Option<&[Rat]>,
) -> Result<Box<dyn Mechanism>, Error> {
    Ok(match name {
        MechName::Mwis => Box::new(mechnet::mwis::MwisMechanism::new(g, model)?),
        MechName::Mwvc => Box::new(mechnet::mwvc::MwvcMechanism::new(g, model)?),
        MechName::Mwds => Box::new(mechnet::mwds::MwdsMechanism::new(g, model)?),
        MechName::Slot => Box::new(mechnet::slot::SlotMechanism::new(
            g,
            model,
            rates.expect("checked by the caller"),
        )?),
    })
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, Error> {
    if args.mechanism == MechName::Slot && args.rates.is_none() {
        return usage("--mechanism slot requires --rates");
    }
    if args.mechanism == MechName::Slot && args.epsilon.is_some() {
        return usage("--epsilon applies to binary mechanisms only");
    }
    let model = match args.model {
        ModelName::Local => {
            if args.congest_constant.is_some() {
                return usage("--congest-constant requires --model congest");
            }
            ExecutionModel::Local
        }
        ModelName::Congest => match args.congest_constant {
            Some(c) if c > 0 => ExecutionModel::Congest { constant: c },
            Some(_) => return usage("--congest-constant must be positive"),
            None => return usage("--model congest requires --congest-constant"),
        },
    };
    let text = fs::read_to_string(&args.graph)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", args.graph.display())))?;
    let graph = WeightedGraph::parse(&text)?;
    let bids = match &args.bids {
        Some(list) => parse_bids(list, &graph)?,
        None => BidVector::from_weights(&graph),
    };
    let rates = args.rates.as_ref().map(read_rates).transpose()?;

    let result = match &args.epsilon {
        None => {
            let mech = build_mechanism(args.mechanism, &graph, &model, rates.as_deref())?;
            run_mechanism(mech.as_ref(), &graph, &bids, &model)?
        }
        Some(text) => {
            let epsilon = parse_rational(text)?;
            run_discretized(args.mechanism, &graph, &bids, &model, epsilon)?
        }
    };
    if let Some(cap) = args.max_rounds {
        if result.trace.rounds > cap {
            return Err(Error::NonTermination { cap });
        }
    }
    let json = result.to_json();
    match &args.out {
        Some(path) => fs::write(path, json + "\n")
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// Discretized pipeline: bids are treated as real values in `[0, W]`, rounded
/// onto the epsilon grid, and the mechanism runs on grid indices. Payments
/// scale back by epsilon; the objective uses the original values.
fn run_discretized(
    name: MechName,
    graph: &WeightedGraph,
    bids: &BidVector,
    model: &ExecutionModel,
    epsilon: Rat,
) -> Result<MechanismResult, Error> {
    let cfg = DiscretizationConfig::new(epsilon, Rat::from_integer(graph.weight_bound() as i64))?;
    let objective = match name {
        MechName::Mwis => Objective::Max,
        MechName::Mwvc | MechName::Mwds => Objective::Min,
        MechName::Slot => unreachable!("rejected before dispatch"),
    };
    let reals: Vec<Rat> = bids
        .0
        .iter()
        .map(|&b| Rat::from_integer(b as i64))
        .collect();
    let grid_bids = discretize(&reals, &cfg, objective)?;
    let grid_graph = graph.with_weights(grid_bids.0.clone(), cfg.grid_steps())?;
    let mech = build_mechanism(name, &grid_graph, model, None)?;
    let mut result = run_mechanism(mech.as_ref(), &grid_graph, &grid_bids, model)?;
    for payment in &mut result.payments {
        *payment *= epsilon;
    }
    result.objective_value = (0..graph.node_count())
        .map(|v| mech.utility(&grid_graph, &result.allocation, v, reals[v]))
        .sum();
    Ok(result)
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, Error> {
    let need_n = |n: Option<usize>| {
        n.filter(|&n| n >= 1)
            .ok_or_else(|| Error::InvalidInput("this kind requires --n >= 1".into()))
    };
    let (n, edges): (usize, Vec<(usize, usize)>) = match args.kind {
        GenKind::Path => {
            let n = need_n(args.n)?;
            (n, (1..n).map(|i| (i - 1, i)).collect())
        }
        GenKind::Cycle => {
            let n = need_n(args.n)?;
            if n < 3 {
                return Err(Error::InvalidInput("cycles need --n >= 3".into()));
            }
            (
                n,
                (0..n)
                    .map(|i| (i.min((i + 1) % n), i.max((i + 1) % n)))
                    .collect(),
            )
        }
        GenKind::Star => {
            let n = need_n(args.n)?;
            (n, (1..n).map(|i| (0, i)).collect())
        }
        GenKind::Grid => {
            let rows = args
                .rows
                .ok_or_else(|| Error::InvalidInput("grid requires --rows".into()))?;
            let cols = args
                .cols
                .ok_or_else(|| Error::InvalidInput("grid requires --cols".into()))?;
            if rows == 0 || cols == 0 {
                return Err(Error::InvalidInput(
                    "grid dimensions must be positive".into(),
                ));
            }
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            (rows * cols, edges)
        }
        GenKind::Gnp => {
            let n = need_n(args.n)?;
            let p = args
                .p
                .ok_or_else(|| Error::InvalidInput("gnp requires --p".into()))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidInput("--p must be in [0, 1]".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            (n, edges)
        }
        GenKind::Regular => {
            let n = need_n(args.n)?;
            let d = args
                .d
                .ok_or_else(|| Error::InvalidInput("regular requires --d".into()))?;
            if d >= n || n * d % 2 != 0 {
                return Err(Error::InvalidInput(format!(
                    "no simple {d}-regular graph on {n} nodes"
                )));
            }
            let mut edges = Vec::new();
            for k in 1..=(d / 2) {
                for u in 0..n {
                    let v = (u + k) % n;
                    edges.push((u.min(v), u.max(v)));
                }
            }
            if d % 2 == 1 {
                for u in 0..n / 2 {
                    edges.push((u, u + n / 2));
                }
            }
            edges.sort_unstable();
            edges.dedup();
            (n, edges)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ 0x57a7);
    let weights = (0..n)
        .map(|_| rng.gen_range(0..=args.weight_bound))
        .collect();
    let graph = WeightedGraph::new(n, edges, weights, args.weight_bound)?;
    graph.validate().map_err(Error::InvalidGraph)?;
    let text = graph.to_text();
    match &args.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let Some(suite) = Suite::parse(&args.suite) else {
        return usage(&format!(
            "unknown suite {:?}; expected truthful, monotone, prices, approx, rounds, or equivalence",
            args.suite
        ));
    };
    let cfg = match args.scope.as_str() {
        "default" => SuiteConfig {
            seed: args.seed,
            ..SuiteConfig::default()
        },
        "quick" => SuiteConfig {
            seed: args.seed,
            sweep_max_n: 3,
            sweep_weight_bound: 2,
            random: (15, 8, 4, 4),
        },
        other => {
            return usage(&format!(
                "unknown scope {other:?}; expected default or quick"
            ))
        }
    };
    let report = mechnet::oracle::run_suite(suite, &cfg)?;
    println!("{:<14} {:>12} {:>12}", "suite", "checked", "violations");
    println!(
        "{:<14} {:>12} {:>12}",
        args.suite,
        report.checked,
        report.violations.len()
    );
    if !report.ratios.is_empty() {
        println!();
        println!(
            "{:<10} {:>6} {:<10} {:>12} {:>12}",
            "instance", "nodes", "mechanism", "ratio", "bound"
        );
        for row in &report.ratios {
            println!(
                "{:<10} {:>6} {:<10} {:>12} {:>12}",
                row.instance, row.nodes, row.mechanism, row.ratio, row.bound
            );
        }
    }
    if let Some(path) = &args.out {
        fs::write(path, report.to_json_lines())
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    if report.ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        for v in report.violations.iter().take(5) {
            eprintln!("violation[{}/{}]: {}", v.suite, v.mechanism, v.detail);
        }
        Ok(ExitCode::from(EXIT_VIOLATION))
    }
}
