//! Command line interface.
//!
//! Exit codes: 0 success, 2 bad flags or a refused counterexample request,
//! 3 graph parse errors, 4 axiom matrix mismatch, 5 oracle tolerance
//! breach, 1 counterexample search exhausted.

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tcentral::axioms::{
    self, expected_satisfied, find_counterexample, render_matrix, AxiomId, GraphGenConfig,
    MatrixConfig,
};
use tcentral::centrality::{evaluate, Measure};
use tcentral::io::{format_sig, parse_graph, round_sig};
use tcentral::oracle::{
    exact_rational_betweenness_f64, enumerate_shortest_paths, monte_carlo_visits,
    series_tail_bound, truncated_series_visits, OracleConfig,
};
use tcentral::TargetedGraph;

#[derive(Parser)]
#[command(name = "tcentral", version, about = "Target-oriented centralities on directed multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a centrality vector for a graph file.
    Compute(ComputeArgs),
    /// Run the axiom satisfaction matrix and report it.
    Axioms(AxiomsArgs),
    /// Search for a counterexample to an axiom under a measure.
    Counterexample(CounterexampleArgs),
    /// Cross-check the analytic values against brute-force oracles.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Graph file in the text format.
    #[arg(long)]
    graph: String,
    /// stress, betweenness, rwb or pagerank.
    #[arg(long, value_parser = parse_measure)]
    measure: Measure,
    /// Decay factor in [0, 1); required for pagerank, rejected otherwise.
    #[arg(long)]
    alpha: Option<f64>,
    /// Emit JSON instead of plain text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AxiomsArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 8)]
    max_nodes: usize,
    /// Decay factors for the pagerank column, comma separated.
    #[arg(long, default_value = "0.25,0.5,0.85", value_delimiter = ',')]
    alphas: Vec<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long, value_parser = parse_axiom)]
    axiom: AxiomId,
    #[arg(long, value_parser = parse_measure)]
    measure: Measure,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Fall back to the exhaustive small-graph sweep.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: String,
    #[arg(long, value_parser = parse_measure)]
    measure: Measure,
    #[arg(long)]
    alpha: Option<f64>,
    /// Monte-Carlo sample count (rwb only).
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Truncated-series length (pagerank only).
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Allowed absolute deviation beyond the oracle's own error bound.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long)]
    json: bool,
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    Measure::parse(s).ok_or_else(|| format!("unknown measure {s:?}"))
}

fn parse_axiom(s: &str) -> Result<AxiomId, String> {
    AxiomId::parse(s).ok_or_else(|| format!("unknown axiom {s:?}"))
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Compute(args) => compute(args),
        Command::Axioms(args) => run_axioms(args),
        Command::Counterexample(args) => counterexample(args),
        Command::Oracle(args) => run_oracle(args),
    }
}

fn load_graph(path: &str) -> Result<TargetedGraph, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {path}: {e}");
        ExitCode::from(3)
    })?;
    parse_graph(&text).map_err(|e| {
        eprintln!("error: {path}: {e}");
        ExitCode::from(3)
    })
}

fn validate_alpha(measure: Measure, alpha: Option<f64>) -> Result<Option<f64>, ExitCode> {
    match (measure, alpha) {
        (Measure::PageRank, Some(a)) if (0.0..1.0).contains(&a) => Ok(Some(a)),
        (Measure::PageRank, Some(a)) => {
            eprintln!("error: --alpha {a} outside [0, 1)");
            Err(ExitCode::from(2))
        }
        (Measure::PageRank, None) => {
            eprintln!("error: pagerank requires --alpha");
            Err(ExitCode::from(2))
        }
        (_, Some(_)) => {
            eprintln!("error: --alpha only applies to pagerank");
            Err(ExitCode::from(2))
        }
        (_, None) => Ok(None),
    }
}

fn compute(args: ComputeArgs) -> ExitCode {
    let alpha = match validate_alpha(args.measure, args.alpha) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let g = match load_graph(&args.graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let values = evaluate(&g, args.measure, alpha).expect("flags validated");
    if args.json {
        let map: BTreeMap<String, f64> = values
            .iter()
            .map(|(v, x)| (v.to_string(), round_sig(x)))
            .collect();
        let report = serde_json::json!({
            "measure": args.measure.name(),
            "alpha": alpha,
            "target": g.target().to_string(),
            "values": map,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        for (v, x) in values.iter() {
            println!("{v} {}", format_sig(x));
        }
    }
    ExitCode::SUCCESS
}

fn run_axioms(args: AxiomsArgs) -> ExitCode {
    for &a in &args.alphas {
        if !(0.0..1.0).contains(&a) {
            eprintln!("error: --alphas entry {a} outside [0, 1)");
            return ExitCode::from(2);
        }
    }
    let cfg = MatrixConfig {
        gen: GraphGenConfig {
            seed: args.seed,
            trials: args.trials,
            max_nodes: args.max_nodes,
            ..GraphGenConfig::default()
        },
        alphas: args.alphas,
        exhaustive: true,
    };
    let report = axioms::run_matrix(&cfg);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        print!("{}", render_matrix(&report));
    }
    if report.matches_expected {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    }
}

fn counterexample(args: CounterexampleArgs) -> ExitCode {
    let alpha = if args.measure == Measure::PageRank {
        let a = args.alpha.unwrap_or(0.5);
        if !(0.0..1.0).contains(&a) {
            eprintln!("error: --alpha {a} outside [0, 1)");
            return ExitCode::from(2);
        }
        Some(a)
    } else if args.alpha.is_some() {
        eprintln!("error: --alpha only applies to pagerank");
        return ExitCode::from(2);
    } else {
        None
    };
    if axioms::MATRIX_AXIOMS.contains(&args.axiom) && expected_satisfied(args.axiom, args.measure) {
        eprintln!(
            "error: {} is expected to hold for {}; refusing to search for a counterexample",
            args.axiom,
            args.measure.name()
        );
        return ExitCode::from(2);
    }
    let cfg = GraphGenConfig {
        seed: args.seed,
        trials: args.trials,
        ..GraphGenConfig::default()
    };
    match find_counterexample(args.axiom, args.measure, alpha, &cfg, args.exhaustive) {
        Some(witness) => {
            println!("{}", serde_json::to_string_pretty(&witness).expect("serializable"));
            ExitCode::SUCCESS
        }
        None => {
            eprintln!("no counterexample found within the search budget");
            ExitCode::from(1)
        }
    }
}

struct OracleRow {
    node: String,
    analytic: f64,
    oracle: f64,
    bound: f64,
}

fn run_oracle(args: OracleArgs) -> ExitCode {
    let alpha = match validate_alpha(args.measure, args.alpha) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let g = match load_graph(&args.graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let analytic = evaluate(&g, args.measure, alpha).expect("flags validated");
    let cfg = OracleConfig::default();
    let mut rows: Vec<OracleRow> = Vec::new();
    match args.measure {
        Measure::Stress => {
            let mut sums: BTreeMap<String, f64> = g
                .graph()
                .nodes()
                .map(|v| (v.to_string(), 0.0))
                .collect();
            for (s, w) in g.weights().support() {
                let en = match enumerate_shortest_paths(&g, s, &cfg) {
                    Ok(en) => en,
                    Err(e) => {
                        eprintln!("error: oracle: {e}");
                        return ExitCode::from(5);
                    }
                };
                for (v, through) in &en.sigma_through {
                    use num_traits::ToPrimitive;
                    *sums.get_mut(&v.to_string()).expect("node present") +=
                        w * through.to_f64().expect("count fits f64");
                }
            }
            for v in g.graph().nodes() {
                rows.push(OracleRow {
                    node: v.to_string(),
                    analytic: analytic.get(v),
                    oracle: sums[&v.to_string()],
                    bound: 0.0,
                });
            }
        }
        Measure::Betweenness => {
            let oracle = match exact_rational_betweenness_f64(&g, &cfg) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: oracle: {e}");
                    return ExitCode::from(5);
                }
            };
            for v in g.graph().nodes() {
                rows.push(OracleRow {
                    node: v.to_string(),
                    analytic: analytic.get(v),
                    oracle: oracle[v],
                    bound: 0.0,
                });
            }
        }
        Measure::RandomWalkBetweenness => {
            let est = monte_carlo_visits(&g, 1.0, args.samples, args.seed, &cfg);
            if est.step_cap_hit {
                eprintln!("error: oracle: a walk hit the step cap before absorbing");
                return ExitCode::from(5);
            }
            for v in g.graph().nodes() {
                rows.push(OracleRow {
                    node: v.to_string(),
                    analytic: analytic.get(v),
                    oracle: est.values[v],
                    bound: 3.0 * est.std_errors[v],
                });
            }
        }
        Measure::PageRank => {
            let a = alpha.expect("validated above");
            let totals = truncated_series_visits(&g, a, args.steps);
            let tail = series_tail_bound(a, args.steps, g.weights().total());
            for v in g.graph().nodes() {
                rows.push(OracleRow {
                    node: v.to_string(),
                    analytic: analytic.get(v),
                    oracle: totals[v],
                    bound: tail,
                });
            }
        }
    }

    let mut worst = 0.0f64;
    let mut breach = false;
    for row in &rows {
        let excess = ((row.analytic - row.oracle).abs() - row.bound).max(0.0);
        worst = worst.max(excess);
        if excess > args.tolerance {
            breach = true;
        }
    }
    if args.json {
        let report = serde_json::json!({
            "measure": args.measure.name(),
            "alpha": alpha,
            "tolerance": args.tolerance,
            "worst_excess": round_sig(worst),
            "rows": rows.iter().map(|r| serde_json::json!({
                "node": r.node,
                "analytic": round_sig(r.analytic),
                "oracle": round_sig(r.oracle),
                "bound": round_sig(r.bound),
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        println!("{:<16}{:>22}{:>22}{:>22}", "node", "analytic", "oracle", "bound");
        for r in &rows {
            println!(
                "{:<16}{:>22}{:>22}{:>22}",
                r.node,
                format_sig(r.analytic),
                format_sig(r.oracle),
                format_sig(r.bound)
            );
        }
        println!("worst excess over bound: {}", format_sig(worst));
    }
    if breach {
        eprintln!("error: oracle deviation exceeds tolerance");
        ExitCode::from(5)
    } else {
        ExitCode::SUCCESS
    }
}
