use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgossip::bounds::{bound_ar, bound_hsf_cubic, bound_prop2, bound_thm2, bound_thm6, t1};
use qgossip::graph::{build_named, sample_gnp, Graph, NamedKind};
use qgossip::harness::{emit, fmt_float, run_experiment, walk_analysis, ExperimentConfig, Format, OUT_DIR_ENV};
use qgossip::randwalk::p0;
use qgossip::Error;

const EXIT_ERROR: u8 = 1;
const EXIT_BOUND_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "qgossip", version, about = "Quantized gossip experiments, walk analyses and bounds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiment described by a TOML config.
    Run(RunArgs),
    /// Hitting and meeting times of a graph read from an edge-list file.
    Walks(WalksArgs),
    /// Evaluate the closed-form bounds.
    Bounds(BoundsArgs),
    /// Print a named or random graph as an edge list.
    Graph(GraphArgs),
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    max_ticks: Option<u64>,
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct WalksArgs {
    graph_file: PathBuf,
    /// Exact solves only (the default).
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Also simulate the worst-pair meeting time.
    #[arg(long)]
    mc: bool,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    b: u64,
    #[arg(long, default_value_t = 2)]
    j: u64,
    /// Edge probability for the random-graph bound.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct GraphArgs {
    /// path, cycle, star, complete, empty, lollipop or gnp.
    kind: String,
    #[arg(long)]
    n: usize,
    /// Lollipop clique size; defaults to ⌊(2n+1)/3⌋.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::BoundViolation { .. }) => {
            eprintln!("qgossip: {e}");
            ExitCode::from(EXIT_BOUND_VIOLATION)
        }
        Err(e) => {
            eprintln!("qgossip: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn dispatch(cli: Cli) -> qgossip::Result<()> {
    match cli.cmd {
        Cmd::Run(a) => cmd_run(a),
        Cmd::Walks(a) => cmd_walks(a),
        Cmd::Bounds(a) => cmd_bounds(a),
        Cmd::Graph(a) => cmd_graph(a),
    }
}

fn cmd_run(a: RunArgs) -> qgossip::Result<()> {
    let mut cfg = ExperimentConfig::load(&a.config)?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(m) = a.max_ticks {
        cfg.max_ticks = m;
    }
    let result = run_experiment(&cfg)?;
    let stem = a.config.file_stem().and_then(|s| s.to_str()).unwrap_or("experiment");
    let ext = match a.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let files = emit(&result, a.format, &a.out.join(format!("{stem}.{ext}")))?;
    let s = &result.summary;
    println!("trials {}  converged {}  timeouts {}", cfg.trials, s.count, s.timeouts);
    println!("mean t_con {}  se {}", fmt_float(s.mean), fmt_float(s.se));
    for b in &result.bounds {
        let mark = if b.holds { "ok" } else { "VIOLATED" };
        println!("{:<12} {} <= {}  {mark}", b.report.name, fmt_float(b.measured), fmt_float(b.report.value));
    }
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    result.check()
}

fn cmd_walks(a: WalksArgs) -> qgossip::Result<()> {
    let g = Graph::parse_edge_list(&std::fs::read_to_string(&a.graph_file)?)?;
    let mc = a.mc.then_some((a.trials, a.seed));
    let w = walk_analysis(&g, (0, g.n() - 1), mc)?;
    println!("n               {}", w.n);
    println!("H_sf max        {}", fmt_float(w.h_sf_max));
    println!("H_af max        {}", fmt_float(w.h_af_max));
    println!("M_af max        {}  at {:?}", fmt_float(w.meeting_af_max), w.meeting_af_argmax);
    println!("M_as max        {}", fmt_float(w.meeting_as_max));
    println!("2nH_sf - n      {}", fmt_float(w.bound_prop1));
    println!("E[T_psi] AF     {}  pair {:?}", fmt_float(w.psi_af), w.psi_pair);
    println!("E[T_psi] AS     {}", fmt_float(w.psi_as));
    for (name, m) in [("MC M_af", w.mc_af), ("MC M_as", w.mc_as)] {
        if let Some(m) = m {
            println!("{name:<15} {} ± {}  ({} trials, {} capped)", fmt_float(m.mean), fmt_float(m.se), m.trials, m.capped);
        }
    }
    Ok(())
}

fn cmd_bounds(a: BoundsArgs) -> qgossip::Result<()> {
    let (n, b, j) = (a.n, a.b, a.j);
    if n < 2 || b < 1 {
        return Err(Error::Parameter("need n >= 2 and b >= 1".into()));
    }
    println!("4n^3/27         {}", fmt_float(bound_hsf_cubic(n)));
    println!("thm2            {}", fmt_float(bound_thm2(n, j)));
    println!("t1              {}", t1(n, b));
    println!("prop2           {}", fmt_float(bound_prop2(n, b)));
    println!("thm6            {}", fmt_float(bound_thm6(n, b, j)));
    if let Some(p) = a.p {
        let ar = bound_ar(n, p, j)?;
        println!("p0              {}", fmt_float(p0(n, p)?));
        println!("ar exact        {}", fmt_float(ar.exact));
        println!("ar relaxed      {}", fmt_float(ar.relaxed));
        println!("ar relaxed (2x) {}", fmt_float(ar.relaxed_sound));
    }
    Ok(())
}

fn cmd_graph(a: GraphArgs) -> qgossip::Result<()> {
    let g = if a.kind.eq_ignore_ascii_case("gnp") {
        let p = a.p.ok_or_else(|| Error::Parameter("gnp needs --p".into()))?;
        sample_gnp(a.n, p, a.seed)?
    } else {
        let kind: NamedKind = a.kind.parse()?;
        let m = match kind {
            NamedKind::Lollipop => Some(a.m.unwrap_or((2 * a.n + 1) / 3)),
            _ => None,
        };
        build_named(kind, a.n, m)?
    };
    print!("{}", g.to_edge_list());
    Ok(())
}
