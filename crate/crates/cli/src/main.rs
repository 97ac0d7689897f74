use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mcp_core::generate::{self, Generated};
use mcp_core::graph::SimpleGraph;
use mcp_core::kernel::{kernelize, Kernel};
use mcp_core::solve::{self, Answer, BruteMode, SolveOutcome, SolverConfig};
use mcp_core::transform::{self, Rule1Outcome};
use mcp_core::twdp::{self, DpConfig};
use mcp_core::{DefenseSet, Instance};

#[derive(Parser)]
#[command(
    name = "mcp",
    version,
    about = "Exact solvers for min (s,t)-cut prevention"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance; exit 0 on YES, 1 on NO, 2 on error.
    Solve(SolveArgs),
    /// Apply the kernelization rules and report the kernel size.
    Kernelize(KernelizeArgs),
    /// Rewrite an instance into an equivalent one.
    Transform(TransformArgs),
    /// Emit an instance from a hardness construction.
    Generate(GenerateArgs),
    /// Check a defense; exit 0 iff it is valid.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Auto,
    Brute,
    Search,
    Deg2,
    Vc,
    Dp,
}

#[derive(Args)]
struct Budgets {
    /// Largest edge count for brute force.
    #[arg(long, env = "MCP_BRUTE_EDGES", default_value_t = 16)]
    brute_edges: usize,
    /// Search tree node cap.
    #[arg(long, env = "MCP_SEARCH_NODES", default_value_t = 20_000_000)]
    search_nodes: u64,
    /// Vertex cover branching node cap.
    #[arg(long, env = "MCP_VC_BUDGET", default_value_t = 1_000_000)]
    vc_budget: u64,
    /// Cap on candidate defenses tried by the vertex cover solver.
    #[arg(long, env = "MCP_VC_CANDIDATES", default_value_t = 5_000_000)]
    vc_candidates: u64,
    /// Minimal cut enumeration node cap.
    #[arg(long, env = "MCP_ENUM_BUDGET", default_value_t = transform::DEFAULT_ENUM_BUDGET)]
    enum_budget: u64,
    /// Largest bag, terminals included, for the decomposition solver.
    #[arg(long, env = "MCP_MAX_BAG", default_value_t = 8)]
    max_bag: usize,
    /// Cap on f candidates per join entry.
    #[arg(long, env = "MCP_JOIN_CANDIDATES", default_value_t = 200_000)]
    join_candidates: u64,
    /// Cap on memoized table entries.
    #[arg(long, env = "MCP_STATE_BUDGET", default_value_t = 400_000)]
    state_budget: u64,
}

impl Budgets {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            brute_edges: self.brute_edges,
            search_nodes: self.search_nodes,
            vc_budget: self.vc_budget,
            vc_candidate_sets: self.vc_candidates,
            enum_budget: self.enum_budget,
            dp: DpConfig {
                max_bag: self.max_bag,
                join_candidates: self.join_candidates,
                state_budget: self.state_budget,
                ..DpConfig::default()
            },
            ..SolverConfig::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "auto")]
    algo: Algo,
    /// Include a verified defense on YES.
    #[arg(long)]
    certificate: bool,
    /// PACE tree decomposition of G - {s,t} (with --algo dp).
    #[arg(long)]
    td: Option<PathBuf>,
    /// Include solver counters.
    #[arg(long)]
    stats: bool,
    /// Worker threads when INSTANCE is a directory.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    budgets: Budgets,
    /// Instance file, `-` for stdin, or a directory of `.json` files.
    instance: String,
}

#[derive(Args)]
struct KernelizeArgs {
    /// Write the kernel instance here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "MCP_VC_BUDGET", default_value_t = 1_000_000)]
    vc_budget: u64,
    instance: String,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TransformKind {
    /// Merge edges that lie in no small minimal cut.
    #[arg(long)]
    rule1: bool,
    #[arg(long)]
    to_unit_cost: bool,
    #[arg(long)]
    to_unit_capacity: bool,
    #[arg(long)]
    to_mcp: bool,
    /// Replace vertices by paths so that every degree is at most three.
    #[arg(long)]
    subcubify: bool,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    kind: TransformKind,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "MCP_ENUM_BUDGET", default_value_t = transform::DEFAULT_ENUM_BUDGET)]
    enum_budget: u64,
    instance: String,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    family: Family,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Draw a random tiny source when no source flags are given.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Family {
    /// Independent set in a regular graph.
    Is {
        /// Number of source vertices, numbered from 1.
        #[arg(long)]
        n: Option<usize>,
        /// Source edges such as `1-2,2-3,1-3`.
        #[arg(long)]
        edges: Option<String>,
        #[arg(long)]
        k: Option<u64>,
    },
    Knapsack {
        /// Item sizes.
        #[arg(long, value_delimiter = ',')]
        items: Vec<u64>,
        /// Item values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<u64>,
        /// Size bound.
        #[arg(long = "B")]
        b: Option<u64>,
        /// Value target.
        #[arg(long = "C")]
        c: Option<u64>,
    },
    Binpacking {
        /// Item sizes.
        #[arg(long, value_delimiter = ',')]
        items: Vec<u64>,
        /// Bin size.
        #[arg(long = "B")]
        b: Option<u64>,
        /// Number of bins.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Balanced biclique in a bipartite graph.
    Biclique {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        edges: Option<String>,
        #[arg(long)]
        k: Option<u64>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON list of `[u, v]` pairs, or a solve report with a `defense` field.
    #[arg(long)]
    defense: PathBuf,
    instance: String,
}

fn read_input(path: &str) -> Result<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read(path).with_context(|| format!("reading {path}"))
    }
}

fn load(path: &str) -> Result<Instance> {
    Instance::from_json(&read_input(path)?).with_context(|| format!("parsing {path}"))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn run_solver(
    inst: &Instance,
    args: &SolveArgs,
    td: Option<&str>,
) -> mcp_core::Result<SolveOutcome> {
    let cfg = args.budgets.config();
    match args.algo {
        Algo::Auto => solve::auto(inst, &cfg),
        Algo::Brute => solve::brute_force(inst, BruteMode::DefenderOnly, &cfg),
        Algo::Search => solve::search_tree(inst, &cfg),
        Algo::Deg2 => solve::degree2(inst),
        Algo::Vc => solve::vc_fpt(inst, &cfg),
        Algo::Dp => match td {
            Some(text) => twdp::dp_solve_with_td(inst, text, &cfg.dp),
            None => twdp::dp_solve(inst, &cfg.dp),
        },
    }
}

fn defense_json(inst: &Instance, d: &DefenseSet) -> Value {
    json!(d
        .names(inst)
        .into_iter()
        .map(|(u, v)| [u, v])
        .collect::<Vec<_>>())
}

fn solve_report(inst: &Instance, args: &SolveArgs, td: Option<&str>) -> Result<(Answer, Value)> {
    let out = run_solver(inst, args, td)?;
    let mut report = json!({ "answer": out.answer, "solver": out.solver });
    if args.certificate && out.answer.is_yes() {
        let d = out
            .defense
            .as_ref()
            .ok_or_else(|| anyhow!("solver {} returned no defense", out.solver))?;
        if !solve::verify_defense(inst, d) {
            bail!("defense from {} failed verification", out.solver);
        }
        report["defense"] = defense_json(inst, d);
        report["cost"] = json!(d.total_cost());
    }
    if args.stats {
        report["stats"] = serde_json::to_value(&out.stats)?;
    }
    Ok((out.answer, report))
}

fn exit_for(answer: Answer) -> ExitCode {
    match answer {
        Answer::Yes => ExitCode::SUCCESS,
        Answer::No => ExitCode::from(1),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode> {
    if args.td.is_some() && !matches!(args.algo, Algo::Dp) {
        bail!("--td requires --algo dp");
    }
    let td = match &args.td {
        Some(p) => Some(fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    if args.instance != "-" && Path::new(&args.instance).is_dir() {
        return solve_batch(args, td.as_deref());
    }
    let inst = load(&args.instance)?;
    let (answer, report) = solve_report(&inst, args, td.as_deref())?;
    emit(&None, &report.to_string())?;
    Ok(exit_for(answer))
}

/// Solve every `.json` file of a directory, printing one line per file in
/// name order. Exits 2 if any file failed, otherwise 0.
fn solve_batch(args: &SolveArgs, td: Option<&str>) -> Result<ExitCode> {
    let mut files: Vec<PathBuf> = fs::read_dir(&args.instance)?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|x| x == "json"));
    files.sort();
    let next = AtomicUsize::new(0);
    let mut lines: Vec<(usize, Value, bool)> = std::thread::scope(|scope| {
        let workers: Vec<_> = (0..args.jobs.max(1))
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(path) = files.get(i) else { break };
                        let name = path.display().to_string();
                        let result = load(&name).and_then(|inst| solve_report(&inst, args, td));
                        done.push(match result {
                            Ok((_, mut report)) => {
                                report["file"] = json!(name);
                                (i, report, true)
                            }
                            Err(e) => {
                                (i, json!({ "file": name, "error": format!("{e:#}") }), false)
                            }
                        });
                    }
                    done
                })
            })
            .collect();
        workers
            .into_iter()
            .flat_map(|w| w.join().expect("solver thread panicked"))
            .collect()
    });
    lines.sort_by_key(|l| l.0);
    let mut ok = true;
    for (_, line, fine) in lines {
        ok &= fine;
        emit(&None, &line.to_string())?;
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_kernelize(args: &KernelizeArgs) -> Result<ExitCode> {
    let inst = load(&args.instance)?;
    let (kernel, report) = kernelize(&inst, args.vc_budget)?;
    if let (Some(path), Kernel::Reduced(k)) = (&args.out, &kernel) {
        emit(&Some(path.clone()), &k.to_json())?;
    }
    emit(&None, &serde_json::to_string(&report)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_transform(args: &TransformArgs) -> Result<ExitCode> {
    let inst = load(&args.instance)?;
    let k = &args.kind;
    let out = if k.rule1 {
        match transform::rule1_exhaust(&inst, args.enum_budget) {
            Rule1Outcome::Reduced { instance, .. } => instance,
            Rule1Outcome::TriviallyYes { trace } => {
                let line = json!({ "answer": Answer::Yes, "merges": trace.len() });
                emit(&args.out, &line.to_string())?;
                return Ok(ExitCode::SUCCESS);
            }
        }
    } else if k.to_unit_cost {
        transform::to_unit_cost(&inst)?
    } else if k.to_unit_capacity {
        transform::to_unit_capacity(&inst)?
    } else if k.to_mcp {
        transform::to_mcp(&inst)?
    } else {
        transform::subcubify(&inst)?
    };
    emit(&args.out, &out.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn parse_graph(n: usize, edges: &str) -> Result<SimpleGraph> {
    let mut g = SimpleGraph::new(n);
    for part in edges.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (u, v) = part
            .split_once('-')
            .ok_or_else(|| anyhow!("edge `{part}` is not of the form u-v"))?;
        let u: usize = u.trim().parse().with_context(|| format!("edge `{part}`"))?;
        let v: usize = v.trim().parse().with_context(|| format!("edge `{part}`"))?;
        if u == 0 || v == 0 || u > n || v > n || u == v {
            bail!("edge `{part}` must join two distinct vertices in 1..={n}");
        }
        g.add_edge(u - 1, v - 1);
    }
    Ok(g)
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode> {
    let need_seed = || {
        args.seed
            .ok_or_else(|| anyhow!("give the source flags or --seed"))
    };
    let generated: Generated = match &args.family {
        Family::Is { n, edges, k } => match (n, k) {
            (Some(n), Some(k)) => {
                generate::gen_regular_is(&parse_graph(*n, edges.as_deref().unwrap_or(""))?, *k)?
            }
            _ => generate::random_is(need_seed()?),
        },
        Family::Knapsack {
            items,
            values,
            b,
            c,
        } => match (b, c) {
            (Some(b), Some(c)) => generate::gen_knapsack(items, values, *b, *c)?,
            _ => generate::random_knapsack(need_seed()?),
        },
        Family::Binpacking { items, b, k } => match (b, k) {
            (Some(b), Some(k)) => generate::gen_binpacking(items, *b, *k)?,
            _ => generate::random_binpacking(need_seed()?),
        },
        Family::Biclique { n, edges, k } => match (n, k) {
            (Some(n), Some(k)) => {
                generate::gen_biclique_zwmcp(&parse_graph(*n, edges.as_deref().unwrap_or(""))?, *k)?
            }
            _ => generate::random_biclique(need_seed()?),
        },
    };
    emit(&args.out, &generated.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn parse_defense(inst: &Instance, text: &str) -> Result<DefenseSet> {
    let value: Value = serde_json::from_str(text).context("parsing defense")?;
    let list = match &value {
        Value::Object(map) => map.get("defense").cloned().unwrap_or(json!([])),
        _ => value,
    };
    let pairs: Vec<(String, String)> =
        serde_json::from_value(list).context("defense must be a list of [u, v] pairs")?;
    Ok(DefenseSet::from_names(inst, &pairs)?)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let inst = load(&args.instance)?;
    let text = fs::read_to_string(&args.defense)
        .with_context(|| format!("reading {}", args.defense.display()))?;
    let d = parse_defense(&inst, &text)?;
    let valid = solve::verify_defense(&inst, &d);
    let line = json!({ "valid": valid, "cost": d.total_cost(), "d": inst.d() });
    emit(&None, &line.to_string())?;
    Ok(if valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Kernelize(a) => cmd_kernelize(a),
        Command::Transform(a) => cmd_transform(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
