//! Command-line front end: solve, construct, ratio, embed, verify and
//! topology utilities over the library's file formats.
//!
//! Exit codes: 0 success, 1 validation failure (with a witness in the
//! output), 2 usage or IO error. Repeated runs with identical flags produce
//! byte-identical outputs regardless of `STEINER_WORKERS`.

use clap::{Args, Parser, Subcommand};
use simplex_steiner::construct::{double, iterate_double, pow2_simplex_tree, ratio_sequence};
use simplex_steiner::embed::{
    conjecture3_scan_capped, embed_graph, make_reduction_instance, Graph, Scale,
};
use simplex_steiner::geometry::Point;
use simplex_steiner::io;
use simplex_steiner::solver::{
    self, mst_cost, optimal_steiner_tree_with, relatively_minimal_with, SolveOptions, SteinerTree,
};
use simplex_steiner::topology::{
    conjectured_topology, enumerate_full_topologies_capped, good_tree, label_full_binary,
    terminal_wiener, BinaryTree, Topology,
};
use simplex_steiner::{verify, Error};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "steiner",
    version,
    about = "Euclidean Steiner trees of regular simplices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a point set: relatively minimal tree for a fixed topology, or
    /// exact search over all full topologies.
    Solve(SolveArgs),
    /// Build candidate trees of regular simplices by doubling or closed form.
    Construct(ConstructArgs),
    /// Emit the doubling ratio recursion as CSV.
    Ratio(RatioArgs),
    /// Embed graphs as point configurations; reduction instances and scans.
    Embed(EmbedArgs),
    /// Check a stored tree against the structural necessary conditions.
    Verify(VerifyArgs),
    /// Topology utilities: good trees, the conjectured topology,
    /// enumeration, terminal Wiener index.
    Topology(TopologyArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Point-set JSON file ({"dim": d, "points": [[..], ..]}).
    points: PathBuf,
    /// Solve this fixed topology (text format) instead of searching.
    #[arg(long, conflicts_with = "exact")]
    topology: Option<PathBuf>,
    /// Exhaustive search over all full topologies (default when no
    /// topology file is given).
    #[arg(long)]
    exact: bool,
    /// Terminal-count cap for the exhaustive search.
    #[arg(long, default_value_t = solver::DEFAULT_SOLVER_CAP)]
    cap: usize,
    /// Relative cost-change tolerance per sweep.
    #[arg(long, default_value_t = solver::DEFAULT_TOL)]
    tol: f64,
    /// Write the solved tree as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the verification report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    /// Start from the solved regular d-simplex (conjectured topology).
    #[arg(long, conflicts_with = "base_file")]
    base: Option<usize>,
    /// Start from a stored tree (JSON, basis-vector terminals).
    #[arg(long)]
    base_file: Option<PathBuf>,
    /// Number of doubling steps to apply.
    #[arg(long, conflicts_with = "pow2")]
    doublings: Option<usize>,
    /// Emit the closed-form tree on 2^k terminals.
    #[arg(long)]
    pow2: Option<usize>,
    /// Write the constructed tree as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the verification report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct RatioArgs {
    /// Starting simplex size.
    #[arg(long)]
    d: usize,
    /// Number of recursion steps.
    #[arg(long)]
    k: usize,
    /// Starting ratio; defaults to the solved ratio of the regular
    /// d-simplex (conjectured topology).
    #[arg(long)]
    l0: Option<f64>,
    /// Write the CSV to a file as well as stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    /// Edge-list file (one `u v` pair per line, 0-indexed). Not used with
    /// --scan.
    graph: Option<PathBuf>,
    /// Embedding scale.
    #[arg(long, default_value = "raw")]
    scale: ScaleArg,
    /// Emit a vertex-cover reduction instance (triangle-free input,
    /// scale 1/sqrt 2).
    #[arg(long, conflicts_with = "scan")]
    reduce: bool,
    /// Scan all m-edge graphs and compare against the star embedding.
    #[arg(long)]
    scan: Option<usize>,
    /// Cap for the scan edge count.
    #[arg(long, default_value_t = simplex_steiner::embed::DEFAULT_SCAN_CAP)]
    cap: usize,
    /// Output file (point-set JSON, instance JSON, or scan CSV).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ScaleArg {
    Raw,
    Unit,
}

#[derive(Args)]
struct VerifyArgs {
    /// Tree JSON file.
    tree: PathBuf,
    /// Point set to check the leaf condition against (defaults to the
    /// tree's own terminals).
    #[arg(long)]
    points: Option<PathBuf>,
    /// Write the report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TopologyArgs {
    #[command(subcommand)]
    command: TopologyCommand,
}

#[derive(Subcommand)]
enum TopologyCommand {
    /// The unique good binary tree with the given number of leaves.
    GoodTree { leaves: usize },
    /// The conjectured optimal full topology of the regular d-simplex.
    Conjectured {
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count (and optionally write) all full topologies on n terminals.
    Enumerate {
        n: usize,
        #[arg(long, default_value_t = simplex_steiner::topology::DEFAULT_ENUMERATION_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Terminal Wiener index of a topology.
    Wiener {
        /// Topology text file.
        #[arg(long, conflicts_with = "conjectured")]
        file: Option<PathBuf>,
        /// Use the conjectured topology on d terminals.
        #[arg(long)]
        conjectured: Option<usize>,
    },
}

/// 9 significant digits for human-readable tables; file formats keep full
/// precision.
fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let order = x.abs().log10().floor() as i32;
    let decimals = (8 - order).max(0) as usize;
    format!("{x:.decimals$}")
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Json(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

fn read_to_string(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(Error::Io)
}

fn write_out(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(Error::Io)
}

fn load_points(path: &Path) -> Result<Vec<Point>, Error> {
    io::parse_point_set(&read_to_string(path)?)
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (e.g. `steiner ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    if let Ok(workers) = std::env::var("STEINER_WORKERS") {
        if let Ok(n) = workers.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Ratio(args) => cmd_ratio(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Topology(args) => cmd_topology(args),
    }
}

fn emit_tree_summary(tree: &SteinerTree, points: &[Point]) -> Result<String, Error> {
    let mut out = String::new();
    let _ = writeln!(out, "cost      {}", sig9(tree.cost));
    if points.len() >= 2 {
        let mst = mst_cost(points)?;
        let _ = writeln!(out, "mst       {}", sig9(mst));
        let _ = writeln!(out, "ratio     {}", sig9(tree.cost / mst));
    }
    let _ = writeln!(
        out,
        "converged {} (residual {:.3e})",
        tree.converged, tree.residual
    );
    if !tree.collapsed_edges.is_empty() {
        let names: Vec<String> = tree
            .collapsed_edges
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect();
        let _ = writeln!(out, "collapsed {}", names.join(" "));
    }
    Ok(out)
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Error> {
    let points = load_points(&args.points)?;
    let opts = SolveOptions {
        tol: args.tol,
        ..SolveOptions::default()
    };
    let tree = match &args.topology {
        Some(path) => {
            let topo = Topology::from_text(&read_to_string(path)?)?;
            relatively_minimal_with(&points, &topo, &opts)?
        }
        None => {
            let report = optimal_steiner_tree_with(&points, args.cap, &opts)?;
            let ties = report.ties.len();
            if ties > 1 {
                println!("ties      {ties} topologies within 1e-9 of the optimum");
            }
            report.best
        }
    };
    print!("{}", emit_tree_summary(&tree, &points)?);
    let verification = verify::full_report(&points, &tree);
    print!("{verification}");
    if let Some(path) = &args.out {
        write_out(path, &io::tree_to_json(&tree))?;
    }
    if let Some(path) = &args.report {
        write_out(path, &serde_json::to_string_pretty(&verification)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(args: ConstructArgs) -> Result<ExitCode, Error> {
    let candidate = match (args.base, &args.base_file, args.doublings, args.pow2) {
        (None, None, None, Some(k)) => pow2_simplex_tree(k)?,
        (base, base_file, Some(k), None) => {
            let tree = match (base, base_file) {
                (Some(d), None) => relatively_minimal_with(
                    &solver::simplex_terminals(d),
                    &conjectured_topology(d)?,
                    &SolveOptions::default(),
                )?,
                (None, Some(path)) => io::tree_from_json(&read_to_string(path)?)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "give exactly one of --base or --base-file".into(),
                    ))
                }
            };
            if k == 0 {
                iterate_double(&tree, 0)?
            } else {
                let mut cur = double(&tree)?;
                for _ in 1..k {
                    cur = double(&cur.tree)?;
                }
                cur
            }
        }
        _ => {
            return Err(Error::InvalidInput(
                "give --pow2 k, or a base (--base d | --base-file f) with --doublings k".into(),
            ))
        }
    };
    let tree = &candidate.tree;
    let d = tree.topology.n_terminals();
    let terminals = solver::simplex_terminals(d);
    print!("{}", emit_tree_summary(tree, &terminals)?);
    let verification = verify::full_report(&terminals, tree);
    print!("{verification}");
    if let Some(path) = &args.out {
        write_out(path, &io::tree_to_json(tree))?;
    }
    if let Some(path) = &args.report {
        write_out(path, &serde_json::to_string_pretty(&verification)?)?;
    }
    if !verification.all_passed() {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ratio(args: RatioArgs) -> Result<ExitCode, Error> {
    let l0 = match args.l0 {
        Some(x) => x,
        None => {
            let tree = relatively_minimal_with(
                &solver::simplex_terminals(args.d),
                &conjectured_topology(args.d)?,
                &SolveOptions::default(),
            )?;
            tree.cost / mst_cost(&solver::simplex_terminals(args.d))?
        }
    };
    let steps = args.k.max(1);
    let seq = ratio_sequence(l0, args.d, steps)?;
    let mut csv = io::ratio_csv(&seq);
    if args.k == 0 {
        // Only the starting row was requested.
        csv = csv.lines().take(2).collect::<Vec<_>>().join("\n") + "\n";
    }
    if seq.starts_at_or_below_limit {
        eprintln!(
            "warning: l0 = {} is at or below the limit {}; monotone decrease is not guaranteed",
            sig9(seq.values[0]),
            sig9(seq.limit)
        );
    }
    print!("{csv}");
    if let Some(path) = &args.out {
        write_out(path, &csv)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_embed(args: EmbedArgs) -> Result<ExitCode, Error> {
    if let Some(m) = args.scan {
        let report = conjecture3_scan_capped(m, args.cap, &SolveOptions::default())?;
        println!("star cost {}", sig9(report.star_cost));
        println!(
            "star is minimum: {} ({} graphs, {} ties)",
            report.star_is_min,
            report.entries.len(),
            report.entries.iter().filter(|e| e.ties_star).count()
        );
        let csv = io::scan_csv(&report);
        print!("{csv}");
        if let Some(path) = &args.out {
            write_out(path, &csv)?;
        }
        return Ok(ExitCode::SUCCESS);
    }

    let graph_path = args.graph.as_ref().ok_or_else(|| {
        Error::InvalidInput("an edge-list file is required unless --scan is used".into())
    })?;
    let graph = Graph::parse_edge_list(&read_to_string(graph_path)?)?;
    if args.reduce {
        let instance = make_reduction_instance(&graph)?;
        println!(
            "reduction instance: {} points in R^{}",
            instance.m,
            instance.config.points[0].dim()
        );
        let json = io::instance_to_json(&instance);
        if let Some(path) = &args.out {
            write_out(path, &json)?;
        } else {
            println!("{json}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let scale = match args.scale {
        ScaleArg::Raw => Scale::Raw,
        ScaleArg::Unit => Scale::Unit,
    };
    let config = embed_graph(&graph, scale);
    println!(
        "embedded {} edges into R^{}",
        config.points.len(),
        graph.n_vertices()
    );
    let json = io::point_set_to_json(&config.points, None);
    if let Some(path) = &args.out {
        write_out(path, &json)?;
    } else {
        println!("{json}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let tree = io::tree_from_json(&read_to_string(&args.tree)?)?;
    let points = match &args.points {
        Some(path) => load_points(path)?,
        None => tree.positions[..tree.topology.n_terminals()].to_vec(),
    };
    let report = verify::full_report(&points, &tree);
    print!("{report}");
    if let Some(path) = &args.out {
        write_out(path, &serde_json::to_string_pretty(&report)?)?;
    }
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn render_shape(t: &BinaryTree, out: &mut String) {
    match &t.children {
        None => out.push('*'),
        Some((l, r)) => {
            out.push('(');
            render_shape(l, out);
            render_shape(r, out);
            out.push(')');
        }
    }
}

fn cmd_topology(args: TopologyArgs) -> Result<ExitCode, Error> {
    match args.command {
        TopologyCommand::GoodTree { leaves } => {
            let g = good_tree(leaves)?;
            let mut shape = String::new();
            render_shape(&g.root, &mut shape);
            println!("height {}", g.height);
            println!("leaves {}", g.root.leaf_count());
            println!("shape  {shape}");
            let labeled = label_full_binary(&g.root, "");
            println!("leaf labels {}", labeled.leaf_labels().join(" "));
        }
        TopologyCommand::Conjectured { d, out } => {
            let t = conjectured_topology(d)?;
            let text = t.to_text();
            print!("{text}");
            if let Some(path) = out {
                write_out(&path, &text)?;
            }
        }
        TopologyCommand::Enumerate { n, cap, out } => {
            let topologies = enumerate_full_topologies_capped(n, cap)?;
            println!("{}", topologies.len());
            if let Some(path) = out {
                let blocks: Vec<String> = topologies.iter().map(Topology::to_text).collect();
                write_out(&path, &blocks.join("\n"))?;
            }
        }
        TopologyCommand::Wiener { file, conjectured } => {
            let t = match (file, conjectured) {
                (Some(path), None) => Topology::from_text(&read_to_string(&path)?)?,
                (None, Some(d)) => conjectured_topology(d)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "give exactly one of --file or --conjectured".into(),
                    ))
                }
            };
            println!("{}", terminal_wiener(&t));
        }
    }
    Ok(ExitCode::SUCCESS)
}
