//! Command-line front door: graph generation, exact solving, strategy
//! verification, scripted play, the gadget construction, and the plane game.
//!
//! Output is JSON-lines (one record per event, a final summary record with
//! the verdict) so runs stream and diff cleanly. Identical arguments and
//! seeds produce byte-identical output. Exit codes: 0 success, 1 refutation
//! or counterexample, 2 usage error, 3 resource limit.

use crate::euclid::{
    localize, FleeFromCenter, HugBisector, PlaneEngine, PlanePoint, RandomWalk, RobberPolicy,
    ScriptedPath,
};
use crate::game::{
    play, verify_strategy, FeedbackModel, GameError, Strategy, VerifyOptions, VerifyOutcome,
};
use crate::graph::{
    cartesian_product, exact_pathwidth, outerplanar_embedding, parse_graph, to_dot, to_edge_list,
    FamilySpec, Graph, GraphError, PathDecomposition, Vertex,
};
use crate::solver::{
    centroidal_dimension, hardness_gadget, metric_dimension, min_locating_set, zeta, zeta_star,
    SolveOptions, SolverError,
};
use crate::strategies::{
    auto_strategy, bipartite_strategy, component_strategy, outerplanar_strategy,
    pathwidth_strategy, product_strategy, tree_strategy, trivial_strategy, StrategyError,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Parsed invocation.
#[derive(Parser, Debug)]
#[command(
    name = "centroloc",
    version,
    about = "Sequential localization games on graphs: exact solving, strategy verification, and the plane variant"
)]
pub struct RunConfig {
    /// Worker threads for parallel fixpoint rounds (fallback: CENTROLOC_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct GraphSource {
    /// Graph file in the edge-list format ("n m" header, then "u v" lines).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Family spec such as path:5, hypercube:3, random_maximal_outerplanar:40:7.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Model {
    Centroidal,
    Metric,
}

impl From<Model> for FeedbackModel {
    fn from(m: Model) -> FeedbackModel {
        match m {
            Model::Centroidal => FeedbackModel::Centroidal,
            Model::Metric => FeedbackModel::Metric,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Quantity {
    Zeta,
    #[value(name = "zeta_star", alias = "zeta_star")]
    ZetaStar,
    Md,
    Cd,
    Locating,
    Pathwidth,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyName {
    Trivial,
    Component,
    Bipartite,
    Pathwidth,
    Tree,
    Product,
    Outerplanar,
    Auto,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph file (or DOT) from a family spec.
    Gen {
        /// Family spec, e.g. cycle:7 or random_tree:50:7.
        #[arg(long)]
        family: String,
        /// Emit DOT for visualization instead of the edge-list format.
        #[arg(long)]
        dot: bool,
    },
    /// Compute an exact quantity of the graph.
    Solve {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Vertex ceiling for the exact game solver (default 12) or the
        /// pathwidth dynamic program (default 20).
        #[arg(long)]
        limit: Option<usize>,
        /// Quotient game states by graph automorphisms.
        #[arg(long)]
        symmetry: bool,
    },
    /// Exhaustively verify a cop strategy against every robber behavior.
    Verify {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum)]
        strategy: StrategyName,
        #[arg(long, value_enum, default_value = "centroidal")]
        model: Model,
        /// Turn bound; default 5*n^2 + 20.
        #[arg(long)]
        bound: Option<usize>,
        /// Path decomposition file (one bag per line) for --strategy pathwidth.
        #[arg(long)]
        decomposition: Option<PathBuf>,
        /// Two factor family specs, comma separated, for --strategy product;
        /// the game graph is then their cartesian product.
        #[arg(long)]
        factors: Option<String>,
    },
    /// Play the game against one scripted robber walk.
    Play {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum)]
        strategy: StrategyName,
        #[arg(long, value_enum, default_value = "centroidal")]
        model: Model,
        /// Comma-separated vertices, or @FILE with one vertex per line.
        #[arg(long)]
        trajectory: String,
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[arg(long)]
        factors: Option<String>,
    },
    /// Emit the diameter-2 hardness gadget of the graph.
    Gadget {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Run the plane game against a scripted or generated robber.
    Plane {
        /// Probe drift per turn; must exceed the robber speed 1.
        #[arg(long, default_value_t = 2.0)]
        delta: f64,
        /// Announcement slack: stops once the region sides are <= 6 + eps.
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Generator spec (stationary:X:Y, flee:X:Y, hug:X:Y, random:X:Y) or
        /// a file of "x y" lines.
        #[arg(long)]
        trajectory: String,
        /// Seed for the random generator trajectory.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum CliError {
    Usage(String),
    Resource(String),
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> CliError {
        match e {
            GraphError::LimitExceeded { .. } => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> CliError {
        match e {
            SolverError::LimitExceeded { .. } => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<StrategyError> for CliError {
    fn from(e: StrategyError) -> CliError {
        match e {
            StrategyError::Graph(g) => g.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> CliError {
        match e {
            GameError::MemoLimitExceeded { .. } => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<crate::euclid::EuclidError> for CliError {
    fn from(e: crate::euclid::EuclidError) -> CliError {
        match e {
            crate::euclid::EuclidError::TurnCapExceeded(_) => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Usage(e.to_string())
    }
}

/// Runs one invocation; output goes to `out` (or the --output file).
pub fn dispatch(argv: Vec<String>, out: &mut dyn Write) -> i32 {
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // Help and version renderings are successful outputs.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    if let Some(n) = config.threads.or_else(|| {
        std::env::var("CENTROLOC_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    }) {
        // Ignore "already initialized": only the first dispatch can set it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let mut buffer: Vec<u8> = Vec::new();
    let code = match run(&config, &mut buffer) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(buffer, "{}", json!({ "error": msg, "kind": "usage" }));
            EXIT_USAGE
        }
        Err(CliError::Resource(msg)) => {
            let _ = writeln!(buffer, "{}", json!({ "error": msg, "kind": "resource" }));
            EXIT_RESOURCE
        }
    };
    let write_result = match &config.output {
        Some(path) => std::fs::write(path, &buffer).map_err(|e| e.to_string()),
        None => out.write_all(&buffer).map_err(|e| e.to_string()),
    };
    if let Err(e) = write_result {
        let _ = writeln!(out, "{}", json!({ "error": e, "kind": "io" }));
        return EXIT_USAGE;
    }
    code
}

fn load_source(source: &GraphSource) -> Result<Graph, CliError> {
    match (&source.graph, &source.family) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            Ok(parse_graph(&text)?)
        }
        (None, Some(spec)) => Ok(FamilySpec::parse(spec)?.generate()?),
        _ => Err(CliError::Usage(
            "exactly one graph source required: --graph FILE or --family SPEC".into(),
        )),
    }
}

fn parse_decomposition(path: &PathBuf) -> Result<PathDecomposition, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut bags = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bag: Result<Vec<Vertex>, _> = line.split_whitespace().map(|t| t.parse()).collect();
        bags.push(bag.map_err(|_| CliError::Usage(format!("bad bag line: {line}")))?);
    }
    Ok(PathDecomposition { bags })
}

/// Builds the named strategy; for `product` the factor specs replace the
/// graph source and the returned graph is their cartesian product.
fn build_strategy(
    name: StrategyName,
    source: &GraphSource,
    decomposition: &Option<PathBuf>,
    factors: &Option<String>,
) -> Result<(Graph, Box<dyn Strategy>), CliError> {
    if matches!(name, StrategyName::Product) {
        let (g, h) = match factors {
            Some(spec) => {
                let parts: Vec<&str> = spec.split(',').collect();
                if parts.len() != 2 {
                    return Err(CliError::Usage(
                        "--factors needs exactly two comma-separated family specs".into(),
                    ));
                }
                (
                    FamilySpec::parse(parts[0])?.generate()?,
                    FamilySpec::parse(parts[1])?.generate()?,
                )
            }
            None => match &source.family {
                // A hypercube is an iterated product with an edge.
                Some(spec) if spec.starts_with("hypercube:") => {
                    let d: usize = spec[10..]
                        .parse()
                        .map_err(|_| CliError::Usage("bad hypercube dimension".into()))?;
                    if d < 2 {
                        return Err(CliError::Usage(
                            "product strategy needs hypercube dimension >= 2".into(),
                        ));
                    }
                    let k2 = FamilySpec::Complete(2).generate()?;
                    let q = FamilySpec::Hypercube(d - 1).generate()?;
                    (k2, q)
                }
                _ => {
                    return Err(CliError::Usage(
                        "product strategy needs --factors A,B or --family hypercube:D".into(),
                    ))
                }
            },
        };
        let inner_g = auto_strategy(&g)?;
        let inner_h = build_factor_strategy(&h)?;
        let (p, _) = cartesian_product(&g, &h)?;
        let s = product_strategy(&g, &h, inner_g, inner_h)?;
        return Ok((p, Box::new(s)));
    }
    let g = load_source(source)?;
    let s: Box<dyn Strategy> = match name {
        StrategyName::Trivial => Box::new(trivial_strategy(&g)?),
        StrategyName::Component => Box::new(component_strategy(&g, &auto_strategy)?),
        StrategyName::Bipartite => Box::new(bipartite_strategy(&g)?),
        StrategyName::Tree => Box::new(tree_strategy(&g)?),
        StrategyName::Outerplanar => {
            let emb = outerplanar_embedding(&g)?;
            Box::new(outerplanar_strategy(&g, emb)?)
        }
        StrategyName::Pathwidth => {
            let pd = match decomposition {
                Some(path) => parse_decomposition(path)?,
                None => exact_pathwidth(&g, 20)?.1,
            };
            Box::new(pathwidth_strategy(&g, &pd)?)
        }
        StrategyName::Auto => auto_strategy(&g)?,
        StrategyName::Product => unreachable!("handled above"),
    };
    Ok((g, s))
}

/// Factor strategies for nested products: hypercubes recurse, everything
/// else goes through the structural chooser.
fn build_factor_strategy(h: &Graph) -> Result<Box<dyn Strategy>, CliError> {
    // A hypercube factor of dimension >= 2 is itself solved by product.
    let n = h.n();
    if n >= 4
        && n.is_power_of_two()
        && h.vertices()
            .all(|v| h.degree(v) == n.trailing_zeros() as usize)
    {
        let d = n.trailing_zeros() as usize;
        let q = FamilySpec::Hypercube(d).generate()?;
        if q == *h {
            let k2 = FamilySpec::Complete(2).generate()?;
            let sub = FamilySpec::Hypercube(d - 1).generate()?;
            let inner_g = auto_strategy(&k2)?;
            let inner_h = build_factor_strategy(&sub)?;
            return Ok(Box::new(product_strategy(&k2, &sub, inner_g, inner_h)?));
        }
    }
    Ok(auto_strategy(h)?)
}

fn parse_vertex_trajectory(spec: &str) -> Result<Vec<Vertex>, CliError> {
    let text = if let Some(path) = spec.strip_prefix('@') {
        std::fs::read_to_string(path)?
    } else {
        spec.replace(',', " ")
    };
    let traj: Result<Vec<Vertex>, _> = text.split_whitespace().map(|t| t.parse()).collect();
    let traj = traj.map_err(|_| CliError::Usage("trajectory must list vertex ids".into()))?;
    if traj.is_empty() {
        return Err(CliError::Usage("trajectory is empty".into()));
    }
    Ok(traj)
}

fn parse_plane_robber(spec: &str, seed: u64) -> Result<Box<dyn RobberPolicy>, CliError> {
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let coord = |i: usize| -> Result<f64, CliError> {
            parts
                .get(i)
                .ok_or_else(|| CliError::Usage("generator needs coordinates".into()))?
                .parse()
                .map_err(|_| CliError::Usage("bad generator coordinate".into()))
        };
        let start = PlanePoint::new(coord(1)?, coord(2)?);
        return match parts[0] {
            "stationary" => Ok(Box::new(ScriptedPath::new(vec![start]))),
            "flee" => Ok(Box::new(FleeFromCenter { start })),
            "hug" => Ok(Box::new(HugBisector { start })),
            "random" => Ok(Box::new(RandomWalk::new(start, seed))),
            other => Err(CliError::Usage(format!(
                "unknown robber generator '{other}'"
            ))),
        };
    }
    let text = std::fs::read_to_string(spec)?;
    let mut points = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let x: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CliError::Usage(format!("bad point line: {line}")))?;
        let y: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CliError::Usage(format!("bad point line: {line}")))?;
        points.push(PlanePoint::new(x, y));
    }
    if points.is_empty() {
        return Err(CliError::Usage("trajectory file has no points".into()));
    }
    Ok(Box::new(ScriptedPath::new(points)))
}

fn run(config: &RunConfig, out: &mut Vec<u8>) -> Result<i32, CliError> {
    match &config.command {
        Command::Gen { family, dot } => {
            let g = FamilySpec::parse(family)?.generate()?;
            if *dot {
                write!(out, "{}", to_dot(&g))?;
            } else {
                write!(out, "{}", to_edge_list(&g))?;
            }
            Ok(EXIT_OK)
        }
        Command::Solve {
            source,
            quantity,
            limit,
            symmetry,
        } => {
            let g = load_source(source)?;
            let opts = SolveOptions {
                max_vertices: limit.unwrap_or(12),
                symmetry_reduction: *symmetry,
                ..Default::default()
            };
            let record = match quantity {
                Quantity::ZetaStar => {
                    let v = zeta_star(&g, &opts)?;
                    json!({ "graph_hash": g.content_hash(), "quantity": "zeta_star", "k": v, "value": v })
                }
                Quantity::Zeta => {
                    let v = zeta(&g, &opts)?;
                    json!({ "graph_hash": g.content_hash(), "quantity": "zeta", "k": v, "value": v })
                }
                Quantity::Md => {
                    let v = metric_dimension(&g)?;
                    json!({ "graph_hash": g.content_hash(), "quantity": "md", "value": v })
                }
                Quantity::Cd => {
                    let v = centroidal_dimension(&g)?;
                    json!({ "graph_hash": g.content_hash(), "quantity": "cd", "value": v })
                }
                Quantity::Locating => {
                    let (v, witness) = min_locating_set(&g)?;
                    json!({
                        "graph_hash": g.content_hash(),
                        "quantity": "locating",
                        "value": v,
                        "witness": witness,
                    })
                }
                Quantity::Pathwidth => {
                    let (v, pd) = exact_pathwidth(&g, limit.unwrap_or(20))?;
                    json!({
                        "graph_hash": g.content_hash(),
                        "quantity": "pathwidth",
                        "value": v,
                        "witness": pd.bags,
                    })
                }
            };
            writeln!(out, "{record}")?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            source,
            strategy,
            model,
            bound,
            decomposition,
            factors,
        } => {
            let (g, s) = build_strategy(*strategy, source, decomposition, factors)?;
            let bound = bound.unwrap_or(5 * g.n() * g.n() + 20);
            let outcome = verify_strategy(
                &g,
                s.as_ref(),
                (*model).into(),
                bound,
                VerifyOptions::default(),
            )?;
            match outcome {
                VerifyOutcome::Verified {
                    max_turns,
                    states_explored,
                } => {
                    writeln!(
                        out,
                        "{}",
                        json!({
                            "graph_hash": g.content_hash(),
                            "strategy": s.name(),
                            "k": s.budget(),
                            "bound": bound,
                            "verdict": "VERIFIED",
                            "max_turns": max_turns,
                            "states_explored": states_explored,
                        })
                    )?;
                    Ok(EXIT_OK)
                }
                VerifyOutcome::Refuted {
                    branch,
                    final_candidates,
                } => {
                    for (i, step) in branch.iter().enumerate() {
                        writeln!(
                            out,
                            "{}",
                            json!({
                                "turn": i,
                                "probe": step.probe,
                                "blocks": step.feedback.blocks,
                                "zero_hit": step.feedback.zero_hit,
                                "class": step.class,
                            })
                        )?;
                    }
                    writeln!(
                        out,
                        "{}",
                        json!({
                            "graph_hash": g.content_hash(),
                            "strategy": s.name(),
                            "k": s.budget(),
                            "bound": bound,
                            "verdict": "REFUTED",
                            "surviving_candidates": final_candidates,
                        })
                    )?;
                    Ok(EXIT_REFUTED)
                }
            }
        }
        Command::Play {
            source,
            strategy,
            model,
            trajectory,
            decomposition,
            factors,
        } => {
            let (g, s) = build_strategy(*strategy, source, decomposition, factors)?;
            let traj = parse_vertex_trajectory(trajectory)?;
            let mut s = s;
            let trace = play(&g, s.as_mut(), &traj, (*model).into())?;
            write!(out, "{}", trace.to_jsonl())?;
            Ok(EXIT_OK)
        }
        Command::Gadget { source } => {
            let g = load_source(source)?;
            let (g2, map) = hardness_gadget(&g)?;
            writeln!(
                out,
                "# gadget of a {}-vertex graph; added vertices {}..={}",
                map.original_n,
                map.added().start(),
                map.added().end()
            )?;
            write!(out, "{}", to_edge_list(&g2))?;
            Ok(EXIT_OK)
        }
        Command::Plane {
            delta,
            eps,
            trajectory,
            seed,
        } => {
            let policy = parse_plane_robber(trajectory, *seed)?;
            let mut engine = PlaneEngine::new(policy);
            let (_, _, trace) = localize(&mut engine, *delta, *eps)?;
            write!(out, "{}", trace.to_jsonl())?;
            Ok(EXIT_OK)
        }
    }
}
