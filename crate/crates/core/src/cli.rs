//! Command-line front end; each subcommand is one pipeline stage with files
//! in between.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error, 3 validation error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::embedding::{
    chain_to_intervals, embed_chains, graph_frame_bounds, interval_vertex_blocks, prune_redundant,
    restrict_system, signal_to_function, PruneScope, SystemCounts, VertexBlockMap,
};
use crate::error::{Error, Result};
use crate::framelets::{build_system, PwcFunction};
use crate::graphs::{
    build_chain, pad_chain, Chain, ChainJson, Clusterer, Clustering, Endpoint, ExplicitClusterer,
    GraphJson, GreedyClusterer,
};
use crate::hierarchy::{make_dyadic_partition, BlockId, HierarchicalPartition, PartitionJson};
use crate::io::{
    coefficients_csv, read_coefficients_csv, read_json, read_signal_csv, signal_csv, write_json,
    LoadedSystem, SystemFile, SystemKind,
};
use crate::verify::verify_system;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// Environment variable seeding random verification signals.
pub const SEED_VAR: &str = "ADAHAAR_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "adahaar",
    version,
    about = "Adaptive directional Haar tight framelets on graphs and digraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PruneArg {
    /// Prune splits on the level just above the vertex blocks.
    Finest,
    /// Prune splits on every level.
    All,
    /// Skip the pruned system.
    None,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a digraph into the undirected pair (Gx, Gy).
    Symmetrize {
        /// Digraph JSON.
        digraph: PathBuf,
        /// Output directory for gx.json and gy.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Coarse-grain a graph into a chain, or validate an explicit chain.
    Chain {
        /// Undirected graph JSON (optional with --explicit).
        graph: Option<PathBuf>,
        /// Explicit chain JSON to validate and normalize.
        #[arg(long, conflicts_with_all = ["clusters", "target_per_level"])]
        explicit: Option<PathBuf>,
        /// Explicit clusterings, one list of vertex groups per step.
        #[arg(long)]
        clusters: Option<PathBuf>,
        /// Cluster counts for successive steps of the greedy clusterer.
        #[arg(long, value_delimiter = ',')]
        target_per_level: Vec<usize>,
        /// Maximum chain depth.
        #[arg(long)]
        depth: Option<usize>,
        /// Output chain JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the tensor partition and the full, restricted and pruned systems.
    Build {
        #[arg(long, required_unless_present = "dyadic")]
        chain_x: Option<PathBuf>,
        /// Second chain; omit for a one-dimensional (undirected graph) system.
        #[arg(long, requires = "chain_x")]
        chain_y: Option<PathBuf>,
        /// Dyadic partition of [0,1]^d instead of chains.
        #[arg(long, conflicts_with_all = ["chain_x", "chain_y"])]
        dyadic: Option<usize>,
        /// Cut-off depth; chains are padded up to it.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value = "finest")]
        prune: PruneArg,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Signal CSV to coefficient CSV.
    Analyze {
        signal: PathBuf,
        #[arg(long)]
        system: PathBuf,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficient CSV to signal CSV.
    Synthesize {
        coefficients: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the matrix identity, Parseval, reconstruction, orthogonality
    /// and vanishing moments of a system.
    Verify {
        system: PathBuf,
        /// Number of random test signals.
        #[arg(long, default_value_t = 100)]
        signals: usize,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Io(_) => EXIT_PARSE,
        _ => EXIT_VALIDATION,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn seed_from_env() -> Result<u64> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{SEED_VAR}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Symmetrize { digraph, out } => cmd_symmetrize(&digraph, &out),
        Command::Chain {
            graph,
            explicit,
            clusters,
            target_per_level,
            depth,
            out,
        } => cmd_chain(
            graph.as_deref(),
            explicit.as_deref(),
            clusters.as_deref(),
            target_per_level,
            depth,
            &out,
        ),
        Command::Build {
            chain_x,
            chain_y,
            dyadic,
            depth,
            prune,
            out,
        } => cmd_build(
            chain_x.as_deref(),
            chain_y.as_deref(),
            dyadic,
            depth,
            prune,
            &out,
        ),
        Command::Analyze {
            signal,
            system,
            out,
        } => cmd_analyze(&signal, &system, out.as_deref()),
        Command::Synthesize {
            coefficients,
            system,
            out,
        } => cmd_synthesize(&coefficients, &system, out.as_deref()),
        Command::Verify {
            system,
            signals,
            out,
        } => cmd_verify(&system, signals, out.as_deref()),
    }
}

fn cmd_symmetrize(path: &Path, out: &Path) -> Result<i32> {
    let doc: GraphJson = read_json(path)?;
    let g = doc.into_digraph()?;
    let connected = g.is_weakly_connected();
    if !connected {
        eprintln!("warning: digraph is not weakly connected; Gx and Gy may be disconnected");
    }
    let (gx, gy) = g.symmetrize();
    fs::create_dir_all(out)?;
    write_json(&out.join("gx.json"), &GraphJson::from(&gx))?;
    write_json(&out.join("gy.json"), &GraphJson::from(&gy))?;
    println!("vertices: {}", g.len());
    println!("weakly connected: {connected}");
    println!("gx connected: {}", gx.is_connected());
    println!("gy connected: {}", gy.is_connected());
    Ok(EXIT_OK)
}

fn parse_clusterings(path: &Path, base: &crate::graphs::Graph) -> Result<ExplicitClusterer> {
    let steps: Vec<Vec<Vec<Endpoint>>> = read_json(path)?;
    // Labels of coarse nodes exist only after the previous step, so each
    // step is applied before the next one is resolved.
    let mut resolved = Vec::with_capacity(steps.len());
    let mut graph = base.clone();
    for (s, groups) in steps.iter().enumerate() {
        let mut members = Vec::with_capacity(groups.len());
        for group in groups {
            let mut ids = Vec::with_capacity(group.len());
            for e in group {
                ids.push(match e {
                    Endpoint::Index(i) => *i,
                    Endpoint::Label(l) => graph.index_of(l).ok_or_else(|| {
                        Error::BadClustering(format!("step {s}: no node labelled {l:?}"))
                    })?,
                });
            }
            members.push(ids);
        }
        let c = Clustering::from_groups(members, graph.len())?;
        graph = crate::graphs::coarse_grain(&graph, &c)?;
        resolved.push(c);
    }
    Ok(ExplicitClusterer::new(resolved))
}

fn cmd_chain(
    graph: Option<&Path>,
    explicit: Option<&Path>,
    clusters: Option<&Path>,
    targets: Vec<usize>,
    depth: Option<usize>,
    out: &Path,
) -> Result<i32> {
    let chain = if let Some(path) = explicit {
        let doc: ChainJson = read_json(path)?;
        let chain = doc.into_chain()?;
        if let Some(gpath) = graph {
            let g = read_json::<GraphJson>(gpath)?.into_graph()?;
            if &g != chain.finest() {
                return Err(Error::InvalidChain(
                    "explicit chain does not start from the given graph".into(),
                ));
            }
        }
        chain
    } else {
        let gpath =
            graph.ok_or_else(|| Error::Parse("a graph file or --explicit is required".into()))?;
        let g = read_json::<GraphJson>(gpath)?.into_graph()?;
        if !g.is_connected() {
            eprintln!("warning: graph is not connected");
        }
        let (mut clusterer, default_depth): (Box<dyn Clusterer>, usize) = match clusters {
            Some(path) => {
                let explicit = parse_clusterings(path, &g)?;
                let steps = explicit.len();
                (Box::new(explicit), steps + 1)
            }
            None => (Box::new(GreedyClusterer::new(targets)), g.len()),
        };
        let max_depth = depth.unwrap_or(default_depth);
        build_chain(g, clusterer.as_mut(), max_depth)?
    };
    write_json(out, &ChainJson::from(&chain))?;
    let sizes: Vec<String> = chain.graphs().iter().map(|g| g.len().to_string()).collect();
    println!(
        "chain depth {}: node counts {}",
        chain.depth(),
        sizes.join(" -> ")
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct BoundsJson {
    lower: f64,
    upper: f64,
    rank: usize,
}

#[derive(Serialize)]
struct CountsReport {
    depth: usize,
    full: SystemCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    restricted: Option<SystemCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pruned: Option<SystemCounts>,
    frame_bounds: std::collections::BTreeMap<String, BoundsJson>,
}

fn load_chain(path: &Path) -> Result<Chain> {
    read_json::<ChainJson>(path)?.into_chain()
}

fn cmd_build(
    chain_x: Option<&Path>,
    chain_y: Option<&Path>,
    dyadic: Option<usize>,
    depth: Option<usize>,
    prune: PruneArg,
    out: &Path,
) -> Result<i32> {
    let (partition, vbm): (Arc<HierarchicalPartition>, Option<VertexBlockMap>) =
        match (chain_x, chain_y, dyadic) {
            (_, _, Some(d)) => (
                Arc::new(make_dyadic_partition(d, depth.unwrap_or(0))?),
                None,
            ),
            (Some(px), Some(py), None) => {
                let (cx, cy) = (load_chain(px)?, load_chain(py)?);
                let j = cx.depth().max(cy.depth()).max(depth.unwrap_or(0));
                let e = embed_chains(&pad_chain(&cx, j)?, &pad_chain(&cy, j)?)?;
                (e.partition, Some(e.vertex_blocks))
            }
            (Some(px), None, None) => {
                let cx = load_chain(px)?;
                let j = cx.depth().max(depth.unwrap_or(0));
                let cx = pad_chain(&cx, j)?;
                let e = chain_to_intervals(&cx)?;
                let vbm = interval_vertex_blocks(&cx, &e);
                (Arc::new(e.into_partition()), Some(vbm))
            }
            (None, _, None) => {
                return Err(Error::Parse("--chain-x or --dyadic is required".into()));
            }
        };
    let j = partition.depth();
    fs::create_dir_all(out)?;
    write_json(
        &out.join("partition.json"),
        &PartitionJson::from(&*partition),
    )?;
    let full = build_system(partition.clone(), j)?;
    write_json(
        &out.join("system_full.json"),
        &SystemFile::new(&full, SystemKind::Full, vbm.as_ref()),
    )?;
    let mut report = CountsReport {
        depth: j,
        full: SystemCounts::of(&full),
        restricted: None,
        pruned: None,
        frame_bounds: Default::default(),
    };
    println!("depth {j}: {} leaf blocks", partition.leaves().len());
    println!("full system: {} functions", full.len());
    if let Some(vbm) = &vbm {
        write_json(&out.join("vertex_blocks.json"), &vbm.to_json())?;
        let restricted = restrict_system(&full, vbm);
        let (bounds, rank) = graph_frame_bounds(&restricted, vbm)?;
        report.frame_bounds.insert(
            "restricted".into(),
            BoundsJson {
                lower: bounds.lower,
                upper: bounds.upper,
                rank,
            },
        );
        write_json(
            &out.join("system_restricted.json"),
            &SystemFile::new(&restricted, SystemKind::Restricted, Some(vbm)),
        )?;
        println!("restricted system: {} functions", restricted.len());
        report.restricted = Some(SystemCounts::of(&restricted));
        let scope = match prune {
            PruneArg::Finest => Some(PruneScope::FinestLevel),
            PruneArg::All => Some(PruneScope::AllLevels),
            PruneArg::None => None,
        };
        if let Some(scope) = scope {
            let pruned = prune_redundant(&restricted, vbm, scope)?;
            write_json(
                &out.join("system_pruned.json"),
                &SystemFile::new(&pruned.system, SystemKind::Pruned, Some(vbm)),
            )?;
            println!(
                "pruned system: {} functions, frame bounds [{:.6}, {:.6}], rank {}/{}",
                pruned.system.len(),
                pruned.bounds.lower,
                pruned.bounds.upper,
                pruned.rank,
                vbm.len()
            );
            report.frame_bounds.insert(
                "pruned".into(),
                BoundsJson {
                    lower: pruned.bounds.lower,
                    upper: pruned.bounds.upper,
                    rank: pruned.rank,
                },
            );
            report.pruned = Some(SystemCounts::of(&pruned.system));
        }
    }
    write_json(&out.join("counts.json"), &report)?;
    Ok(EXIT_OK)
}

fn load_system(path: &Path) -> Result<LoadedSystem> {
    read_json::<SystemFile>(path)?.load()
}

/// Turns signal rows into a function: vertex labels when the system carries
/// vertex blocks, leaf block ids otherwise.
fn signal_function(rows: &[(String, f64)], loaded: &LoadedSystem) -> Result<PwcFunction> {
    let p = loaded.system.partition();
    match &loaded.vertex_blocks {
        Some(vbm) => signal_to_function(rows.iter().map(|(l, v)| (l.as_str(), *v)), vbm, p),
        None => {
            let mut values = Vec::with_capacity(rows.len());
            for (label, v) in rows {
                let id: usize = label
                    .trim_start_matches('#')
                    .parse()
                    .map_err(|_| Error::UnknownVertex(label.clone()))?;
                values.push((BlockId(id), *v));
            }
            PwcFunction::from_leaf_values(p.clone(), values)
        }
    }
}

fn cmd_analyze(signal: &Path, system: &Path, out: Option<&Path>) -> Result<i32> {
    let loaded = load_system(system)?;
    let rows = read_signal_csv(signal)?;
    let f = signal_function(&rows, &loaded)?;
    let c = loaded.system.analyze(&f)?;
    emit(out, &coefficients_csv(&c)?)?;
    Ok(EXIT_OK)
}

fn sample(f: &PwcFunction, loaded: &LoadedSystem) -> Vec<(String, f64)> {
    match &loaded.vertex_blocks {
        Some(vbm) => vbm
            .iter()
            .map(|(l, b)| (l.to_string(), f.value(b)))
            .collect(),
        None => loaded
            .system
            .partition()
            .leaves()
            .iter()
            .map(|&b| (b.0.to_string(), f.value(b)))
            .collect(),
    }
}

fn cmd_synthesize(coefficients: &Path, system: &Path, out: Option<&Path>) -> Result<i32> {
    let loaded = load_system(system)?;
    let c = read_coefficients_csv(coefficients)?;
    let f = loaded.system.synthesize(&c)?;
    emit(out, &signal_csv(&sample(&f, &loaded))?)?;
    Ok(EXIT_OK)
}

fn cmd_verify(system: &Path, signals: usize, out: Option<&Path>) -> Result<i32> {
    let seed = seed_from_env()?;
    let loaded = load_system(system)?;
    let report = verify_system(&loaded.system, loaded.vertex_blocks.as_ref(), signals, seed)?;
    println!(
        "system: {} functions, depth {}, seed {}",
        loaded.system.len(),
        loaded.system.depth(),
        seed
    );
    for check in &report.checks {
        println!("{check}");
    }
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}
