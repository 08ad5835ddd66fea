use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use profile_lab::analysis::{
    ball_system, bound_harness, csv_rows, is_resolving, metric_dimension_exact, trace_system, vc_dimension, BenchSpec,
    MetricDimension, Radii,
};
use profile_lab::generators::{
    gen_grid_disk, gen_ktree_subgraph, gen_product, grid_td, lb_1planar, lb_treewidth, lb_treewidth_simple,
};
use profile_lab::graph::bfs_forest_from_set;
use profile_lab::guarding::{
    check_guarding, guarding_product, guarding_td, guarding_wcol, order_from_td, GuardVerdict, LinearOrder,
    ProductCoordinates, TreeDecomposition,
};
use profile_lab::io as formats;
use profile_lab::planar::{
    check_sparse_cover, check_tripod_decomposition, cut_along_tree, sparse_cover_greedy, steiner_tree_greedy,
    tripod_decomposition,
};
use profile_lab::profiles::{neighborhood_traces, profile_set};
use profile_lab::{Graph, PlaneGraph};

/// Exact distance profiles, guarding families and planar decompositions.
#[derive(Parser)]
#[command(name = "profile-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Edge-list file (`p edge n m`, `e u v`, 1-based ids).
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Count distinct r-profiles (and traces) of all vertices on the targets.
    Profiles {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        targets: PathBuf,
        #[arg(short)]
        r: u32,
        /// Also count neighbourhood traces N^r[v] ∩ A.
        #[arg(long)]
        traces: bool,
        /// Print every profile as a JSON line after the summary.
        #[arg(long)]
        emit: bool,
    },
    /// Build a guarding family and optionally check it.
    Guard {
        #[arg(long, value_enum)]
        method: GuardMethod,
        /// Edge list; ignored by `product`, which reads the graph from --product.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// PACE tree decomposition (required by `td`; orders `wcol` when given).
        #[arg(long)]
        td: Option<PathBuf>,
        /// Product coordinates as written by `gen product`.
        #[arg(long)]
        product: Option<PathBuf>,
        #[arg(long)]
        targets: PathBuf,
        #[arg(short)]
        r: u32,
        #[arg(long)]
        validate: bool,
        /// Print the members as well.
        #[arg(long)]
        emit: bool,
    },
    /// Generate an instance and write it to disk.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Cut a plane graph open along a greedy Steiner tree of the targets.
    Cutopen {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long)]
        targets: PathBuf,
        #[arg(short)]
        r: u32,
        /// Write the cut graph to `<prefix>.edges`, `.emb` and `.targets`.
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Tripod decomposition of a disc using a BFS forest from its boundary.
    Tripod {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        embedding: PathBuf,
        #[arg(short)]
        r: u32,
    },
    /// Greedy sparse cover.
    Cover {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short)]
        r: u32,
        #[arg(long)]
        validate: bool,
        /// Check only this many evenly spaced ball centres.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// VC dimension of the ball system (or its traces on a target set).
    Vc {
        #[command(flatten)]
        g: GraphArg,
        /// `all`, or a comma-separated list of radii.
        #[arg(long, default_value = "all")]
        radii: String,
        #[arg(long)]
        targets: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// Exact metric dimension.
    Metricdim {
        #[command(flatten)]
        g: GraphArg,
        /// Search sizes below this cap.
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    /// Run a bound-verification experiment spec.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GuardMethod {
    Td,
    Wcol,
    Product,
}

#[derive(Subcommand)]
enum GenKind {
    /// Treewidth lower-bound family (writes .targets and .td sidecars).
    LbTw {
        #[arg(short)]
        t: usize,
        #[arg(short)]
        r: u32,
        /// Use the simpler (r/2)^t family.
        #[arg(long)]
        simple: bool,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Shattering family (writes a .targets sidecar).
    #[command(name = "lb-1planar")]
    Lb1planar {
        #[arg(short)]
        r: u32,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Random t-tree subgraph (writes a .td sidecar).
    Ktree {
        #[arg(short)]
        t: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        keep: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// w × h grid (writes .emb and .td sidecars).
    Grid {
        #[arg(short)]
        w: usize,
        #[arg(long)]
        h: usize,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Random subgraph of (t-tree) ⊠ P_p ⊠ K_c (writes a .product.json sidecar).
    Product {
        #[arg(short)]
        t: usize,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        p: usize,
        #[arg(short)]
        c: usize,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
}

/// Outcome of a command that ran to completion.
enum Status {
    Pass,
    Violation,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    formats::parse_edge_list(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_targets(path: &Path, n: usize) -> Result<Vec<usize>> {
    formats::parse_targets(&read(path)?, n).with_context(|| format!("parsing {}", path.display()))
}

fn load_td(path: &Path) -> Result<TreeDecomposition> {
    Ok(formats::parse_pace_td(&read(path)?).with_context(|| format!("parsing {}", path.display()))?.0)
}

fn load_plane(graph: &Path, embedding: &Path) -> Result<PlaneGraph> {
    let g = load_graph(graph)?;
    formats::parse_embedding(g, &read(embedding)?).with_context(|| format!("parsing {}", embedding.display()))
}

fn sidecar(out: &Path, ext: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn parse_radii(s: &str) -> Result<Radii> {
    if s == "all" {
        return Ok(Radii::All);
    }
    let rs = s
        .split(',')
        .map(|x| x.trim().parse::<u32>().with_context(|| format!("bad radius {x:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Radii::Only(rs))
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Profiles {
            g,
            targets,
            r,
            traces,
            emit,
        } => {
            let graph = load_graph(&g.graph)?;
            let a = load_targets(&targets, graph.n())?;
            let all: Vec<usize> = (0..graph.n()).collect();
            let set = profile_set(&graph, &all, &a, r)?;
            let mut summary = json!({ "n": graph.n(), "targets": a.len(), "r": r, "profiles": set.len() });
            if traces {
                summary["traces"] = json!(neighborhood_traces(&graph, &a, r)?.len());
            }
            print_json(&summary)?;
            if emit {
                let mut out = std::io::stdout().lock();
                for p in set.sorted() {
                    serde_json::to_writer(&mut out, &p)?;
                    writeln!(out)?;
                }
            }
            Ok(Status::Pass)
        }
        Command::Guard {
            method,
            graph,
            td,
            product,
            targets,
            r,
            validate,
            emit,
        } => {
            let (g, fam) = match method {
                GuardMethod::Td | GuardMethod::Wcol => {
                    let Some(path) = graph else { bail!("--graph is required for this method") };
                    let g = load_graph(&path)?;
                    let a = load_targets(&targets, g.n())?;
                    let td = td.as_deref().map(load_td).transpose()?;
                    let fam = match (method, td) {
                        (GuardMethod::Td, Some(td)) => guarding_td(&g, &td, &a, r, None)?,
                        (GuardMethod::Td, None) => bail!("--td is required for method td"),
                        (_, Some(td)) => guarding_wcol(&g, &order_from_td(&g, &td.normalized())?, &a, r)?,
                        (_, None) => guarding_wcol(&g, &LinearOrder::identity(g.n()), &a, r)?,
                    };
                    (g, fam)
                }
                GuardMethod::Product => {
                    let Some(path) = product else { bail!("--product is required for method product") };
                    let pc: ProductCoordinates = serde_json::from_str(&read(&path)?)
                        .with_context(|| format!("parsing {}", path.display()))?;
                    pc.check_invariants()?;
                    let a = load_targets(&targets, pc.graph.n())?;
                    let fam = guarding_product(&pc, &a, r)?;
                    (pc.graph, fam)
                }
            };
            let a = load_targets(&targets, g.n())?;
            let mut summary = json!({
                "members": fam.len(),
                "max_member_size": fam.max_member_size(),
                "cap": fam.p,
                "respects_cap": fam.respects_cap(),
            });
            let mut status = Status::Pass;
            if validate {
                let verdict = check_guarding(&g, &a, r, &fam)?;
                summary["valid"] = json!(verdict.is_valid());
                if let GuardVerdict::Unguarded(v) = verdict {
                    summary["unguarded_vertex"] = json!(v + 1);
                    status = Status::Violation;
                }
                if !fam.respects_cap() {
                    status = Status::Violation;
                }
            }
            if emit {
                let one_based: Vec<Vec<usize>> =
                    fam.sets.iter().map(|s| s.iter().map(|v| v + 1).collect()).collect();
                summary["sets"] = json!(one_based);
            }
            print_json(&summary)?;
            Ok(status)
        }
        Command::Gen { kind } => {
            gen(kind)?;
            Ok(Status::Pass)
        }
        Command::Cutopen {
            g,
            embedding,
            targets,
            r,
            out,
        } => {
            let pg = load_plane(&g.graph, &embedding)?;
            let a = load_targets(&targets, pg.graph().n())?;
            let tree = steiner_tree_greedy(pg.graph(), &a, r)?;
            let cut = cut_along_tree(&pg, &a, &tree, r)?;
            print_json(&json!({
                "n": cut.plane.graph().n(),
                "m": cut.plane.graph().m(),
                "tree_edges": cut.tree.edges.len(),
                "new_targets": cut.targets.len(),
                "bound": 2 * (2 * r as usize + 1) * a.len(),
                "within_bound": cut.within_bound,
            }))?;
            if let Some(prefix) = out {
                write(&sidecar(&prefix, ".edges"), &formats::write_edge_list(cut.plane.graph()))?;
                write(&sidecar(&prefix, ".emb"), &formats::write_embedding(&cut.plane))?;
                write(&sidecar(&prefix, ".targets"), &formats::write_targets(&cut.targets))?;
            }
            Ok(if cut.within_bound { Status::Pass } else { Status::Violation })
        }
        Command::Tripod { g, embedding, r } => {
            let pg = load_plane(&g.graph, &embedding)?;
            let cycle = pg.outer_cycle()?;
            let forest = bfs_forest_from_set(pg.graph(), &cycle)?;
            let dec = tripod_decomposition(&pg, &forest, r)?;
            let report = check_tripod_decomposition(&pg, &forest, r, &dec)?;
            print_json(&json!({
                "tripods": dec.tripods.len(),
                "report": report,
            }))?;
            Ok(if report.passes() { Status::Pass } else { Status::Violation })
        }
        Command::Cover { g, r, validate, sample } => {
            let graph = load_graph(&g.graph)?;
            let cover = sparse_cover_greedy(&graph, r)?;
            let mut summary = json!({ "sets": cover.sets.len(), "r": cover.r, "d": cover.d, "k": cover.k });
            let mut status = Status::Pass;
            if validate {
                let report = check_sparse_cover(&graph, &cover, sample);
                if !report.passes() {
                    status = Status::Violation;
                }
                summary["report"] = serde_json::to_value(&report)?;
            }
            print_json(&summary)?;
            Ok(status)
        }
        Command::Vc { g, radii, targets, cap } => {
            let graph = load_graph(&g.graph)?;
            let mut system = ball_system(&graph, &parse_radii(&radii)?);
            if let Some(path) = targets {
                let a = load_targets(&path, graph.n())?;
                system = trace_system(&system, &a)?;
            }
            let vc = vc_dimension(&system, cap)?;
            print_json(&json!({ "members": system.len(), "vc_dimension": vc.to_string() }))?;
            Ok(Status::Pass)
        }
        Command::Metricdim { g, cap } => {
            let graph = load_graph(&g.graph)?;
            let v = match metric_dimension_exact(&graph, cap)? {
                MetricDimension::Exact { k, set } => {
                    debug_assert!(is_resolving(&graph, &set)?);
                    json!({ "metric_dimension": k, "resolving_set": set.iter().map(|v| v + 1).collect::<Vec<_>>() })
                }
                MetricDimension::AtLeast(k) => json!({ "metric_dimension": format!(">={k}") }),
            };
            print_json(&v)?;
            Ok(Status::Pass)
        }
        Command::Bench { spec, out } => bench(&spec, &out),
    }
}

fn gen(kind: GenKind) -> Result<()> {
    match kind {
        GenKind::LbTw { t, r, simple, out } => {
            let lb = if simple { lb_treewidth_simple(t, r)? } else { lb_treewidth(t, r)? };
            write(&out, &formats::write_edge_list(&lb.graph))?;
            write(&sidecar(&out, ".targets"), &formats::write_targets(&lb.targets))?;
            if let Some(td) = &lb.td {
                write(&sidecar(&out, ".td"), &formats::write_pace_td(td, lb.graph.n()))?;
            }
            print_json(&json!({ "n": lb.graph.n(), "m": lb.graph.m(), "predicted_count": lb.predicted_count.to_string() }))
        }
        GenKind::Lb1planar { r, out } => {
            let lb = lb_1planar(r)?;
            write(&out, &formats::write_edge_list(&lb.graph))?;
            write(&sidecar(&out, ".targets"), &formats::write_targets(&lb.targets))?;
            print_json(&json!({ "n": lb.graph.n(), "m": lb.graph.m(), "predicted_count": lb.predicted_count.to_string() }))
        }
        GenKind::Ktree { t, n, keep, seed, out } => {
            let (g, td) = gen_ktree_subgraph(t, n, keep, seed)?;
            write(&out, &formats::write_edge_list(&g))?;
            write(&sidecar(&out, ".td"), &formats::write_pace_td(&td, g.n()))?;
            print_json(&json!({ "n": g.n(), "m": g.m(), "width": td.width(), "seed": seed }))
        }
        GenKind::Grid { w, h, out } => {
            let pg = gen_grid_disk(w, h)?;
            write(&out, &formats::write_edge_list(pg.graph()))?;
            write(&sidecar(&out, ".emb"), &formats::write_embedding(&pg))?;
            let td = grid_td(w, h)?;
            write(&sidecar(&out, ".td"), &formats::write_pace_td(&td, pg.graph().n()))?;
            print_json(&json!({ "n": pg.graph().n(), "m": pg.graph().m(), "width": td.width() }))
        }
        GenKind::Product {
            t,
            n,
            p,
            c,
            density,
            seed,
            out,
        } => {
            let (host, td) = gen_ktree_subgraph(t, n, 1.0, seed)?;
            let pc = gen_product(&host, &td, p, c, density, seed.wrapping_add(1))?;
            write(&out, &formats::write_edge_list(&pc.graph))?;
            write(&sidecar(&out, ".product.json"), &serde_json::to_string(&pc)?)?;
            print_json(&json!({ "n": pc.graph.n(), "m": pc.graph.m(), "seed": seed }))
        }
    }
}

fn bench(spec_path: &Path, out: &Path) -> Result<Status> {
    let spec: BenchSpec =
        toml::from_str(&read(spec_path)?).with_context(|| format!("parsing {}", spec_path.display()))?;
    let outcome = bound_harness(&spec)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write(&out.join("report.json"), &serde_json::to_string_pretty(&outcome)?)?;

    let mut w = csv::Writer::from_path(out.join("bounds.csv"))?;
    for row in csv_rows(&outcome) {
        w.serialize(row)?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(out.join("envelope.csv"))?;
    w.write_record(["schema_version", "anchor", "group", "seed", "r_from", "r_to", "ratio_from", "ratio_to", "within_factor_2"])?;
    for s in &outcome.envelope {
        w.write_record([
            outcome.schema_version.to_string(),
            s.anchor.clone(),
            s.key.group.clone(),
            s.key.seed.to_string(),
            s.r_from.to_string(),
            s.r_to.to_string(),
            s.ratio_from.to_string(),
            s.ratio_to.to_string(),
            s.within_factor_2.to_string(),
        ])?;
    }
    w.flush()?;

    let checks: usize = outcome.reports.iter().map(|r| r.checks.len()).sum();
    let violations: Vec<_> = outcome.violations().collect();
    for (key, c) in &violations {
        eprintln!(
            "VIOLATION {} seed={} r={}: {} {} measured={} bound={:?}",
            key.group, key.seed, key.r, c.anchor, c.quantity, c.measured, c.bound
        );
    }
    let heuristic_exceeded = outcome.envelope.iter().filter(|s| !s.within_factor_2).count();
    print_json(&json!({
        "instances": outcome.reports.len(),
        "checks": checks,
        "violations": violations.len(),
        "heuristic_envelope_steps": outcome.envelope.len(),
        "heuristic_envelope_exceeded": heuristic_exceeded,
        "out": out.display().to_string(),
    }))?;
    Ok(if violations.is_empty() { Status::Pass } else { Status::Violation })
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("PROFILE_LAB_THREADS") {
        let n: usize = v.parse().with_context(|| format!("PROFILE_LAB_THREADS={v:?} is not a number"))?;
        if n > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|()| run(cli));
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(2),
        Err(e) => {
            let _ = writeln!(std::io::stderr().lock(), "error: {e:#}");
            ExitCode::from(1)
        }
    }
}
