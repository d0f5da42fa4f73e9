//! Command-line interface. The `vistri` binary is a thin wrapper around [`run`].

use crate::engine::{EngineConfig, VisEngine};
use crate::geom::{DirVector, EpsilonConfig, Point, PolygonalEnvironment};
use crate::graph::visibility_graph;
use crate::harness::bench::{behavior_counts, summarize, write_report_csv, write_summary_csv};
use crate::harness::{generate_query_sets, run_bench, Behavior, BenchConfig, EngineImpl, OracleImpl, RegionImpl};
use crate::io::{self, Overlay};
use crate::locate::PointLocationResult;
use crate::vis::{self, VisQueryStats};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::HashSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A bench or selftest run found disallowed behaviors.
    pub const FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const LOAD: i32 = 3;
    /// The query point lies outside the environment (Null result).
    pub const OUTSIDE: i32 = 4;
    pub const INTERNAL: i32 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "vistri", version, about = "Visibility queries in polygonal environments with holes")]
struct Cli {
    /// Increasing fallback tolerances for point location, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    eps1: Option<Vec<f64>>,
    /// Vertex snapping distance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    eps2: f64,
    /// Bucket grid cell size.
    #[arg(long, global = true, default_value_t = 1.0)]
    bucket_size: f64,
    /// Largest angle per chord when sampling arcs (radians).
    #[arg(long, global = true, default_value_t = std::f64::consts::PI / 180.0)]
    arc_angle: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build the triangulation and bucket grid and report their sizes.
    Preprocess { map: PathBuf },
    /// Run one query.
    Query(QueryArgs),
    /// Generate the six query point sets.
    Genpoints {
        map: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the engine against the oracle on stored point sets.
    Bench {
        map: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        watchdog: f64,
        #[arg(long)]
        report: PathBuf,
        /// Timing summary CSV.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Engine-vs-oracle run on freshly generated point sets.
    Selftest {
        map: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum QueryType {
    Region,
    #[value(name = "2pt")]
    TwoPoint,
    Ray,
    Vertices,
    Points,
    Graph,
}

#[derive(clap::Args, Debug)]
struct QueryArgs {
    map: PathBuf,
    #[arg(long = "type", value_enum)]
    kind: QueryType,
    /// Query point `x,y`.
    #[arg(long, value_parser = parse_xy, allow_hyphen_values = true)]
    at: Option<Point>,
    /// Target point for `2pt`.
    #[arg(long, value_parser = parse_xy, allow_hyphen_values = true)]
    to: Option<Point>,
    /// Direction for `ray`.
    #[arg(long, value_parser = parse_xy, allow_hyphen_values = true)]
    dir: Option<Point>,
    /// Point list for `points` and `graph`.
    #[arg(long)]
    sites: Option<PathBuf>,
    /// Visibility range d.
    #[arg(long)]
    range: Option<f64>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn parse_xy(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{e}"))?;
    if !x.is_finite() || !y.is_finite() {
        return Err("coordinates must be finite".into());
    }
    Ok(Point::new(x, y))
}

struct Failure {
    code: i32,
    msg: String,
}

fn fail(code: i32, msg: impl std::fmt::Display) -> Failure {
    Failure { code, msg: msg.to_string() }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                exit::USAGE
            } else {
                let _ = write!(out, "{text}");
                exit::OK
            };
        }
    };
    let mut notes = Vec::new();
    let r = dispatch(&cli, out, &mut notes);
    for n in notes {
        let _ = writeln!(err, "vistri: {n}");
    }
    match r {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "vistri: {}", f.msg);
            f.code
        }
    }
}

fn config(cli: &Cli) -> Result<EngineConfig, Failure> {
    let eps1 = cli.eps1.clone().unwrap_or_else(|| EpsilonConfig::default().eps1().to_vec());
    let eps = EpsilonConfig::new(eps1, cli.eps2).map_err(|e| fail(exit::USAGE, e))?;
    if !(cli.bucket_size > 0.0) {
        return Err(fail(exit::USAGE, "--bucket-size must be positive"));
    }
    if !(cli.arc_angle > 0.0) {
        return Err(fail(exit::USAGE, "--arc-angle must be positive"));
    }
    Ok(EngineConfig { eps, bucket_size: cli.bucket_size, arc_angle: cli.arc_angle })
}

fn load(path: &Path, err_out: &mut Vec<String>) -> Result<PolygonalEnvironment, Failure> {
    let (env, dropped) = io::load_map(path).map_err(|e| fail(exit::LOAD, format!("{}: {e}", path.display())))?;
    for d in dropped {
        err_out.push(format!("discarded ring: {d:?}"));
    }
    Ok(env)
}

fn build(env: PolygonalEnvironment, cfg: EngineConfig) -> Result<VisEngine, Failure> {
    VisEngine::new(env, cfg).map_err(|e| fail(exit::LOAD, e))
}

fn map_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn io_fail(path: &Path, e: impl std::fmt::Display) -> Failure {
    fail(exit::INTERNAL, format!("{}: {e}", path.display()))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, notes: &mut Vec<String>) -> Outcome {
    let cfg = config(cli)?;
    match &cli.cmd {
        Cmd::Preprocess { map } => preprocess(load(map, notes)?, cfg, out),
        Cmd::Query(q) => query(load(&q.map, notes)?, cfg, q, out),
        Cmd::Genpoints { map, seed, count, out: dir } => {
            let e = build(load(map, notes)?, cfg)?;
            let sets = generate_query_sets(e.env(), e.mesh(), *count, *seed);
            io::save_query_sets(dir, &sets).map_err(|e| fail(exit::INTERNAL, e))?;
            let _ = writeln!(out, "wrote {} sets of {} points to {}", sets.len(), count, dir.display());
            Ok(exit::OK)
        }
        Cmd::Bench { map, points, watchdog, report, summary } => {
            let sets = io::load_query_sets(points).map_err(|e| fail(exit::LOAD, e))?;
            let env = load(map, notes)?;
            if !(*watchdog > 0.0) || !watchdog.is_finite() {
                return Err(fail(exit::USAGE, "--watchdog must be positive"));
            }
            let bc = BenchConfig { watchdog: Duration::from_secs_f64(*watchdog), parallel: true };
            bench(&map_name(map), env, cfg, &sets, &bc, Some(report), summary.as_deref(), out)
        }
        Cmd::Selftest { map, seed, count } => {
            let env = load(map, notes)?;
            let e = build(env.clone(), cfg.clone())?;
            let sets = generate_query_sets(&env, e.mesh(), *count, *seed);
            bench(&map_name(map), env, cfg, &sets, &BenchConfig { parallel: true, ..BenchConfig::default() }, None, None, out)
        }
    }
}

fn preprocess(env: PolygonalEnvironment, cfg: EngineConfig, out: &mut dyn Write) -> Outcome {
    let t = Instant::now();
    let e = build(env, cfg)?;
    let elapsed = t.elapsed();
    let g = e.grid();
    let _ = writeln!(out, "vertices {}", e.env().num_vertices());
    let _ = writeln!(out, "holes {}", e.env().holes().len());
    let _ = writeln!(out, "triangles {}", e.mesh().num_triangles());
    let _ = writeln!(out, "buckets {} ({} x {})", g.num_cells(), g.cols(), g.rows());
    let _ = writeln!(out, "bucket entries {}", g.num_entries());
    let _ = writeln!(out, "time_ms {:.3}", elapsed.as_secs_f64() * 1e3);
    Ok(exit::OK)
}

fn xy(p: Point) -> Value {
    json!([p.x, p.y])
}

fn stats_json(s: &VisQueryStats, pl: Option<&PointLocationResult>) -> Value {
    json!({
        "triangles_traversed": s.triangles_traversed,
        "views_split": s.views_split,
        "boundary_edges_hit": s.boundary_edges_hit,
        "snapped": pl.is_some_and(|p| p.snapped_vertex.is_some()),
        "eps1_used": pl.and_then(|p| p.eps1_used),
    })
}

fn query_json(a: &QueryArgs) -> Value {
    let ty = a.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut q = json!({ "type": ty });
    let m = q.as_object_mut().expect("object");
    if let Some(p) = a.at {
        m.insert("at".into(), xy(p));
    }
    if let Some(p) = a.to {
        m.insert("to".into(), xy(p));
    }
    if let Some(p) = a.dir {
        m.insert("dir".into(), xy(p));
    }
    if let Some(d) = a.range {
        m.insert("range".into(), json!(d));
    }
    q
}

/// Environment vertex ids at the given mesh vertices.
fn env_ids(e: &VisEngine, mesh_ids: &[usize]) -> Vec<usize> {
    let set: HashSet<usize> = mesh_ids.iter().copied().collect();
    (0..e.env().num_vertices()).filter(|&v| set.contains(&e.mesh().mesh_vertex(v))).collect()
}

fn need<T: Copy>(v: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    v.ok_or_else(|| fail(exit::USAGE, format!("--type {kind} requires {flag}")))
}

fn query(env: PolygonalEnvironment, cfg: EngineConfig, a: &QueryArgs, out: &mut dyn Write) -> Outcome {
    if a.range.is_some_and(|d| !(d >= 0.0) || !d.is_finite()) {
        return Err(fail(exit::USAGE, "--range must be finite and nonnegative"));
    }
    let e = build(env, cfg)?;
    let d = a.range;
    let mut overlays = Vec::new();
    let mut text = Vec::new();
    let (result, stats) = if a.kind == QueryType::Graph {
        let sites = match &a.sites {
            Some(p) => io::load_points(p).map_err(|e| fail(exit::LOAD, format!("{}: {e}", p.display())))?,
            None => Vec::new(),
        };
        let verts: Vec<usize> = (0..e.env().num_vertices()).collect();
        let g = visibility_graph(&e, &verts, &sites, d).map_err(|e| fail(exit::USAGE, e))?;
        let mut lines = Vec::new();
        g.write_edges(&mut lines).map_err(|e| fail(exit::INTERNAL, e))?;
        text.push(String::from_utf8_lossy(&lines).trim_end().to_string());
        let positions: Vec<Point> = verts.iter().map(|&v| e.env().vertex(v)).chain(sites.iter().copied()).collect();
        overlays.push(Overlay::Graph { sites: positions, edges: g.pairs() });
        let edges: Vec<Value> = g.edges.iter().map(|x| json!([x.tag.as_str(), x.a, x.b])).collect();
        let r = json!({
            "kind": "graph",
            "vertex_sites": g.vertex_sites.len(),
            "point_sites": g.point_sites.len(),
            "edges": edges,
            "unlocated": g.unlocated,
        });
        (Some(r), json!({}))
    } else {
        let q = need(a.at, "--at", "query")?;
        overlays.push(Overlay::Points(vec![q]));
        match e.locate(q) {
            None => (None, json!({})),
            Some(pl) => {
                let (r, s) = located_query(&e, &pl, q, a, &mut overlays, &mut text)?;
                (Some(r), stats_json(&s, Some(&pl)))
            }
        }
    };
    if let Some(path) = &a.svg {
        std::fs::write(path, io::render_svg(e.env(), &overlays)).map_err(|err| io_fail(path, err))?;
    }
    let outside = result.is_none();
    if a.json {
        let doc = json!({ "query": query_json(a), "result": result, "stats": stats });
        let _ = writeln!(out, "{}", serde_json::to_string(&doc).expect("json"));
    } else if outside {
        let _ = writeln!(out, "null: query point is outside the environment");
    } else {
        for t in text {
            let _ = writeln!(out, "{t}");
        }
    }
    Ok(if outside { exit::OUTSIDE } else { exit::OK })
}

fn located_query(
    e: &VisEngine,
    pl: &PointLocationResult,
    q: Point,
    a: &QueryArgs,
    overlays: &mut Vec<Overlay>,
    text: &mut Vec<String>,
) -> Result<(Value, VisQueryStats), Failure> {
    let mesh = e.mesh();
    let d = a.range;
    Ok(match a.kind {
        QueryType::Region => {
            let r = e.visibility_region_at(pl, q, d).map_err(|err| fail(exit::INTERNAL, err))?;
            text.push(format!("region {} vertices", r.polygon.len()));
            text.extend(r.polygon.iter().map(|p| format!("{} {}", p.x, p.y)));
            overlays.insert(0, Overlay::Region(r.radial.clone()));
            let poly: Vec<Value> = r.polygon.iter().map(|&p| xy(p)).collect();
            (json!({ "kind": "region", "polygon": poly }), r.stats)
        }
        QueryType::TwoPoint => {
            let p = need(a.to, "--to", "2pt")?;
            let (vis, s) = vis::two_point_visible(mesh, pl, q, p, d);
            text.push(if vis { "visible" } else { "not visible" }.to_string());
            overlays.push(Overlay::Points(vec![p]));
            (json!({ "kind": "bool", "visible": vis }), s)
        }
        QueryType::Ray => {
            let u = need(a.dir, "--dir", "ray")?;
            let u = DirVector::new(u.x, u.y).ok_or_else(|| fail(exit::USAGE, "--dir must be a nonzero vector"))?;
            let (hit, s) = vis::shoot_ray(mesh, pl, q, u, d);
            match hit {
                Some(h) => {
                    text.push(format!("hit {} {}", h.x, h.y));
                    overlays.push(Overlay::Ray(q, h));
                }
                None => text.push("no hit within range".into()),
            }
            (json!({ "kind": "point", "hit": hit.map(xy) }), s)
        }
        QueryType::Vertices => {
            let (ids, s) = vis::visible_vertices(mesh, pl, q, None, d);
            let ids = env_ids(e, &ids);
            text.push(ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
            overlays.push(Overlay::Points(ids.iter().map(|&v| e.env().vertex(v)).collect()));
            (json!({ "kind": "ids", "ids": ids }), s)
        }
        QueryType::Points => {
            let path = a.sites.as_ref().ok_or_else(|| fail(exit::USAGE, "--type points requires --sites"))?;
            let sites = io::load_points(path).map_err(|err| fail(exit::LOAD, format!("{}: {err}", path.display())))?;
            let index = e.site_index(&sites);
            let (v, s) = vis::visible_points(mesh, pl, q, &index, d);
            text.push(v.visible.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
            overlays.push(Overlay::Points(v.visible.iter().map(|&i| sites[i]).collect()));
            (json!({ "kind": "ids", "ids": v.visible, "unlocated": v.unlocated }), s)
        }
        QueryType::Graph => unreachable!("graph queries need no query point"),
    })
}

#[allow(clippy::too_many_arguments)]
fn bench(
    name: &str,
    env: PolygonalEnvironment,
    cfg: EngineConfig,
    sets: &[crate::harness::QueryPointSet],
    bc: &BenchConfig,
    report: Option<&Path>,
    summary: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let t = Instant::now();
    let engine = Arc::new(build(env.clone(), cfg)?);
    let prep_us = t.elapsed().as_secs_f64() * 1e6;
    let env = Arc::new(env);
    let imp: Arc<dyn RegionImpl> = Arc::new(EngineImpl(engine));
    let reference: Arc<dyn RegionImpl> = Arc::new(OracleImpl(env.clone()));
    let records = run_bench(name, &env, imp, Some(reference), sets, bc);
    if let Some(path) = report {
        let f = std::fs::File::create(path).map_err(|e| io_fail(path, e))?;
        write_report_csv(&records, std::io::BufWriter::new(f)).map_err(|e| io_fail(path, e))?;
    }
    if let Some(path) = summary {
        let s = summarize("vistri", &[], &[prep_us], &records);
        let f = std::fs::File::create(path).map_err(|e| io_fail(path, e))?;
        write_summary_csv(&[s], std::io::BufWriter::new(f)).map_err(|e| io_fail(path, e))?;
    }
    let counts = behavior_counts(&records);
    for b in Behavior::ALL {
        let _ = writeln!(out, "{:<5} {}", b.as_str(), counts.get(&b).copied().unwrap_or(0));
    }
    let bad: usize = [Behavior::Crash, Behavior::Inf, Behavior::Diff, Behavior::A0R1]
        .iter()
        .map(|b| counts.get(b).copied().unwrap_or(0))
        .sum();
    Ok(if bad == 0 { exit::OK } else { exit::FAILED })
}
