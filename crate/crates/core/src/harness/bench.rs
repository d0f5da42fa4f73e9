//! Supervised differential runs and timing summaries.

use super::classify::{classify, is_weakly_simple_point, Behavior, ClassifyContext};
use super::querysets::{QueryKind, QueryPointSet};
use crate::engine::VisEngine;
use crate::geom::{Point, PolygonalEnvironment};
use crate::oracle::Oracle;
use crate::vis::VisQueryStats;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io::{self, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::mpsc;
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Result of one region query by an implementation under test.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub polygon: Option<Vec<Point>>,
    pub snapped: bool,
    pub t_locate_us: f64,
    pub t_query_us: f64,
    pub stats: VisQueryStats,
}

/// A visibility-region implementation that can be benchmarked.
pub trait RegionImpl: Send + Sync + 'static {
    fn name(&self) -> &str;
    /// `Err` signals an internal failure and is recorded as a crash.
    fn query(&self, q: Point) -> Result<Outcome, String>;
}

pub struct EngineImpl(pub Arc<VisEngine>);

impl RegionImpl for EngineImpl {
    fn name(&self) -> &str {
        "vistri"
    }

    fn query(&self, q: Point) -> Result<Outcome, String> {
        let t0 = Instant::now();
        let pl = self.0.locate(q);
        let t_loc = t0.elapsed();
        let Some(pl) = pl else {
            let t = t0.elapsed().as_secs_f64() * 1e6;
            return Ok(Outcome { t_locate_us: t_loc.as_secs_f64() * 1e6, t_query_us: t, ..Outcome::default() });
        };
        let r = self.0.visibility_region_at(&pl, q, None).map_err(|e| e.to_string())?;
        let t = t0.elapsed();
        Ok(Outcome {
            polygon: Some(r.polygon),
            snapped: pl.snapped_vertex.is_some(),
            t_locate_us: t_loc.as_secs_f64() * 1e6,
            t_query_us: t.as_secs_f64() * 1e6,
            stats: r.stats,
        })
    }
}

pub struct OracleImpl(pub Arc<PolygonalEnvironment>);

impl RegionImpl for OracleImpl {
    fn name(&self) -> &str {
        "oracle"
    }

    fn query(&self, q: Point) -> Result<Outcome, String> {
        let t0 = Instant::now();
        let polygon = Oracle::new(&self.0).visibility_polygon(q);
        Ok(Outcome { polygon, t_query_us: t0.elapsed().as_secs_f64() * 1e6, ..Outcome::default() })
    }
}

#[derive(Debug, PartialEq)]
pub enum Supervised<T> {
    Done(T),
    Panicked(String),
    TimedOut,
}

/// Runs `f` on a fresh thread; a worker that overruns `timeout` is
/// abandoned (left detached) and reported as timed out.
pub fn supervise<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static, timeout: Duration) -> Supervised<T> {
    let (tx, rx) = mpsc::channel();
    let spawned = std::thread::Builder::new().spawn(move || {
        let r = catch_unwind(AssertUnwindSafe(f));
        let _ = tx.send(r);
    });
    if let Err(e) = spawned {
        return Supervised::Panicked(format!("spawn failed: {e}"));
    }
    match rx.recv_timeout(timeout) {
        Ok(Ok(v)) => Supervised::Done(v),
        Ok(Err(p)) => Supervised::Panicked(
            p.downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into()),
        ),
        Err(mpsc::RecvTimeoutError::Timeout) => Supervised::TimedOut,
        Err(mpsc::RecvTimeoutError::Disconnected) => Supervised::Panicked("worker vanished".into()),
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub watchdog: Duration,
    pub parallel: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { watchdog: Duration::from_secs(10), parallel: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BehaviorRecord {
    pub map: String,
    pub set_kind: QueryKind,
    pub point_index: usize,
    pub point: Point,
    pub behavior: Behavior,
    pub t_locate_us: f64,
    pub t_query_us: f64,
    pub stats: VisQueryStats,
}

/// Runs `imp` on every query point and classifies it against `reference`.
pub fn run_bench(
    map: &str,
    env: &PolygonalEnvironment,
    imp: Arc<dyn RegionImpl>,
    reference: Option<Arc<dyn RegionImpl>>,
    sets: &[QueryPointSet],
    cfg: &BenchConfig,
) -> Vec<BehaviorRecord> {
    let jobs: Vec<(QueryKind, usize, Point)> =
        sets.iter().flat_map(|s| s.points.iter().enumerate().map(move |(i, &p)| (s.kind, i, p))).collect();
    let map_area = env.area();
    let one = |&(kind, i, q): &(QueryKind, usize, Point)| {
        let mut rec = BehaviorRecord {
            map: map.to_string(),
            set_kind: kind,
            point_index: i,
            point: q,
            behavior: Behavior::Crash,
            t_locate_us: 0.0,
            t_query_us: 0.0,
            stats: VisQueryStats::default(),
        };
        let a = {
            let imp = imp.clone();
            supervise(move || imp.query(q), cfg.watchdog)
        };
        let out = match a {
            Supervised::Done(Ok(o)) => o,
            Supervised::Done(Err(_)) | Supervised::Panicked(_) => return rec,
            Supervised::TimedOut => {
                rec.behavior = Behavior::Inf;
                return rec;
            }
        };
        rec.t_locate_us = out.t_locate_us;
        rec.t_query_us = out.t_query_us;
        rec.stats = out.stats;
        let reference = reference.as_ref().and_then(|r| {
            let r = r.clone();
            match supervise(move || r.query(q), cfg.watchdog) {
                Supervised::Done(Ok(o)) => Some(o.polygon),
                _ => None,
            }
        });
        let ctx = ClassifyContext {
            map_area,
            snapped: out.snapped,
            weakly_simple_query: is_weakly_simple_point(env, q),
            ref_available: reference.is_some(),
        };
        rec.behavior = classify(out.polygon.as_deref(), reference.as_ref().and_then(|p| p.as_deref()), &ctx);
        rec
    };
    if cfg.parallel {
        jobs.par_iter().map(one).collect()
    } else {
        jobs.iter().map(one).collect()
    }
}

pub fn behavior_counts(records: &[BehaviorRecord]) -> BTreeMap<Behavior, usize> {
    let mut m = BTreeMap::new();
    for r in records {
        *m.entry(r.behavior).or_insert(0) += 1;
    }
    m
}

pub fn write_report_csv(records: &[BehaviorRecord], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "map,set_kind,point_index,x,y,behavior,t_locate_us,t_query_us,triangles_traversed")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{:?},{:?},{},{:.3},{:.3},{}",
            r.map,
            r.set_kind,
            r.point_index,
            r.point.x,
            r.point.y,
            r.behavior,
            r.t_locate_us,
            r.t_query_us,
            r.stats.triangles_traversed
        )?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSummary {
    pub implementation: String,
    pub init_us: (f64, f64),
    pub prep_us: (f64, f64),
    pub query_us: (f64, f64),
    /// Share of query time spent in point location, in percent.
    pub pl_percent: f64,
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
    (m, v.sqrt())
}

/// Aggregates per-map setup timings and the timed (non-crashed) queries.
pub fn summarize(implementation: &str, init_us: &[f64], prep_us: &[f64], records: &[BehaviorRecord]) -> BenchSummary {
    let timed: Vec<&BehaviorRecord> =
        records.iter().filter(|r| !matches!(r.behavior, Behavior::Crash | Behavior::Inf)).collect();
    let q: Vec<f64> = timed.iter().map(|r| r.t_query_us).collect();
    let total: f64 = q.iter().sum();
    let loc: f64 = timed.iter().map(|r| r.t_locate_us).sum();
    BenchSummary {
        implementation: implementation.to_string(),
        init_us: mean_std(init_us),
        prep_us: mean_std(prep_us),
        query_us: mean_std(&q),
        pl_percent: if total > 0.0 { 100.0 * loc / total } else { 0.0 },
    }
}

pub fn write_summary_csv(rows: &[BenchSummary], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "impl,init_us_mean,init_us_std,prep_us_mean,prep_us_std,query_us_mean,query_us_std,pl_percent")?;
    for s in rows {
        writeln!(
            w,
            "{},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.2}",
            s.implementation, s.init_us.0, s.init_us.1, s.prep_us.0, s.prep_us.1, s.query_us.0, s.query_us.1, s.pl_percent
        )?;
    }
    Ok(())
}
