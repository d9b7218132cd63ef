//! Subcommand orchestration and the run report.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

use curvlab_core::compare::{
    comparison_radius_estimate, critical_curvature_search, sweep_region, Mode, ModelOracle, PathspaceOracle,
    RegionOracle, SweepSummary,
};
use curvlab_core::curvature::{
    curvature_bound_scan, curvature_field, default_step, BoundDirection, BoundScanReport, SlackBehavior, SCAN_TOLERANCE,
};
use curvlab_core::geom::Grid;
use curvlab_core::metric::{hw1_sectional, hw2_sectional, nondegeneracy_scan, CatalogMetric, MetricField};
use curvlab_core::mollify::{
    distance_convergence_experiment, make_mollifier, smooth_metric, smoothing_error, Mollifier, MIN_RESOLUTION,
};
use curvlab_core::path::{
    geodesic_bvp, geodesic_ivp, grid_distance, minimizer_multiplicity, refine_path, refined_distance, DistanceOptions,
    Multiplicity, Neighborhood, PathSeed, Polyline,
};
use curvlab_core::sampling::{sample_points, SampleRegion};
use curvlab_core::{Point2, Rect, Vec2};

use crate::config::ExperimentConfig;
use crate::error::{CliError, Context};
use crate::io::{self, CurvatureRow, DistanceRow, PathRow, VerdictRow};
use crate::metric_spec::{parse_metric, Metric};
use crate::parallel::{MemoOracle, RayonSweeper};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    Hw1,
    Hw2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Curvature,
    Mollify,
    Distance,
    Geodesic,
    Compare,
    Example(Example),
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Curvature => "curvature",
            Command::Mollify => "mollify",
            Command::Distance => "distance",
            Command::Geodesic => "geodesic",
            Command::Compare => "compare",
            Command::Example(Example::Hw1) => "example hw1",
            Command::Example(Example::Hw2) => "example hw2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Everything a run produced. `config` is the resolved configuration with
/// every default filled in; feeding it back reproduces the numbers.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config: ExperimentConfig,
    pub status: Status,
    pub results: Map<String, Value>,
    pub artifacts: Vec<String>,
    /// Wall-clock seconds per stage.
    pub timings: BTreeMap<String, f64>,
    pub threads: usize,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

struct Session {
    out: PathBuf,
    results: Map<String, Value>,
    artifacts: Vec<String>,
    timings: BTreeMap<String, f64>,
    pass: bool,
    sweeper: RayonSweeper,
}

impl Session {
    fn timed<T>(&mut self, stage: &str, f: impl FnOnce(&Self) -> Result<T, CliError>) -> Result<T, CliError> {
        let start = Instant::now();
        let r = f(self)?;
        *self.timings.entry(stage.to_string()).or_default() += start.elapsed().as_secs_f64();
        Ok(r)
    }

    fn csv<T: Serialize>(&mut self, name: &str, rows: impl IntoIterator<Item = T>) -> Result<(), CliError> {
        io::write_rows(&io::artifact(&self.out, name), rows)?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn record(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    fn require(&mut self, ok: bool) {
        self.pass &= ok;
    }
}

/// Execute one subcommand, writing artifacts and `report.json` to the output directory.
pub fn run(command: Command, config: ExperimentConfig) -> Result<RunReport, CliError> {
    let mut cfg = config;
    let plan = match command {
        Command::Curvature => Plan::Curvature(CurvaturePlan::resolve(&mut cfg)?),
        Command::Mollify => Plan::Mollify(MollifyPlan::resolve(&mut cfg)?),
        Command::Distance => Plan::Distance(DistancePlan::resolve(&mut cfg)?),
        Command::Geodesic => Plan::Geodesic(GeodesicPlan::resolve(&mut cfg)?),
        Command::Compare => Plan::Compare(ComparePlan::resolve(&mut cfg)?),
        Command::Example(which) => Plan::Example(ExamplePlan::resolve(&mut cfg, which)?),
    };
    cfg.seed = Some(cfg.seed());
    cfg.out = Some(cfg.out_dir().to_string());

    let out = PathBuf::from(cfg.out_dir());
    io::ensure_dir(&out)?;
    let sweeper = RayonSweeper::from_env();
    let threads = sweeper.threads();
    let mut s =
        Session { out, results: Map::new(), artifacts: Vec::new(), timings: BTreeMap::new(), pass: true, sweeper };
    match plan {
        Plan::Curvature(p) => p.execute(&mut s)?,
        Plan::Mollify(p) => p.execute(&mut s)?,
        Plan::Distance(p) => p.execute(&mut s)?,
        Plan::Geodesic(p) => p.execute(&mut s)?,
        Plan::Compare(p) => p.execute(&mut s)?,
        Plan::Example(p) => p.execute(&mut s)?,
    }
    let report = RunReport {
        command: command.name().to_string(),
        config: cfg,
        status: if s.pass { Status::Pass } else { Status::Fail },
        results: s.results,
        artifacts: s.artifacts,
        timings: s.timings,
        threads,
    };
    io::write_json(&io::artifact(&s.out, "report.json"), &report)?;
    Ok(report)
}

enum Plan {
    Curvature(CurvaturePlan),
    Mollify(MollifyPlan),
    Distance(DistancePlan),
    Geodesic(GeodesicPlan),
    Compare(ComparePlan),
    Example(ExamplePlan),
}

// ---- shared resolution helpers ----

fn load_metric(cfg: &ExperimentConfig) -> Result<Metric, CliError> {
    let spec = cfg.metric.as_deref().ok_or_else(|| CliError::config("metric", "required"))?;
    parse_metric(spec)
}

fn load_mollifier(cfg: &mut ExperimentConfig) -> Result<Mollifier, CliError> {
    let name = cfg.mollifier.clone().unwrap_or_else(|| "bump".to_string());
    let m = make_mollifier(&name).map_err(|e| CliError::config("mollifier", e.to_string()))?;
    cfg.mollifier = Some(name);
    Ok(m)
}

fn load_mode(cfg: &mut ExperimentConfig) -> Result<Mode, CliError> {
    let mode = match cfg.mode.as_deref().unwrap_or("cbb") {
        "cbb" => Mode::Cbb,
        "cat" => Mode::Cat,
        other => return Err(CliError::config("mode", format!("expected cbb or cat, got {other:?}"))),
    };
    cfg.mode = Some(mode.name().to_string());
    Ok(mode)
}

fn load_direction(cfg: &mut ExperimentConfig) -> Result<BoundDirection, CliError> {
    let d = match cfg.direction.as_deref().unwrap_or("lower") {
        "lower" => BoundDirection::Lower,
        "upper" => BoundDirection::Upper,
        other => return Err(CliError::config("direction", format!("expected lower or upper, got {other:?}"))),
    };
    cfg.direction = Some(direction_name(d).to_string());
    Ok(d)
}

fn direction_name(d: BoundDirection) -> &'static str {
    match d {
        BoundDirection::Lower => "lower",
        BoundDirection::Upper => "upper",
    }
}

fn behavior_name(b: SlackBehavior) -> &'static str {
    match b {
        SlackBehavior::Vanishing => "vanishing",
        SlackBehavior::Bounded => "bounded",
        SlackBehavior::Diverging => "diverging",
    }
}

fn point(value: Option<[f64; 2]>, field: &'static str) -> Result<Option<Point2>, CliError> {
    match value {
        Some([x, y]) if x.is_finite() && y.is_finite() => Ok(Some(Point2::new(x, y))),
        Some(_) => Err(CliError::config(field, "coordinates must be finite")),
        None => Ok(None),
    }
}

fn in_domain(metric: &Metric, p: Point2, field: &'static str) -> Result<Point2, CliError> {
    if metric.domain().contains(p) {
        Ok(p)
    } else {
        Err(CliError::config(field, format!("({}, {}) lies outside the metric domain", p.x, p.y)))
    }
}

fn region_inside(metric: &Metric, region: Rect) -> Result<Rect, CliError> {
    if metric.domain().contains_rect(&region) {
        Ok(region)
    } else {
        Err(CliError::config("region", "must lie inside the metric domain"))
    }
}

fn rect_array(r: Rect) -> [f64; 4] {
    [r.x0, r.x1, r.y0, r.y1]
}

fn xy(p: Point2) -> [f64; 2] {
    [p.x, p.y]
}

fn min_side(r: &Rect) -> f64 {
    r.width().min(r.height())
}

fn path_rows(times: &[f64], pts: &[Point2]) -> Vec<PathRow> {
    times.iter().zip(pts).map(|(&t, p)| PathRow { t, x: p.x, y: p.y }).collect()
}

fn polyline_rows<M: MetricField>(field: &M, path: &Polyline) -> Result<Vec<PathRow>, CliError> {
    let s = path.arc_lengths(field).context("path")?;
    Ok(path_rows(&s, &path.points))
}

fn scan_json(r: &BoundScanReport) -> Value {
    let entries: Vec<Value> = r
        .entries
        .iter()
        .map(|e| {
            json!({
                "epsilon": e.epsilon,
                "spacing": e.spacing,
                "min": e.min,
                "max": e.max,
                "argmin": xy(e.argmin),
                "argmax": xy(e.argmax),
                "slack": e.slack,
                "violation": e.violation,
                "pass": e.pass,
            })
        })
        .collect();
    json!({
        "k": r.k,
        "direction": direction_name(r.direction),
        "region": rect_array(r.region),
        "tolerance": r.tolerance,
        "behavior": behavior_name(r.behavior),
        "entries": entries,
    })
}

/// The bound holds up to a vanishing error and at the finest scale within tolerance.
fn scan_passes(r: &BoundScanReport) -> bool {
    r.behavior == SlackBehavior::Vanishing && r.entries.last().is_some_and(|e| e.pass)
}

fn multiplicity_json(m: &Multiplicity) -> Value {
    let paths: Vec<Value> = m
        .paths
        .iter()
        .map(|p| json!({ "length": p.length, "max_abs_x": p.max_abs_x(), "vertices": p.points.len() }))
        .collect();
    let mirror_gap = match m.paths.as_slice() {
        [a, b] => Some(curvlab_core::path::hausdorff(&a.points, &b.mirrored().points)),
        _ => None,
    };
    json!({
        "count": m.count,
        "cell": m.cell,
        "lattice_length": m.lattice_length,
        "mirror_hausdorff": mirror_gap,
        "paths": paths,
    })
}

fn write_minimizers<M: MetricField>(s: &mut Session, field: &M, m: &Multiplicity) -> Result<(), CliError> {
    for (i, p) in m.paths.iter().enumerate() {
        let rows = polyline_rows(field, p)?;
        s.csv(&format!("minimizer_{i}.csv"), rows)?;
    }
    Ok(())
}

// ---- curvature ----

struct CurvaturePlan {
    metric: Metric,
    mollifier: Mollifier,
    eps: Vec<f64>,
    region: Rect,
    resolution: usize,
    bound: Option<(f64, BoundDirection, f64)>,
}

impl CurvaturePlan {
    fn resolve(cfg: &mut ExperimentConfig) -> Result<Self, CliError> {
        let metric = load_metric(cfg)?;
        let mollifier = load_mollifier(cfg)?;
        let eps = cfg.eps_schedule()?;
        let resolution = cfg.resolution_or(101, 3)?;
        let domain = metric.domain();
        let region = match cfg.region_rect()? {
            Some(r) => region_inside(&metric, r)?,
            None => domain.shrink(eps[0] + 0.05 * min_side(&domain)),
        };
        if !region.is_valid() {
            return Err(CliError::config("eps", "largest epsilon leaves no room in the domain"));
        }
        let bound = match ExperimentConfig::finite(cfg.k, "k")? {
            Some(k) => {
                let direction = load_direction(cfg)?;
                let tolerance = cfg.tolerance_or(SCAN_TOLERANCE)?;
                cfg.tolerance = Some(tolerance);
                Some((k, direction, tolerance))
            }
            None => None,
        };
        cfg.eps = Some(eps.clone());
        cfg.resolution = Some(resolution);
        cfg.region = Some(rect_array(region));
        Ok(Self { metric, mollifier, eps, region, resolution, bound })
    }

    fn execute(self, s: &mut Session) -> Result<(), CliError> {
        let grid = Grid::square(self.region, self.resolution);
        let h = default_step(grid.dx().min(grid.dy()));
        let field = s.timed("field", |_| curvature_field(&self.metric, &grid, h).context("curvature"))?;
        let (min, max) =
            field.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, k)| (lo.min(k), hi.max(k)));
        s.record("field", json!({ "points": field.len(), "step": h, "min": min, "max": max }));
        s.csv("curvature.csv", field.iter().map(|&(p, sec)| CurvatureRow { x: p.x, y: p.y, sec }))?;

        if let Some((k, direction, tolerance)) = self.bound {
            let scan = s.timed("bound_scan", |_| {
                curvature_bound_scan(
                    &self.metric,
                    &self.mollifier,
                    self.region,
                    &self.eps,
                    k,
                    direction,
                    self.resolution,
                    tolerance,
                )
                .context("curvature")
            })?;
            s.require(scan_passes(&scan));
            s.record("bound_scan", scan_json(&scan));
        }
        Ok(())
    }
}

// ---- mollify ----

struct MollifyPlan {
    metric: Metric,
    mollifier: Mollifier,
    eps: Vec<f64>,
    resolution: usize,
}

impl MollifyPlan {
    fn resolve(cfg: &mut ExperimentConfig) -> Result<Self, CliError> {
        let metric = load_metric(cfg)?;
        let mollifier = load_mollifier(cfg)?;
        let eps = cfg.eps_schedule()?;
        let resolution = cfg.resolution_or(64, MIN_RESOLUTION)?;
        cfg.eps = Some(eps.clone());
        cfg.resolution = Some(resolution);
        Ok(Self { metric, mollifier, eps, resolution })
    }

    fn execute(self, s: &mut Session) -> Result<(), CliError> {
        let mut entries = Vec::new();
        for (i, &eps) in self.eps.iter().enumerate() {
            let smoothed = s.timed("smooth", |_| {
                smooth_metric(&self.metric, &self.mollifier, eps, self.resolution).context("mollification")
            })?;
            let err = smoothing_error(&smoothed, &self.metric).context("mollification")?;
            let eig = nondegeneracy_scan(&smoothed, self.resolution).context("mollification")?;
            let name = format!("smoothed_{i}.csv");
            io::write_sampled_metric(&io::artifact(&s.out, &name), &smoothed)?;
            s.artifacts.push(name.clone());
            entries.push(json!({
                "epsilon": eps,
                "file": name,
                "c0_error": err.c0,
                "c1_error": err.c1,
                "lambda_min": eig.min,
                "lambda_max": eig.max,
            }));
        }
        s.record("smoothed", Value::Array(entries));
        Ok(())
    }
}

// ---- distance ----

struct DistancePlan {
    metric: Metric,
    pairs: Vec<(Point2, Point2)>,
    resolution: usize,
    convergence: Option<(Mollifier, Vec<f64>)>,
}

const SANDWICH_SWEEPS: usize = 10;

impl DistancePlan {
    fn resolve(cfg: &mut ExperimentConfig) -> Result<Self, CliError> {
        let metric = load_metric(cfg)?;
        let resolution = cfg.resolution_or(48, 8)?;
        let convergence = match cfg.eps {
            Some(_) => {
                let eps = cfg.eps_schedule()?;
                Some((load_mollifier(cfg)?, eps))
            }
            None => None,
        };
        let domain = metric.domain();
        let pairs = match (point(cfg.p, "p")?, point(cfg.q, "q")?) {
            (Some(p), Some(q)) => {
                cfg.pairs = None;
                vec![(in_domain(&metric, p, "p")?, in_domain(&metric, q, "q")?)]
            }
            (None, None) => {
                let n = cfg.count(cfg.pairs, "pairs", 20)?;
                let inset = match &convergence {
                    Some((_, eps)) => (0.1 * min_side(&domain)).max(eps[0] + 0.02 * min_side(&domain)),
                    None => 0.1 * min_side(&domain),
                };
                let region = match cfg.region_rect()? {
                    Some(r) => region_inside(&metric, r)?,
                    None => domain.shrink(inset),
                };
                if !region.is_valid() {
                    return Err(CliError::config("eps", "largest epsilon leaves no room in the domain"));
                }
                cfg.pairs = Some(n);
                cfg.region = Some(rect_array(region));
                let pts = sample_points(&SampleRegion::Rect(region), 2 * n, cfg.seed()).context("sampling")?;
                pts.chunks(2).map(|c| (c[0], c[1])).collect()
            }
            _ => return Err(CliError::config("q", "give both p and q, or neither")),
        };
        cfg.resolution = Some(resolution);
        Ok(Self { metric, pairs, resolution, convergence })
    }

    fn execute(self, s: &mut Session) -> Result<(), CliError> {
        let metric = &self.metric;
        let eig = nondegeneracy_scan(metric, 101).context("metric")?;
        let floor = eig.min.max(0.0).sqrt();
        let options = DistanceOptions { resolution: self.resolution, ..DistanceOptions::default() };
        let grid_res = self.resolution.max(32);
        let mut table = Vec::new();
        let mut rows = Vec::new();
        let mut chain_holds = true;
        for &(p, q) in &self.pairs {
            let (grid_len, grid_path) =
                s.timed("grid", |_| grid_distance(metric, p, q, grid_res, Neighborhood::Sixteen).context("pathspace"))?;
            let polished =
                s.timed("refine", |_| refine_path(metric, &grid_path, SANDWICH_SWEEPS).context("pathspace"))?;
            let refined = s.timed("refine", |_| refined_distance(metric, p, q, &options).context("pathspace"))?;
            let lower = floor * p.dist(q);
            let ok = grid_len >= polished.length && polished.length >= lower && refined.length >= lower;
            chain_holds &= ok;
            let best = polished.length.min(refined.length);
            rows.push(DistanceRow { px: p.x, py: p.y, qx: q.x, qy: q.y, d: best });
            table.push(json!({
                "p": xy(p),
                "q": xy(q),
                "grid": grid_len,
                "grid_refined": polished.length,
                "refined": refined.length,
                "refined_error": refined.error,
                "lower": lower,
                "exact": metric.exact_distance(p, q),
                "chain_holds": ok,
            }));
        }
        s.csv("distances.csv", rows)?;
        s.require(chain_holds);
        s.record("lambda_min", json!(eig.min));
        s.record("distances", Value::Array(table));

        if let Some((mollifier, eps)) = &self.convergence {
            let res = self.resolution.max(64);
            let rep = s.timed("convergence", |_| {
                distance_convergence_experiment(metric, mollifier, eps, &self.pairs, res, &DistanceOptions::default())
                    .context("mollification")
            })?;
            s.require(rep.non_increasing);
            s.record(
                "convergence",
                json!({
                    "epsilons": rep.epsilons,
                    "max_relative": rep.max_relative,
                    "non_increasing": rep.non_increasing,
                    "grid_resolution": res,
                }),
            );
        }
        Ok(())
    }
}

// ---- geodesic ----

struct GeodesicPlan {
    metric: Metric,
    p: Point2,
    ivp: Option<(Vec2, f64)>,
    bvp: Option<(Point2, usize, usize, u64)>,
}

const IVP_STEPS: f64 = 1000.0;

impl GeodesicPlan {
    fn resolve(cfg: &mut ExperimentConfig) -> Result<Self, CliError> {
        let metric = load_metric(cfg)?;
        let p = point(cfg.p, "p")?.ok_or_else(|| CliError::config("p", "required"))?;
        let p = in_domain(&metric, p, "p")?;
        let ivp = match point(cfg.v, "v")? {
            Some(v) => {
                let t = ExperimentConfig::finite(cfg.time, "time")?.unwrap_or(1.0);
                if t <= 0.0 {
                    return Err(CliError::config("time", "must be positive"));
                }
                cfg.time = Some(t);
                Some((Vec2::new(v.x, v.y), t))
            }
            None => None,
        };
        let bvp = match point(cfg.q, "q")? {
            Some(q) => {
                let q = in_domain(&metric, q, "q")?;
                if q == p {
                    return Err(CliError::config("q", "must differ from p"));
                }
                let starts = cfg.count(cfg.samples, "samples", 32)?;
                if starts < 4 {
                    return Err(CliError::config("samples", "shooting needs at least 4 starts"));
                }
                let res = cfg.resolution_or(401, 32)?;
                cfg.samples = Some(starts);
                cfg.resolution = Some(res);
                Some((q, starts, res, cfg.seed()))
            }
            None => None,
        };
        if ivp.is_none() && bvp.is_none() {
            return Err(CliError::config("q", "give q (boundary value problem) or v (initial value problem)"));
        }
        Ok(Self { metric, p, ivp, bvp })
    }

    fn execute(self, s: &mut Session) -> Result<(), CliError> {
        let metric = &self.metric;
        if let Some((v, t)) = self.ivp {
            let sol = s.timed("ivp", |_| geodesic_ivp(metric, self.p, v, t, t / IVP_STEPS).context("pathspace"))?;
            s.csv("ivp.csv", path_rows(&sol.times, &sol.trajectory.points))?;
            s.record(
                "ivp",
                json!({
                    "exit": format!("{:?}", sol.exit),
                    "final_time": sol.final_time(),
                    "end": xy(sol.end()),
                    "speed_drift": sol.speed_drift(),
                    "step": sol.step,
                }),
            );
        }
        if let Some((q, starts, res, seed)) = self.bvp {
            let sols = s.timed("bvp", |_| geodesic_bvp(metric, self.p, q, starts, seed).context("pathspace"))?;
            let mut list = Vec::new();
            for (i, sol) in sols.iter().enumerate() {
                s.csv(&format!("geodesic_{i}.csv"), path_rows(&sol.times, &sol.trajectory.points))?;
                list.push(json!({
                    "velocity": [sol.velocity.x, sol.velocity.y],
                    "length": sol.final_time(),
                    "max_abs_x": sol.trajectory.max_abs_x(),
                }));
            }
            s.record("bvp", json!({ "solutions": list.len(), "geodesics": list }));
            let m = s.timed("multiplicity", |_| minimizer_multiplicity(metric, self.p, q, res).context("pathspace"))?;
            write_minimizers(s, metric, &m)?;
            s.record("minimizer_multiplicity", multiplicity_json(&m));
        }
        Ok(())
    }
}

// ---- compare ----

struct ComparePlan {
    metric: Metric,
    mode: Mode,
    region: Rect,
    samples: usize,
    seed: u64,
    k: Option<f64>,
    bracket: Option<[f64; 2]>,
    radius_at: Option<Point2>,
}

/// Sweep options for path-space distances: straight seeds and a short
/// descent keep thousands of distances affordable.
pub fn sweep_distance_options() -> DistanceOptions {
    DistanceOptions { seed: PathSeed::Straight, max_sweeps: 10, ..DistanceOptions::default() }
}

impl ComparePlan {
    fn resolve(cfg: &mut ExperimentConfig) -> Result<Self, CliError> {
        let metric = load_metric(cfg)?;
        let mode = load_mode(cfg)?;
        let exact = metric.model_curvature().is_some();
        let domain = metric.domain();
        let region = match cfg.region_rect()? {
            Some(r) => region_inside(&metric, r)?,
            None if exact => domain,
            None => domain.shrink(0.05 * min_side(&domain)),
        };
        let samples = cfg.count(cfg.samples, "samples", if exact { 1000 } else { 200 })?;
        let k = ExperimentConfig::finite(cfg.k, "k")?;
        let bracket = match cfg.bracket {
            Some([lo, hi]) if lo.is_finite() && hi.is_finite() && lo < hi => Some([lo, hi]),
            Some(_) => return Err(CliError::config("bracket", "need finite k_lo < k_hi")),
            None => None,
        };
        let radius_at = match point(cfg.radius_at, "radius_at")? {
            Some(p) if !region.contains(p) => return Err(CliError::config("radius_at", "must lie in the region")),
            Some(_) if k.is_none() => return Err(CliError::config("k", "required for a radius estimate")),
            p => p,
        };
        if k.is_none() && bracket.is_none() {
            return Err(CliError::config("k", "give k or a bracket"));
        }
        cfg.region = Some(rect_array(region));
        cfg.samples = Some(samples);
        Ok(Self { metric, mode, region, samples, seed: cfg.seed(), k, bracket, radius_at })
    }

    fn execute(self, s: &mut Session) -> Result<(), CliError> {
        match self.metric.model_curvature() {
            Some(kappa) => {
                let oracle = ModelOracle::with_region(kappa, self.region).context("comparison")?;
                s.record("oracle", json!("model"));
                self.run_with(&oracle, s)
            }
            None => {
                let inner = PathspaceOracle::with_region(self.metric.clone(), sweep_distance_options(), self.region)
                    .context("comparison")?;
                let oracle = MemoOracle::new(inner);
                s.record("oracle", json!("pathspace"));
                self.run_with(&oracle, s)
            }
        }
    }

    fn run_with<O: RegionOracle + Sync>(&self, oracle: &O, s: &mut Session) -> Result<(), CliError> {
        let region = SampleRegion::Rect(self.region);
        if let Some(k) = self.k {
            let summary = s.timed("sweep", |s| {
                sweep_region(oracle, self.mode, k, &region, self.samples, self.seed, &s.sweeper).context("comparison")
            })?;
            s.csv("verdicts.csv", summary.verdicts.iter().map(VerdictRow::from))?;
            s.require(!summary.verdicts.iter().any(|v| v.certain_failure()));
            s.record("sweep", sweep_json(&summary));
        }
        if let Some([lo, hi]) = self.bracket {
            let c = s.timed("critical", |s| {
                critical_curvature_search(oracle, &region, self.mode, lo, hi, self.samples, self.seed, &s.sweeper)
                    .context("comparison")
            })?;
            s.record("critical_curvature", json!({ "k": c.k, "lo": c.lo, "hi": c.hi, "saturated": c.saturated }));
        }
        if let (Some(p), Some(k)) = (self.radius_at, self.k) {
            let r = s.timed("radius", |s| {
                comparison_radius_estimate(oracle, k, p, self.mode, self.samples, self.seed, &s.sweeper)
                    .context("comparison")
            })?;
            s.record(
                "comparison_radius",
                json!({ "at": xy(p), "radius": r.radius, "cap": r.cap, "tolerance": r.tolerance }),
            );
        }
        Ok(())
    }
}

fn sweep_json(summary: &SweepSummary) -> Value {
    let worst = summary.min_slack.map(|i| {
        let v = &summary.verdicts[i];
        json!({ "slack": v.slack, "quadruple": v.quadruple.map(xy) })
    });
    json!({
        "mode": summary.mode.name(),
        "k": summary.k,
        "seed": summary.seed,
        "samples": summary.verdicts.len(),
        "passes": summary.passes,
        "failures": summary.failures,
        "inadmissible": summary.inadmissible,
        "marginal": summary.marginal,
        "certain_failures": summary.verdicts.iter().filter(|v| v.certain_failure()).count(),
        "pass_rate": summary.pass_rate(),
        "min_slack": worst,
    })
}

// ---- canned examples ----

struct ExamplePlan {
    which: Example,
    lambda: f64,
    resolution: usize,
    eps: Vec<f64>,
    mollifier: Mollifier,
    seed: u64,
}

const HW1_EPS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

impl ExamplePlan {
    fn resolve(cfg: &mut ExperimentConfig, which: Example) -> Result<Self, CliError> {
        let lambda = ExperimentConfig::finite(cfg.lambda, "lambda")?.unwrap_or(1.5);
        if !(lambda > 1.0 && lambda < 2.0) {
            return Err(CliError::config("lambda", "must lie in (1, 2)"));
        }
        let metric = match which {
            Example::Hw1 => CatalogMetric::hw1(lambda),
            Example::Hw2 => CatalogMetric::hw2(lambda),
        };
        metric.map_err(|e| CliError::config("lambda", e.to_string()))?;
        let (resolution, eps) = match which {
            Example::Hw1 => {
                if cfg.eps.is_none() {
                    cfg.eps = Some(HW1_EPS.to_vec());
                }
                (cfg.resolution_or(101, 3)?, cfg.eps_schedule()?)
            }
            Example::Hw2 => (cfg.resolution_or(2001, 32)?, Vec::new()),
        };
        let mollifier = load_mollifier(cfg)?;
        cfg.lambda = Some(lambda);
        cfg.resolution = Some(resolution);
        cfg.metric = Some(match which {
            Example::Hw1 => format!("hw1({lambda})"),
            Example::Hw2 => format!("hw2({lambda})"),
        });
        Ok(Self { which, lambda, resolution, eps, mollifier, seed: cfg.seed() })
    }

    fn execute(self, s: &mut Session) -> Result<(), CliError> {
        match self.which {
            Example::Hw1 => self.hw1(s),
            Example::Hw2 => self.hw2(s),
        }
    }

    fn axis_profile(&self, f: fn(f64, f64) -> f64) -> Value {
        let rows: Vec<Value> = (1..=6)
            .map(|j| {
                let x = 10f64.powi(-j);
                json!({ "x": x, "sec": f(self.lambda, x) })
            })
            .collect();
        Value::Array(rows)
    }

    fn hw1(self, s: &mut Session) -> Result<(), CliError> {
        let metric = CatalogMetric::hw1(self.lambda).context("metric")?;
        s.record("axis_profile", self.axis_profile(hw1_sectional));

        let region = Rect::new(-0.7, 0.7, -0.5, 0.5);
        let k_max = dense_extreme(self.lambda, 0.0, 0.7, hw1_sectional, f64::max);
        let k_low = dense_extreme(self.lambda, 0.2, 0.7, hw1_sectional, f64::min);
        let scan = |k, direction| {
            curvature_bound_scan(
                &metric,
                &self.mollifier,
                region,
                &self.eps,
                k,
                direction,
                self.resolution,
                SCAN_TOLERANCE,
            )
            .context("curvature")
        };
        let upper = s.timed("upper_scan", |_| scan(k_max, BoundDirection::Upper))?;
        let lower = s.timed("lower_scan", |_| scan(k_low, BoundDirection::Lower))?;
        let upper_ok = upper.behavior == SlackBehavior::Vanishing;
        let lower_fails = upper_ok && lower.entries.last().is_some_and(|e| !e.pass);
        s.require(upper_ok && lower_fails);
        s.record("upper_scan", scan_json(&upper));
        s.record("lower_scan", scan_json(&lower));

        let m = s.timed("multiplicity", |_| {
            minimizer_multiplicity(&metric, Point2::new(0.0, -0.4), Point2::new(0.0, 0.4), 1001).context("pathspace")
        })?;
        s.require(m.count == 1);
        write_minimizers(s, &metric, &m)?;
        s.record("minimizer_multiplicity", multiplicity_json(&m));
        Ok(())
    }

    fn hw2(self, s: &mut Session) -> Result<(), CliError> {
        let metric = CatalogMetric::hw2(self.lambda).context("metric")?;
        s.record("axis_profile", self.axis_profile(hw2_sectional));
        let (p, q) = (Point2::new(0.0, 0.0), Point2::new(0.0, 0.5));
        let m =
            s.timed("multiplicity", |_| minimizer_multiplicity(&metric, p, q, self.resolution).context("pathspace"))?;
        s.require(m.count == 2);
        write_minimizers(s, &metric, &m)?;
        s.record("minimizer_multiplicity", multiplicity_json(&m));

        let sols = s.timed("bvp", |_| geodesic_bvp(&metric, p, q, 32, self.seed).context("pathspace"))?;
        let list: Vec<Value> = sols
            .iter()
            .map(|g| json!({ "velocity": [g.velocity.x, g.velocity.y], "length": g.final_time(), "max_abs_x": g.trajectory.max_abs_x() }))
            .collect();
        s.record("bvp", json!({ "solutions": list.len(), "geodesics": list }));
        Ok(())
    }
}

/// Extreme of an `x`-only curvature profile over `a ≤ |x| ≤ b`.
fn dense_extreme(lambda: f64, a: f64, b: f64, f: fn(f64, f64) -> f64, pick: fn(f64, f64) -> f64) -> f64 {
    const N: usize = 20_000;
    (0..=N)
        .map(|i| a + (b - a) * i as f64 / N as f64)
        .filter(|&x| x > 0.0)
        .map(|x| f(lambda, x))
        .fold(f64::NAN, |acc, v| if acc.is_nan() { v } else { pick(acc, v) })
}
