//! Lengths, distances and geodesics of chart metrics.
//!
//! Distances are certified upper bounds: a shortest path in a weighted
//! lattice graph, refined by coordinate descent on its vertices over a
//! sequence of midpoint-doubled polylines. Geodesics are integrated with the
//! classical fourth-order Runge–Kutta scheme and two-point problems are solved
//! by damped Newton shooting.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::curvature;
use crate::error::{Error, Result};
use crate::geom::{Point2, Rect, Sym2, Vec2};
use crate::metric::MetricField;

/// Longest chart length of a single quadrature panel.
pub const QUADRATURE_STEP: f64 = 0.01;

/// Finite-difference step for Christoffel symbols of fields without
/// closed-form derivatives.
pub const CHRISTOFFEL_STEP: f64 = 1e-5;

/// A polygonal chart curve with its metric length.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Point2>,
    pub length: f64,
}

impl Polyline {
    pub fn new<M: MetricField + ?Sized>(field: &M, points: Vec<Point2>) -> Result<Self> {
        let length = curve_length(field, &points)?;
        Ok(Self { points, length })
    }

    pub fn start(&self) -> Point2 {
        self.points[0]
    }

    pub fn end(&self) -> Point2 {
        *self.points.last().unwrap()
    }

    pub fn segments(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    /// Metric arc length at every vertex.
    pub fn arc_lengths<M: MetricField + ?Sized>(&self, field: &M) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.points.len());
        let mut acc = 0.0;
        out.push(0.0);
        for w in self.points.windows(2) {
            acc += segment_length(field, w[0], w[1])?;
            out.push(acc);
        }
        Ok(out)
    }

    pub fn mirrored(&self) -> Polyline {
        Polyline { points: self.points.iter().map(|p| p.mirror_x()).collect(), length: self.length }
    }

    /// Largest `|x|` over the vertices.
    pub fn max_abs_x(&self) -> f64 {
        self.points.iter().fold(0.0, |m, p| m.max(p.x.abs()))
    }
}

fn check_in_domain(domain: &Rect, p: Point2) -> Result<()> {
    let slack = 1e-12 * (1.0 + domain.width().max(domain.height()));
    if p.is_finite() && domain.contains_with(p, slack) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(p))
    }
}

fn speed(g: &Sym2, d: Vec2) -> f64 {
    g.quad(d).max(0.0).sqrt()
}

/// Length of the straight chart segment `a → b` by composite Simpson on an
/// even number of panels of chart length at most [`QUADRATURE_STEP`].
fn segment_length<M: MetricField + ?Sized>(field: &M, a: Point2, b: Point2) -> Result<f64> {
    let d = b - a;
    let chart = d.norm();
    if chart == 0.0 {
        return Ok(0.0);
    }
    let n = 2 * ((chart / (2.0 * QUADRATURE_STEP)).ceil() as usize).max(1);
    let mut sum = speed(&field.metric(a)?, d) + speed(&field.metric(b)?, d);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * speed(&field.metric(a.lerp(b, i as f64 / n as f64))?, d);
    }
    Ok(sum / (3 * n) as f64)
}

/// Metric length of the polygon through `pts`.
pub fn curve_length<M: MetricField + ?Sized>(field: &M, pts: &[Point2]) -> Result<f64> {
    if pts.len() < 2 {
        return Err(Error::InvalidArgument("a curve needs at least two points"));
    }
    let domain = field.domain();
    for &p in pts {
        check_in_domain(&domain, p)?;
    }
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += segment_length(field, w[0], w[1])?;
    }
    Ok(total)
}

/// Lattice neighborhood of the grid graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Neighborhood {
    Eight,
    Sixteen,
}

impl Neighborhood {
    fn offsets(self) -> &'static [(i32, i32)] {
        const EIGHT: [(i32, i32); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
        const SIXTEEN: [(i32, i32); 16] = [
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
            (1, 2),
            (2, 1),
            (-1, 2),
            (-2, 1),
            (1, -2),
            (2, -1),
            (-1, -2),
            (-2, -1),
        ];
        match self {
            Neighborhood::Eight => &EIGHT,
            Neighborhood::Sixteen => &SIXTEEN,
        }
    }

    pub fn from_count(n: usize) -> Result<Self> {
        match n {
            8 => Ok(Neighborhood::Eight),
            16 => Ok(Neighborhood::Sixteen),
            _ => Err(Error::InvalidArgument("neighborhood must be 8 or 16")),
        }
    }
}

/// Lattice with square cells covering a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    pub cell: f64,
}

impl Lattice {
    /// `resolution` nodes along the longer side of `rect`.
    pub fn covering(rect: Rect, resolution: usize) -> Self {
        let span = rect.width().max(rect.height());
        let cell = span / (resolution - 1) as f64;
        let nx = ((rect.width() / cell).round() as usize).max(1) + 1;
        let ny = ((rect.height() / cell).round() as usize).max(1) + 1;
        let rect = Rect::new(rect.x0, rect.x0 + (nx - 1) as f64 * cell, rect.y0, rect.y0 + (ny - 1) as f64 * cell);
        Self { rect, nx, ny, cell }
    }

    fn node(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.rect.x0 + i as f64 * self.cell, self.rect.y0 + j as f64 * self.cell)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct QueueItem {
    cost: f64,
    node: usize,
}

impl Eq for QueueItem {}

impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest path between `p` and `q` in the grid graph over the whole field
/// domain with `resolution` nodes along its longer side.
pub fn grid_distance<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    q: Point2,
    resolution: usize,
    neighborhood: Neighborhood,
) -> Result<(f64, Polyline)> {
    if resolution < 32 {
        return Err(Error::InvalidArgument("grid resolution must be at least 32"));
    }
    let lattice = Lattice::covering(field.domain(), resolution);
    grid_distance_on(field, p, q, &lattice, neighborhood)
}

/// Dijkstra on `lattice`, with `p` and `q` joined to the nodes of their
/// surrounding cells. The returned length is that of the polygon itself.
pub fn grid_distance_on<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    q: Point2,
    lattice: &Lattice,
    neighborhood: Neighborhood,
) -> Result<(f64, Polyline)> {
    let domain = field.domain();
    check_in_domain(&domain, p)?;
    check_in_domain(&domain, q)?;
    if p == q {
        return Ok((0.0, Polyline { points: vec![p, q], length: 0.0 }));
    }
    let (nx, ny) = (lattice.nx, lattice.ny);
    let n = nx * ny;
    let src = n;
    let dst = n + 1;
    let position = |v: usize| -> Point2 {
        if v == src {
            p
        } else if v == dst {
            q
        } else {
            lattice.node(v % nx, v / nx)
        }
    };
    let usable = |pt: Point2| domain.contains(pt);

    let mut metric = Vec::with_capacity(n);
    for j in 0..ny {
        for i in 0..nx {
            let pt = lattice.node(i, j);
            metric.push(if usable(pt) { Some(field.metric(pt)?) } else { None });
        }
    }

    let attach = |pt: Point2| -> Vec<usize> {
        let fi = (pt.x - lattice.rect.x0) / lattice.cell;
        let fj = (pt.y - lattice.rect.y0) / lattice.cell;
        let mut out = Vec::new();
        let i0 = (fi.floor() as i64 - 1).max(0);
        let j0 = (fj.floor() as i64 - 1).max(0);
        for j in j0..=(fj.floor() as i64 + 2).min(ny as i64 - 1) {
            for i in i0..=(fi.floor() as i64 + 2).min(nx as i64 - 1) {
                let v = j as usize * nx + i as usize;
                if metric[v].is_some() {
                    out.push(v);
                }
            }
        }
        out
    };
    let p_links = attach(p);
    let q_links = attach(q);
    let direct = p.dist(q) <= 3.0 * lattice.cell;

    let edge = |a: usize, b: usize| -> Result<f64> {
        if a < n && b < n {
            let (ga, gb) = (metric[a].unwrap(), metric[b].unwrap());
            let (pa, pb) = (position(a), position(b));
            let d = pb - pa;
            if d.norm() <= QUADRATURE_STEP {
                return Ok(0.5 * (speed(&ga, d) + speed(&gb, d)));
            }
            return segment_length(field, pa, pb);
        }
        segment_length(field, position(a), position(b))
    };

    let mut dist = vec![f64::INFINITY; n + 2];
    let mut prev = vec![usize::MAX; n + 2];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(QueueItem { cost: 0.0, node: src });
    let offsets = neighborhood.offsets();
    while let Some(QueueItem { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        if node == dst {
            break;
        }
        let mut relax = |to: usize, w: f64, heap: &mut BinaryHeap<QueueItem>| {
            let c = cost + w;
            if c < dist[to] {
                dist[to] = c;
                prev[to] = node;
                heap.push(QueueItem { cost: c, node: to });
            }
        };
        if node == src {
            for &v in &p_links {
                relax(v, edge(src, v)?, &mut heap);
            }
            if direct {
                relax(dst, edge(src, dst)?, &mut heap);
            }
            continue;
        }
        let (i, j) = ((node % nx) as i64, (node / nx) as i64);
        for &(di, dj) in offsets {
            let (a, b) = (i + di as i64, j + dj as i64);
            if a < 0 || b < 0 || a >= nx as i64 || b >= ny as i64 {
                continue;
            }
            let v = b as usize * nx + a as usize;
            if metric[v].is_none() {
                continue;
            }
            relax(v, edge(node, v)?, &mut heap);
        }
        if q_links.contains(&node) {
            relax(dst, edge(node, dst)?, &mut heap);
        }
    }
    if !dist[dst].is_finite() {
        return Err(Error::Disconnected);
    }
    let mut points = Vec::new();
    let mut v = dst;
    while v != usize::MAX {
        points.push(position(v));
        v = prev[v];
    }
    points.reverse();
    // the search used trapezoid weights on short edges; report the polygon's length
    let length = curve_length(field, &points)?;
    Ok((length, Polyline { points, length }))
}

fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// One coordinate-descent sweep; returns the total length decrease.
fn sweep<M: MetricField + ?Sized>(field: &M, pts: &mut [Point2], box_: &Rect) -> Result<f64> {
    let mut gained = 0.0;
    for i in 1..pts.len() - 1 {
        let (a, b) = (pts[i - 1], pts[i + 1]);
        let mut v = pts[i];
        let reach = 0.5 * v.dist(a).min(v.dist(b)).max(0.25 * a.dist(b));
        if reach == 0.0 {
            continue;
        }
        let cost = |v: Point2| -> f64 {
            if !box_.contains(v) {
                return f64::INFINITY;
            }
            match (segment_length(field, a, v), segment_length(field, v, b)) {
                (Ok(x), Ok(y)) => x + y,
                _ => f64::INFINITY,
            }
        };
        let mut current = cost(v);
        if !current.is_finite() {
            current = segment_length(field, a, v)? + segment_length(field, v, b)?;
        }
        // length is quadratic about the optimum, so a coarse location suffices
        let tol = 1e-5 * reach;
        for axis in 0..2 {
            let (lo, hi, at) = if axis == 0 {
                ((v.x - reach).max(box_.x0), (v.x + reach).min(box_.x1), v.x)
            } else {
                ((v.y - reach).max(box_.y0), (v.y + reach).min(box_.y1), v.y)
            };
            if hi <= lo {
                continue;
            }
            let place = |t: f64| {
                if axis == 0 {
                    Point2::new(t, v.y)
                } else {
                    Point2::new(v.x, t)
                }
            };
            let (t, ft) = golden_section(|t| cost(place(t)), lo, hi, tol);
            if ft < current && t != at {
                gained += current - ft;
                current = ft;
                v = place(t);
            }
        }
        pts[i] = v;
    }
    Ok(gained)
}

fn refinement_box<M: MetricField + ?Sized>(field: &M) -> Rect {
    let d = field.domain();
    d.shrink(1e-9 * d.width().min(d.height()))
}

/// Refinement stops once a sweep gains less than this fraction of the chart length.
const STATIONARY: f64 = 1e-12;

fn sweeps_until_stationary<M: MetricField + ?Sized>(
    field: &M,
    pts: &mut [Point2],
    max_sweeps: usize,
    box_: &Rect,
) -> Result<()> {
    let scale = pts.windows(2).map(|w| w[0].dist(w[1])).sum::<f64>();
    for _ in 0..max_sweeps {
        let gained = sweep(field, pts, box_)?;
        if gained <= STATIONARY * scale {
            break;
        }
    }
    Ok(())
}

/// Coordinate-descent length minimization over interior vertices; endpoints
/// stay fixed and moves are clamped to the domain.
pub fn refine_path<M: MetricField + ?Sized>(field: &M, path: &Polyline, iterations: usize) -> Result<Polyline> {
    if iterations == 0 {
        return Err(Error::InvalidArgument("refinement needs at least one sweep"));
    }
    let mut pts = path.points.clone();
    curve_length(field, &pts)?;
    let box_ = refinement_box(field);
    sweeps_until_stationary(field, &mut pts, iterations, &box_)?;
    Polyline::new(field, pts)
}

/// Resample a polygon into `n` segments of equal chart length.
pub fn resample(pts: &[Point2], n: usize) -> Vec<Point2> {
    let mut cum = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for w in pts.windows(2) {
        acc += w[0].dist(w[1]);
        cum.push(acc);
    }
    let first = pts[0];
    let last = *pts.last().unwrap();
    if acc == 0.0 {
        return vec![first; n + 1];
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(first);
    let mut seg = 0;
    for k in 1..n {
        let s = acc * k as f64 / n as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < s {
            seg += 1;
        }
        let span = cum[seg + 1] - cum[seg];
        let t = if span > 0.0 { (s - cum[seg]) / span } else { 0.0 };
        out.push(pts[seg].lerp(pts[seg + 1], t));
    }
    out.push(last);
    out
}

fn double(pts: &[Point2]) -> Vec<Point2> {
    let mut out = Vec::with_capacity(2 * pts.len() - 1);
    for w in pts.windows(2) {
        out.push(w[0]);
        out.push(w[0].lerp(w[1], 0.5));
    }
    out.push(*pts.last().unwrap());
    out
}

/// How the initial polygon of a refined distance is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathSeed {
    /// Shortest lattice path in a box around the endpoints.
    Lattice,
    /// The straight chart segment.
    Straight,
}

/// Parameters of [`refined_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceOptions {
    pub seed: PathSeed,
    /// Lattice nodes along the longer side of the search box.
    pub resolution: usize,
    pub neighborhood: Neighborhood,
    /// The search box is the endpoints' bounding box grown by this multiple
    /// of their chart distance, clipped to the domain.
    pub padding: f64,
    /// Segment count of the coarsest polygon.
    pub start_segments: usize,
    /// Number of midpoint doublings after the coarsest level.
    pub doublings: usize,
    pub max_sweeps: usize,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            seed: PathSeed::Lattice,
            resolution: 48,
            neighborhood: Neighborhood::Sixteen,
            padding: 0.5,
            start_segments: 4,
            doublings: 3,
            max_sweeps: 200,
        }
    }
}

/// A refined distance upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedDistance {
    /// Length of the finest refined polygon.
    pub length: f64,
    /// Change in length between the last two levels.
    pub error: f64,
    pub path: Polyline,
}

/// Refine a seed polygon over a hierarchy of midpoint-doubled discretizations.
pub fn refine_multilevel<M: MetricField + ?Sized>(
    field: &M,
    seed: &[Point2],
    options: &DistanceOptions,
) -> Result<RefinedDistance> {
    let box_ = refinement_box(field);
    let mut pts = resample(seed, options.start_segments.max(1));
    sweeps_until_stationary(field, &mut pts, options.max_sweeps, &box_)?;
    let mut length = curve_length(field, &pts)?;
    let mut error = length;
    for _ in 0..options.doublings {
        pts = double(&pts);
        sweeps_until_stationary(field, &mut pts, options.max_sweeps, &box_)?;
        let next = curve_length(field, &pts)?;
        error = (length - next).abs();
        length = next;
    }
    Ok(RefinedDistance { length, error, path: Polyline { points: pts, length } })
}

fn search_box<M: MetricField + ?Sized>(field: &M, p: Point2, q: Point2, padding: f64) -> Rect {
    let d = p.dist(q);
    Rect::bounding(p, q, padding * d).intersect(&field.domain())
}

/// Distance upper bound from a lattice (or straight) seed refined by
/// coordinate descent, with the last-level change as error estimate.
pub fn refined_distance<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    q: Point2,
    options: &DistanceOptions,
) -> Result<RefinedDistance> {
    let domain = field.domain();
    check_in_domain(&domain, p)?;
    check_in_domain(&domain, q)?;
    if p == q {
        return Ok(RefinedDistance { length: 0.0, error: 0.0, path: Polyline { points: vec![p, q], length: 0.0 } });
    }
    let seed = match options.seed {
        PathSeed::Straight => vec![p, q],
        PathSeed::Lattice => {
            let lattice = Lattice::covering(search_box(field, p, q, options.padding), options.resolution.max(8));
            grid_distance_on(field, p, q, &lattice, options.neighborhood)?.1.points
        }
    };
    refine_multilevel(field, &seed, options)
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExitReason {
    ReachedTime,
    HitBoundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicSolution {
    pub start: Point2,
    pub velocity: Vec2,
    pub step: f64,
    pub trajectory: Polyline,
    pub times: Vec<f64>,
    /// `√g(γ̇, γ̇)` at every stored time.
    pub speeds: Vec<f64>,
    pub exit: ExitReason,
}

impl GeodesicSolution {
    pub fn end(&self) -> Point2 {
        self.trajectory.end()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Largest relative speed deviation from the initial speed.
    pub fn speed_drift(&self) -> f64 {
        let s0 = self.speeds[0];
        self.speeds.iter().fold(0.0, |m, s| m.max((s - s0).abs())) / s0.max(f64::MIN_POSITIVE)
    }
}

type State = [f64; 4];

fn acceleration<M: MetricField + ?Sized>(field: &M, s: &State) -> Result<State> {
    let p = Point2::new(s[0], s[1]);
    let gamma = curvature::christoffel(field, p, CHRISTOFFEL_STEP)?;
    let v = [s[2], s[3]];
    let mut a = [0.0; 2];
    for (i, ai) in a.iter_mut().enumerate() {
        for j in 0..2 {
            for k in 0..2 {
                *ai -= gamma[i][j][k] * v[j] * v[k];
            }
        }
    }
    Ok([s[2], s[3], a[0], a[1]])
}

fn axpy(s: &State, h: f64, k: &State) -> State {
    [s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2], s[3] + h * k[3]]
}

fn rk4_step<M: MetricField + ?Sized>(field: &M, s: &State, h: f64) -> Result<State> {
    let k1 = acceleration(field, s)?;
    let k2 = acceleration(field, &axpy(s, 0.5 * h, &k1))?;
    let k3 = acceleration(field, &axpy(s, 0.5 * h, &k2))?;
    let k4 = acceleration(field, &axpy(s, h, &k3))?;
    let mut out = *s;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// Integrate `γ̈^i = -Γ^i_jk γ̇^j γ̇^k` from `p` with velocity `v`.
///
/// Stops when a stage leaves the domain. At the axis of the Hartman–Wintner
/// metrics the equation has non-unique solutions; this scheme follows the
/// mirror-symmetric one.
pub fn geodesic_ivp<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    v: Vec2,
    t_max: f64,
    dt: f64,
) -> Result<GeodesicSolution> {
    if !(t_max > 0.0) || !(dt > 0.0) || dt > t_max / 10.0 * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument("geodesic step must satisfy 0 < dt <= t_max / 10"));
    }
    let domain = field.domain();
    if !domain.contains(p) {
        return Err(Error::OutOfDomain(p));
    }
    let speed_at =
        |s: &State| -> Result<f64> { Ok(speed(&field.metric(Point2::new(s[0], s[1]))?, Vec2::new(s[2], s[3]))) };
    let mut s: State = [p.x, p.y, v.x, v.y];
    let mut points = vec![p];
    let mut times = vec![0.0];
    let mut speeds = vec![speed_at(&s)?];
    let mut t = 0.0;
    let mut exit = ExitReason::ReachedTime;
    let steps = (t_max / dt - 1e-9).ceil() as usize;
    for i in 0..steps {
        let h = if i + 1 == steps { t_max - t } else { dt };
        let next = match rk4_step(field, &s, h) {
            Ok(n) => n,
            Err(Error::OutOfDomain(_)) | Err(Error::BoundaryProximity(_)) => {
                exit = ExitReason::HitBoundary;
                break;
            }
            Err(e) => return Err(e),
        };
        let q = Point2::new(next[0], next[1]);
        if !domain.contains(q) {
            exit = ExitReason::HitBoundary;
            break;
        }
        s = next;
        t = if i + 1 == steps { t_max } else { t + h };
        points.push(q);
        times.push(t);
        speeds.push(speed_at(&s)?);
    }
    if points.len() == 1 {
        points.push(p);
    }
    let trajectory = Polyline::new(field, points)?;
    Ok(GeodesicSolution { start: p, velocity: v, step: dt, trajectory, times, speeds, exit })
}

/// Two-point shooting parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// Integration steps per shot.
    pub steps: usize,
    pub max_iterations: usize,
    /// Convergence threshold on the chart miss distance.
    pub tolerance: f64,
    /// Initial angles closer than this are the same solution.
    pub cluster_angle: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self { steps: 400, max_iterations: 60, tolerance: 1e-9, cluster_angle: 1e-3 }
    }
}

/// Unit-speed initial velocity with chart direction angle `theta`.
fn unit_velocity(g: &Sym2, theta: f64) -> Vec2 {
    let e = Vec2::new(theta.cos(), theta.sin());
    e * (1.0 / speed(g, e))
}

fn shoot<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    g: &Sym2,
    theta: f64,
    time: f64,
    steps: usize,
) -> Option<(Point2, GeodesicSolution)> {
    let sol = geodesic_ivp(field, p, unit_velocity(g, theta), time, time / steps as f64).ok()?;
    (sol.exit == ExitReason::ReachedTime).then(|| (sol.end(), sol))
}

fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * core::f64::consts::PI;
    let r = a % two_pi;
    if r < 0.0 {
        r + two_pi
    } else {
        r
    }
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(2.0 * core::f64::consts::PI - d)
}

/// Uniform `[0, 1)` from the top 53 bits.
pub(crate) fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Unit-speed geodesics from `p` to `q` found by shooting from `n_starts`
/// directions on the circle.
///
/// For every start the travel time is initialized at the closest approach
/// of the trial geodesic to `q`, then `(angle, time)` is corrected by damped
/// Newton iteration with a finite-difference Jacobian. Converged solutions
/// whose initial angles agree within the cluster threshold are merged, the
/// shortest one kept.
pub fn geodesic_bvp<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    q: Point2,
    n_starts: usize,
    seed: u64,
) -> Result<Vec<GeodesicSolution>> {
    geodesic_bvp_with(field, p, q, n_starts, seed, &ShootingOptions::default())
}

pub fn geodesic_bvp_with<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    q: Point2,
    n_starts: usize,
    seed: u64,
    options: &ShootingOptions,
) -> Result<Vec<GeodesicSolution>> {
    if n_starts < 4 {
        return Err(Error::InvalidArgument("shooting needs at least four starts"));
    }
    let domain = field.domain();
    check_in_domain(&domain, p)?;
    check_in_domain(&domain, q)?;
    if p == q {
        return Err(Error::InvalidArgument("shooting endpoints must differ"));
    }
    let g = field.metric(p)?;
    let chart = p.dist(q);
    let straight = curve_length(field, &[p, q])?;
    let span = domain.width().max(domain.height());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two_pi = 2.0 * core::f64::consts::PI;
    let offset = unit_f64(&mut rng) * two_pi / n_starts as f64;

    let mut found: Vec<(f64, GeodesicSolution)> = Vec::new();
    for i in 0..n_starts {
        let theta0 = offset + two_pi * i as f64 / n_starts as f64;
        // closest approach along a long trial shot
        let horizon = 3.0 * straight;
        let trial =
            match geodesic_ivp(field, p, unit_velocity(&g, theta0), horizon, horizon / (4 * options.steps) as f64) {
                Ok(t) => t,
                Err(_) => continue,
            };
        let (mut best_t, mut best_d) = (0.0, f64::INFINITY);
        for (pt, &t) in trial.trajectory.points.iter().zip(&trial.times) {
            let d = pt.dist(q);
            if d < best_d && t > 0.0 {
                best_d = d;
                best_t = t;
            }
        }
        if best_t == 0.0 {
            continue;
        }
        if let Some((theta, sol)) = newton_shoot(field, p, q, &g, theta0, best_t, options, chart, span) {
            found.push((wrap_angle(theta), sol));
        }
    }

    found.sort_by(|a, b| a.1.final_time().total_cmp(&b.1.final_time()));
    let mut distinct: Vec<(f64, GeodesicSolution)> = Vec::new();
    for (theta, sol) in found {
        if distinct.iter().all(|(t, _)| angle_gap(*t, theta) > options.cluster_angle) {
            distinct.push((theta, sol));
        }
    }
    distinct.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(distinct.into_iter().map(|(_, s)| s).collect())
}

#[allow(clippy::too_many_arguments)]
fn newton_shoot<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    q: Point2,
    g: &Sym2,
    theta0: f64,
    t0: f64,
    options: &ShootingOptions,
    chart: f64,
    span: f64,
) -> Option<(f64, GeodesicSolution)> {
    let steps = options.steps;
    let (mut theta, mut time) = (theta0, t0);
    let (mut end, mut sol) = shoot(field, p, g, theta, time, steps)?;
    let mut miss = end - q;
    for _ in 0..options.max_iterations {
        if miss.norm() < options.tolerance {
            break;
        }
        let dth = 1e-7;
        let dt = 1e-7 * time.max(1e-3);
        let (e_th, _) = shoot(field, p, g, theta + dth, time, steps)?;
        let (e_t, _) = shoot(field, p, g, theta, time + dt, steps)?;
        let j = [[(e_th.x - end.x) / dth, (e_t.x - end.x) / dt], [(e_th.y - end.y) / dth, (e_t.y - end.y) / dt]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let mut step_th = -(j[1][1] * miss.x - j[0][1] * miss.y) / det;
        let mut step_t = -(-j[1][0] * miss.x + j[0][0] * miss.y) / det;
        // clamp
        let scale = (0.3 / step_th.abs()).min(0.25 * time / step_t.abs()).min(1.0);
        step_th *= scale;
        step_t *= scale;
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1e-4 {
            let (th, tm) = (theta + lambda * step_th, time + lambda * step_t);
            if tm > 0.0 && tm < 4.0 * span {
                if let Some((e, s)) = shoot(field, p, g, th, tm, steps) {
                    let m = e - q;
                    if m.norm() < miss.norm() {
                        theta = th;
                        time = tm;
                        end = e;
                        sol = s;
                        miss = m;
                        accepted = true;
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (miss.norm() <= 1e-5 * chart.max(1.0)).then_some((theta, sol))
}

/// Hausdorff distance between two polygons (vertex-to-polygon in both directions).
pub fn hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    fn to_polygon(p: Point2, poly: &[Point2]) -> f64 {
        if poly.len() == 1 {
            return p.dist(poly[0]);
        }
        poly.windows(2).fold(f64::INFINITY, |m, w| {
            let d = w[1] - w[0];
            let len2 = d.dot(d);
            let t = if len2 > 0.0 { ((p - w[0]).dot(d) / len2).clamp(0.0, 1.0) } else { 0.0 };
            m.min(p.dist(w[0].lerp(w[1], t)))
        })
    }
    let one = a.iter().fold(0.0, |m: f64, &p| m.max(to_polygon(p, b)));
    let two = b.iter().fold(0.0, |m: f64, &p| m.max(to_polygon(p, a)));
    one.max(two)
}

/// Distinct near-minimal paths between two points.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplicity {
    pub count: usize,
    pub paths: Vec<Polyline>,
    /// Lattice cell size; distinct paths are more than two cells apart.
    pub cell: f64,
    pub lattice_length: f64,
}

/// Relative length window for near-minimal paths.
pub const MULTIPLICITY_WINDOW: f64 = 0.005;

/// Find the distinct near-minimizing paths between `p` and `q`.
///
/// The lattice path over a box around the endpoints is refined; when both
/// endpoints lie on the mirror axis `x = 0` its mirror image and two paths
/// bowed to either side of the axis are refined as well. Refined paths
/// within 0.5% of the shortest one are kept when pairwise more than two
/// lattice cells apart in Hausdorff distance.
pub fn minimizer_multiplicity<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    q: Point2,
    resolution: usize,
) -> Result<Multiplicity> {
    if resolution < 32 {
        return Err(Error::InvalidArgument("grid resolution must be at least 32"));
    }
    let domain = field.domain();
    check_in_domain(&domain, p)?;
    check_in_domain(&domain, q)?;
    if p == q {
        return Ok(Multiplicity {
            count: 1,
            paths: vec![Polyline { points: vec![p, q], length: 0.0 }],
            cell: 0.0,
            lattice_length: 0.0,
        });
    }
    let lattice = Lattice::covering(search_box(field, p, q, 0.05), resolution);
    let (lattice_length, lattice_path) = grid_distance_on(field, p, q, &lattice, Neighborhood::Sixteen)?;
    let options = DistanceOptions { start_segments: 4, doublings: 4, max_sweeps: 400, ..DistanceOptions::default() };

    let mut seeds = vec![lattice_path.points.clone()];
    if p.x == 0.0 && q.x == 0.0 {
        let mirrored = lattice_path.mirrored().points;
        if mirrored.iter().all(|&m| domain.contains(m)) {
            seeds.push(mirrored);
        }
        let bow = 4.0 * lattice.cell;
        for sign in [1.0, -1.0] {
            let n = 8;
            let pts: Vec<Point2> = (0..=n)
                .map(|k| {
                    let t = k as f64 / n as f64;
                    let base = p.lerp(q, t);
                    Point2::new(base.x + sign * bow * (core::f64::consts::PI * t).sin(), base.y)
                })
                .collect();
            if pts.iter().all(|&m| domain.contains(m)) {
                seeds.push(pts);
            }
        }
    }
    let mut candidates = Vec::with_capacity(seeds.len());
    for s in &seeds {
        candidates.push(refine_multilevel(field, s, &options)?.path);
    }
    candidates.sort_by(|a, b| a.length.total_cmp(&b.length));
    let best = candidates[0].length;
    let mut kept: Vec<Polyline> = Vec::new();
    for c in candidates {
        if c.length > best * (1.0 + MULTIPLICITY_WINDOW) {
            continue;
        }
        if kept.iter().all(|k| hausdorff(&k.points, &c.points) > 2.0 * lattice.cell) {
            kept.push(c);
        }
    }
    Ok(Multiplicity { count: kept.len(), paths: kept, cell: lattice.cell, lattice_length })
}
