//! Mollifier convolution of metric components on a single chart.
//!
//! On one chart the partition-of-unity construction of manifold convolution
//! collapses to plain convolution `g_ij ⋆ ρ_ε`, evaluated on a grid whose
//! rectangle is the source domain shrunk by `ε` on every side.
//!
//! The convolution is discrete: the source is sampled on a lattice that
//! refines the output grid by an integer factor, and the kernel is sampled on
//! the same lattice. Finite differences of the output along the grid are then
//! discrete convolutions with a differenced smooth kernel, which keeps
//! curvature evaluation on the smoothed grid free of the source's kinks. The
//! lattice is symmetric about every output node and the weights are
//! normalized to sum to one, so constants and affine fields are reproduced
//! exactly and non-negative data stays non-negative.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::{Grid, Point2, Rect, Sym2};
use crate::metric::{MetricField, Regularity};
use crate::path::{self, DistanceOptions};

/// Minimum number of kernel lattice nodes on each side of the center, so the
/// kernel is sampled on at least 17 × 17 nodes.
pub const KERNEL_HALF_NODES: usize = 8;

/// Smallest admissible output grid resolution.
pub const MIN_RESOLUTION: usize = 16;

/// Radial profile of a mollifier before normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    /// `exp(-1 / (1 - r²))`, smooth.
    Bump,
    /// `(1 - r)⁴ (4r + 1)`, C² at the support boundary.
    Wendland,
}

impl Profile {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "bump" => Ok(Profile::Bump),
            "wendland" => Ok(Profile::Wendland),
            _ => Err(Error::UnknownProfile),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Bump => "bump",
            Profile::Wendland => "wendland",
        }
    }

    /// Unnormalized profile value at radius `r ≥ 0`.
    pub fn eval(&self, r: f64) -> f64 {
        if !(r < 1.0) {
            return 0.0;
        }
        match self {
            Profile::Bump => (-1.0 / (1.0 - r * r)).exp(),
            Profile::Wendland => {
                let s = 1.0 - r;
                s * s * s * s * (4.0 * r + 1.0)
            }
        }
    }
}

/// A non-negative radial kernel supported in the closed unit disk with unit
/// integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    profile: Profile,
    norm: f64,
}

/// Build a mollifier from its profile name (`bump` or `wendland`).
pub fn make_mollifier(profile_name: &str) -> Result<Mollifier> {
    Ok(Mollifier::new(Profile::from_name(profile_name)?))
}

impl Mollifier {
    pub fn new(profile: Profile) -> Self {
        let radial = match profile {
            // ∫₀¹ (1-r)⁴(4r+1) r dr = 1/14
            Profile::Wendland => 1.0 / 14.0,
            Profile::Bump => simpson(|r| profile.eval(r) * r, 0.0, 1.0, 4096),
        };
        Self { profile, norm: 1.0 / (2.0 * PI * radial) }
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    /// Normalized density `ρ(r)` on the unit disk.
    pub fn density(&self, r: f64) -> f64 {
        self.norm * self.profile.eval(r)
    }

    /// Rescaled density `ρ_ε(u) = ε⁻² ρ(|u|/ε)`.
    pub fn scaled(&self, epsilon: f64, u: Point2) -> f64 {
        self.density(u.norm() / epsilon) / (epsilon * epsilon)
    }
}

/// Composite Simpson rule with `n` (even) panels.
pub(crate) fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Kernel weights on a lattice with steps `(dx, dy)`, normalized to sum to one.
#[derive(Debug, Clone)]
struct LatticeKernel {
    half_x: usize,
    half_y: usize,
    /// `(m, n, w)` for the nonzero weights, `m ∈ [-half_x, half_x]`.
    taps: Vec<(isize, isize, f64)>,
}

impl LatticeKernel {
    fn new(mollifier: &Mollifier, epsilon: f64, dx: f64, dy: f64) -> Self {
        let half_x = (epsilon / dx + 1e-9).floor() as usize;
        let half_y = (epsilon / dy + 1e-9).floor() as usize;
        let mut taps = Vec::new();
        let mut total = 0.0;
        for n in -(half_y as isize)..=half_y as isize {
            for m in -(half_x as isize)..=half_x as isize {
                let u = Point2::new(m as f64 * dx, n as f64 * dy);
                let w = mollifier.density(u.norm() / epsilon);
                if w > 0.0 {
                    taps.push((m, n, w));
                    total += w;
                }
            }
        }
        for t in &mut taps {
            t.2 /= total;
        }
        Self { half_x, half_y, taps }
    }
}

/// Lattice refinement factor so that the kernel spans at least
/// `2·KERNEL_HALF_NODES + 1` nodes per axis.
fn refinement(spacing: f64, epsilon: f64) -> usize {
    ((KERNEL_HALF_NODES as f64 * spacing / epsilon) - 1e-9).ceil().max(1.0) as usize
}

/// Discrete convolution of an `N`-component field onto the nodes of `grid`.
fn convolve<const N: usize, F>(grid: &Grid, mollifier: &Mollifier, epsilon: f64, mut sample: F) -> Result<Vec<[f64; N]>>
where
    F: FnMut(Point2) -> Result<[f64; N]>,
{
    let (dx, dy) = (grid.dx(), grid.dy());
    let (sx, sy) = (refinement(dx, epsilon), refinement(dy, epsilon));
    let (fdx, fdy) = (dx / sx as f64, dy / sy as f64);
    let kernel = LatticeKernel::new(mollifier, epsilon, fdx, fdy);
    let (mx, my) = (kernel.half_x, kernel.half_y);
    let fnx = (grid.nx - 1) * sx + 2 * mx + 1;
    let fny = (grid.ny - 1) * sy + 2 * my + 1;
    let x_start = grid.rect.x0 - mx as f64 * fdx;
    let y_start = grid.rect.y0 - my as f64 * fdy;

    let mut source = Vec::with_capacity(fnx * fny);
    for j in 0..fny {
        let y = y_start + j as f64 * fdy;
        for i in 0..fnx {
            source.push(sample(Point2::new(x_start + i as f64 * fdx, y))?);
        }
    }

    let offsets: Vec<(isize, f64)> = kernel.taps.iter().map(|&(m, n, w)| (n * fnx as isize + m, w)).collect();
    let mut out = Vec::with_capacity(grid.len());
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let center = ((j * sy + my) * fnx + i * sx + mx) as isize;
            let mut acc = [0.0; N];
            for &(off, w) in &offsets {
                let v = &source[(center + off) as usize];
                for c in 0..N {
                    acc[c] += w * v[c];
                }
            }
            out.push(acc);
        }
    }
    Ok(out)
}

/// Usable domain left after shrinking `domain` by `epsilon`.
fn usable_domain(domain: Rect, epsilon: f64) -> Result<Rect> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument("epsilon must be positive"));
    }
    let limit = 0.5 * domain.width().min(domain.height());
    if epsilon >= limit {
        return Err(Error::EpsilonTooLarge { epsilon, limit });
    }
    Ok(domain.shrink(epsilon))
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidArgument("smoothing resolution must be at least 16"));
    }
    Ok(())
}

/// A metric sampled on a uniform grid, evaluated between nodes by bilinear
/// interpolation of its components.
#[derive(Debug, Clone)]
pub struct SampledMetric {
    grid: Grid,
    values: Vec<Sym2>,
    epsilon: f64,
}

impl SampledMetric {
    /// Wrap precomputed node values (row-major, `x` fastest).
    pub fn from_nodes(grid: Grid, values: Vec<Sym2>, epsilon: f64) -> Result<Self> {
        if grid.nx < 2 || grid.ny < 2 || !grid.rect.is_valid() {
            return Err(Error::InvalidArgument("sampled grid needs at least 2 × 2 nodes"));
        }
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument("node count does not match the grid"));
        }
        if let Some((idx, _)) = values.iter().enumerate().find(|(_, g)| !g.is_positive_definite()) {
            let (i, j) = grid.coords(idx);
            return Err(Error::SpdViolation(grid.node(i, j)));
        }
        Ok(Self { grid, values, epsilon })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Sym2] {
        &self.values
    }

    /// Smoothing scale, or 0 for data read back from a file.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn node_value(&self, i: usize, j: usize) -> Sym2 {
        self.values[self.grid.index(i, j)]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (Point2, Sym2)> + '_ {
        self.grid.nodes().zip(self.values.iter().copied())
    }
}

/// Cell index and fractional offset of `t` on `n` nodes spanning `[a, b]`.
fn locate(t: f64, a: f64, b: f64, n: usize) -> (usize, f64) {
    let s = (t - a) / (b - a) * (n - 1) as f64;
    let s = s.clamp(0.0, (n - 1) as f64);
    // snap round-off so that node coordinates hit nodes exactly
    let s = if (s - s.round()).abs() < 1e-9 { s.round() } else { s };
    let i = (s.floor() as usize).min(n - 2);
    (i, s - i as f64)
}

impl MetricField for SampledMetric {
    fn domain(&self) -> Rect {
        self.grid.rect
    }

    fn regularity(&self) -> Regularity {
        Regularity::Lipschitz
    }

    fn metric(&self, p: Point2) -> Result<Sym2> {
        let r = self.grid.rect;
        if !r.contains_with(p, 1e-12 * (1.0 + r.width().max(r.height()))) {
            return Err(Error::OutOfDomain(p));
        }
        let (i, tx) = locate(p.x, r.x0, r.x1, self.grid.nx);
        let (j, ty) = locate(p.y, r.y0, r.y1, self.grid.ny);
        let v00 = self.node_value(i, j);
        let v10 = self.node_value(i + 1, j);
        let v01 = self.node_value(i, j + 1);
        let v11 = self.node_value(i + 1, j + 1);
        Ok(v00 * ((1.0 - tx) * (1.0 - ty)) + v10 * (tx * (1.0 - ty)) + v01 * ((1.0 - tx) * ty) + v11 * (tx * ty))
    }
}

/// A scalar field sampled on a grid.
#[derive(Debug, Clone)]
pub struct SampledScalar {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub epsilon: f64,
}

impl SampledScalar {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }
}

/// Smooth a metric by component-wise convolution with `ρ_ε`.
///
/// The output grid has `resolution × resolution` nodes on the source domain
/// shrunk by `epsilon`.
pub fn smooth_metric<M: MetricField + ?Sized>(
    field: &M,
    mollifier: &Mollifier,
    epsilon: f64,
    resolution: usize,
) -> Result<SampledMetric> {
    check_resolution(resolution)?;
    let usable = usable_domain(field.domain(), epsilon)?;
    smooth_metric_on(field, mollifier, epsilon, Grid::square(usable, resolution))
}

/// Smooth a metric onto an arbitrary grid inside the usable domain.
pub fn smooth_metric_on<M: MetricField + ?Sized>(
    field: &M,
    mollifier: &Mollifier,
    epsilon: f64,
    grid: Grid,
) -> Result<SampledMetric> {
    let usable = usable_domain(field.domain(), epsilon)?;
    if grid.nx < 2 || grid.ny < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 × 2 nodes"));
    }
    let slack = 1e-12 * (1.0 + usable.width().max(usable.height()));
    if !usable.shrink(-slack).contains_rect(&grid.rect) {
        return Err(Error::InvalidArgument("grid must lie inside the domain shrunk by epsilon"));
    }
    let raw = convolve(&grid, mollifier, epsilon, |p| field.metric(p).map(|g| g.as_array()))?;
    let mut values = Vec::with_capacity(raw.len());
    for (idx, a) in raw.into_iter().enumerate() {
        let g = Sym2::from_array(a);
        if !g.is_positive_definite() {
            let (i, j) = grid.coords(idx);
            return Err(Error::SpdViolation(grid.node(i, j)));
        }
        values.push(g);
    }
    Ok(SampledMetric { grid, values, epsilon })
}

/// Smooth a scalar field defined on `domain`.
pub fn smooth_scalar<F: Fn(Point2) -> f64>(
    f: F,
    domain: Rect,
    mollifier: &Mollifier,
    epsilon: f64,
    resolution: usize,
) -> Result<SampledScalar> {
    check_resolution(resolution)?;
    let usable = usable_domain(domain, epsilon)?;
    let grid = Grid::square(usable, resolution);
    let raw = convolve(&grid, mollifier, epsilon, |p| Ok([f(p)]))?;
    Ok(SampledScalar { grid, values: raw.into_iter().map(|a| a[0]).collect(), epsilon })
}

/// Max-norm deviation of a smoothed metric from its source on the grid nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingError {
    /// `max |g_ε - g|` over nodes and components.
    pub c0: f64,
    /// `max |Δg_ε - Δg| / h` over neighbouring nodes and components.
    pub c1: f64,
}

pub fn smoothing_error<M: MetricField + ?Sized>(smoothed: &SampledMetric, source: &M) -> Result<SmoothingError> {
    let grid = smoothed.grid;
    let mut src = Vec::with_capacity(grid.len());
    for p in grid.nodes() {
        src.push(source.metric(p)?);
    }
    let mut c0: f64 = 0.0;
    let mut c1: f64 = 0.0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let idx = grid.index(i, j);
            c0 = c0.max(smoothed.values[idx].max_abs_diff(&src[idx]));
            if i + 1 < grid.nx {
                let n = grid.index(i + 1, j);
                let ds = smoothed.values[n] - smoothed.values[idx];
                let dg = src[n] - src[idx];
                c1 = c1.max(ds.max_abs_diff(&dg) / grid.dx());
            }
            if j + 1 < grid.ny {
                let n = grid.index(i, j + 1);
                let ds = smoothed.values[n] - smoothed.values[idx];
                let dg = src[n] - src[idx];
                c1 = c1.max(ds.max_abs_diff(&dg) / grid.dy());
            }
        }
    }
    Ok(SmoothingError { c0, c1 })
}

/// Outcome of [`distance_convergence_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceConvergenceReport {
    pub epsilons: Vec<f64>,
    /// Distances `d_g(p, q)` of the unsmoothed metric, one per pair.
    pub reference: Vec<f64>,
    /// `|d_{g_ε} - d_g| / d_g` per ε (outer) and pair (inner).
    pub relative: Vec<Vec<f64>>,
    /// Maximum relative deviation per ε.
    pub max_relative: Vec<f64>,
    /// Whether `max_relative` is non-increasing up to 10% noise.
    pub non_increasing: bool,
}

/// Relative noise allowed when judging a sequence non-increasing.
pub const TREND_NOISE: f64 = 0.1;

/// `true` if every entry is at most `(1 + noise)` times its predecessor
/// (entries below `floor` count as zero).
pub fn non_increasing_within(values: &[f64], noise: f64, floor: f64) -> bool {
    values.windows(2).all(|w| w[1] <= floor || w[1] <= (1.0 + noise) * w[0].max(floor))
}

/// Compare distances of smoothed metrics against the source metric along a
/// decreasing schedule of smoothing scales.
///
/// `resolution` is the node count per side of each smoothed grid; distances
/// on both sides are computed by [`path::refined_distance`] with `options`.
pub fn distance_convergence_experiment<M: MetricField + ?Sized>(
    field: &M,
    mollifier: &Mollifier,
    eps_schedule: &[f64],
    sample_pairs: &[(Point2, Point2)],
    resolution: usize,
    options: &DistanceOptions,
) -> Result<DistanceConvergenceReport> {
    if eps_schedule.is_empty() {
        return Err(Error::InvalidArgument("empty epsilon schedule"));
    }
    if eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("epsilon schedule must be strictly decreasing"));
    }
    let usable = field.domain().shrink(eps_schedule[0]);
    if sample_pairs.iter().any(|(p, q)| !usable.contains(*p) || !usable.contains(*q)) {
        return Err(Error::InvalidArgument("sample points must lie in the usable domain of the largest epsilon"));
    }
    let mut reference = Vec::with_capacity(sample_pairs.len());
    for &(p, q) in sample_pairs {
        reference.push(path::refined_distance(field, p, q, options)?.length);
    }
    let mut relative = Vec::with_capacity(eps_schedule.len());
    let mut max_relative = Vec::with_capacity(eps_schedule.len());
    for &eps in eps_schedule {
        let smoothed = smooth_metric(field, mollifier, eps, resolution)?;
        let mut row = Vec::with_capacity(sample_pairs.len());
        for (&(p, q), &d) in sample_pairs.iter().zip(&reference) {
            let dev = if p == q || d == 0.0 {
                0.0
            } else {
                let de = path::refined_distance(&smoothed, p, q, options)?.length;
                (de - d).abs() / d
            };
            row.push(dev);
        }
        max_relative.push(row.iter().copied().fold(0.0, f64::max));
        relative.push(row);
    }
    let non_increasing = non_increasing_within(&max_relative, TREND_NOISE, 1e-9);
    Ok(DistanceConvergenceReport { epsilons: eps_schedule.to_vec(), reference, relative, max_relative, non_increasing })
}
