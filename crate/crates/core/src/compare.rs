//! Synthetic curvature bounds tested on a distance oracle.
//!
//! A quadruple passes CBB(k) when the three model angles at `p` subtended by
//! `x₁, x₂, x₃` add up to at most `2π`; it passes CAT(k) when at one of
//! `p₁, p₂` the model angle between `x₁` and `x₂` is at most the sum of the
//! angles through the other `p`, or when one of the six angles is undefined.
//! Model angles are non-decreasing in `k`, so CBB verdicts can only flip from
//! pass to fail as `k` grows and CAT verdicts only from fail to pass.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::marker::{Send, Sync};

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::{Point2, Rect};
use crate::metric::{conformal_model_distance, nondegeneracy_scan_on, MetricField};
use crate::model::{self, perimeter_limit, TRIANGLE_SLACK};
use crate::path::{refined_distance, DistanceOptions};
use crate::sampling::{sample_quadruple, Quadruple, SampleRegion};

/// Angle-sum and angle-inequality tolerance.
pub const VERDICT_TOLERANCE: f64 = 1e-7;

/// A distance with an error bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measured {
    pub value: f64,
    pub error: f64,
}

impl Measured {
    pub const fn exact(value: f64) -> Self {
        Self { value, error: 0.0 }
    }
}

/// A symmetric non-negative distance function.
pub trait DistanceOracle {
    type Point: Copy + PartialEq;

    fn distance(&self, a: Self::Point, b: Self::Point) -> Result<Measured>;
}

/// An oracle on a chart rectangle, usable for region sweeps.
pub trait RegionOracle: DistanceOracle<Point = Point2> {
    fn region(&self) -> Rect;
}

impl<O: DistanceOracle + ?Sized> DistanceOracle for &O {
    type Point = O::Point;
    fn distance(&self, a: Self::Point, b: Self::Point) -> Result<Measured> {
        (**self).distance(a, b)
    }
}

impl<O: RegionOracle + ?Sized> RegionOracle for &O {
    fn region(&self) -> Rect {
        (**self).region()
    }
}

/// Closed-form distances of the model plane `𝕄²(k)` in its conformal chart
/// `4|dz|² / (1 + k|z|²)²` (the Euclidean plane for `k = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOracle {
    pub k: f64,
    pub region: Rect,
}

impl ModelOracle {
    /// The model plane on the largest chart square of its catalog metric.
    pub fn new(k: f64) -> Result<Self> {
        let half = crate::metric::constant_curvature_half_width(k);
        Ok(Self { k, region: Rect::centered(half) })
    }

    pub fn with_region(k: f64, region: Rect) -> Result<Self> {
        if !region.is_valid() {
            return Err(Error::InvalidArgument("oracle region must be non-empty"));
        }
        if k < 0.0 {
            let far = region.x0.abs().max(region.x1.abs()).hypot(region.y0.abs().max(region.y1.abs()));
            if (-k) * far * far >= 1.0 {
                return Err(Error::InvalidArgument("region leaves the hyperbolic disk"));
            }
        }
        Ok(Self { k, region })
    }
}

impl DistanceOracle for ModelOracle {
    type Point = Point2;
    fn distance(&self, a: Point2, b: Point2) -> Result<Measured> {
        for p in [a, b] {
            if !self.region.contains_with(p, 1e-12) {
                return Err(Error::OutOfDomain(p));
            }
        }
        Ok(Measured::exact(conformal_model_distance(self.k, a, b)))
    }
}

impl RegionOracle for ModelOracle {
    fn region(&self) -> Rect {
        self.region
    }
}

/// Explicit distance matrix over points `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOracle {
    n: usize,
    d: Vec<f64>,
}

impl MatrixOracle {
    /// Row-major `n × n` matrix; must be symmetric, non-negative, zero on the diagonal.
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::InvalidArgument("distance matrix must be n × n"));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::InvalidArgument("distance matrix must vanish on the diagonal"));
            }
            for j in 0..n {
                let v = d[i * n + j];
                if !(v >= 0.0) || !v.is_finite() || v != d[j * n + i] {
                    return Err(Error::InvalidArgument("distance matrix must be symmetric and non-negative"));
                }
            }
        }
        Ok(Self { n, d })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

impl DistanceOracle for MatrixOracle {
    type Point = usize;
    fn distance(&self, a: usize, b: usize) -> Result<Measured> {
        if a >= self.n || b >= self.n {
            return Err(Error::InvalidArgument("point index out of range"));
        }
        Ok(Measured::exact(self.d[a * self.n + b]))
    }
}

/// Refined-path distance upper bounds of a chart metric.
#[derive(Debug, Clone)]
pub struct PathspaceOracle<M> {
    pub field: M,
    pub options: DistanceOptions,
    pub region: Rect,
}

impl<M: MetricField> PathspaceOracle<M> {
    pub fn new(field: M, options: DistanceOptions) -> Self {
        let region = field.domain();
        Self { field, options, region }
    }

    pub fn with_region(field: M, options: DistanceOptions, region: Rect) -> Result<Self> {
        if !field.domain().contains_rect(&region) || !region.is_valid() {
            return Err(Error::InvalidArgument("oracle region must lie in the metric domain"));
        }
        Ok(Self { field, options, region })
    }
}

impl<M: MetricField> DistanceOracle for PathspaceOracle<M> {
    type Point = Point2;
    fn distance(&self, a: Point2, b: Point2) -> Result<Measured> {
        if a == b {
            return Ok(Measured::exact(0.0));
        }
        // symmetric by construction
        let (a, b) = if (a.x, a.y) <= (b.x, b.y) { (a, b) } else { (b, a) };
        let r = refined_distance(&self.field, a, b, &self.options)?;
        Ok(Measured { value: r.length, error: r.error })
    }
}

impl<M: MetricField> RegionOracle for PathspaceOracle<M> {
    fn region(&self) -> Rect {
        self.region
    }
}

/// `d(x,y) + d(y,z) + d(z,x)`.
pub fn perimeter<O: DistanceOracle>(oracle: &O, x: O::Point, y: O::Point, z: O::Point) -> Result<f64> {
    Ok(oracle.distance(x, y)?.value + oracle.distance(y, z)?.value + oracle.distance(z, x)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Cbb,
    Cat,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Cbb => "cbb",
            Mode::Cat => "cat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Pass,
    Fail,
    Inadmissible,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inadmissible => "inadmissible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonVerdict<P> {
    pub mode: Mode,
    pub k: f64,
    /// `(p, x₁, x₂, x₃)` for CBB, `(p₁, p₂, x₁, x₂)` for CAT.
    pub quadruple: [P; 4],
    pub admissible: bool,
    /// CBB: the three angles at `p`. CAT: the angles at `p₁`
    /// `(x₁x₂, p₂x₁, p₂x₂)` then at `p₂`. Empty when not all are defined.
    pub angles: Vec<f64>,
    pub result: Outcome,
    /// `2π - angle sum` (CBB) or the larger `right - left` of the two CAT
    /// inequalities; zero when inadmissible.
    pub slack: f64,
    /// Slack change induced by the distance errors.
    pub slack_error: f64,
    /// `|slack| < slack_error`.
    pub marginal: bool,
    /// A CAT model angle was undefined, so the quadruple passes vacuously.
    pub undefined_angle: bool,
}

impl<P> ComparisonVerdict<P> {
    pub fn passed(&self) -> bool {
        self.result != Outcome::Fail
    }

    /// A failure that the distance errors cannot explain.
    pub fn certain_failure(&self) -> bool {
        self.result == Outcome::Fail && !self.marginal
    }
}

enum Eval {
    Undefined,
    Value { angles: Vec<f64>, slack: f64 },
}

/// Model angle at the vertex with adjacent sides `b`, `c` and opposite `a`,
/// with the CBB convention `∠ = 0` for a vanishing opposite side.
fn angle(k: f64, a: f64, b: f64, c: f64, slack: f64) -> Result<Option<f64>> {
    match model::model_angle_with_slack(k, a, b, c, slack) {
        Ok(v) => Ok(Some(v)),
        Err(Error::Inadmissible("triangle inequality fails")) => {
            Err(Error::InvalidArgument("oracle distances violate the triangle inequality"))
        }
        Err(Error::Inadmissible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

// distance order: d(p,x1), d(p,x2), d(p,x3), d(x1,x2), d(x2,x3), d(x3,x1)
fn eval_cbb(k: f64, d: &[f64; 6], slack: f64) -> Result<Eval> {
    let limit = perimeter_limit(k);
    let (dp, dx) = ([d[0], d[1], d[2]], [d[3], d[4], d[5]]);
    let mut angles = Vec::with_capacity(3);
    for (i, j, opp) in [(0, 1, dx[0]), (1, 2, dx[1]), (2, 0, dx[2])] {
        if dp[i] + dp[j] + opp >= limit {
            return Ok(Eval::Undefined);
        }
        let a = if dp[i] == 0.0 || dp[j] == 0.0 {
            0.0
        } else {
            match angle(k, opp, dp[i], dp[j], slack)? {
                Some(a) => a,
                None => return Ok(Eval::Undefined),
            }
        };
        angles.push(a);
    }
    let sum: f64 = angles.iter().sum();
    Ok(Eval::Value { angles, slack: 2.0 * PI - sum })
}

// distance order: d(p1,p2), d(p1,x1), d(p1,x2), d(p2,x1), d(p2,x2), d(x1,x2)
fn eval_cat(k: f64, d: &[f64; 6], slack: f64) -> Result<Eval> {
    let [d12, d1a, d1b, d2a, d2b, dab] = *d;
    let limit = perimeter_limit(k);
    let triples =
        [(dab, d1a, d1b), (d2a, d12, d1a), (d2b, d12, d1b), (dab, d2a, d2b), (d1a, d12, d2a), (d1b, d12, d2b)];
    let mut angles = Vec::with_capacity(6);
    for (a, b, c) in triples {
        if a + b + c >= limit {
            return Ok(Eval::Undefined);
        }
        match angle(k, a, b, c, slack)? {
            Some(v) => angles.push(v),
            None => return Ok(Eval::Undefined),
        }
    }
    let first = angles[1] + angles[2] - angles[0];
    let second = angles[4] + angles[5] - angles[3];
    Ok(Eval::Value { slack: first.max(second), angles })
}

fn judge<P: Copy>(
    mode: Mode,
    k: f64,
    quadruple: [P; 4],
    d: [Measured; 6],
    coincident_pass: bool,
) -> Result<ComparisonVerdict<P>> {
    let values = d.map(|m| m.value);
    let total_error: f64 = d.iter().map(|m| m.error).sum();
    let scale: f64 = values.iter().sum();
    let slack = TRIANGLE_SLACK * scale + 2.0 * total_error;
    let eval = |v: &[f64; 6]| match mode {
        Mode::Cbb => eval_cbb(k, v, slack),
        Mode::Cat => eval_cat(k, v, slack),
    };
    let mut verdict = ComparisonVerdict {
        mode,
        k,
        quadruple,
        admissible: false,
        angles: Vec::new(),
        result: Outcome::Inadmissible,
        slack: 0.0,
        slack_error: 0.0,
        marginal: false,
        undefined_angle: false,
    };
    let (angles, s) = match eval(&values)? {
        Eval::Undefined => {
            if mode == Mode::Cat {
                verdict.result = Outcome::Pass;
                verdict.undefined_angle = true;
            }
            return Ok(verdict);
        }
        Eval::Value { angles, slack } => (angles, slack),
    };
    let mut slack_error = 0.0;
    for (i, m) in d.iter().enumerate() {
        if m.error == 0.0 {
            continue;
        }
        let mut shifted = values;
        shifted[i] += m.error;
        slack_error += match eval(&shifted) {
            Ok(Eval::Value { slack: s2, .. }) => (s2 - s).abs(),
            _ => f64::INFINITY,
        };
    }
    verdict.admissible = true;
    verdict.angles = angles;
    verdict.slack = s;
    verdict.slack_error = slack_error;
    verdict.marginal = s.abs() < slack_error;
    verdict.result = if coincident_pass || s >= -VERDICT_TOLERANCE { Outcome::Pass } else { Outcome::Fail };
    Ok(verdict)
}

/// CBB(k) angle-sum test of `p` against `x₁, x₂, x₃`.
///
/// A quadruple whose three triangles through `p` are not all of perimeter
/// below `2ϖ^k` is inadmissible. If `p` coincides with some `xᵢ` the verdict
/// is a pass, with angles involving that point set to zero; an angle whose
/// opposite side vanishes is zero.
pub fn cbb_quadruple<O: DistanceOracle>(
    oracle: &O,
    k: f64,
    p: O::Point,
    x1: O::Point,
    x2: O::Point,
    x3: O::Point,
) -> Result<ComparisonVerdict<O::Point>> {
    let d = [
        oracle.distance(p, x1)?,
        oracle.distance(p, x2)?,
        oracle.distance(p, x3)?,
        oracle.distance(x1, x2)?,
        oracle.distance(x2, x3)?,
        oracle.distance(x3, x1)?,
    ];
    let coincident = d[..3].iter().any(|m| m.value == 0.0);
    judge(Mode::Cbb, k, [p, x1, x2, x3], d, coincident)
}

/// CAT(k) test of the quadruple `(p₁, p₂; x₁, x₂)`.
///
/// An undefined model angle (zero adjacent side or perimeter at least
/// `2ϖ^k`) makes the quadruple pass, flagged by `undefined_angle`.
pub fn cat_quadruple<O: DistanceOracle>(
    oracle: &O,
    k: f64,
    p1: O::Point,
    p2: O::Point,
    x1: O::Point,
    x2: O::Point,
) -> Result<ComparisonVerdict<O::Point>> {
    let d = [
        oracle.distance(p1, p2)?,
        oracle.distance(p1, x1)?,
        oracle.distance(p1, x2)?,
        oracle.distance(p2, x1)?,
        oracle.distance(p2, x2)?,
        oracle.distance(x1, x2)?,
    ];
    judge(Mode::Cat, k, [p1, p2, x1, x2], d, false)
}

pub fn verdict<O: DistanceOracle>(
    oracle: &O,
    mode: Mode,
    k: f64,
    q: [O::Point; 4],
) -> Result<ComparisonVerdict<O::Point>> {
    match mode {
        Mode::Cbb => cbb_quadruple(oracle, k, q[0], q[1], q[2], q[3]),
        Mode::Cat => cat_quadruple(oracle, k, q[0], q[1], q[2], q[3]),
    }
}

/// Maps an index range through a function, possibly in parallel. Results
/// come back in index order.
pub trait Sweeper {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every item on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Sweeper for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

/// Verdicts of one sampled sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub mode: Mode,
    pub k: f64,
    pub seed: u64,
    pub verdicts: Vec<ComparisonVerdict<Point2>>,
    pub passes: usize,
    pub failures: usize,
    pub inadmissible: usize,
    /// Marginal verdicts, excluded from `failures` and `passes`.
    pub marginal: usize,
    /// Index of the admissible verdict with the smallest slack.
    pub min_slack: Option<usize>,
}

impl SweepSummary {
    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }

    pub fn pass_rate(&self) -> f64 {
        let judged = self.verdicts.len() - self.marginal;
        if judged == 0 {
            1.0
        } else {
            (self.passes + self.inadmissible) as f64 / judged as f64
        }
    }

    fn from_verdicts(mode: Mode, k: f64, seed: u64, verdicts: Vec<ComparisonVerdict<Point2>>) -> Self {
        let mut s = SweepSummary {
            mode,
            k,
            seed,
            passes: 0,
            failures: 0,
            inadmissible: 0,
            marginal: 0,
            min_slack: None,
            verdicts: Vec::new(),
        };
        for (i, v) in verdicts.iter().enumerate() {
            if v.marginal {
                s.marginal += 1;
            } else {
                match v.result {
                    Outcome::Pass => s.passes += 1,
                    Outcome::Fail => s.failures += 1,
                    Outcome::Inadmissible => s.inadmissible += 1,
                }
            }
            if v.admissible && s.min_slack.is_none_or(|j: usize| v.slack < verdicts[j].slack) {
                s.min_slack = Some(i);
            }
        }
        s.verdicts = verdicts;
        s
    }
}

fn verdicts_for<O, S>(
    oracle: &O,
    mode: Mode,
    k: f64,
    quads: &[Quadruple],
    sweeper: &S,
) -> Result<Vec<ComparisonVerdict<Point2>>>
where
    O: DistanceOracle<Point = Point2> + Sync,
    S: Sweeper,
{
    sweeper.map(quads.len(), |i| verdict(oracle, mode, k, quads[i])).into_iter().collect()
}

/// Test `n` seeded quadruples from `region`.
pub fn sweep_region<O, S>(
    oracle: &O,
    mode: Mode,
    k: f64,
    region: &SampleRegion,
    n: usize,
    seed: u64,
    sweeper: &S,
) -> Result<SweepSummary>
where
    O: DistanceOracle<Point = Point2> + Sync,
    S: Sweeper,
{
    let quads = sample_all(region, n, seed, sweeper)?;
    let verdicts = verdicts_for(oracle, mode, k, &quads, sweeper)?;
    Ok(SweepSummary::from_verdicts(mode, k, seed, verdicts))
}

/// Test a fixed list of quadruples.
pub fn sweep_quadruples<O, S>(
    oracle: &O,
    mode: Mode,
    k: f64,
    quads: &[Quadruple],
    seed: u64,
    sweeper: &S,
) -> Result<SweepSummary>
where
    O: DistanceOracle<Point = Point2> + Sync,
    S: Sweeper,
{
    let verdicts = verdicts_for(oracle, mode, k, quads, sweeper)?;
    Ok(SweepSummary::from_verdicts(mode, k, seed, verdicts))
}

fn sample_all<S: Sweeper>(region: &SampleRegion, n: usize, seed: u64, sweeper: &S) -> Result<Vec<Quadruple>> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be positive"));
    }
    sweeper.map(n, |i| sample_quadruple(region, seed, i as u64)).into_iter().collect()
}

/// Relative resolution of radius bisection.
pub const RADIUS_RESOLUTION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusEstimate {
    /// Largest passing radius found (chart units).
    pub radius: f64,
    /// Chart distance from `p` to the boundary of the oracle region.
    pub cap: f64,
    /// Bisection resolution.
    pub tolerance: f64,
}

fn all_pass_at<O, S>(
    oracle: &O,
    k: f64,
    p: Point2,
    r: f64,
    mode: Mode,
    n: usize,
    seed: u64,
    sweeper: &S,
) -> Result<bool>
where
    O: DistanceOracle<Point = Point2> + Sync,
    S: Sweeper,
{
    let region = SampleRegion::Ball { center: p, radius: r };
    Ok(sweep_region(oracle, mode, k, &region, n, seed, sweeper)?.all_pass())
}

/// Empirical lower estimate of the comparison radius at `p`: the largest
/// chart ball radius, up to the region cap, for which every sampled
/// quadruple in the ball passes.
///
/// Bisection stops at a resolution of 1% of the largest cap in the region,
/// so estimates at different points share one grid.
#[allow(clippy::too_many_arguments)]
pub fn comparison_radius_estimate<O, S>(
    oracle: &O,
    k: f64,
    p: Point2,
    mode: Mode,
    n_samples: usize,
    seed: u64,
    sweeper: &S,
) -> Result<RadiusEstimate>
where
    O: RegionOracle + Sync,
    S: Sweeper,
{
    let region = oracle.region();
    if !region.contains(p) {
        return Err(Error::OutOfDomain(p));
    }
    let cap = region.boundary_distance(p);
    let tolerance = RADIUS_RESOLUTION * 0.5 * region.width().min(region.height());
    if cap <= 0.0 {
        return Ok(RadiusEstimate { radius: 0.0, cap, tolerance });
    }
    if all_pass_at(oracle, k, p, cap, mode, n_samples, seed, sweeper)? {
        return Ok(RadiusEstimate { radius: cap, cap, tolerance });
    }
    let (mut lo, mut hi) = (0.0, cap);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if all_pass_at(oracle, k, p, mid, mode, n_samples, seed, sweeper)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RadiusEstimate { radius: lo, cap, tolerance })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalCurvature {
    /// Midpoint of the final bracket.
    pub k: f64,
    pub lo: f64,
    pub hi: f64,
    /// The far end of the bracket also passed, so the estimate is that end.
    pub saturated: bool,
}

/// Largest `k` with CBB(k), or smallest with CAT(k), over one fixed sample
/// of quadruples, by bisection to a bracket width of `(k_hi - k_lo)·10⁻³`.
#[allow(clippy::too_many_arguments)]
pub fn critical_curvature_search<O, S>(
    oracle: &O,
    region: &SampleRegion,
    mode: Mode,
    k_lo: f64,
    k_hi: f64,
    n_samples: usize,
    seed: u64,
    sweeper: &S,
) -> Result<CriticalCurvature>
where
    O: DistanceOracle<Point = Point2> + Sync,
    S: Sweeper,
{
    if !(k_lo < k_hi) || !k_lo.is_finite() || !k_hi.is_finite() {
        return Err(Error::BracketInvalid("need finite k_lo < k_hi"));
    }
    let quads = sample_all(region, n_samples, seed, sweeper)?;
    let passes = |k: f64| -> Result<bool> { Ok(sweep_quadruples(oracle, mode, k, &quads, seed, sweeper)?.all_pass()) };
    let width = (k_hi - k_lo) * 1e-3;
    // `good` passes, `bad` fails
    let (mut good, mut bad) = match mode {
        Mode::Cbb => {
            if !passes(k_lo)? {
                return Err(Error::BracketInvalid("CBB(k_lo) fails on the sample"));
            }
            if passes(k_hi)? {
                return Ok(CriticalCurvature { k: k_hi, lo: k_hi, hi: k_hi, saturated: true });
            }
            (k_lo, k_hi)
        }
        Mode::Cat => {
            if !passes(k_hi)? {
                return Err(Error::BracketInvalid("CAT(k_hi) fails on the sample"));
            }
            if passes(k_lo)? {
                return Ok(CriticalCurvature { k: k_lo, lo: k_lo, hi: k_lo, saturated: true });
            }
            (k_hi, k_lo)
        }
    };
    while (good - bad).abs() > width {
        let mid = 0.5 * (good + bad);
        if passes(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    let (lo, hi) = if good < bad { (good, bad) } else { (bad, good) };
    Ok(CriticalCurvature { k: 0.5 * (lo + hi), lo, hi, saturated: false })
}

/// Chart radius of a ball about `center` on which restricted and induced
/// length metrics agree: a third of the distance to the boundary of
/// `region`, scaled by `√(λ_min / λ_max)` of the metric over `region`.
pub fn localization_radius<M: MetricField + ?Sized>(
    field: &M,
    region: &Rect,
    center: Point2,
    resolution: usize,
) -> Result<f64> {
    if !region.contains(center) {
        return Err(Error::OutOfDomain(center));
    }
    let eig = nondegeneracy_scan_on(field, *region, resolution)?;
    Ok(region.boundary_distance(center) / 3.0 * (eig.min / eig.max).sqrt())
}
