//! Christoffel symbols, the Riemann tensor and Gauss curvature of chart
//! metrics, plus the smoothed-metric curvature bound scan.
//!
//! Conventions: `Riem(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z`, so that
//! `sec(v,w) = g(Riem(v,w)w, v) / |v ∧ w|²` is positive on the sphere. In
//! coordinates `R^l_ijk = ∂_i Γ^l_jk - ∂_j Γ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik`.
//!
//! First derivatives of `g` come from the field's closed form when it has one
//! and from central differences otherwise; derivatives of `Γ` are always
//! central differences of the Christoffel path.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::{Grid, Point2, Rect, Sym2, Vec2};
use crate::metric::{wedge_norm, MetricField};
use crate::mollify::{self, non_increasing_within, Mollifier, KERNEL_HALF_NODES, TREND_NOISE};

/// `Γ^i_jk`, indexed `[i][j][k]`.
pub type Christoffel = [[[f64; 2]; 2]; 2];

/// `R^l_ijk`, indexed `[l][i][j][k]`.
pub type Riemann = [[[[f64; 2]; 2]; 2]; 2];

/// How a curvature value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Analytic,
    FiniteDifference,
}

/// Smallest finite-difference step.
pub const MIN_STEP: f64 = 1e-4;

/// Default step for fields sampled with the given grid spacing.
pub fn default_step(spacing: f64) -> f64 {
    spacing.max(MIN_STEP)
}

fn require_margin(domain: &Rect, p: Point2, margin: f64) -> Result<()> {
    if !domain.contains(p) {
        return Err(Error::OutOfDomain(p));
    }
    let slack = 1e-12 * (1.0 + domain.width().max(domain.height()));
    if domain.boundary_distance(p) + slack < margin {
        return Err(Error::BoundaryProximity(p));
    }
    Ok(())
}

/// `[∂_x g, ∂_y g]` at `p`, analytic when available.
fn metric_derivatives<M: MetricField + ?Sized>(field: &M, p: Point2, h: f64) -> Result<[Sym2; 2]> {
    if let Some(d) = field.derivatives(p) {
        return d;
    }
    let ex = Vec2::new(h, 0.0);
    let ey = Vec2::new(0.0, h);
    let dx = (field.metric(p + ex)? - field.metric(p - ex)?) * (0.5 / h);
    let dy = (field.metric(p + ey)? - field.metric(p - ey)?) * (0.5 / h);
    Ok([dx, dy])
}

fn has_analytic_derivatives<M: MetricField + ?Sized>(field: &M, p: Point2) -> bool {
    field.derivatives(p).is_some()
}

fn christoffel_unchecked<M: MetricField + ?Sized>(field: &M, p: Point2, h: f64) -> Result<Christoffel> {
    let g = field.metric(p)?;
    let inv = g.inverse().ok_or(Error::SingularMetric(p))?;
    let d = metric_derivatives(field, p, h)?;
    // dg[c][a][b] = ∂_c g_ab
    let dg = |c: usize, a: usize, b: usize| d[c].get(a, b);
    let mut gamma = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in j..2 {
                let mut s = 0.0;
                for l in 0..2 {
                    s += inv.get(i, l) * (dg(j, l, k) + dg(k, j, l) - dg(l, j, k));
                }
                gamma[i][j][k] = 0.5 * s;
                gamma[i][k][j] = 0.5 * s;
            }
        }
    }
    Ok(gamma)
}

/// Christoffel symbols `Γ^i_jk = ½ g^il (∂_j g_lk + ∂_k g_jl - ∂_l g_jk)`.
///
/// With finite differences the point must lie at least `2h` inside the
/// domain; fields with closed-form derivatives only need `p` in the domain.
pub fn christoffel<M: MetricField + ?Sized>(field: &M, p: Point2, h: f64) -> Result<Christoffel> {
    let margin = if has_analytic_derivatives(field, p) { 0.0 } else { 2.0 * h };
    require_margin(&field.domain(), p, margin)?;
    christoffel_unchecked(field, p, h)
}

/// Riemann tensor `R^l_ijk` at `p` from central differences of `Γ`.
pub fn riemann<M: MetricField + ?Sized>(field: &M, p: Point2, h: f64) -> Result<Riemann> {
    let margin = if has_analytic_derivatives(field, p) { h } else { 3.0 * h };
    require_margin(&field.domain(), p, margin)?;
    riemann_unchecked(field, p, h)
}

fn riemann_unchecked<M: MetricField + ?Sized>(field: &M, p: Point2, h: f64) -> Result<Riemann> {
    let gamma = christoffel_unchecked(field, p, h)?;
    let ex = Vec2::new(h, 0.0);
    let ey = Vec2::new(0.0, h);
    let gxp = christoffel_unchecked(field, p + ex, h)?;
    let gxm = christoffel_unchecked(field, p - ex, h)?;
    let gyp = christoffel_unchecked(field, p + ey, h)?;
    let gym = christoffel_unchecked(field, p - ey, h)?;
    // dgamma[c][l][j][k] = ∂_c Γ^l_jk
    let mut dgamma = [[[[0.0; 2]; 2]; 2]; 2];
    for l in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                dgamma[0][l][j][k] = (gxp[l][j][k] - gxm[l][j][k]) / (2.0 * h);
                dgamma[1][l][j][k] = (gyp[l][j][k] - gym[l][j][k]) / (2.0 * h);
            }
        }
    }
    let mut r = [[[[0.0; 2]; 2]; 2]; 2];
    for l in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut v = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                    for m in 0..2 {
                        v += gamma[l][i][m] * gamma[m][j][k] - gamma[l][j][m] * gamma[m][i][k];
                    }
                    r[l][i][j][k] = v;
                }
            }
        }
    }
    Ok(r)
}

/// `𝓡(v1 ∧ v2, w1 ∧ w2) = g(Riem(v1, v2) w2, w1)` from a precomputed tensor.
fn contract(g: &Sym2, r: &Riemann, v1: Vec2, v2: Vec2, w1: Vec2, w2: Vec2) -> f64 {
    let c = |v: Vec2, i: usize| if i == 0 { v.x } else { v.y };
    let mut total = 0.0;
    for l in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let coeff = c(v1, i) * c(v2, j) * c(w2, k);
                    if coeff == 0.0 {
                        continue;
                    }
                    for m in 0..2 {
                        total += g.get(m, l) * c(w1, m) * r[l][i][j][k] * coeff;
                    }
                }
            }
        }
    }
    total
}

/// The curvature operator as a bilinear form on bivectors,
/// `𝓡(v1 ∧ v2, w1 ∧ w2) = g(Riem(v1, v2) w2, w1)`.
pub fn riemann_form<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    v1: Vec2,
    v2: Vec2,
    w1: Vec2,
    w2: Vec2,
    h: f64,
) -> Result<f64> {
    let r = riemann(field, p, h)?;
    Ok(contract(&field.metric(p)?, &r, v1, v2, w1, w2))
}

/// Sectional curvature of the plane spanned by `v` and `w`, by finite
/// differences. In two dimensions every independent pair spans the same plane.
pub fn plane_sectional<M: MetricField + ?Sized>(field: &M, p: Point2, v: Vec2, w: Vec2, h: f64) -> Result<f64> {
    let g = field.metric(p)?;
    let area = wedge_norm(&g, v, w);
    if area == 0.0 {
        return Err(Error::InvalidArgument("sectional curvature needs independent vectors"));
    }
    let r = riemann(field, p, h)?;
    Ok(contract(&g, &r, v, w, v, w) / area)
}

/// Gauss curvature at a point, with its Christoffel symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub point: Point2,
    pub sectional: f64,
    pub christoffel: Christoffel,
    pub method: Method,
}

/// Gauss curvature `g(Riem(e₁,e₂)e₂,e₁) / |e₁ ∧ e₂|²`.
///
/// `Method::Analytic` returns the field's closed form when it has one and
/// falls back to finite differences otherwise.
pub fn sectional<M: MetricField + ?Sized>(field: &M, p: Point2, h: f64, method: Method) -> Result<f64> {
    Ok(curvature_sample(field, p, h, method)?.sectional)
}

pub fn curvature_sample<M: MetricField + ?Sized>(
    field: &M,
    p: Point2,
    h: f64,
    method: Method,
) -> Result<CurvatureSample> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("finite-difference step must be positive"));
    }
    let christoffel = christoffel(field, p, h)?;
    if method == Method::Analytic {
        if let Some(s) = field.analytic_sectional(p) {
            return Ok(CurvatureSample { point: p, sectional: s, christoffel, method });
        }
    }
    let e1 = Vec2::new(1.0, 0.0);
    let e2 = Vec2::new(0.0, 1.0);
    let sectional = plane_sectional(field, p, e1, e2, h)?;
    Ok(CurvatureSample { point: p, sectional, christoffel, method: Method::FiniteDifference })
}

/// Finite-difference Gauss curvature at every node of `grid` whose stencil
/// fits in the field's domain.
pub fn curvature_field<M: MetricField + ?Sized>(field: &M, grid: &Grid, h: f64) -> Result<Vec<(Point2, f64)>> {
    let mut out = Vec::with_capacity(grid.len());
    for p in grid.nodes() {
        match sectional(field, p, h, Method::FiniteDifference) {
            Ok(s) => out.push((p, s)),
            Err(Error::BoundaryProximity(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Which side of `k` the bound scan tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundDirection {
    /// `sec ≥ k`.
    Lower,
    /// `sec ≤ k`.
    Upper,
}

/// Qualitative behavior of the violation `δ(ε)` along the schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlackBehavior {
    /// `δ(ε) → 0`: the bound survives smoothing up to a vanishing error.
    Vanishing,
    /// `δ(ε)` stays of the same size.
    Bounded,
    /// `δ(ε)` grows as `ε → 0`.
    Diverging,
}

/// Curvature statistics of one smoothed metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanEntry {
    pub epsilon: f64,
    /// Grid spacing, also the finite-difference step.
    pub spacing: f64,
    pub min: f64,
    pub max: f64,
    pub argmin: Point2,
    pub argmax: Point2,
    /// `min - k` (lower) or `k - max` (upper); negative when violated.
    pub slack: f64,
    /// `δ(ε) = max(0, -slack)`.
    pub violation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundScanReport {
    pub region: Rect,
    pub k: f64,
    pub direction: BoundDirection,
    pub tolerance: f64,
    pub entries: Vec<ScanEntry>,
    pub behavior: SlackBehavior,
}

impl BoundScanReport {
    pub fn epsilons(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.epsilon).collect()
    }

    pub fn violations(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.violation).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// Default tolerance on the bound slack.
pub const SCAN_TOLERANCE: f64 = 1e-3;

/// Square grid of spacing at most `h` covering `region` grown by `margin_cells` cells.
fn scan_grid(region: &Rect, h: f64, margin_cells: usize) -> (Grid, usize) {
    let span_x = region.width() + 2.0 * margin_cells as f64 * h;
    let span_y = region.height() + 2.0 * margin_cells as f64 * h;
    let nx = (span_x / h).ceil() as usize + 1;
    let ny = (span_y / h).ceil() as usize + 1;
    let c = region.center();
    let hw = 0.5 * (nx - 1) as f64 * h;
    let hh = 0.5 * (ny - 1) as f64 * h;
    (Grid::new(Rect::new(c.x - hw, c.x + hw, c.y - hh, c.y + hh), nx, ny), margin_cells)
}

fn classify(violations: &[f64], tolerance: f64) -> SlackBehavior {
    let first = violations[0];
    let last = *violations.last().unwrap();
    if last <= tolerance || (non_increasing_within(violations, TREND_NOISE, tolerance) && last < 0.5 * first) {
        SlackBehavior::Vanishing
    } else if last > (1.0 + TREND_NOISE) * first {
        SlackBehavior::Diverging
    } else {
        SlackBehavior::Bounded
    }
}

/// Smooth `field` at every scale of `eps_schedule`, evaluate the Gauss curvature
/// of each smoothed metric on a grid over `region`, and measure how far it
/// falls short of the bound `sec ≥ k` (lower) or `sec ≤ k` (upper).
///
/// The grid spacing is `min(span/(resolution-1), ε/8)` where `span` is the
/// longer side of the region; curvature uses that spacing as its
/// finite-difference step so every stencil lands on grid nodes.
pub fn curvature_bound_scan<M: MetricField + ?Sized>(
    field: &M,
    mollifier: &Mollifier,
    region: Rect,
    eps_schedule: &[f64],
    k: f64,
    direction: BoundDirection,
    resolution: usize,
    tolerance: f64,
) -> Result<BoundScanReport> {
    if eps_schedule.is_empty() {
        return Err(Error::InvalidArgument("empty epsilon schedule"));
    }
    if !region.is_valid() {
        return Err(Error::InvalidArgument("empty scan region"));
    }
    if resolution < 3 {
        return Err(Error::InvalidArgument("scan resolution must be at least 3"));
    }
    let base = region.width().max(region.height()) / (resolution - 1) as f64;
    let mut entries = Vec::with_capacity(eps_schedule.len());
    for &eps in eps_schedule {
        let h = base.min(eps / KERNEL_HALF_NODES as f64);
        let (grid, margin) = scan_grid(&region, h, 3);
        let usable = field.domain().shrink(eps);
        if !usable.contains_rect(&grid.rect) {
            return Err(Error::InvalidArgument(
                "scan region plus stencil margin must lie inside the domain shrunk by the largest epsilon",
            ));
        }
        let smoothed = mollify::smooth_metric_on(field, mollifier, eps, grid)?;
        let step = grid.dx();
        let mut entry = ScanEntry {
            epsilon: eps,
            spacing: step,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            argmin: region.center(),
            argmax: region.center(),
            slack: 0.0,
            violation: 0.0,
            pass: true,
        };
        for j in margin..grid.ny - margin {
            for i in margin..grid.nx - margin {
                let p = grid.node(i, j);
                if !region.contains_with(p, 1e-12) {
                    continue;
                }
                let s = sectional(&smoothed, p, step, Method::FiniteDifference)?;
                if s < entry.min {
                    entry.min = s;
                    entry.argmin = p;
                }
                if s > entry.max {
                    entry.max = s;
                    entry.argmax = p;
                }
            }
        }
        entry.slack = match direction {
            BoundDirection::Lower => entry.min - k,
            BoundDirection::Upper => k - entry.max,
        };
        entry.violation = (-entry.slack).max(0.0);
        entry.pass = entry.slack >= -tolerance;
        entries.push(entry);
    }
    let violations: Vec<f64> = entries.iter().map(|e| e.violation).collect();
    Ok(BoundScanReport { region, k, direction, tolerance, behavior: classify(&violations, tolerance), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::CatalogMetric;

    #[test]
    fn flat_christoffels_vanish() {
        let g = christoffel(&CatalogMetric::flat(), Point2::new(0.3, 0.1), 1e-3).unwrap();
        assert_eq!(g, [[[0.0; 2]; 2]; 2]);
    }

    #[test]
    fn sphere_christoffels_vanish_at_origin() {
        let m = CatalogMetric::constant_curvature(1.0).unwrap();
        let g = christoffel(&m, Point2::new(0.0, 0.0), 1e-3).unwrap();
        assert_eq!(g, [[[0.0; 2]; 2]; 2]);
    }

    #[test]
    fn boundary_proximity() {
        struct Fd(CatalogMetric);
        impl MetricField for Fd {
            fn domain(&self) -> Rect {
                self.0.domain()
            }
            fn regularity(&self) -> crate::metric::Regularity {
                self.0.regularity()
            }
            fn metric(&self, p: Point2) -> Result<Sym2> {
                self.0.metric(p)
            }
        }
        let m = Fd(CatalogMetric::hw1(1.5).unwrap());
        assert!(matches!(christoffel(&m, Point2::new(0.999, 0.0), 1e-3), Err(Error::BoundaryProximity(_))));
        assert!(matches!(
            sectional(&m, Point2::new(0.9975, 0.0), 1e-3, Method::FiniteDifference),
            Err(Error::BoundaryProximity(_))
        ));
        assert!(christoffel(&m, Point2::new(0.99, 0.0), 1e-3).is_ok());
        assert!(matches!(christoffel(&m, Point2::new(1.5, 0.0), 1e-3), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn flat_sectional_is_zero() {
        let s = sectional(&CatalogMetric::flat(), Point2::new(1.0, -2.0), 1e-3, Method::FiniteDifference).unwrap();
        assert!(s.abs() < 1e-10);
    }

    #[test]
    fn analytic_method_uses_closed_form() {
        let m = CatalogMetric::hw1(1.5).unwrap();
        let s = curvature_sample(&m, Point2::new(0.5, 0.0), 1e-3, Method::Analytic).unwrap();
        assert_eq!(s.method, Method::Analytic);
        assert_eq!(s.sectional, crate::metric::hw1_sectional(1.5, 0.5));
    }

    #[test]
    fn dependent_plane_rejected() {
        let m = CatalogMetric::flat();
        let v = Vec2::new(1.0, 1.0);
        assert!(plane_sectional(&m, Point2::new(0.0, 0.0), v, v * 3.0, 1e-3).is_err());
    }

    #[test]
    fn classify_behaviors() {
        assert_eq!(classify(&[0.4, 0.2, 0.1, 0.05], 1e-3), SlackBehavior::Vanishing);
        assert_eq!(classify(&[0.0, 0.0], 1e-3), SlackBehavior::Vanishing);
        assert_eq!(classify(&[1.0, 2.0, 4.0], 1e-3), SlackBehavior::Diverging);
        assert_eq!(classify(&[1.0, 1.02, 0.98], 1e-3), SlackBehavior::Bounded);
    }
}
