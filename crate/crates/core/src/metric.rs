//! Riemannian metrics on rectangular 2-D charts.
//!
//! A [`MetricField`] evaluates the symmetric positive-definite component
//! matrix `g_ij` at chart points. Built-in examples live in
//! [`CatalogMetric`]: the flat plane, conformal charts of constant
//! curvature, and the two Hartman–Wintner metrics whose Gauss curvature blows
//! up along the line `x = 0`.

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geom::{Grid, Point2, Rect, Sym2, Vec2};

/// Regularity class of a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regularity {
    C0,
    Lipschitz,
    C1,
    C2,
    Smooth,
}

/// A metric on a rectangular chart.
pub trait MetricField {
    /// Chart rectangle on which the metric is declared.
    fn domain(&self) -> Rect;

    fn regularity(&self) -> Regularity;

    /// Components `g_ij(p)`.
    fn metric(&self, p: Point2) -> Result<Sym2>;

    /// Analytic first derivatives `[∂_x g, ∂_y g]`, when known in closed form.
    fn derivatives(&self, _p: Point2) -> Option<Result<[Sym2; 2]>> {
        None
    }

    /// Closed-form Gauss curvature, when known.
    fn analytic_sectional(&self, _p: Point2) -> Option<f64> {
        None
    }
}

impl<T: MetricField + ?Sized> MetricField for &T {
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn regularity(&self) -> Regularity {
        (**self).regularity()
    }
    fn metric(&self, p: Point2) -> Result<Sym2> {
        (**self).metric(p)
    }
    fn derivatives(&self, p: Point2) -> Option<Result<[Sym2; 2]>> {
        (**self).derivatives(p)
    }
    fn analytic_sectional(&self, p: Point2) -> Option<f64> {
        (**self).analytic_sectional(p)
    }
}

impl<T: MetricField + ?Sized> MetricField for alloc::boxed::Box<T> {
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn regularity(&self) -> Regularity {
        (**self).regularity()
    }
    fn metric(&self, p: Point2) -> Result<Sym2> {
        (**self).metric(p)
    }
    fn derivatives(&self, p: Point2) -> Option<Result<[Sym2; 2]>> {
        (**self).derivatives(p)
    }
    fn analytic_sectional(&self, p: Point2) -> Option<f64> {
        (**self).analytic_sectional(p)
    }
}

/// The analytic families of the catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogKind {
    Flat,
    /// `(1 + |x|^λ) · Id`.
    Hw1 {
        lambda: f64,
    },
    /// `diag(1, 1 - |x|^λ)`.
    Hw2 {
        lambda: f64,
    },
    /// `4 / (1 + k(x² + y²))² · Id`, of constant curvature `k`; the identity
    /// when `k = 0`.
    ConstantCurvature {
        k: f64,
    },
}

/// A built-in analytic metric restricted to a chart rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogMetric {
    kind: CatalogKind,
    domain: Rect,
}

fn check_hw_lambda(lambda: f64) -> Result<()> {
    if lambda > 1.0 && lambda < 2.0 {
        Ok(())
    } else {
        Err(Error::Domain("lambda must lie in the open interval (1, 2)"))
    }
}

/// Half-width of the default square chart for `constk(k)`.
///
/// For `k < 0` the square is inscribed in the disk of radius `0.9/√-k`,
/// keeping clear of the boundary circle where the conformal factor blows up.
pub fn constant_curvature_half_width(k: f64) -> f64 {
    if k > 0.0 {
        1.0 / k.sqrt()
    } else if k < 0.0 {
        0.9 / (2.0 * -k).sqrt()
    } else {
        1.0
    }
}

impl CatalogMetric {
    /// Euclidean metric on `[-5, 5]²`.
    pub fn flat() -> Self {
        Self { kind: CatalogKind::Flat, domain: Rect::centered(5.0) }
    }

    /// First Hartman–Wintner metric on `[-1, 1]²`.
    pub fn hw1(lambda: f64) -> Result<Self> {
        check_hw_lambda(lambda)?;
        Ok(Self { kind: CatalogKind::Hw1 { lambda }, domain: Rect::centered(1.0) })
    }

    /// Second Hartman–Wintner metric on `[-0.9, 0.9] × [-1, 1]`.
    pub fn hw2(lambda: f64) -> Result<Self> {
        check_hw_lambda(lambda)?;
        Ok(Self { kind: CatalogKind::Hw2 { lambda }, domain: Rect::new(-0.9, 0.9, -1.0, 1.0) })
    }

    /// Stereographic conformal chart of the model plane of curvature `k`.
    pub fn constant_curvature(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Domain("curvature must be finite"));
        }
        Ok(Self {
            kind: CatalogKind::ConstantCurvature { k },
            domain: Rect::centered(constant_curvature_half_width(k)),
        })
    }

    /// Same metric on a different chart rectangle.
    pub fn with_domain(self, domain: Rect) -> Result<Self> {
        if !domain.is_valid() {
            return Err(Error::InvalidArgument("empty or non-finite domain"));
        }
        match self.kind {
            CatalogKind::Hw2 { .. } if domain.x0 <= -1.0 || domain.x1 >= 1.0 => {
                Err(Error::Domain("hw2 is only defined for |x| < 1"))
            }
            CatalogKind::ConstantCurvature { k } if k < 0.0 => {
                let r = 1.0 / (-k).sqrt();
                let corner = domain.x0.abs().max(domain.x1.abs()).hypot(domain.y0.abs().max(domain.y1.abs()));
                if corner >= r {
                    Err(Error::Domain("constant negative curvature chart must stay inside the disk of radius 1/√-k"))
                } else {
                    Ok(Self { domain, ..self })
                }
            }
            _ => Ok(Self { domain, ..self }),
        }
    }

    pub fn kind(&self) -> CatalogKind {
        self.kind
    }

    /// Closed-form Riemannian distance, available for the flat and
    /// constant-curvature charts.
    pub fn exact_distance(&self, p: Point2, q: Point2) -> Option<f64> {
        match self.kind {
            CatalogKind::Flat => Some(p.dist(q)),
            CatalogKind::ConstantCurvature { k } => Some(conformal_model_distance(k, p, q)),
            _ => None,
        }
    }
}

/// Distance between two points of the conformal chart `4|dz|²/(1 + k|z|²)²`
/// (the identity chart when `k = 0`).
///
/// With `z, w` complex, `d = (2/√k) atan(√k |z - w| / |1 + k z w̄|)` for
/// `k > 0` and the corresponding `artanh` for `k < 0`.
pub fn conformal_model_distance(k: f64, p: Point2, q: Point2) -> f64 {
    let chord = p.dist(q);
    // 1 + k z w̄ with z = p, w̄ = conj(q)
    let re = 1.0 + k * (p.x * q.x + p.y * q.y);
    let im = k * (p.y * q.x - p.x * q.y);
    let den = re.hypot(im);
    if k > 0.0 {
        let s = k.sqrt();
        2.0 / s * (s * chord).atan2(den)
    } else if k < 0.0 {
        let s = (-k).sqrt();
        2.0 / s * (s * chord / den).atanh()
    } else {
        chord
    }
}

impl MetricField for CatalogMetric {
    fn domain(&self) -> Rect {
        self.domain
    }

    fn regularity(&self) -> Regularity {
        match self.kind {
            CatalogKind::Hw1 { .. } | CatalogKind::Hw2 { .. } => Regularity::C1,
            _ => Regularity::Smooth,
        }
    }

    fn metric(&self, p: Point2) -> Result<Sym2> {
        if !p.is_finite() {
            return Err(Error::OutOfDomain(p));
        }
        match self.kind {
            CatalogKind::Flat => Ok(Sym2::IDENTITY),
            CatalogKind::Hw1 { lambda } => Ok(Sym2::scaled(1.0 + p.x.abs().powf(lambda))),
            CatalogKind::Hw2 { lambda } => {
                if p.x.abs() >= 1.0 {
                    return Err(Error::OutOfDomain(p));
                }
                Ok(Sym2::diag(1.0, 1.0 - p.x.abs().powf(lambda)))
            }
            CatalogKind::ConstantCurvature { k: 0.0 } => Ok(Sym2::IDENTITY),
            CatalogKind::ConstantCurvature { k } => {
                let q = 1.0 + k * (p.x * p.x + p.y * p.y);
                if q <= 0.0 {
                    return Err(Error::OutOfDomain(p));
                }
                Ok(Sym2::scaled(4.0 / (q * q)))
            }
        }
    }

    fn derivatives(&self, p: Point2) -> Option<Result<[Sym2; 2]>> {
        let d = match self.kind {
            CatalogKind::Flat => Ok([Sym2::ZERO; 2]),
            // d/dx |x|^λ = λ sign(x) |x|^(λ-1), which vanishes on the axis since λ > 1
            CatalogKind::Hw1 { lambda } => {
                let dx = lambda * p.x.signum() * p.x.abs().powf(lambda - 1.0);
                let dx = if p.x == 0.0 { 0.0 } else { dx };
                Ok([Sym2::scaled(dx), Sym2::ZERO])
            }
            CatalogKind::Hw2 { lambda } => {
                if p.x.abs() >= 1.0 {
                    Err(Error::OutOfDomain(p))
                } else {
                    let dx = lambda * p.x.signum() * p.x.abs().powf(lambda - 1.0);
                    let dx = if p.x == 0.0 { 0.0 } else { dx };
                    Ok([Sym2::diag(0.0, -dx), Sym2::ZERO])
                }
            }
            CatalogKind::ConstantCurvature { k } => {
                let q = 1.0 + k * (p.x * p.x + p.y * p.y);
                if q <= 0.0 {
                    Err(Error::OutOfDomain(p))
                } else {
                    let c = -16.0 * k / (q * q * q);
                    Ok([Sym2::scaled(c * p.x), Sym2::scaled(c * p.y)])
                }
            }
        };
        Some(d)
    }

    fn analytic_sectional(&self, p: Point2) -> Option<f64> {
        Some(match self.kind {
            CatalogKind::Flat => 0.0,
            CatalogKind::ConstantCurvature { k } => k,
            CatalogKind::Hw1 { lambda } => hw1_sectional(lambda, p.x),
            CatalogKind::Hw2 { lambda } => hw2_sectional(lambda, p.x),
        })
    }
}

/// Gauss curvature of `(1 + |x|^λ) Id`: `λ|x|^(λ-2) (1 + |x|^λ - λ) / (2 (1 + |x|^λ)³)`.
///
/// Tends to `-∞` on the axis.
pub fn hw1_sectional(lambda: f64, x: f64) -> f64 {
    let ax = x.abs();
    let u = ax.powf(lambda);
    let f = 1.0 + u;
    lambda * ax.powf(lambda - 2.0) * (f - lambda) / (2.0 * f * f * f)
}

/// Gauss curvature of `diag(1, 1 - |x|^λ)`:
/// `λ|x|^(λ-2) (2λ + |x|^λ (2 - λ) - 2) / (4 (|x|^λ - 1)²)`.
///
/// Tends to `+∞` on the axis.
pub fn hw2_sectional(lambda: f64, x: f64) -> f64 {
    let ax = x.abs();
    let u = ax.powf(lambda);
    lambda * ax.powf(lambda - 2.0) * (2.0 * lambda + u * (2.0 - lambda) - 2.0) / (4.0 * (u - 1.0) * (u - 1.0))
}

/// Squared `g`-area of the parallelogram spanned by `v` and `w`:
/// `g(v,v) g(w,w) - g(v,w)²`.
///
/// Evaluated as `det(g) (v × w)²`, which equals the defining expression and
/// is exactly zero for dependent vectors.
pub fn wedge_norm(g: &Sym2, v: Vec2, w: Vec2) -> f64 {
    let cross = v.x * w.y - v.y * w.x;
    (g.det() * cross * cross).max(0.0)
}

/// Extreme eigenvalues found by [`nondegeneracy_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRange {
    pub min: f64,
    pub max: f64,
    pub argmin: Point2,
}

/// Smallest and largest eigenvalue of `g` over a uniform `resolution²` grid
/// of the field's domain.
pub fn nondegeneracy_scan<M: MetricField + ?Sized>(field: &M, resolution: usize) -> Result<EigenRange> {
    nondegeneracy_scan_on(field, field.domain(), resolution)
}

/// As [`nondegeneracy_scan`] on a sub-rectangle.
pub fn nondegeneracy_scan_on<M: MetricField + ?Sized>(field: &M, rect: Rect, resolution: usize) -> Result<EigenRange> {
    if resolution < 2 {
        return Err(Error::InvalidArgument("resolution must be at least 2"));
    }
    let grid = Grid::square(rect, resolution);
    let mut range = EigenRange { min: f64::INFINITY, max: f64::NEG_INFINITY, argmin: rect.center() };
    for p in grid.nodes() {
        let g = field.metric(p)?;
        let (lo, hi) = g.eigenvalues();
        if !(lo > 0.0) || !g.xy.is_finite() {
            return Err(Error::Degenerate { point: p, lambda_min: lo });
        }
        if lo < range.min {
            range.min = lo;
            range.argmin = p;
        }
        range.max = range.max.max(hi);
    }
    Ok(range)
}
