//! Geometry of the two-dimensional model planes of constant curvature `k`:
//! the sphere of radius `1/√k` (k > 0), the Euclidean plane (k = 0) and the
//! hyperbolic plane of curvature `k` (k < 0).
//!
//! All three laws of cosines are evaluated through the generalized sine
//! `S_k(x) = sin(√k x)/√k` (resp. `x`, `sinh(√-k x)/√-k`) in half-angle
//! product form:
//!
//! ```text
//! tan²(α/2) = S_k((a-b+c)/2) S_k((a+b-c)/2) / (S_k((a+b+c)/2) S_k((b+c-a)/2))
//! S_k(a/2)² = S_k((b-c)/2)² + S_k(b) S_k(c) sin²(α/2)
//! ```
//!
//! Neither form subtracts nearly equal cosines, so short sides and small `|k|`
//! keep full relative precision.

use core::f64::consts::PI;

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Below this `|k|` the generalized trigonometric functions switch to their
/// Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-8;

/// Relative admissibility margin: perimeters must stay below `2ϖ(1 - τ)`.
pub const PERIMETER_MARGIN: f64 = 1e-9;

/// Default relative slack on the triangle inequality.
pub const TRIANGLE_SLACK: f64 = 1e-10;

/// Diameter `ϖ^k` of the model plane: `π/√k` for `k > 0`, `+∞` otherwise.
pub fn diameter(k: f64) -> f64 {
    if k > 0.0 {
        PI / k.sqrt()
    } else {
        f64::INFINITY
    }
}

/// The model plane `𝕄²(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPlane {
    k: f64,
}

impl ModelPlane {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Domain("curvature must be finite"));
        }
        Ok(Self { k })
    }

    pub fn curvature(&self) -> f64 {
        self.k
    }

    pub fn diameter(&self) -> f64 {
        diameter(self.k)
    }

    /// Largest admissible perimeter, `2ϖ^k` less the relative margin.
    pub fn perimeter_limit(&self) -> f64 {
        perimeter_limit(self.k)
    }

    pub fn side(&self, b: f64, c: f64, alpha: f64) -> Result<f64> {
        model_side(self.k, b, c, alpha)
    }

    pub fn angle(&self, a: f64, b: f64, c: f64) -> Result<f64> {
        model_angle(self.k, a, b, c)
    }

    pub fn triangle(&self, d_xy: f64, d_yz: f64, d_zx: f64) -> Result<ModelTriangle> {
        model_triangle(self.k, d_xy, d_yz, d_zx)
    }
}

pub fn perimeter_limit(k: f64) -> f64 {
    let w = diameter(k);
    2.0 * w - PERIMETER_MARGIN * w
}

/// Generalized sine `S_k(x)`.
pub fn gen_sin(k: f64, x: f64) -> f64 {
    if k == 0.0 {
        x
    } else if k.abs() < SERIES_THRESHOLD && (k * x * x).abs() < 1e-3 {
        let kx2 = k * x * x;
        x * (1.0 - kx2 / 6.0 + kx2 * kx2 / 120.0)
    } else if k > 0.0 {
        let s = k.sqrt();
        (s * x).sin() / s
    } else {
        let s = (-k).sqrt();
        (s * x).sinh() / s
    }
}

/// Inverse of [`gen_sin`] on `[0, ϖ/2]`.
fn gen_asin(k: f64, y: f64) -> f64 {
    if k == 0.0 {
        y
    } else if k.abs() < SERIES_THRESHOLD && (k * y * y).abs() < 1e-3 {
        let ky2 = k * y * y;
        y * (1.0 + ky2 / 6.0 + 3.0 * ky2 * ky2 / 40.0)
    } else if k > 0.0 {
        let s = k.sqrt();
        (s * y).min(1.0).asin() / s
    } else {
        let s = (-k).sqrt();
        (s * y).asinh() / s
    }
}

/// Side `a` opposite the angle `alpha` enclosed by sides `b` and `c`.
///
/// The result is clamped to `[|b - c|, min(b + c, ϖ^k)]`.
pub fn model_side(k: f64, b: f64, c: f64, alpha: f64) -> Result<f64> {
    if !(b >= 0.0 && c >= 0.0) || !b.is_finite() || !c.is_finite() {
        return Err(Error::Domain("side lengths must be finite and non-negative"));
    }
    if !(-1e-12..=PI + 1e-12).contains(&alpha) {
        return Err(Error::Domain("angle must lie in [0, π]"));
    }
    let w = diameter(k);
    if b >= w || c >= w {
        return Err(Error::Domain("side lengths must be below the model diameter"));
    }
    let alpha = alpha.clamp(0.0, PI);
    let half = (0.5 * alpha).sin();
    let diff = gen_sin(k, 0.5 * (b - c));
    let h = diff * diff + gen_sin(k, b) * gen_sin(k, c) * half * half;
    let a = 2.0 * gen_asin(k, h.max(0.0).sqrt());
    Ok(a.clamp((b - c).abs(), (b + c).min(w)))
}

/// Model angle at the vertex opposite side `a`, between sides `b` and `c`.
///
/// Errors when the triangle does not exist in `𝕄²(k)`: a vanishing adjacent
/// side, a perimeter at or above `2ϖ^k`, or a triangle inequality failing by
/// more than [`TRIANGLE_SLACK`] relative. A collinear configuration with
/// `a = b + c` yields `π`.
pub fn model_angle(k: f64, a: f64, b: f64, c: f64) -> Result<f64> {
    model_angle_with_slack(k, a, b, c, TRIANGLE_SLACK * (a + b + c))
}

/// As [`model_angle`] with an explicit absolute slack on the triangle
/// inequality, for distances carrying a known error.
pub fn model_angle_with_slack(k: f64, a: f64, b: f64, c: f64, slack: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0 && c >= 0.0) || !(a + b + c).is_finite() {
        return Err(Error::Domain("side lengths must be finite and non-negative"));
    }
    if b == 0.0 || c == 0.0 {
        return Err(Error::Inadmissible("angle undefined at coincident points"));
    }
    if a + b + c >= perimeter_limit(k) {
        return Err(Error::Inadmissible("perimeter exceeds twice the model diameter"));
    }
    let t1 = a - b + c;
    let t2 = a + b - c;
    let t3 = b + c - a;
    if t1.min(t2).min(t3) < -slack {
        return Err(Error::Inadmissible("triangle inequality fails"));
    }
    let (t1, t2, t3) = (t1.max(0.0), t2.max(0.0), t3.max(0.0));
    let num = gen_sin(k, 0.5 * t1) * gen_sin(k, 0.5 * t2);
    let den = gen_sin(k, 0.5 * (a + b + c)) * gen_sin(k, 0.5 * t3);
    Ok(2.0 * num.max(0.0).sqrt().atan2(den.max(0.0).sqrt()))
}

/// A point of the model plane in geodesic polar coordinates about the first
/// vertex of a model triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    pub radius: f64,
    pub bearing: f64,
}

impl ModelPoint {
    pub const ORIGIN: ModelPoint = ModelPoint { radius: 0.0, bearing: 0.0 };

    /// Coordinates in the standard ambient model: the sphere of radius
    /// `1/√k` in ℝ³ (k > 0), the plane `z = 0` (k = 0), or the upper sheet of
    /// the hyperboloid `x² + y² - z² = 1/k` in Minkowski space (k < 0).
    pub fn to_ambient(&self, k: f64) -> [f64; 3] {
        let (sin_b, cos_b) = self.bearing.sin_cos();
        if k > 0.0 {
            let r = 1.0 / k.sqrt();
            let t = self.radius / r;
            [r * t.sin() * cos_b, r * t.sin() * sin_b, r * t.cos()]
        } else if k < 0.0 {
            let r = 1.0 / (-k).sqrt();
            let t = self.radius / r;
            [r * t.sinh() * cos_b, r * t.sinh() * sin_b, r * t.cosh()]
        } else {
            [self.radius * cos_b, self.radius * sin_b, 0.0]
        }
    }

    /// Model distance, computed from the polar coordinates by the law of
    /// cosines.
    pub fn distance(&self, other: &ModelPoint, k: f64) -> Result<f64> {
        let mut dphi = (self.bearing - other.bearing).abs() % (2.0 * PI);
        if dphi > PI {
            dphi = 2.0 * PI - dphi;
        }
        model_side(k, self.radius, other.radius, dphi)
    }
}

/// A realization of a model triangle: vertex `x` at the origin, `y` on the
/// zero bearing, `z` on the non-negative bearing side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelTriangle {
    pub k: f64,
    pub vertices: [ModelPoint; 3],
}

/// Realize the triangle with sides `|xy| = d_xy`, `|yz| = d_yz`, `|zx| = d_zx`.
pub fn model_triangle(k: f64, d_xy: f64, d_yz: f64, d_zx: f64) -> Result<ModelTriangle> {
    if !(d_xy >= 0.0 && d_yz >= 0.0 && d_zx >= 0.0) {
        return Err(Error::Domain("side lengths must be non-negative"));
    }
    let per = d_xy + d_yz + d_zx;
    if per >= perimeter_limit(k) {
        return Err(Error::Inadmissible("perimeter exceeds twice the model diameter"));
    }
    let slack = TRIANGLE_SLACK * per;
    if d_xy > d_yz + d_zx + slack || d_yz > d_xy + d_zx + slack || d_zx > d_xy + d_yz + slack {
        return Err(Error::Inadmissible("triangle inequality fails"));
    }
    let bearing = if d_xy == 0.0 || d_zx == 0.0 { 0.0 } else { model_angle(k, d_yz, d_xy, d_zx)? };
    Ok(ModelTriangle {
        k,
        vertices: [ModelPoint::ORIGIN, ModelPoint { radius: d_xy, bearing: 0.0 }, ModelPoint { radius: d_zx, bearing }],
    })
}
