//! Small fixed-size linear algebra for 2-D charts.

use core::ops::{Add, Mul, Neg, Sub};

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

/// A point in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

/// A tangent vector in chart coordinates.
pub type Vec2 = Point2;

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Mirror image under `x ↦ -x`.
    pub fn mirror_x(self) -> Self {
        Self::new(-self.x, self.y)
    }

    pub fn lerp(self, other: Self, t: f64) -> Self {
        Self::new(self.x + t * (other.x - self.x), self.y + t * (other.y - self.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

/// A symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub const IDENTITY: Sym2 = Sym2::new(1.0, 0.0, 1.0);
    pub const ZERO: Sym2 = Sym2::new(0.0, 0.0, 0.0);

    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Self { xx, xy, yy }
    }

    pub const fn diag(xx: f64, yy: f64) -> Self {
        Self::new(xx, 0.0, yy)
    }

    pub fn scaled(s: f64) -> Self {
        Self::diag(s, s)
    }

    /// Component `(i, j)` with indices in `{0, 1}`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.xx,
            (1, 1) => self.yy,
            _ => self.xy,
        }
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    /// Inverse, or `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Sym2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Sym2::new(self.yy / det, -self.xy / det, self.xx / det))
    }

    /// Bilinear form `vᵀ G w`.
    pub fn inner(&self, v: Vec2, w: Vec2) -> f64 {
        v.x * (self.xx * w.x + self.xy * w.y) + v.y * (self.xy * w.x + self.yy * w.y)
    }

    /// Quadratic form `vᵀ G v`.
    pub fn quad(&self, v: Vec2) -> f64 {
        self.inner(v, v)
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.xx * v.x + self.xy * v.y, self.xy * v.x + self.yy * v.y)
    }

    /// Eigenvalues `(min, max)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let half_diff = 0.5 * (self.xx - self.yy);
        let r = half_diff.hypot(self.xy);
        (mean - r, mean + r)
    }

    /// Sylvester's criterion.
    pub fn is_positive_definite(&self) -> bool {
        self.xx > 0.0 && self.det() > 0.0
    }

    pub fn max_abs_diff(&self, other: &Sym2) -> f64 {
        (self.xx - other.xx).abs().max((self.xy - other.xy).abs()).max((self.yy - other.yy).abs())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.xx, self.xy, self.yy]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Add for Sym2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Sym2::new(self.xx + rhs.xx, self.xy + rhs.xy, self.yy + rhs.yy)
    }
}

impl Sub for Sym2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Sym2::new(self.xx - rhs.xx, self.xy - rhs.xy, self.yy - rhs.yy)
    }
}

impl Mul<f64> for Sym2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Sym2::new(self.xx * s, self.xy * s, self.yy * s)
    }
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    /// The square `[-half, half]²`.
    pub const fn centered(half: f64) -> Self {
        Self::new(-half, half, -half, half)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    pub fn is_valid(&self) -> bool {
        self.x0.is_finite()
            && self.x1.is_finite()
            && self.y0.is_finite()
            && self.y1.is_finite()
            && self.x1 > self.x0
            && self.y1 > self.y0
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.contains_with(p, 0.0)
    }

    /// Containment with an absolute slack on every side.
    pub fn contains_with(&self, p: Point2, slack: f64) -> bool {
        p.x >= self.x0 - slack && p.x <= self.x1 + slack && p.y >= self.y0 - slack && p.y <= self.y1 + slack
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.x0 >= self.x0 && other.x1 <= self.x1 && other.y0 >= self.y0 && other.y1 <= self.y1
    }

    /// Shrink (positive `by`) or grow (negative `by`) on all sides.
    pub fn shrink(&self, by: f64) -> Rect {
        Rect::new(self.x0 + by, self.x1 - by, self.y0 + by, self.y1 - by)
    }

    pub fn intersect(&self, other: &Rect) -> Rect {
        Rect::new(self.x0.max(other.x0), self.x1.min(other.x1), self.y0.max(other.y0), self.y1.min(other.y1))
    }

    /// Chart distance from an interior point to the boundary.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        (p.x - self.x0).min(self.x1 - p.x).min(p.y - self.y0).min(self.y1 - p.y)
    }

    pub fn clamp(&self, p: Point2) -> Point2 {
        Point2::new(p.x.clamp(self.x0, self.x1), p.y.clamp(self.y0, self.y1))
    }

    /// Smallest rectangle holding both points, grown by `pad`.
    pub fn bounding(a: Point2, b: Point2, pad: f64) -> Rect {
        Rect::new(a.x.min(b.x) - pad, a.x.max(b.x) + pad, a.y.min(b.y) - pad, a.y.max(b.y) + pad)
    }
}

/// Uniform tensor-product grid of `nx × ny` nodes covering a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(rect: Rect, nx: usize, ny: usize) -> Self {
        Self { rect, nx, ny }
    }

    pub fn square(rect: Rect, n: usize) -> Self {
        Self::new(rect, n, n)
    }

    pub fn dx(&self) -> f64 {
        self.rect.width() / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        self.rect.height() / (self.ny - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.rect.x0 + i as f64 * self.dx(), self.rect.y0 + j as f64 * self.dy())
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Point2> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| self.node(i, j)))
    }
}

/// Evenly spaced values `a, …, b` (`n ≥ 2`).
pub fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n { b } else { a + i as f64 * step })
}
