use std::f64::consts::PI;

use curvlab_core::model::{self, model_angle, model_side, model_triangle, perimeter_limit};
use proptest::prelude::*;

/// Cosine-form laws of cosines, written out directly.
fn cosine_law_angle(k: f64, a: f64, b: f64, c: f64) -> f64 {
    let cos = if k > 0.0 {
        let s = k.sqrt();
        ((s * a).cos() - (s * b).cos() * (s * c).cos()) / ((s * b).sin() * (s * c).sin())
    } else if k < 0.0 {
        let s = (-k).sqrt();
        ((s * b).cosh() * (s * c).cosh() - (s * a).cosh()) / ((s * b).sinh() * (s * c).sinh())
    } else {
        (b * b + c * c - a * a) / (2.0 * b * c)
    };
    cos.clamp(-1.0, 1.0).acos()
}

fn cosine_law_side(k: f64, b: f64, c: f64, alpha: f64) -> f64 {
    if k > 0.0 {
        let s = k.sqrt();
        let cos = (s * b).cos() * (s * c).cos() + (s * b).sin() * (s * c).sin() * alpha.cos();
        cos.clamp(-1.0, 1.0).acos() / s
    } else if k < 0.0 {
        let s = (-k).sqrt();
        let cosh = (s * b).cosh() * (s * c).cosh() - (s * b).sinh() * (s * c).sinh() * alpha.cos();
        cosh.max(1.0).acosh() / s
    } else {
        (b * b + c * c - 2.0 * b * c * alpha.cos()).max(0.0).sqrt()
    }
}

/// Geodesic distance between ambient points of the sphere / hyperboloid / plane.
fn ambient_distance(k: f64, u: [f64; 3], v: [f64; 3]) -> f64 {
    if k > 0.0 {
        let r2 = 1.0 / k;
        let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        (dot / r2).clamp(-1.0, 1.0).acos() * r2.sqrt()
    } else if k < 0.0 {
        let r2 = -1.0 / k;
        let dot = u[2] * v[2] - u[0] * v[0] - u[1] * v[1];
        (dot / r2).max(1.0).acosh() * r2.sqrt()
    } else {
        ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)).sqrt()
    }
}

/// A well-shaped triangle: sides from angles and two adjacent sides.
fn triangle() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (-4.0..4.0f64, 0.05..1.0f64, 0.05..1.0f64, 0.2..(PI - 0.2))
}

#[test]
fn diameter_and_perimeter_limit() {
    assert!((model::diameter(4.0) - PI / 2.0).abs() < 1e-15);
    assert_eq!(model::diameter(0.0), f64::INFINITY);
    assert_eq!(model::diameter(-1.0), f64::INFINITY);
    assert!((perimeter_limit(1.0) - 2.0 * PI).abs() < 1e-6);
}

#[test]
fn equilateral_unit_sphere_triangle() {
    // octant triangle: three right angles
    let a = PI / 2.0;
    assert!((model_angle(1.0, a, a, a).unwrap() - PI / 2.0).abs() < 1e-12);
    assert!((model_angle(0.0, 1.0, 1.0, 1.0).unwrap() - PI / 3.0).abs() < 1e-12);
}

#[test]
fn degenerate_triangles() {
    assert!((model_angle(0.0, 2.0, 1.0, 1.0).unwrap() - PI).abs() < 1e-7);
    assert!(model_angle(0.0, 2.0, 1.0, 0.5).is_err());
    assert!(model_angle(0.0, 1.0, 0.0, 1.0).is_err());
    assert!(model_angle(1.0, 3.0, 2.0, 2.0).is_err());
}

#[test]
fn euclidean_limit_both_sides() {
    let (a, b, c) = (0.7, 0.5, 0.4);
    let flat = model_angle(0.0, a, b, c).unwrap();
    for k in [1e-6, -1e-6, 1e-9, -1e-9] {
        assert!((model_angle(k, a, b, c).unwrap() - flat).abs() < 1e-6);
    }
}

#[test]
fn short_sides_keep_precision() {
    // tiny equilateral triangles are Euclidean to first order
    for k in [-4.0, 1.0, 4.0] {
        let t = 1e-7;
        assert!((model_angle(k, t, t, t).unwrap() - PI / 3.0).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn angle_matches_cosine_law((k, b, c, alpha) in triangle()) {
        let a = cosine_law_side(k, b, c, alpha);
        prop_assume!(a + b + c < 0.95 * perimeter_limit(k));
        let got = model_angle(k, a, b, c).unwrap();
        prop_assert!((got - alpha).abs() < 1e-7, "k={k} got {got} want {alpha}");
        prop_assert!((got - cosine_law_angle(k, a, b, c)).abs() < 1e-7);
    }

    #[test]
    fn side_matches_cosine_law((k, b, c, alpha) in triangle()) {
        prop_assume!(b + c < 0.9 * model::diameter(k));
        let want = cosine_law_side(k, b, c, alpha);
        let got = model_side(k, b, c, alpha).unwrap();
        prop_assert!((got - want).abs() < 1e-9 * (1.0 + want));
    }

    #[test]
    fn side_respects_triangle_inequality((k, b, c, alpha) in triangle()) {
        prop_assume!(b.max(c) < model::diameter(k));
        let a = model_side(k, b, c, alpha).unwrap();
        prop_assert!(a <= b + c + 1e-12 && b <= a + c + 1e-12 && c <= a + b + 1e-12);
    }

    #[test]
    fn round_trip((k, b, c, alpha) in triangle()) {
        prop_assume!(b + c < 0.9 * model::diameter(k));
        let a = model_side(k, b, c, alpha).unwrap();
        prop_assume!(a + b + c < 0.95 * perimeter_limit(k));
        let back = model_side(k, b, c, model_angle(k, a, b, c).unwrap()).unwrap();
        prop_assert!((back - a).abs() < 1e-9);
    }

    #[test]
    fn angle_non_decreasing_in_k((k1, b, c, alpha) in triangle(), dk in 0.0..3.0f64) {
        let a = cosine_law_side(0.0, b, c, alpha);
        let k2 = (k1 + dk).min(4.0);
        prop_assume!(a + b + c < 0.95 * perimeter_limit(k2));
        let lo = model_angle(k1, a, b, c).unwrap();
        let hi = model_angle(k2, a, b, c).unwrap();
        prop_assert!(hi >= lo - 1e-12, "k {k1} -> {k2}: {lo} > {hi}");
    }

    #[test]
    fn realized_triangle_has_the_given_sides((k, b, c, alpha) in triangle()) {
        let a = cosine_law_side(k, b, c, alpha);
        prop_assume!(a + b + c < 0.95 * perimeter_limit(k));
        // |xy| = c, |yz| = a, |zx| = b
        let t = model_triangle(k, c, a, b).unwrap();
        let [x, y, z] = t.vertices.map(|v| v.to_ambient(k));
        prop_assert!((ambient_distance(k, x, y) - c).abs() < 1e-9);
        prop_assert!((ambient_distance(k, y, z) - a).abs() < 1e-8);
        prop_assert!((ambient_distance(k, z, x) - b).abs() < 1e-9);
        let [px, py, pz] = t.vertices;
        prop_assert!((px.distance(&py, k).unwrap() - c).abs() < 1e-9);
        prop_assert!((py.distance(&pz, k).unwrap() - a).abs() < 1e-8);
    }
}
