use curvlab_core::geom::Grid;
use curvlab_core::metric::{CatalogMetric, MetricField};
use curvlab_core::mollify::{
    make_mollifier, smooth_metric, smooth_scalar, smoothing_error, Mollifier, Profile, SampledMetric,
};
use curvlab_core::{Point2, Rect, Sym2};
use proptest::prelude::*;

fn both() -> [Mollifier; 2] {
    [Mollifier::new(Profile::Bump), Mollifier::new(Profile::Wendland)]
}

#[test]
fn densities_have_unit_mass() {
    // midpoint rule on a Cartesian grid over the unit square [-1, 1]²
    let n = 1000;
    let h = 2.0 / n as f64;
    for m in both() {
        let mut mass = 0.0;
        for i in 0..n {
            for j in 0..n {
                let p = Point2::new(-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h);
                mass += m.density(p.norm()) * h * h;
            }
        }
        assert!((mass - 1.0).abs() < 1e-4, "{:?}: {mass}", m.profile());
        assert_eq!(m.density(1.0), 0.0);
        assert_eq!(m.density(1.5), 0.0);
    }
}

#[test]
fn unknown_profile_rejected() {
    assert!(make_mollifier("gaussian").is_err());
}

#[test]
fn constants_are_invariant() {
    let domain = Rect::centered(1.0);
    for m in both() {
        let s = smooth_scalar(|_| 3.7, domain, &m, 0.2, 33).unwrap();
        assert!(s.values.iter().all(|v| (v - 3.7).abs() < 1e-8));
    }
}

#[test]
fn affine_fields_are_invariant() {
    let domain = Rect::new(-1.0, 2.0, -0.5, 1.5);
    let f = |p: Point2| 0.4 - 1.3 * p.x + 2.1 * p.y;
    for m in both() {
        for eps in [0.3, 0.1, 0.037] {
            let s = smooth_scalar(f, domain, &m, eps, 40).unwrap();
            for (idx, v) in s.values.iter().enumerate() {
                let (i, j) = s.grid.coords(idx);
                assert!((v - f(s.grid.node(i, j))).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn constant_metric_is_invariant() {
    let m = CatalogMetric::flat();
    let s = smooth_metric(&m, &make_mollifier("bump").unwrap(), 0.5, 20).unwrap();
    assert!(s.values().iter().all(|g| g.max_abs_diff(&Sym2::IDENTITY) < 1e-12));
    assert!(m.domain().shrink(0.5).contains_rect(&s.grid().rect));
}

#[test]
fn hw1_smoothing_error_shrinks() {
    let m = CatalogMetric::hw1(1.5).unwrap();
    let moll = make_mollifier("bump").unwrap();
    let errs: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&e| smoothing_error(&smooth_metric(&m, &moll, e, 64).unwrap(), &m).unwrap().c0)
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn smoothed_metrics_stay_positive_definite() {
    let m = CatalogMetric::hw2(1.8).unwrap();
    let s = smooth_metric(&m, &make_mollifier("wendland").unwrap(), 0.05, 64).unwrap();
    assert!(s.values().iter().all(|g| g.is_positive_definite()));
}

#[test]
fn oversized_epsilon_rejected() {
    let m = CatalogMetric::hw1(1.5).unwrap();
    assert!(smooth_metric(&m, &make_mollifier("bump").unwrap(), 1.0, 32).is_err());
    assert!(smooth_metric(&m, &make_mollifier("bump").unwrap(), 0.1, 4).is_err());
}

#[test]
fn sampled_metric_rejects_bad_nodes() {
    let grid = Grid::square(Rect::centered(1.0), 3);
    assert!(SampledMetric::from_nodes(grid, vec![Sym2::IDENTITY; 8], 0.0).is_err());
    let mut v = vec![Sym2::IDENTITY; 9];
    v[4] = Sym2::new(1.0, 2.0, 1.0);
    assert!(SampledMetric::from_nodes(grid, v, 0.0).is_err());
}

fn affine_metric(p: Point2) -> Sym2 {
    Sym2::new(2.0 + 0.5 * p.x - 0.25 * p.y, 0.1 * p.x, 1.5 + 0.3 * p.y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn positivity_is_preserved(
        a in 0.0..3.0f64, b in 0.5..20.0f64, c in -1.0..1.0f64, d in 0.5..20.0f64, shift in -1.5..0.5f64,
        eps in 0.02..0.3f64,
    ) {
        // clipped oscillation: non-negative with flat zero regions and kinks
        let f = |p: Point2| (a * (b * p.x).sin() + c * (d * p.y).cos() + shift).max(0.0);
        let s = smooth_scalar(f, Rect::centered(1.0), &Mollifier::new(Profile::Bump), eps, 24).unwrap();
        prop_assert!(s.min() >= -1e-10);
    }

    #[test]
    fn bilinear_interpolation_is_exact_on_affine_data(x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let grid = Grid::new(Rect::centered(1.0), 7, 5);
        let values = grid.nodes().map(affine_metric).collect();
        let s = SampledMetric::from_nodes(grid, values, 0.0).unwrap();
        let p = Point2::new(x, y);
        prop_assert!(s.metric(p).unwrap().max_abs_diff(&affine_metric(p)) < 1e-12);
    }
}
