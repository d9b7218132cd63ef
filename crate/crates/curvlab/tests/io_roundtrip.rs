use curvlab::io::{read_rows, read_sampled_metric, write_rows, write_sampled_metric, VerdictRow};
use curvlab::metric_spec::parse_metric;
use curvlab::ExperimentConfig;
use curvlab_core::geom::Grid;
use curvlab_core::metric::MetricField;
use curvlab_core::mollify::SampledMetric;
use curvlab_core::{Point2, Rect, Sym2};

#[test]
fn sampled_metric_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid::new(Rect::new(-1.0, 2.0, 0.0, 1.0), 7, 4);
    let values: Vec<Sym2> = grid.nodes().map(|p| Sym2::new(2.0 + p.x * 0.3, 0.1 * p.y, 1.0 + p.y * p.y)).collect();
    let m = SampledMetric::from_nodes(grid, values, 0.0).unwrap();
    let path = dir.path().join("m.csv");
    write_sampled_metric(&path, &m).unwrap();
    let back = read_sampled_metric(&path).unwrap();
    assert_eq!(back.grid().nx, 7);
    assert_eq!(back.grid().ny, 4);
    for (a, b) in m.values().iter().zip(back.values()) {
        assert!(a.max_abs_diff(b) < 1e-15);
    }
    let spec = parse_metric(path.to_str().unwrap()).unwrap();
    let p = Point2::new(0.3, 0.4);
    assert!(spec.metric(p).unwrap().max_abs_diff(&m.metric(p).unwrap()) < 1e-12);
}

#[test]
fn ragged_metric_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "x,y,g11,g12,g22\n0,0,1,0,1\n1,0,1,0,1\n0,1,1,0,1\n").unwrap();
    assert!(read_sampled_metric(&path).is_err());
    std::fs::write(&path, "x,y,g11,g12,g22\n0,0,1,0,1\n1,0,1,0,1\n0,1,1,0,1\n1,1,1,2,1\n").unwrap();
    assert!(read_sampled_metric(&path).is_err());
}

#[test]
fn verdict_rows_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let rows = vec![VerdictRow {
        x1: 0.1,
        y1: -0.2,
        x2: 0.3,
        y2: 0.4,
        x3: -0.5,
        y3: 0.6,
        x4: 0.7,
        y4: -0.8,
        admissible: true,
        result: "fail".into(),
        slack: -1.25e-3,
        slack_error: 1e-9,
        marginal: false,
    }];
    let path = dir.path().join("v.csv");
    write_rows(&path, &rows).unwrap();
    let back: Vec<VerdictRow> = read_rows(&path).unwrap();
    assert_eq!(back, rows);
}

#[test]
fn config_json_round_trip_and_overlay() {
    let base =
        ExperimentConfig::from_json(r#"{"metric": "hw1(1.5)", "k": 0.5, "eps": [0.1, 0.05], "seed": 4}"#).unwrap();
    let text = serde_json::to_string(&base).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), base);
    let top = ExperimentConfig { k: Some(-1.0), ..Default::default() };
    let merged = base.clone().overlay(top);
    assert_eq!(merged.k, Some(-1.0));
    assert_eq!(merged.seed, Some(4));
    assert_eq!(merged.eps, base.eps);
    assert!(ExperimentConfig::from_json(r#"{"metric": "flat", "kk": 1}"#).is_err());
}

#[test]
fn metric_specs_parse() {
    for ok in ["flat", "hw1(1.5)", "hw2(1.2)", "constk(-1)", "constk(0)", " hw1( 1.8 ) "] {
        assert!(parse_metric(ok).is_ok(), "{ok}");
    }
    for bad in ["hw1(2.5)", "hw1", "constk(x)", "sphere", "hw2(1)"] {
        assert!(parse_metric(bad).is_err(), "{bad}");
    }
}
