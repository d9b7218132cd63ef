//! CSV and JSON artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use curvlab_core::compare::ComparisonVerdict;
use curvlab_core::geom::Grid;
use curvlab_core::mollify::SampledMetric;
use curvlab_core::{Point2, Rect, Sym2};

use crate::error::{CliError, Context};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub x: f64,
    pub y: f64,
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRow {
    pub x: f64,
    pub y: f64,
    pub sec: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub px: f64,
    pub py: f64,
    pub qx: f64,
    pub qy: f64,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
    pub x3: f64,
    pub y3: f64,
    pub x4: f64,
    pub y4: f64,
    pub admissible: bool,
    pub result: String,
    pub slack: f64,
    pub slack_error: f64,
    pub marginal: bool,
}

impl From<&ComparisonVerdict<Point2>> for VerdictRow {
    fn from(v: &ComparisonVerdict<Point2>) -> Self {
        let q = v.quadruple;
        VerdictRow {
            x1: q[0].x,
            y1: q[0].y,
            x2: q[1].x,
            y2: q[1].y,
            x3: q[2].x,
            y3: q[2].y,
            x4: q[3].x,
            y4: q[3].y,
            admissible: v.admissible,
            result: v.result.name().to_string(),
            slack: v.slack,
            slack_error: v.slack_error,
            marginal: v.marginal,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Write serializable rows with a header line.
pub fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, CliError> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(CliError::from)).collect()
}

pub fn write_sampled_metric(path: &Path, m: &SampledMetric) -> Result<(), CliError> {
    write_rows(path, m.nodes().map(|(p, g)| MetricRow { x: p.x, y: p.y, g11: g.xx, g12: g.xy, g22: g.yy }))
}

fn axis(values: &mut Vec<f64>, field: &'static str) -> Result<(f64, f64, usize), CliError> {
    values.sort_by(f64::total_cmp);
    let span = values.last().unwrap() - values[0];
    let tol = 1e-9 * span.max(1.0);
    values.dedup_by(|a, b| (*a - *b).abs() <= tol);
    let n = values.len();
    if n < 2 {
        return Err(CliError::config(field, "sampled metric needs at least two distinct coordinates per axis"));
    }
    let step = span / (n - 1) as f64;
    if values.windows(2).any(|w| ((w[1] - w[0]) - step).abs() > 1e-6 * step) {
        return Err(CliError::config(field, "sampled metric coordinates must be evenly spaced"));
    }
    Ok((values[0], *values.last().unwrap(), n))
}

/// Read a metric sampled on a regular grid (columns `x,y,g11,g12,g22`, any row order).
pub fn read_sampled_metric(path: &Path) -> Result<SampledMetric, CliError> {
    let rows: Vec<MetricRow> = read_rows(path)?;
    if rows.is_empty() {
        return Err(CliError::config("metric", "sampled metric file has no rows"));
    }
    let (x0, x1, nx) = axis(&mut rows.iter().map(|r| r.x).collect(), "metric")?;
    let (y0, y1, ny) = axis(&mut rows.iter().map(|r| r.y).collect(), "metric")?;
    if rows.len() != nx * ny {
        return Err(CliError::config("metric", format!("expected {} grid rows, found {}", nx * ny, rows.len())));
    }
    let grid = Grid::new(Rect::new(x0, x1, y0, y1), nx, ny);
    let mut values = vec![None; nx * ny];
    for r in &rows {
        let i = ((r.x - x0) / grid.dx()).round() as usize;
        let j = ((r.y - y0) / grid.dy()).round() as usize;
        let slot = &mut values[grid.index(i.min(nx - 1), j.min(ny - 1))];
        if slot.is_some() {
            return Err(CliError::config("metric", format!("duplicate grid node ({}, {})", r.x, r.y)));
        }
        *slot = Some(Sym2::new(r.g11, r.g12, r.g22));
    }
    let values: Vec<Sym2> = values.into_iter().map(|v| v.unwrap()).collect();
    SampledMetric::from_nodes(grid, values, 0.0).context("sampled metric")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(io_err(path))
}

pub fn artifact(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
