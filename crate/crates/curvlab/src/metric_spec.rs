//! Metric specifications: `flat`, `hw1(λ)`, `hw2(λ)`, `constk(k)` or a CSV path.

use std::path::Path;

use curvlab_core::metric::{CatalogKind, CatalogMetric, MetricField, Regularity};
use curvlab_core::mollify::SampledMetric;
use curvlab_core::{Point2, Rect, Result as CoreResult, Sym2};

use crate::error::CliError;
use crate::io::read_sampled_metric;

/// A catalog metric or one sampled on a grid.
#[derive(Debug, Clone)]
pub enum Metric {
    Catalog(CatalogMetric),
    Sampled(SampledMetric),
}

impl Metric {
    /// Closed-form distance, for the flat and constant-curvature metrics.
    pub fn exact_distance(&self, p: Point2, q: Point2) -> Option<f64> {
        match self {
            Metric::Catalog(c) => c.exact_distance(p, q),
            Metric::Sampled(_) => None,
        }
    }

    /// Curvature of the model plane this metric is a chart of, if any.
    pub fn model_curvature(&self) -> Option<f64> {
        match self {
            Metric::Catalog(c) => match c.kind() {
                CatalogKind::Flat => Some(0.0),
                CatalogKind::ConstantCurvature { k } => Some(k),
                _ => None,
            },
            Metric::Sampled(_) => None,
        }
    }

    pub fn as_catalog(&self) -> Option<&CatalogMetric> {
        match self {
            Metric::Catalog(c) => Some(c),
            Metric::Sampled(_) => None,
        }
    }
}

impl MetricField for Metric {
    fn domain(&self) -> Rect {
        match self {
            Metric::Catalog(m) => m.domain(),
            Metric::Sampled(m) => m.domain(),
        }
    }

    fn regularity(&self) -> Regularity {
        match self {
            Metric::Catalog(m) => m.regularity(),
            Metric::Sampled(m) => m.regularity(),
        }
    }

    fn metric(&self, p: Point2) -> CoreResult<Sym2> {
        match self {
            Metric::Catalog(m) => m.metric(p),
            Metric::Sampled(m) => m.metric(p),
        }
    }

    fn derivatives(&self, p: Point2) -> Option<CoreResult<[Sym2; 2]>> {
        match self {
            Metric::Catalog(m) => m.derivatives(p),
            Metric::Sampled(m) => m.derivatives(p),
        }
    }

    fn analytic_sectional(&self, p: Point2) -> Option<f64> {
        match self {
            Metric::Catalog(m) => m.analytic_sectional(p),
            Metric::Sampled(m) => m.analytic_sectional(p),
        }
    }
}

fn single_arg(spec: &str, name: &str) -> Result<Option<f64>, CliError> {
    let Some(rest) = spec.strip_prefix(name) else {
        return Ok(None);
    };
    let inner = rest
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| CliError::config("metric", format!("expected {name}(<number>)")))?;
    inner.trim().parse::<f64>().map(Some).map_err(|_| CliError::config("metric", format!("bad parameter in {spec:?}")))
}

/// Parse a metric specification.
pub fn parse_metric(spec: &str) -> Result<Metric, CliError> {
    let s = spec.trim();
    let path = Path::new(s);
    if path.is_file() {
        return read_sampled_metric(path).map(Metric::Sampled);
    }
    if s == "flat" {
        return Ok(Metric::Catalog(CatalogMetric::flat()));
    }
    if let Some(l) = single_arg(s, "hw1")? {
        return CatalogMetric::hw1(l).map(Metric::Catalog).map_err(|e| CliError::config("metric", e.to_string()));
    }
    if let Some(l) = single_arg(s, "hw2")? {
        return CatalogMetric::hw2(l).map(Metric::Catalog).map_err(|e| CliError::config("metric", e.to_string()));
    }
    if let Some(k) = single_arg(s, "constk")? {
        return CatalogMetric::constant_curvature(k)
            .map(Metric::Catalog)
            .map_err(|e| CliError::config("metric", e.to_string()));
    }
    Err(CliError::config("metric", format!("unknown metric {s:?} (not a catalog name or an existing CSV file)")))
}
