//! Experiment configuration: one flat JSON object, overridable by flags.

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use curvlab_core::Rect;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// `flat`, `hw1(λ)`, `hw2(λ)`, `constk(k)` or a sampled-metric CSV path.
    pub metric: Option<String>,
    /// `[x0, x1, y0, y1]`.
    pub region: Option<[f64; 4]>,
    pub resolution: Option<usize>,
    pub mollifier: Option<String>,
    pub eps: Option<Vec<f64>>,
    pub mode: Option<String>,
    pub k: Option<f64>,
    /// Critical-curvature bracket `[k_lo, k_hi]`.
    pub bracket: Option<[f64; 2]>,
    /// Bound-scan direction, `lower` or `upper`.
    pub direction: Option<String>,
    pub samples: Option<usize>,
    /// Number of sampled point pairs for `distance`.
    pub pairs: Option<usize>,
    pub seed: Option<u64>,
    /// Bound-scan slack tolerance.
    pub tolerance: Option<f64>,
    pub p: Option<[f64; 2]>,
    pub q: Option<[f64; 2]>,
    /// Initial velocity of a geodesic integration.
    pub v: Option<[f64; 2]>,
    /// Integration time for `v`.
    pub time: Option<f64>,
    /// Comparison-radius estimate at this point.
    pub radius_at: Option<[f64; 2]>,
    pub lambda: Option<f64>,
    pub out: Option<String>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        ExperimentConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config("config", e.to_string()))
    }

    /// Values set in `top` win.
    pub fn overlay(self, top: ExperimentConfig) -> ExperimentConfig {
        let base = self;
        overlay!(
            base, top, metric, region, resolution, mollifier, eps, mode, k, bracket, direction, samples, pairs, seed,
            tolerance, p, q, v, time, radius_at, lambda, out
        )
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn out_dir(&self) -> &str {
        self.out.as_deref().unwrap_or("curvlab-out")
    }

    pub fn region_rect(&self) -> Result<Option<Rect>, CliError> {
        match self.region {
            None => Ok(None),
            Some([x0, x1, y0, y1]) => {
                let r = Rect::new(x0, x1, y0, y1);
                if r.is_valid() {
                    Ok(Some(r))
                } else {
                    Err(CliError::config("region", "need finite x0 < x1 and y0 < y1"))
                }
            }
        }
    }

    pub fn eps_schedule(&self) -> Result<Vec<f64>, CliError> {
        let eps = self.eps.clone().unwrap_or_else(|| DEFAULT_EPS.to_vec());
        if eps.is_empty() {
            return Err(CliError::config("eps", "schedule must not be empty"));
        }
        if eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(CliError::config("eps", "entries must be positive"));
        }
        if eps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(CliError::config("eps", "schedule must be strictly decreasing"));
        }
        Ok(eps)
    }

    pub fn resolution_or(&self, default: usize, min: usize) -> Result<usize, CliError> {
        let r = self.resolution.unwrap_or(default);
        if r < min {
            return Err(CliError::config("resolution", format!("must be at least {min}")));
        }
        Ok(r)
    }

    pub fn count(&self, value: Option<usize>, field: &'static str, default: usize) -> Result<usize, CliError> {
        match value.unwrap_or(default) {
            0 => Err(CliError::config(field, "must be positive")),
            n => Ok(n),
        }
    }

    pub fn tolerance_or(&self, default: f64) -> Result<f64, CliError> {
        match self.tolerance {
            Some(t) if !(t.is_finite() && t >= 0.0) => Err(CliError::config("tolerance", "must be non-negative")),
            Some(t) => Ok(t),
            None => Ok(default),
        }
    }

    pub fn finite(value: Option<f64>, field: &'static str) -> Result<Option<f64>, CliError> {
        match value {
            Some(v) if !v.is_finite() => Err(CliError::config(field, "must be finite")),
            v => Ok(v),
        }
    }
}

pub const DEFAULT_EPS: [f64; 3] = [0.1, 0.05, 0.025];
