//! Numerical core for studying curvature bounds of low-regularity Riemannian
//! metrics on two-dimensional coordinate charts.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides:
//!
//! - [`model`]: exact geometry of the constant-curvature model planes.
//! - [`metric`]: chart metrics, including the Hartman–Wintner examples.
//! - [`mollify`]: convolution smoothing of metric components.
//! - [`curvature`]: Christoffel symbols, Gauss curvature and bound scans.
//! - [`path`]: curve lengths, lattice shortest paths, refinement and geodesics.
//! - [`compare`]: CBB(k) / CAT(k) quadruple comparison on distance oracles.
//!
//! File formats, the command line and parallel sweeps live in the `curvlab`
//! companion crate.

#![no_std]
#![forbid(unsafe_code)]
// NaN-rejecting `!(x > 0.0)` guards and tensor index loops are deliberate
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::too_many_arguments)]

extern crate alloc;

pub mod compare;
pub mod curvature;
mod error;
pub mod geom;
pub mod metric;
pub mod model;
pub mod mollify;
pub mod path;
pub mod sampling;

pub use error::{Error, Result};
pub use geom::{Point2, Rect, Sym2, Vec2};
pub use metric::{CatalogMetric, MetricField, Regularity};
