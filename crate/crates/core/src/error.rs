use core::fmt;

use crate::geom::Point2;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of an operation.
    Domain(&'static str),
    /// A model triangle does not exist or a model angle is undefined.
    Inadmissible(&'static str),
    /// A point lies outside the chart domain.
    OutOfDomain(Point2),
    /// A metric evaluation failed the positive-definiteness check.
    Degenerate { point: Point2, lambda_min: f64 },
    /// Finite differences would reach beyond the chart.
    BoundaryProximity(Point2),
    /// The metric matrix is not invertible.
    SingularMetric(Point2),
    /// The smoothing scale does not fit in the chart.
    EpsilonTooLarge { epsilon: f64, limit: f64 },
    /// A smoothed node matrix violates Sylvester's criterion.
    SpdViolation(Point2),
    /// Unknown mollifier profile name.
    UnknownProfile,
    /// A bisection bracket does not satisfy its precondition.
    BracketInvalid(&'static str),
    /// The lattice graph has no path between the endpoints.
    Disconnected,
    /// Any other violated precondition.
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Inadmissible(what) => write!(f, "inadmissible configuration: {what}"),
            Error::OutOfDomain(p) => write!(f, "point ({}, {}) is outside the chart domain", p.x, p.y),
            Error::Degenerate { point, lambda_min } => {
                write!(f, "metric degenerates at ({}, {}): smallest eigenvalue {lambda_min}", point.x, point.y)
            }
            Error::BoundaryProximity(p) => write!(
                f,
                "point ({}, {}) is too close to the chart boundary for the finite-difference stencil",
                p.x, p.y
            ),
            Error::SingularMetric(p) => write!(f, "metric is singular at ({}, {})", p.x, p.y),
            Error::EpsilonTooLarge { epsilon, limit } => {
                write!(f, "smoothing scale {epsilon} must be below {limit}")
            }
            Error::SpdViolation(p) => write!(f, "smoothed metric is not positive-definite at node ({}, {})", p.x, p.y),
            Error::UnknownProfile => write!(f, "unknown mollifier profile (expected bump or wendland)"),
            Error::BracketInvalid(what) => write!(f, "invalid bracket: {what}"),
            Error::Disconnected => write!(f, "lattice graph is disconnected"),
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
        }
    }
}

impl core::error::Error for Error {}
