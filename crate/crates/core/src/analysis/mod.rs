//! Gradients, norms, the Nash-type ratio and its test-function curves,
//! dimension certificates, exponent identities and power-law fits.

mod dimensions;
mod exponents;
mod fit;
mod gradient;
mod nash;

pub use dimensions::{
    certify_dimensions, volume_lower_bound_check, DimensionCertificate, DimensionRow,
    DimensionThresholds, VolumeLowerBound,
};
pub use exponents::{
    beta_from_nu, critical_p, dim_inequality, nash_slope_law, p_lower_bound, DimInequality,
};
pub use fit::{fit_exponent, ExponentFit};
pub use gradient::{graph_gradient, graph_gradient_edges, lp_norm, nash_ratio};
pub use nash::{lemma4_bounds_check, nash_curve, Lemma4Report, NashCurve, NashEntry, SlopeCheck};

use thiserror::Error;

use crate::graph::VertexId;
use crate::spinal::SpinalError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("radius {requested} exceeds the safe radius {safe} of this truncation")]
    RadiusUnsafe { requested: usize, safe: usize },
    #[error("the graph has a single vertex; the ratio is undefined")]
    DegenerateGraph,
    #[error("delta_G = {delta_g} does not exceed beta = {beta}")]
    BetaTooLarge { beta: f64, delta_g: f64 },
    #[error("outside the domain: {0}")]
    DomainError(String),
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {index} is not positive and finite")]
    NonPositive { index: usize },
    #[error("vertex {0} is not on the spine")]
    NotOnSpine(VertexId),
    #[error(transparent)]
    Spinal(#[from] SpinalError),
}

fn domain(msg: impl Into<String>) -> AnalysisError {
    AnalysisError::DomainError(msg.into())
}
