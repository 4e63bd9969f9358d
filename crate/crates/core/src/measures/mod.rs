//! Statistics over event logs and snapshots. Every measure is a pure
//! function of its input and works the same on simulated and ingested logs.

mod binning;
mod correlation;
mod distribution;
mod fit;
mod growth;
mod influence;
mod pa;
mod triadic;
mod windows;

pub use binning::{log2_bin, log_bin, quantile, weighted_quantile, Bin, MIN_BIN_COUNT};
pub use correlation::{degree_pcc, nn_degree_curves, CurvePoint, NnCorrelation};
pub use distribution::{
    degree_distribution, DegreeDistribution, DistributionBin, MIN_DISTRIBUTION_NODES,
};
pub use fit::{fit_loglog_slope, LogLogFit, MIN_FIT_POINTS};
pub use growth::{growth_stats, GrowthStats};
pub use influence::{
    exposure_influence, shared_favorites_influence, InfluenceEstimate, InfluenceKind,
};
pub use pa::{measure_pa, measure_pa_grid, PaEstimate};
pub use triadic::{triadic_counts, triadic_fraction, TriadicCounts};
pub use windows::{default_t0s, segments, windows_within_segments, SegmentPolicy};

use thiserror::Error;

use crate::graph::{GraphError, LinkClass};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no links formed in any window")]
    EmptyWindow,
    #[error("only {distinct} distinct support values, need {needed}")]
    DegenerateSupport { distinct: usize, needed: usize },
    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),
    #[error("no {0:?} links to classify")]
    EmptyClass(LinkClass),
    #[error("{got} nodes, need at least {needed}")]
    TooFewNodes { got: usize, needed: usize },
    #[error("invalid degree kinds: {0}")]
    InvalidKinds(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("graph has no cross links")]
    NoCrossLinks,
}

/// Shared conversion of a normalized `Π` curve into `κ` and a fit, used by
/// the attachment and influence estimators.
pub(crate) use pa::{cumulate, kappa_fit, positive_part};
