use serde::Serialize;

use super::binning::{log2_bin, MIN_BIN_COUNT};
use super::fit::{fit_loglog_slope, LogLogFit, MIN_FIT_POINTS};
use super::MeasureError;
use crate::graph::{DegreeKind, DualGraph};

/// Smallest node class a distribution is computed for.
pub const MIN_DISTRIBUTION_NODES: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionBin {
    pub lo: u64,
    pub hi: u64,
    pub count: usize,
    /// Mean degree of the nodes in the bin.
    pub x_mean: f64,
    /// Fraction of all nodes in the bin, per unit degree.
    pub pdf: f64,
}

/// Base-2 binned degree distribution with a power-law fit `p(k) ~ k^-γ`.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeDistribution {
    pub kind: DegreeKind,
    pub nodes: usize,
    pub mean: f64,
    pub max: u64,
    pub bins: Vec<DistributionBin>,
    pub fit: Option<LogLogFit>,
}

impl DegreeDistribution {
    /// The fitted `γ`.
    pub fn exponent(&self) -> Result<f64, MeasureError> {
        self.fit
            .map(|f| -f.slope)
            .ok_or(MeasureError::DegenerateSupport {
                distinct: self
                    .bins
                    .iter()
                    .filter(|b| b.count >= MIN_BIN_COUNT)
                    .count(),
                needed: MIN_FIT_POINTS,
            })
    }
}

/// Distribution of `kind` over its node class; zero-degree nodes count
/// toward normalization only. The fit uses bins holding at least
/// [`MIN_BIN_COUNT`] nodes.
pub fn degree_distribution(
    graph: &DualGraph,
    kind: DegreeKind,
) -> Result<DegreeDistribution, MeasureError> {
    let degrees = graph.degree_vector(kind);
    from_degrees(kind, &degrees)
}

pub(crate) fn from_degrees(
    kind: DegreeKind,
    degrees: &[u32],
) -> Result<DegreeDistribution, MeasureError> {
    let nodes = degrees.len();
    if nodes < MIN_DISTRIBUTION_NODES {
        return Err(MeasureError::TooFewNodes {
            got: nodes,
            needed: MIN_DISTRIBUTION_NODES,
        });
    }
    let mut counts: Vec<(usize, u64)> = Vec::new();
    for &k in degrees.iter().filter(|&&k| k > 0) {
        let j = log2_bin(k as u64);
        if counts.len() <= j {
            counts.resize(j + 1, (0, 0));
        }
        counts[j].0 += 1;
        counts[j].1 += k as u64;
    }
    let total = nodes as f64;
    let bins: Vec<DistributionBin> = counts
        .iter()
        .enumerate()
        .filter(|(_, c)| c.0 > 0)
        .map(|(j, &(count, sum))| DistributionBin {
            lo: 1 << j,
            hi: (1u64 << (j + 1)) - 1,
            count,
            x_mean: sum as f64 / count as f64,
            pdf: count as f64 / total / (1u64 << j) as f64,
        })
        .collect();
    let pts: Vec<(f64, f64)> = bins
        .iter()
        .filter(|b| b.count >= MIN_BIN_COUNT)
        .map(|b| (b.x_mean, b.pdf))
        .collect();
    Ok(DegreeDistribution {
        kind,
        nodes,
        mean: degrees.iter().map(|&k| k as f64).sum::<f64>() / total,
        max: degrees.iter().copied().max().unwrap_or(0) as u64,
        fit: fit_loglog_slope(&pts, None).ok(),
        bins,
    })
}
