use serde::Serialize;

use super::binning::{log_bin, Bin, MIN_BIN_COUNT};
use super::fit::{fit_loglog_slope, LogLogFit};
use super::MeasureError;
use crate::graph::{DegreeKind, DualGraph, ItemId, UserId};

/// Pearson coefficient between two user degrees over all users.
pub fn degree_pcc(
    graph: &DualGraph,
    kind_a: DegreeKind,
    kind_b: DegreeKind,
) -> Result<f64, MeasureError> {
    if !kind_a.is_user_degree() || !kind_b.is_user_degree() {
        return Err(MeasureError::InvalidKinds(format!(
            "{} / {} must both be user degrees",
            kind_a.label(),
            kind_b.label()
        )));
    }
    let a: Vec<f64> = graph
        .degree_vector(kind_a)
        .into_iter()
        .map(f64::from)
        .collect();
    let b: Vec<f64> = graph
        .degree_vector(kind_b)
        .into_iter()
        .map(f64::from)
        .collect();
    pearson(&a, &b).map(|r| if kind_a == kind_b { 1.0 } else { r })
}

pub(crate) fn pearson(a: &[f64], b: &[f64]) -> Result<f64, MeasureError> {
    let n = a.len() as f64;
    if a.len() < 2 {
        return Err(MeasureError::ZeroVariance("fewer than two samples"));
    }
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 {
        return Err(MeasureError::ZeroVariance("first degree"));
    }
    if sbb == 0.0 {
        return Err(MeasureError::ZeroVariance("second degree"));
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Average of some quantity over the nodes sharing one exact degree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: u64,
    pub y: f64,
    pub count: usize,
}

/// Nearest-neighbor degrees across cross links.
#[derive(Clone, Debug, Serialize)]
pub struct NnCorrelation {
    /// Mean popularity of each user's favorites; `None` for users without any.
    pub user_knn: Vec<Option<f64>>,
    /// Mean favorite degree of each item's fans; `None` for items without fans.
    pub item_knn: Vec<Option<f64>>,
    /// `<k_p^nn>` against `k_f`, one point per degree value.
    pub user_curve: Vec<CurvePoint>,
    /// `<k_f^nn>` against `k_p`, one point per degree value.
    pub item_curve: Vec<CurvePoint>,
    pub user_bins: Vec<Bin>,
    pub item_bins: Vec<Bin>,
}

impl NnCorrelation {
    /// Log-log slope of the binned user curve over bins with enough users.
    pub fn user_curve_fit(&self) -> Result<LogLogFit, MeasureError> {
        let pts: Vec<(f64, f64)> = self
            .user_bins
            .iter()
            .filter(|b| b.count >= MIN_BIN_COUNT)
            .map(|b| (b.x_mean, b.y_mean))
            .collect();
        fit_loglog_slope(&pts, None)
    }

    /// Log-log slope of the per-degree item curve over the top decade of
    /// `k_p`, capped at the last populated bin.
    pub fn item_curve_tail_fit(&self) -> Result<LogLogFit, MeasureError> {
        let hi = self
            .item_bins
            .iter()
            .filter(|b| b.count >= MIN_BIN_COUNT)
            .map(|b| b.hi)
            .max()
            .unwrap_or(0) as f64;
        let pts: Vec<(f64, f64)> = self.item_curve.iter().map(|p| (p.x as f64, p.y)).collect();
        fit_loglog_slope(&pts, Some((hi / 10.0, hi)))
    }
}

fn mean_over(ids: &[u32], degree: impl Fn(u32) -> u32) -> Option<f64> {
    (!ids.is_empty()).then(|| ids.iter().map(|&j| degree(j) as f64).sum::<f64>() / ids.len() as f64)
}

fn per_degree(values: &[Option<f64>], degree: impl Fn(usize) -> u32) -> Vec<CurvePoint> {
    let mut acc: Vec<(f64, usize)> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = v {
            let k = degree(i) as usize;
            if acc.len() <= k {
                acc.resize(k + 1, (0.0, 0));
            }
            acc[k].0 += v;
            acc[k].1 += 1;
        }
    }
    acc.into_iter()
        .enumerate()
        .filter(|(_, a)| a.1 > 0)
        .map(|(x, (sum, count))| CurvePoint {
            x: x as u64,
            y: sum / count as f64,
            count,
        })
        .collect()
}

fn binned(values: &[Option<f64>], degree: impl Fn(usize) -> u32) -> Vec<Bin> {
    log_bin(
        values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (degree(i) as u64, v))),
    )
}

/// Nearest-neighbor degree curves of the user/item cross-link graph.
pub fn nn_degree_curves(graph: &DualGraph) -> Result<NnCorrelation, MeasureError> {
    if graph.cross_link_count() == 0 {
        return Err(MeasureError::NoCrossLinks);
    }
    let user_knn: Vec<Option<f64>> = (0..graph.user_count())
        .map(|i| {
            mean_over(graph.favorites(UserId(i as u32)), |l| {
                graph.popularity(ItemId(l))
            })
        })
        .collect();
    let item_knn: Vec<Option<f64>> = (0..graph.item_count())
        .map(|l| {
            mean_over(graph.fans(ItemId(l as u32)), |j| {
                graph.degrees(UserId(j)).k_f
            })
        })
        .collect();
    let k_f = |i: usize| graph.degrees(UserId(i as u32)).k_f;
    let k_p = |l: usize| graph.popularity(ItemId(l as u32));
    Ok(NnCorrelation {
        user_curve: per_degree(&user_knn, k_f),
        item_curve: per_degree(&item_knn, k_p),
        user_bins: binned(&user_knn, k_f),
        item_bins: binned(&item_knn, k_p),
        user_knn,
        item_knn,
    })
}
