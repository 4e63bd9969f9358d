use serde::Serialize;

use super::binning::{log_bin, Bin, MIN_BIN_COUNT};
use super::fit::{fit_loglog_slope, LogLogFit, MIN_FIT_POINTS};
use super::MeasureError;
use crate::graph::{DegreeKind, EventLog, Replay, Time};

/// Degree growth rates `r = ln(k1 / k0)` of the nodes present at `t0`,
/// binned by their initial degree.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthStats {
    pub kind: DegreeKind,
    pub t0: Time,
    pub t1: Time,
    /// Nodes with `k0 >= 1`.
    pub nodes: usize,
    /// `x_mean` is the mean `k0`, `y_mean` is `<r>`, `y_std` is `σ`.
    pub bins: Vec<Bin>,
    /// Fit of `<r>` against `k0`; `β(r)` is its negated slope.
    pub fit_r: Option<LogLogFit>,
    /// Fit of `σ` against `k0`; `β(σ)` is its negated slope.
    pub fit_sigma: Option<LogLogFit>,
}

impl GrowthStats {
    pub fn beta_r(&self) -> Result<f64, MeasureError> {
        self.fit_r.map(|f| -f.slope).ok_or(self.degenerate())
    }

    pub fn beta_sigma(&self) -> Result<f64, MeasureError> {
        self.fit_sigma.map(|f| -f.slope).ok_or(self.degenerate())
    }

    fn degenerate(&self) -> MeasureError {
        MeasureError::DegenerateSupport {
            distinct: self.fit_bins().count(),
            needed: MIN_FIT_POINTS,
        }
    }

    /// Bins populated enough to enter a fit.
    pub fn fit_bins(&self) -> impl Iterator<Item = &Bin> {
        self.bins.iter().filter(|b| b.count >= MIN_BIN_COUNT)
    }
}

/// Growth of `kind` between the snapshots at `t0` and `t1`.
pub fn growth_stats(
    log: &EventLog,
    kind: DegreeKind,
    t0: Time,
    t1: Time,
) -> Result<GrowthStats, MeasureError> {
    if t0 >= t1 {
        return Err(MeasureError::InvalidWindow(format!(
            "t0 {t0} must precede t1 {t1}"
        )));
    }
    log.check_time(t0)?;
    log.check_time(t1)?;
    let mut replay = Replay::new(log);
    replay.advance_through(t0, |_, _, _| {})?;
    let k0 = replay.graph().degree_vector(kind);
    replay.advance_through(t1, |_, _, _| {})?;
    let g1 = replay.graph();

    let samples: Vec<(u64, f64)> = k0
        .iter()
        .enumerate()
        .filter(|&(_, &k)| k >= 1)
        .map(|(i, &k)| {
            let k1 = g1.degree_of(kind, i);
            (k as u64, (k1 as f64 / k as f64).ln())
        })
        .collect();
    let nodes = samples.len();
    let bins = log_bin(samples);
    let fit_of = |y: fn(&Bin) -> f64| {
        let pts: Vec<(f64, f64)> = bins
            .iter()
            .filter(|b| b.count >= MIN_BIN_COUNT)
            .map(|b| (b.x_mean, y(b)))
            .collect();
        fit_loglog_slope(&pts, None).ok()
    };
    Ok(GrowthStats {
        kind,
        t0,
        t1,
        nodes,
        fit_r: fit_of(|b| b.y_mean),
        fit_sigma: fit_of(|b| b.y_std),
        bins,
    })
}
