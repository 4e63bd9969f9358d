use serde::Serialize;

use super::MeasureError;

/// Ordinary least squares of `ln y` on `ln x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub r_squared: f64,
    pub points: usize,
    pub x_min: f64,
    pub x_max: f64,
}

/// Minimum number of distinct abscissae a fit needs.
pub const MIN_FIT_POINTS: usize = 5;

/// Fits `ln y = intercept + slope * ln x` over the points with `x, y > 0`
/// whose `x` lies in the inclusive `window` (if given).
pub fn fit_loglog_slope(
    points: &[(f64, f64)],
    window: Option<(f64, f64)>,
) -> Result<LogLogFit, MeasureError> {
    let (lo, hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())
        .filter(|&&(x, _)| x >= lo && x <= hi)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    let mut xs: Vec<f64> = logs.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < MIN_FIT_POINTS {
        return Err(MeasureError::DegenerateSupport {
            distinct: xs.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &logs {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = logs
        .iter()
        .map(|&(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let stderr = (sse / (n - 2.0) / sxx).sqrt();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(LogLogFit {
        slope,
        intercept,
        stderr,
        r_squared,
        points: logs.len(),
        x_min: xs[0].exp(),
        x_max: xs[xs.len() - 1].exp(),
    })
}
