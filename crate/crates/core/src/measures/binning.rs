use serde::Serialize;

/// Per-bin minimum population for a bin to enter a fit.
pub const MIN_BIN_COUNT: usize = 10;

/// Index of the base-2 bin `[2^j, 2^(j+1))` holding `k >= 1`.
#[inline]
pub fn log2_bin(k: u64) -> usize {
    debug_assert!(k >= 1);
    63 - k.leading_zeros() as usize
}

/// One base-2 bin of `(x, y)` samples.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Bin {
    /// Smallest integer the bin admits.
    pub lo: u64,
    /// Largest integer the bin admits.
    pub hi: u64,
    pub count: usize,
    pub x_mean: f64,
    pub y_mean: f64,
    /// Population standard deviation of `y`.
    pub y_std: f64,
}

/// Groups `(x, y)` samples with integer `x >= 1` into base-2 bins. Samples
/// with `x == 0` are skipped. Empty bins are dropped.
pub fn log_bin(samples: impl IntoIterator<Item = (u64, f64)>) -> Vec<Bin> {
    let mut groups: Vec<Vec<(u64, f64)>> = Vec::new();
    for (x, y) in samples {
        if x == 0 {
            continue;
        }
        let j = log2_bin(x);
        if groups.len() <= j {
            groups.resize_with(j + 1, Vec::new);
        }
        groups[j].push((x, y));
    }
    groups
        .into_iter()
        .enumerate()
        .filter(|(_, g)| !g.is_empty())
        .map(|(j, g)| {
            let n = g.len() as f64;
            let x_mean = g.iter().map(|p| p.0 as f64).sum::<f64>() / n;
            let y_mean = g.iter().map(|p| p.1).sum::<f64>() / n;
            let var = g
                .iter()
                .map(|p| (p.1 - y_mean) * (p.1 - y_mean))
                .sum::<f64>()
                / n;
            Bin {
                lo: 1 << j,
                hi: (1u64 << (j + 1)) - 1,
                count: g.len(),
                x_mean,
                y_mean,
                y_std: var.sqrt(),
            }
        })
        .collect()
}

/// Smallest value `v` in `values` with at least `q` of the mass at or below it.
pub fn quantile(values: &mut [u64], q: f64) -> Option<u64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let rank = ((q * values.len() as f64).ceil() as usize).clamp(1, values.len());
    Some(values[rank - 1])
}

/// Quantile of a histogram where `weights[x]` counts observations of `x`.
pub fn weighted_quantile(weights: &[u64], q: f64) -> Option<u64> {
    let total: u64 = weights.iter().sum();
    if total == 0 {
        return None;
    }
    let target = ((q * total as f64).ceil() as u64).clamp(1, total);
    let mut acc = 0;
    for (x, &w) in weights.iter().enumerate() {
        acc += w;
        if acc >= target {
            return Some(x as u64);
        }
    }
    None
}
