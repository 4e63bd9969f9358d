use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{EventLog, Time};

/// How measurement windows treat long gaps in a log's timeline.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentPolicy {
    /// Windows that span a gap are dropped.
    #[default]
    Separate,
    /// Gaps are ignored.
    Bridge,
}

impl FromStr for SegmentPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "separate" => Ok(SegmentPolicy::Separate),
            "bridge" => Ok(SegmentPolicy::Bridge),
            other => Err(format!("unknown segment policy {other:?}")),
        }
    }
}

impl fmt::Display for SegmentPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SegmentPolicy::Separate => "separate",
            SegmentPolicy::Bridge => "bridge",
        })
    }
}

/// Maximal time ranges whose consecutive event times differ by at most
/// `max_gap`.
pub fn segments(log: &EventLog, max_gap: Time) -> Vec<(Time, Time)> {
    let mut out: Vec<(Time, Time)> = Vec::new();
    for t in log.times() {
        match out.last_mut() {
            Some((_, end)) if t - *end <= max_gap => *end = t,
            _ => out.push((t, t)),
        }
    }
    out
}

/// Keeps the starts whose window `[t0, t0 + dt]` fits inside one segment,
/// or all of them under [`SegmentPolicy::Bridge`].
pub fn windows_within_segments(
    t0s: &[Time],
    dt: Time,
    segments: &[(Time, Time)],
    policy: SegmentPolicy,
) -> Vec<Time> {
    match policy {
        SegmentPolicy::Bridge => t0s.to_vec(),
        SegmentPolicy::Separate => t0s
            .iter()
            .copied()
            .filter(|&t0| segments.iter().any(|&(a, b)| a <= t0 && t0 + dt <= b))
            .collect(),
    }
}

/// `count` evenly spaced window starts over the second half of the log,
/// leaving room for a full window after the last one.
pub fn default_t0s(log: &EventLog, count: usize, dt: Time) -> Vec<Time> {
    let (Some(first), Some(last)) = (log.first_time(), log.last_time()) else {
        return Vec::new();
    };
    let hi = last - dt;
    if hi < first || count == 0 {
        return Vec::new();
    }
    let lo = (first + (last - first) / 2).min(hi);
    if count == 1 || lo == hi {
        return vec![lo];
    }
    let span = (hi - lo) as f64;
    let mut out: Vec<Time> = (0..count)
        .map(|k| lo + (span * k as f64 / (count - 1) as f64).round() as Time)
        .collect();
    out.dedup();
    out
}
