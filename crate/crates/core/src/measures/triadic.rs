use serde::Serialize;

use super::MeasureError;
use crate::graph::{EventLog, LinkClass, LinkOrigin, Replay, Step};

/// Triadic and total counts of explicitly formed links after the initial
/// network.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TriadicCounts {
    pub social_triadic: u64,
    pub social_total: u64,
    pub cross_triadic: u64,
    pub cross_total: u64,
}

impl TriadicCounts {
    pub fn fraction(&self, class: LinkClass) -> Result<f64, MeasureError> {
        let (t, n) = match class {
            LinkClass::Social => (self.social_triadic, self.social_total),
            LinkClass::Cross => (self.cross_triadic, self.cross_total),
        };
        if n == 0 {
            return Err(MeasureError::EmptyClass(class));
        }
        Ok(t as f64 / n as f64)
    }
}

/// Classifies every explicit link against the graph it joined.
///
/// Links implied by node creation (arrival and ownership links), events at
/// the log's first timestamp and directed reciprocations of an existing
/// friendship are not counted.
pub fn triadic_counts(log: &EventLog) -> Result<TriadicCounts, MeasureError> {
    let mut counts = TriadicCounts::default();
    let Some(first) = log.first_time() else {
        return Ok(counts);
    };
    let mut replay = Replay::new(log);
    while let Some(step) = replay.advance(|graph, t, step| {
        let Step::AddLink(link, LinkOrigin::Explicit) = step else {
            return;
        };
        if t == first {
            return;
        }
        let triadic = graph.closes_triangle(link) as u64;
        match *link {
            crate::graph::Link::Social { src, dst } => {
                if !graph.are_friends(src, dst) {
                    counts.social_total += 1;
                    counts.social_triadic += triadic;
                }
            }
            crate::graph::Link::Cross { .. } => {
                counts.cross_total += 1;
                counts.cross_triadic += triadic;
            }
        }
    }) {
        step?;
    }
    Ok(counts)
}

/// Share of the explicit links of `class` that closed a triangle.
pub fn triadic_fraction(log: &EventLog, class: LinkClass) -> Result<f64, MeasureError> {
    triadic_counts(log)?.fraction(class)
}
