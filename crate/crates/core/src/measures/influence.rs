//! Neighborhood influence on link formation.
//!
//! Both estimators count, per level `u` of some social signal, how often a
//! candidate link was exposed at that level (`C(u)`) and how often it formed
//! there (`A(u)`). The ratio is normalized and cumulated like the attachment
//! kernel, so a positive fitted exponent means stronger signals convert more
//! often. Social direction is ignored throughout.

use std::collections::HashMap;

use serde::Serialize;

use super::binning::weighted_quantile;
use super::fit::LogLogFit;
use super::{cumulate, kappa_fit, positive_part, MeasureError};
use crate::graph::{EventLog, Link, Replay, Step, Time, UserId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfluenceKind {
    /// Level is the number of friends already fans of an item.
    Exposure,
    /// Level is the number of items a user pair both favorite.
    SharedFavorites,
}

#[derive(Clone, Debug, Serialize)]
pub struct InfluenceEstimate {
    pub kind: InfluenceKind,
    /// Formations per level, indexed from level 0 (always empty).
    pub a: Vec<u64>,
    /// Exposures per level.
    pub c: Vec<u64>,
    /// Normalized `A(u)/C(u)`.
    pub pi: Vec<f64>,
    pub kappa: Vec<f64>,
    pub fit_window: Option<(u64, u64)>,
    pub fit: Option<LogLogFit>,
}

impl InfluenceEstimate {
    fn from_counts(kind: InfluenceKind, mut a: Vec<u64>, mut c: Vec<u64>) -> Self {
        let len = a.len().max(c.len());
        a.resize(len, 0);
        c.resize(len, 0);
        let ratio: Vec<f64> = a
            .iter()
            .zip(&c)
            .map(|(&a, &c)| if c > 0 { a as f64 / c as f64 } else { 0.0 })
            .collect();
        let norm: f64 = ratio.iter().sum();
        let pi: Vec<f64> = if norm > 0.0 {
            ratio.iter().map(|r| r / norm).collect()
        } else {
            vec![0.0; ratio.len()]
        };
        let kappa = cumulate(&pi);
        let fit_window = if norm > 0.0 {
            weighted_quantile(&positive_part(&c), 0.99).map(|hi| (1, hi))
        } else {
            None
        };
        let fit = fit_window.and_then(|w| kappa_fit(&kappa, &c, w));
        InfluenceEstimate {
            kind,
            a,
            c,
            pi,
            kappa,
            fit_window,
            fit,
        }
    }

    /// Influence exponent, `slope(κ) - 1`.
    pub fn exponent(&self) -> Result<f64, MeasureError> {
        self.fit
            .map(|f| f.slope - 1.0)
            .ok_or(MeasureError::DegenerateSupport {
                distinct: self.c.iter().skip(1).filter(|&&c| c > 0).count(),
                needed: super::fit::MIN_FIT_POINTS,
            })
    }
}

fn bump(hist: &mut Vec<u64>, level: usize, by: u64) {
    if hist.len() <= level {
        hist.resize(level + 1, 0);
    }
    hist[level] += by;
}

fn pair_key(a: u32, b: u32) -> u64 {
    ((a as u64) << 32) | b as u64
}

fn unordered_key(a: u32, b: u32) -> u64 {
    if a < b {
        pair_key(a, b)
    } else {
        pair_key(b, a)
    }
}

/// Exposure of users to items through their friends.
///
/// When `j` favorites `λ`, every friend `i` of `j` who is not yet a fan of
/// `λ` moves to exposure `e(i, λ) + 1`, and `C` at that level grows by one.
/// When `i` later favorites `λ` at exposure `e`, `A(e)` grows by one and the
/// pair stops being tracked.
pub fn exposure_influence(log: &EventLog) -> Result<InfluenceEstimate, MeasureError> {
    let mut exposure: HashMap<u64, u32> = HashMap::new();
    let mut a = vec![0u64];
    let mut c = vec![0u64];
    let mut replay = Replay::new(log);
    while let Some(step) = replay.advance(|graph, _, step| {
        let Step::AddLink(Link::Cross { user, item }, _) = step else {
            return;
        };
        if let Some(e) = exposure.remove(&pair_key(user.0, item.0)) {
            bump(&mut a, e as usize, 1);
        }
        for &i in graph.social_neighbors(*user) {
            if graph.is_fan(UserId(i), *item) {
                continue;
            }
            let e = exposure.entry(pair_key(i, item.0)).or_insert(0);
            *e += 1;
            bump(&mut c, *e as usize, 1);
        }
    }) {
        step?;
    }
    Ok(InfluenceEstimate::from_counts(
        InfluenceKind::Exposure,
        a,
        c,
    ))
}

/// Shared favorites between not-yet-linked user pairs.
///
/// A pair enters tracking when both become fans of one item and moves up a
/// level with every further common item. `C(z)` counts the time units a
/// pair spent at level `z` while unlinked, counting both the unit it
/// entered the level and the unit it left it. `A(z)` counts pairs that
/// became friends at level `z`. Pairs that are already friends are never
/// tracked; tracking ends when a pair links.
pub fn shared_favorites_influence(log: &EventLog) -> Result<InfluenceEstimate, MeasureError> {
    // level and the time it was entered
    let mut pairs: HashMap<u64, (u32, Time)> = HashMap::new();
    let mut a = vec![0u64];
    let mut c = vec![0u64];
    let mut replay = Replay::new(log);
    while let Some(step) = replay.advance(|graph, t, step| match *step {
        Step::AddLink(Link::Cross { user, item }, _) => {
            for &other in graph.fans(item) {
                if graph.are_friends(user, UserId(other)) {
                    continue;
                }
                let entry = pairs.entry(unordered_key(user.0, other)).or_insert((0, t));
                if entry.0 > 0 {
                    bump(&mut c, entry.0 as usize, (t - entry.1 + 1) as u64);
                }
                *entry = (entry.0 + 1, t);
            }
        }
        Step::AddLink(Link::Social { src, dst }, _) => {
            if graph.are_friends(src, dst) {
                return;
            }
            if let Some((z, since)) = pairs.remove(&unordered_key(src.0, dst.0)) {
                bump(&mut c, z as usize, (t - since + 1) as u64);
                bump(&mut a, z as usize, 1);
            }
        }
        _ => {}
    }) {
        step?;
    }
    if let Some(end) = log.last_time() {
        for (z, since) in pairs.into_values() {
            bump(&mut c, z as usize, (end - since + 1) as u64);
        }
    }
    Ok(InfluenceEstimate::from_counts(
        InfluenceKind::SharedFavorites,
        a,
        c,
    ))
}
