//! Preferential-attachment kernel: how the growth of one degree depends on
//! the current value of another.
//!
//! Nodes present at `t0` are binned by their `x` degree (`C(x)` nodes per
//! value). Over `(t0, t0 + dt]` the `y`-degree gains of those nodes are
//! accumulated into `A_T(x)` / `A_N(x)` according to whether each link
//! closed a triangle when it formed. The relative attachment probability
//! `Π(x) = (A(x)/C(x)) / Σ A(x')/C(x')` is averaged across windows and
//! cumulated into `κ(x)`, which grows as `x^(α+1)` under a power-law kernel.

use serde::Serialize;

use super::binning::weighted_quantile;
use super::fit::{fit_loglog_slope, LogLogFit};
use super::MeasureError;
use crate::graph::{DegreeKind, DualGraph, EventLog, Link, Replay, Step, Time};

#[derive(Clone, Debug, Serialize)]
pub struct PaEstimate {
    /// Degree the t0 nodes are binned by.
    pub x_kind: DegreeKind,
    /// Degree whose gains are counted.
    pub y_kind: DegreeKind,
    pub dt: Time,
    /// Window starts that saw at least one gain.
    pub t0_used: Vec<Time>,
    /// Gains through triadic links, summed over windows, indexed by `x`.
    pub a_triadic: Vec<u64>,
    pub a_nontriadic: Vec<u64>,
    /// t0 nodes per `x`, summed over windows.
    pub c: Vec<u64>,
    pub pi_triadic: Vec<f64>,
    pub pi_nontriadic: Vec<f64>,
    pub pi: Vec<f64>,
    pub kappa_triadic: Vec<f64>,
    pub kappa_nontriadic: Vec<f64>,
    pub kappa: Vec<f64>,
    /// Inclusive `x` range the fits may use.
    pub fit_window: Option<(u64, u64)>,
    pub fit: Option<LogLogFit>,
    pub fit_triadic: Option<LogLogFit>,
    pub fit_nontriadic: Option<LogLogFit>,
}

impl PaEstimate {
    pub fn a(&self) -> Vec<u64> {
        self.a_triadic
            .iter()
            .zip(&self.a_nontriadic)
            .map(|(t, n)| t + n)
            .collect()
    }

    /// Kernel exponent from all links, `slope(κ) - 1`.
    pub fn alpha(&self) -> Result<f64, MeasureError> {
        alpha_of(&self.fit)
    }

    pub fn alpha_triadic(&self) -> Result<f64, MeasureError> {
        alpha_of(&self.fit_triadic)
    }

    pub fn alpha_nontriadic(&self) -> Result<f64, MeasureError> {
        alpha_of(&self.fit_nontriadic)
    }
}

fn alpha_of(fit: &Option<LogLogFit>) -> Result<f64, MeasureError> {
    fit.map(|f| f.slope - 1.0)
        .ok_or(MeasureError::DegenerateSupport {
            distinct: 0,
            needed: super::fit::MIN_FIT_POINTS,
        })
}

fn check_kinds(x: DegreeKind, y: DegreeKind) -> Result<(), MeasureError> {
    let ok = (x.is_user_degree() && y.is_user_degree())
        || (x == DegreeKind::Popular && y == DegreeKind::Popular);
    if ok {
        Ok(())
    } else {
        Err(MeasureError::InvalidKinds(format!(
            "{} / {} is not a user-user or item-item pair",
            x.label(),
            y.label()
        )))
    }
}

/// Nodes whose `kind` degree grows by one when `link` is inserted into
/// `graph`. At most two nodes gain from a single link.
pub(crate) fn gainers(graph: &DualGraph, link: &Link, kind: DegreeKind) -> [Option<usize>; 2] {
    match (*link, kind) {
        (Link::Social { src, dst }, DegreeKind::Social | DegreeKind::Total) => {
            if graph.is_directed() && graph.are_friends(src, dst) {
                [None, None]
            } else {
                [Some(src.index()), Some(dst.index())]
            }
        }
        (Link::Social { src, .. }, DegreeKind::Out) => [Some(src.index()), None],
        (Link::Social { dst, .. }, DegreeKind::In) => [Some(dst.index()), None],
        (Link::Cross { user, .. }, DegreeKind::Favorite | DegreeKind::Total) => {
            [Some(user.index()), None]
        }
        (Link::Cross { item, .. }, DegreeKind::Popular) => [Some(item.index()), None],
        _ => [None, None],
    }
}

struct Window {
    t0: Time,
    end: Time,
    x0: Vec<u32>,
    a_t: Vec<u64>,
    a_n: Vec<u64>,
}

impl Window {
    fn record(&mut self, node: usize, triadic: bool) {
        let Some(&x) = self.x0.get(node) else {
            return;
        };
        let x = x as usize;
        if self.a_t.len() <= x {
            self.a_t.resize(x + 1, 0);
            self.a_n.resize(x + 1, 0);
        }
        if triadic {
            self.a_t[x] += 1;
        } else {
            self.a_n[x] += 1;
        }
    }
}

/// Measures the attachment kernel of `y` gains against `x` over the windows
/// `(t0, t0 + dt]` for every `t0` in `t0s`.
pub fn measure_pa(
    log: &EventLog,
    x_kind: DegreeKind,
    y_kind: DegreeKind,
    t0s: &[Time],
    dt: Time,
) -> Result<PaEstimate, MeasureError> {
    let mut out = measure_pa_grid(log, &[(x_kind, y_kind)], t0s, dt)?;
    out.pop().expect("one pair requested")
}

/// [`measure_pa`] for several `(x, y)` pairs sharing one replay of the log.
/// Each pair's result is independent of the others.
pub fn measure_pa_grid(
    log: &EventLog,
    pairs: &[(DegreeKind, DegreeKind)],
    t0s: &[Time],
    dt: Time,
) -> Result<Vec<Result<PaEstimate, MeasureError>>, MeasureError> {
    for &(x, y) in pairs {
        check_kinds(x, y)?;
    }
    if dt <= 0 {
        return Err(MeasureError::InvalidWindow(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let mut starts: Vec<Time> = t0s.to_vec();
    starts.sort_unstable();
    starts.dedup();
    if starts.is_empty() {
        return Err(MeasureError::InvalidWindow("no window starts given".into()));
    }
    for &t0 in &starts {
        log.check_time(t0)?;
        log.check_time(t0 + dt)?;
    }

    // windows[p] holds pair p's windows in start order
    let mut windows: Vec<Vec<Window>> = pairs.iter().map(|_| Vec::new()).collect();
    let mut opened = 0;
    let mut replay = Replay::new(log);
    let last_end = starts[starts.len() - 1] + dt;
    let open = |graph: &DualGraph, t0: Time, windows: &mut Vec<Vec<Window>>| {
        for (p, &(x, _)) in pairs.iter().enumerate() {
            windows[p].push(Window {
                t0,
                end: t0 + dt,
                x0: graph.degree_vector(x),
                a_t: Vec::new(),
                a_n: Vec::new(),
            });
        }
    };
    while let Some(time) = replay.peek_time() {
        // open every window whose t0 precedes the next step
        while opened < starts.len() && starts[opened] < time {
            open(replay.graph(), starts[opened], &mut windows);
            opened += 1;
        }
        if time > last_end {
            break;
        }
        let active = opened > 0 && time <= starts[opened - 1] + dt;
        let step = replay.advance(|graph, t, step| {
            if !active {
                return;
            }
            let Step::AddLink(link, _) = step else { return };
            let mut triadic = None;
            for (p, &(_, y)) in pairs.iter().enumerate() {
                let gain = gainers(graph, link, y);
                if gain.iter().all(Option::is_none) {
                    continue;
                }
                let tri = *triadic.get_or_insert_with(|| graph.closes_triangle(link));
                for w in windows[p].iter_mut().filter(|w| t > w.t0 && t <= w.end) {
                    for node in gain.iter().flatten() {
                        w.record(*node, tri);
                    }
                }
            }
        });
        match step {
            Some(Ok(_)) => {}
            Some(Err(e)) => return Err(e.into()),
            None => break,
        }
    }
    // windows starting at or after the final event time
    while opened < starts.len() {
        open(replay.graph(), starts[opened], &mut windows);
        opened += 1;
    }
    Ok(pairs
        .iter()
        .zip(windows)
        .map(|(&(x, y), w)| combine(x, y, dt, w))
        .collect())
}

fn combine(
    x_kind: DegreeKind,
    y_kind: DegreeKind,
    dt: Time,
    windows: Vec<Window>,
) -> Result<PaEstimate, MeasureError> {
    let width = windows
        .iter()
        .map(|w| w.x0.iter().copied().max().map_or(0, |m| m as usize + 1))
        .max()
        .unwrap_or(0);
    let mut c_total = vec![0u64; width];
    let mut a_t_total = vec![0u64; width];
    let mut a_n_total = vec![0u64; width];
    let mut pi_t = vec![0f64; width];
    let mut pi_n = vec![0f64; width];
    let mut used = Vec::new();

    for w in &windows {
        let mut c = vec![0u64; width];
        for &x in &w.x0 {
            c[x as usize] += 1;
        }
        let a_t = |x: usize| w.a_t.get(x).copied().unwrap_or(0);
        let a_n = |x: usize| w.a_n.get(x).copied().unwrap_or(0);
        let norm: f64 = (0..width)
            .filter(|&x| c[x] > 0)
            .map(|x| (a_t(x) + a_n(x)) as f64 / c[x] as f64)
            .sum();
        if norm == 0.0 {
            continue;
        }
        used.push(w.t0);
        for x in 0..width {
            c_total[x] += c[x];
            a_t_total[x] += a_t(x);
            a_n_total[x] += a_n(x);
            if c[x] > 0 {
                pi_t[x] += a_t(x) as f64 / c[x] as f64 / norm;
                pi_n[x] += a_n(x) as f64 / c[x] as f64 / norm;
            }
        }
    }
    if used.is_empty() {
        return Err(MeasureError::EmptyWindow);
    }
    let k = used.len() as f64;
    pi_t.iter_mut().for_each(|p| *p /= k);
    pi_n.iter_mut().for_each(|p| *p /= k);
    let pi: Vec<f64> = pi_t.iter().zip(&pi_n).map(|(a, b)| a + b).collect();
    let kappa_t = cumulate(&pi_t);
    let kappa_n = cumulate(&pi_n);
    let kappa = cumulate(&pi);

    let upper = weighted_quantile(&positive_part(&c_total), 0.99);
    let fit_window = upper.map(|hi| (1, hi));
    let fit_of = |kap: &[f64]| fit_window.and_then(|w| kappa_fit(kap, &c_total, w));
    Ok(PaEstimate {
        x_kind,
        y_kind,
        dt,
        t0_used: used,
        fit: fit_of(&kappa),
        fit_triadic: fit_of(&kappa_t),
        fit_nontriadic: fit_of(&kappa_n),
        a_triadic: a_t_total,
        a_nontriadic: a_n_total,
        c: c_total,
        pi_triadic: pi_t,
        pi_nontriadic: pi_n,
        pi,
        kappa_triadic: kappa_t,
        kappa_nontriadic: kappa_n,
        kappa,
        fit_window,
    })
}

/// Histogram with the `x = 0` entry zeroed.
pub(crate) fn positive_part(weights: &[u64]) -> Vec<u64> {
    let mut w = weights.to_vec();
    if let Some(first) = w.first_mut() {
        *first = 0;
    }
    w
}

pub(crate) fn cumulate(values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    values
        .iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}

/// Fits `κ` over `x` values that carry support, from the first positive
/// `κ(x)` with `x >= window.0` up to `window.1`.
pub(crate) fn kappa_fit(kappa: &[f64], support: &[u64], window: (u64, u64)) -> Option<LogLogFit> {
    let (lo, hi) = window;
    let start = (lo as usize..kappa.len()).find(|&x| kappa[x] > 0.0)?;
    let pts: Vec<(f64, f64)> = (start..kappa.len())
        .filter(|&x| x as u64 <= hi && support.get(x).copied().unwrap_or(0) > 0)
        .map(|x| (x as f64, kappa[x]))
        .collect();
    fit_loglog_slope(&pts, None).ok()
}
