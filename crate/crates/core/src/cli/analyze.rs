use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::AnalysisConfig;
use super::CliError;
use crate::graph::{DegreeKind, DualGraph, EventLog, LinkClass, Time};
use crate::io::write_curve_csv;
use crate::measures::{
    default_t0s, degree_distribution, degree_pcc, exposure_influence, growth_stats,
    measure_pa_grid, nn_degree_curves, segments, shared_favorites_influence, triadic_counts,
    windows_within_segments, InfluenceEstimate, InfluenceKind, LogLogFit, MeasureError, PaEstimate,
};

/// One requested measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// Attachment of `gain` links to nodes conditioned on degree `by`.
    Pa {
        gain: DegreeKind,
        by: DegreeKind,
    },
    Growth(DegreeKind),
    Distribution(DegreeKind),
    Pcc(DegreeKind, DegreeKind),
    NearestNeighbors,
    Influence(InfluenceKind),
    Triadic,
}

fn kind(s: &str) -> Result<DegreeKind, String> {
    DegreeKind::parse(s).ok_or_else(|| format!("unknown degree {s:?}"))
}

impl FromStr for Measure {
    type Err = String;

    /// `pa:<gain>:<by>`, `growth:<k>`, `dist:<k>`, `pcc:<a>:<b>`, `nn`,
    /// `influence:exposure`, `influence:shared` or `triadic`.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let m = match parts.as_slice() {
            ["pa", g, b] => Measure::Pa {
                gain: kind(g)?,
                by: kind(b)?,
            },
            ["growth", k] => Measure::Growth(kind(k)?),
            ["dist", k] => Measure::Distribution(kind(k)?),
            ["pcc", a, b] => Measure::Pcc(kind(a)?, kind(b)?),
            ["nn"] => Measure::NearestNeighbors,
            ["influence", "exposure"] => Measure::Influence(InfluenceKind::Exposure),
            ["influence", "shared"] => Measure::Influence(InfluenceKind::SharedFavorites),
            ["triadic"] => Measure::Triadic,
            _ => return Err(format!("unknown measurement {s:?}")),
        };
        Ok(m)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Pa { gain, by } => write!(f, "pa:{}:{}", gain.label(), by.label()),
            Measure::Growth(k) => write!(f, "growth:{}", k.label()),
            Measure::Distribution(k) => write!(f, "dist:{}", k.label()),
            Measure::Pcc(a, b) => write!(f, "pcc:{}:{}", a.label(), b.label()),
            Measure::NearestNeighbors => f.write_str("nn"),
            Measure::Influence(InfluenceKind::Exposure) => f.write_str("influence:exposure"),
            Measure::Influence(InfluenceKind::SharedFavorites) => f.write_str("influence:shared"),
            Measure::Triadic => f.write_str("triadic"),
        }
    }
}

impl Measure {
    /// File stem for this measurement's curves.
    pub fn stem(&self) -> String {
        self.to_string().replace(':', "_")
    }
}

/// Named numeric columns, written as one CSV file.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub file: String,
    pub names: Vec<&'static str>,
    pub columns: Vec<Vec<f64>>,
}

impl Curve {
    fn write(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join(&self.file);
        let file = std::fs::File::create(&path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let cols: Vec<&[f64]> = self.columns.iter().map(|c| c.as_slice()).collect();
        write_curve_csv(&self.names, &cols, std::io::BufWriter::new(file))?;
        Ok(())
    }
}

/// Result of one measurement: a JSON summary plus plot-ready curves.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub measure: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub result: Value,
    #[serde(skip)]
    pub curves: Vec<Curve>,
}

impl Outcome {
    fn failed(m: &Measure, e: impl fmt::Display) -> Self {
        Outcome {
            measure: m.to_string(),
            ok: false,
            error: Some(e.to_string()),
            result: Value::Null,
            curves: Vec::new(),
        }
    }

    fn success(m: &Measure, result: Value, curves: Vec<Curve>) -> Self {
        Outcome {
            measure: m.to_string(),
            ok: true,
            error: None,
            result,
            curves,
        }
    }
}

fn as_f64(v: &[u64]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

fn fit_json(fit: &Option<LogLogFit>) -> Value {
    match fit {
        Some(f) => json!({
            "slope": f.slope, "stderr": f.stderr, "r_squared": f.r_squared,
            "points": f.points, "x_min": f.x_min, "x_max": f.x_max,
        }),
        None => Value::Null,
    }
}

fn ok_or_null(r: Result<f64, MeasureError>) -> Value {
    r.map_or(Value::Null, Value::from)
}

fn pad(v: &[f64], len: usize) -> Vec<f64> {
    let mut out = v.to_vec();
    out.resize(len, f64::NAN);
    out
}

pub fn pa_outcome(m: &Measure, est: &PaEstimate) -> Outcome {
    let len = est.c.len();
    let x: Vec<f64> = (0..len).map(|k| k as f64).collect();
    let curve = Curve {
        file: format!("{}.csv", m.stem()),
        names: vec![
            "x",
            "c",
            "a_triadic",
            "a_nontriadic",
            "pi",
            "pi_triadic",
            "pi_nontriadic",
            "kappa",
            "kappa_triadic",
            "kappa_nontriadic",
        ],
        columns: vec![
            x,
            as_f64(&est.c),
            pad(&as_f64(&est.a_triadic), len),
            pad(&as_f64(&est.a_nontriadic), len),
            pad(&est.pi, len),
            pad(&est.pi_triadic, len),
            pad(&est.pi_nontriadic, len),
            pad(&est.kappa, len),
            pad(&est.kappa_triadic, len),
            pad(&est.kappa_nontriadic, len),
        ],
    };
    let links: u64 = est.a().iter().sum();
    let triadic: u64 = est.a_triadic.iter().sum();
    let result = json!({
        "alpha": ok_or_null(est.alpha()),
        "alpha_triadic": ok_or_null(est.alpha_triadic()),
        "alpha_nontriadic": ok_or_null(est.alpha_nontriadic()),
        "fit": fit_json(&est.fit),
        "fit_triadic": fit_json(&est.fit_triadic),
        "fit_nontriadic": fit_json(&est.fit_nontriadic),
        "fit_window": est.fit_window,
        "dt": est.dt,
        "windows": est.t0_used.len(),
        "links": links,
        "triadic_links": triadic,
    });
    Outcome::success(m, result, vec![curve])
}

fn influence_outcome(m: &Measure, est: &InfluenceEstimate) -> Outcome {
    let len = est.c.len();
    let curve = Curve {
        file: format!("{}.csv", m.stem()),
        names: vec!["x", "c", "a", "pi", "kappa"],
        columns: vec![
            (0..len).map(|k| k as f64).collect(),
            as_f64(&est.c),
            pad(&as_f64(&est.a), len),
            pad(&est.pi, len),
            pad(&est.kappa, len),
        ],
    };
    let result = json!({
        "exponent": ok_or_null(est.exponent()),
        "fit": fit_json(&est.fit),
        "fit_window": est.fit_window,
        "links": est.a.iter().sum::<u64>(),
    });
    Outcome::success(m, result, vec![curve])
}

/// Runs a measurement that only needs the final snapshot or one pass over
/// the log.
fn run_single(m: &Measure, log: &EventLog, graph: &DualGraph, cfg: &AnalysisConfig) -> Outcome {
    let stem = m.stem();
    match *m {
        Measure::Pa { .. } => unreachable!("attachment measurements run as a grid"),
        Measure::Growth(k) => {
            let (Some(first), Some(last)) = (log.first_time(), log.last_time()) else {
                return Outcome::failed(m, MeasureError::EmptyWindow);
            };
            let t1 = cfg.growth_t1.unwrap_or(last);
            let t0 = cfg.growth_t0.unwrap_or(t1 - (last - first) / 10);
            match growth_stats(log, k, t0, t1) {
                Err(e) => Outcome::failed(m, e),
                Ok(g) => {
                    let col = |f: fn(&crate::measures::Bin) -> f64| g.bins.iter().map(f).collect();
                    let curve = Curve {
                        file: format!("{stem}.csv"),
                        names: vec!["k_lo", "k_hi", "count", "k_mean", "r_mean", "r_std"],
                        columns: vec![
                            col(|b| b.lo as f64),
                            col(|b| b.hi as f64),
                            col(|b| b.count as f64),
                            col(|b| b.x_mean),
                            col(|b| b.y_mean),
                            col(|b| b.y_std),
                        ],
                    };
                    let result = json!({
                        "beta_r": ok_or_null(g.beta_r()),
                        "beta_sigma": ok_or_null(g.beta_sigma()),
                        "fit_r": fit_json(&g.fit_r),
                        "fit_sigma": fit_json(&g.fit_sigma),
                        "t0": g.t0, "t1": g.t1, "nodes": g.nodes,
                    });
                    Outcome::success(m, result, vec![curve])
                }
            }
        }
        Measure::Distribution(k) => match degree_distribution(graph, k) {
            Err(e) => Outcome::failed(m, e),
            Ok(d) => {
                let curve = Curve {
                    file: format!("{stem}.csv"),
                    names: vec!["k_lo", "k_hi", "count", "k_mean", "pdf"],
                    columns: vec![
                        d.bins.iter().map(|b| b.lo as f64).collect(),
                        d.bins.iter().map(|b| b.hi as f64).collect(),
                        d.bins.iter().map(|b| b.count as f64).collect(),
                        d.bins.iter().map(|b| b.x_mean).collect(),
                        d.bins.iter().map(|b| b.pdf).collect(),
                    ],
                };
                let result = json!({
                    "exponent": ok_or_null(d.exponent()),
                    "fit": fit_json(&d.fit),
                    "nodes": d.nodes, "mean": d.mean, "max": d.max,
                });
                Outcome::success(m, result, vec![curve])
            }
        },
        Measure::Pcc(a, b) => match degree_pcc(graph, a, b) {
            Err(e) => Outcome::failed(m, e),
            Ok(r) => Outcome::success(
                m,
                json!({ "pcc": r, "users": graph.user_count() }),
                Vec::new(),
            ),
        },
        Measure::NearestNeighbors => match nn_degree_curves(graph) {
            Err(e) => Outcome::failed(m, e),
            Ok(nn) => {
                let points = |name: &str, pts: &[crate::measures::CurvePoint]| Curve {
                    file: format!("nn_{name}.csv"),
                    names: vec!["k", "knn_mean", "count"],
                    columns: vec![
                        pts.iter().map(|p| p.x as f64).collect(),
                        pts.iter().map(|p| p.y).collect(),
                        pts.iter().map(|p| p.count as f64).collect(),
                    ],
                };
                let bins = |name: &str, bins: &[crate::measures::Bin]| Curve {
                    file: format!("nn_{name}_binned.csv"),
                    names: vec!["k_lo", "k_hi", "count", "k_mean", "knn_mean", "knn_std"],
                    columns: vec![
                        bins.iter().map(|b| b.lo as f64).collect(),
                        bins.iter().map(|b| b.hi as f64).collect(),
                        bins.iter().map(|b| b.count as f64).collect(),
                        bins.iter().map(|b| b.x_mean).collect(),
                        bins.iter().map(|b| b.y_mean).collect(),
                        bins.iter().map(|b| b.y_std).collect(),
                    ],
                };
                let result = json!({
                    "user_slope": ok_or_null(nn.user_curve_fit().map(|f| f.slope)),
                    "item_tail_slope": ok_or_null(nn.item_curve_tail_fit().map(|f| f.slope)),
                    "user_fit": fit_json(&nn.user_curve_fit().ok()),
                    "item_tail_fit": fit_json(&nn.item_curve_tail_fit().ok()),
                });
                let curves = vec![
                    points("user", &nn.user_curve),
                    points("item", &nn.item_curve),
                    bins("user", &nn.user_bins),
                    bins("item", &nn.item_bins),
                ];
                Outcome::success(m, result, curves)
            }
        },
        Measure::Influence(kind) => {
            let est = match kind {
                InfluenceKind::Exposure => exposure_influence(log),
                InfluenceKind::SharedFavorites => shared_favorites_influence(log),
            };
            match est {
                Err(e) => Outcome::failed(m, e),
                Ok(est) => influence_outcome(m, &est),
            }
        }
        Measure::Triadic => match triadic_counts(log) {
            Err(e) => Outcome::failed(m, e),
            Ok(c) => {
                let result = json!({
                    "social_triadic": c.social_triadic,
                    "social_total": c.social_total,
                    "cross_triadic": c.cross_triadic,
                    "cross_total": c.cross_total,
                    "social_fraction": ok_or_null(c.fraction(LinkClass::Social)),
                    "cross_fraction": ok_or_null(c.fraction(LinkClass::Cross)),
                });
                Outcome::success(m, result, Vec::new())
            }
        },
    }
}

/// Window starts for attachment measurements after the segment policy.
pub fn window_starts(log: &EventLog, cfg: &AnalysisConfig) -> Vec<Time> {
    let t0s = if cfg.t0.is_empty() {
        default_t0s(log, cfg.windows, cfg.dt)
    } else {
        cfg.t0.clone()
    };
    windows_within_segments(
        &t0s,
        cfg.dt,
        &segments(log, cfg.max_gap),
        cfg.segment_policy,
    )
}

/// Runs every measurement, attachment ones as one shared pass and the rest
/// spread over `threads` workers. Output order follows `measures`.
pub fn run_measures(
    log: &EventLog,
    measures: &[Measure],
    cfg: &AnalysisConfig,
    threads: usize,
) -> Result<Vec<Outcome>, CliError> {
    let mut out: Vec<Option<Outcome>> = vec![None; measures.len()];
    let pa: Vec<usize> = (0..measures.len())
        .filter(|&k| matches!(measures[k], Measure::Pa { .. }))
        .collect();
    let rest: Vec<usize> = (0..measures.len()).filter(|k| !pa.contains(k)).collect();

    if !pa.is_empty() {
        let pairs: Vec<(DegreeKind, DegreeKind)> = pa
            .iter()
            .map(|&k| match measures[k] {
                Measure::Pa { gain, by } => (by, gain),
                _ => unreachable!(),
            })
            .collect();
        let t0s = window_starts(log, cfg);
        log::info!("attachment measurements over {} windows", t0s.len());
        // defaults that leave no window mean the log is too short
        let grid = if t0s.is_empty() && cfg.t0.is_empty() {
            Err(MeasureError::EmptyWindow)
        } else {
            measure_pa_grid(log, &pairs, &t0s, cfg.dt)
        };
        match grid {
            Ok(results) => {
                for (&k, r) in pa.iter().zip(results) {
                    out[k] = Some(match r {
                        Ok(est) => pa_outcome(&measures[k], &est),
                        Err(e) => Outcome::failed(&measures[k], e),
                    });
                }
            }
            Err(e) => {
                for &k in &pa {
                    out[k] = Some(Outcome::failed(&measures[k], &e));
                }
            }
        }
    }

    if !rest.is_empty() {
        let graph = log.final_graph()?;
        let next = AtomicUsize::new(0);
        let done = Mutex::new(Vec::new());
        std::thread::scope(|s| {
            for _ in 0..threads.min(rest.len()) {
                s.spawn(|| loop {
                    let j = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&k) = rest.get(j) else { break };
                    log::info!("running {}", measures[k]);
                    let o = run_single(&measures[k], log, &graph, cfg);
                    done.lock().expect("worker panicked").push((k, o));
                });
            }
        });
        for (k, o) in done.into_inner().expect("worker panicked") {
            out[k] = Some(o);
        }
    }
    Ok(out
        .into_iter()
        .map(|o| o.expect("every measurement ran"))
        .collect())
}

/// Writes each outcome's curves into `dir`.
pub fn write_curves(outcomes: &[Outcome], dir: &Path) -> Result<(), CliError> {
    for o in outcomes {
        for c in &o.curves {
            c.write(dir)?;
        }
    }
    Ok(())
}
