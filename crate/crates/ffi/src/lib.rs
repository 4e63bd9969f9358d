//! C interface to the simulator and measures.
//!
//! Every function returns a [`TnStatus`]. On failure a description is kept
//! per thread and can be read with [`tn_last_error_message`]. Handles are
//! opaque, owned by the caller and released with the matching `_free`
//! function; passing null to a `_free` function is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use triadic_net::graph::{DegreeKind, EventLog, LinkClass, Time};
use triadic_net::io::{load_log, save_log};
use triadic_net::measures::{degree_pcc, growth_stats, measure_pa, triadic_fraction};
use triadic_net::sim::{ModelParams, ResetPolicy, SimError, Simulator};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IoError = 3,
    ParseError = 4,
    MeasureError = 5,
    RunComplete = 6,
    Panic = 7,
}

/// Growth model parameters; fill with [`tn_model_params_default`] first.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TnModelParams {
    pub m: usize,
    pub n: usize,
    pub mu: f64,
    pub phi0: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub n0: usize,
    pub m0: usize,
    pub n_final: usize,
    pub seed: u64,
    pub walk_retries: usize,
    /// Nonzero: recipients of new social links are reset as well.
    pub reset_recipients: u8,
}

impl From<&ModelParams> for TnModelParams {
    fn from(p: &ModelParams) -> Self {
        TnModelParams {
            m: p.m,
            n: p.n,
            mu: p.mu,
            phi0: p.phi0,
            theta_min: p.theta_min,
            theta_max: p.theta_max,
            n0: p.n0,
            m0: p.m0,
            n_final: p.n_final,
            seed: p.seed,
            walk_retries: p.walk_retries,
            reset_recipients: u8::from(p.reset_policy == ResetPolicy::IncludeRecipients),
        }
    }
}

impl From<&TnModelParams> for ModelParams {
    fn from(p: &TnModelParams) -> Self {
        ModelParams {
            m: p.m,
            n: p.n,
            mu: p.mu,
            phi0: p.phi0,
            theta_min: p.theta_min,
            theta_max: p.theta_max,
            n0: p.n0,
            m0: p.m0,
            n_final: p.n_final,
            seed: p.seed,
            walk_retries: p.walk_retries,
            reset_policy: if p.reset_recipients != 0 {
                ResetPolicy::IncludeRecipients
            } else {
                ResetPolicy::Initiators
            },
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct TnTickReport {
    pub tick: i64,
    pub activated: usize,
    pub new_items: usize,
    pub social_links: usize,
    pub cross_links: usize,
    pub failed_walks: usize,
    pub triadic_links: usize,
}

/// Attachment exponents; NaN where no fit was possible.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TnPaResult {
    pub alpha: f64,
    pub alpha_triadic: f64,
    pub alpha_nontriadic: f64,
    pub windows: usize,
    pub links: u64,
}

/// Growth exponents; NaN where no fit was possible.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TnGrowthResult {
    pub beta_r: f64,
    pub beta_sigma: f64,
    pub nodes: usize,
}

/// A running simulation.
pub struct TnSimulation(Simulator);

/// An immutable event log.
pub struct TnLog(EventLog);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Failure = (TnStatus, String);

fn fail<T>(status: TnStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err((status, msg.into()))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TnStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TnStatus::Panic
        }
    }
}

unsafe fn reference<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| (TnStatus::NullPointer, format!("{what} is null")))
}

unsafe fn reference_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| (TnStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(TnStatus::NullPointer, format!("{what} is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TnStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn degree(p: *const c_char, what: &str) -> Result<DegreeKind, Failure> {
    let s = text(p, what)?;
    DegreeKind::parse(s).ok_or_else(|| (TnStatus::InvalidArgument, format!("unknown degree {s:?}")))
}

fn measured<T>(r: Result<T, triadic_net::measures::MeasureError>) -> Result<T, Failure> {
    r.map_err(|e| (TnStatus::MeasureError, e.to_string()))
}

fn nan_on_err<E>(r: Result<f64, E>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn tn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Writes the reference parameter set into `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_model_params_default(out: *mut TnModelParams) -> TnStatus {
    guard(|| {
        *reference_mut(out, "out")? = TnModelParams::from(&ModelParams::default());
        Ok(())
    })
}

/// Builds the seed network. On success `*out` owns a new handle.
///
/// # Safety
/// `params` must be null or point to a valid struct; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_simulation_new(
    params: *const TnModelParams,
    out: *mut *mut TnSimulation,
) -> TnStatus {
    guard(|| {
        let p = ModelParams::from(reference(params, "params")?);
        let out = reference_mut(out, "out")?;
        let sim = Simulator::new(p).map_err(|e| (TnStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(TnSimulation(sim)));
        Ok(())
    })
}

/// Advances one tick. Returns `RunComplete` once the target size is reached.
///
/// # Safety
/// `sim` must be a live handle; `report` may be null.
#[no_mangle]
pub unsafe extern "C" fn tn_simulation_step(
    sim: *mut TnSimulation,
    report: *mut TnTickReport,
) -> TnStatus {
    guard(|| {
        let sim = reference_mut(sim, "sim")?;
        let r = sim.0.step().map_err(|e| match e {
            SimError::RunComplete { .. } => (TnStatus::RunComplete, e.to_string()),
            SimError::InvalidParams(_) => (TnStatus::InvalidArgument, e.to_string()),
        })?;
        if let Some(out) = report.as_mut() {
            *out = TnTickReport {
                tick: r.tick,
                activated: r.activated,
                new_items: r.new_items,
                social_links: r.social_links,
                cross_links: r.cross_links,
                failed_walks: r.failed_walks,
                triadic_links: r.triadic_links,
            };
        }
        Ok(())
    })
}

/// Steps until the target number of users exists.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tn_simulation_run(sim: *mut TnSimulation) -> TnStatus {
    guard(|| {
        reference_mut(sim, "sim")?.0.run_to_end();
        Ok(())
    })
}

/// # Safety
/// `sim` must be a live handle; `users` and `items` may be null.
#[no_mangle]
pub unsafe extern "C" fn tn_simulation_size(
    sim: *const TnSimulation,
    users: *mut usize,
    items: *mut usize,
) -> TnStatus {
    guard(|| {
        let g = reference(sim, "sim")?.0.graph();
        if let Some(u) = users.as_mut() {
            *u = g.user_count();
        }
        if let Some(i) = items.as_mut() {
            *i = g.item_count();
        }
        Ok(())
    })
}

/// Copies the events so far into a new log handle.
///
/// # Safety
/// `sim` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_simulation_log(
    sim: *const TnSimulation,
    out: *mut *mut TnLog,
) -> TnStatus {
    guard(|| {
        let log = reference(sim, "sim")?.0.log().clone();
        *reference_mut(out, "out")? = Box::into_raw(Box::new(TnLog(log)));
        Ok(())
    })
}

/// # Safety
/// `sim` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tn_simulation_free(sim: *mut TnSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Reads a canonical log file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn tn_log_load(path: *const c_char, out: *mut *mut TnLog) -> TnStatus {
    guard(|| {
        let path = text(path, "path")?;
        let out = reference_mut(out, "out")?;
        let (log, _) = load_log(Path::new(path)).map_err(|e| match e {
            triadic_net::io::IoError::Io(_) => (TnStatus::IoError, e.to_string()),
            _ => (TnStatus::ParseError, e.to_string()),
        })?;
        *out = Box::into_raw(Box::new(TnLog(log)));
        Ok(())
    })
}

/// Writes a canonical log file.
///
/// # Safety
/// `log` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tn_log_save(log: *const TnLog, path: *const c_char) -> TnStatus {
    guard(|| {
        let log = reference(log, "log")?;
        let path = text(path, "path")?;
        save_log(&log.0, Path::new(path)).map_err(|e| (TnStatus::IoError, e.to_string()))
    })
}

/// # Safety
/// `log` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_log_len(log: *const TnLog, out: *mut usize) -> TnStatus {
    guard(|| {
        *reference_mut(out, "out")? = reference(log, "log")?.0.len();
        Ok(())
    })
}

/// # Safety
/// `log` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tn_log_free(log: *mut TnLog) {
    if !log.is_null() {
        drop(Box::from_raw(log));
    }
}

/// Attachment exponents of `gain` links against degree `by` (labels such as
/// `"kf"`, `"ks"`, `"kp"`), over windows `[t0s[i], t0s[i] + dt]`.
///
/// # Safety
/// `log` must be a live handle, `gain` and `by` NUL-terminated strings,
/// `t0s` valid for `n_t0` reads and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_measure_pa(
    log: *const TnLog,
    gain: *const c_char,
    by: *const c_char,
    t0s: *const i64,
    n_t0: usize,
    dt: i64,
    out: *mut TnPaResult,
) -> TnStatus {
    guard(|| {
        let log = reference(log, "log")?;
        let (gain, by) = (degree(gain, "gain")?, degree(by, "by")?);
        if t0s.is_null() && n_t0 > 0 {
            return fail(TnStatus::NullPointer, "t0s is null");
        }
        let t0s: &[Time] = if n_t0 == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(t0s, n_t0)
        };
        let out = reference_mut(out, "out")?;
        let est = measured(measure_pa(&log.0, by, gain, t0s, dt))?;
        *out = TnPaResult {
            alpha: nan_on_err(est.alpha()),
            alpha_triadic: nan_on_err(est.alpha_triadic()),
            alpha_nontriadic: nan_on_err(est.alpha_nontriadic()),
            windows: est.t0_used.len(),
            links: est.a().iter().sum(),
        };
        Ok(())
    })
}

/// Growth-rate exponents of degree `kind` between times `t0` and `t1`.
///
/// # Safety
/// `log` must be a live handle, `kind` a NUL-terminated string and `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_measure_growth(
    log: *const TnLog,
    kind: *const c_char,
    t0: i64,
    t1: i64,
    out: *mut TnGrowthResult,
) -> TnStatus {
    guard(|| {
        let log = reference(log, "log")?;
        let kind = degree(kind, "kind")?;
        let out = reference_mut(out, "out")?;
        let g = measured(growth_stats(&log.0, kind, t0, t1))?;
        *out = TnGrowthResult {
            beta_r: nan_on_err(g.beta_r()),
            beta_sigma: nan_on_err(g.beta_sigma()),
            nodes: g.nodes,
        };
        Ok(())
    })
}

/// Pearson correlation of two user degrees on the final snapshot.
///
/// # Safety
/// `log` must be a live handle, `a` and `b` NUL-terminated strings and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_measure_pcc(
    log: *const TnLog,
    a: *const c_char,
    b: *const c_char,
    out: *mut f64,
) -> TnStatus {
    guard(|| {
        let log = reference(log, "log")?;
        let (a, b) = (degree(a, "a")?, degree(b, "b")?);
        let out = reference_mut(out, "out")?;
        let g = log
            .0
            .final_graph()
            .map_err(|e| (TnStatus::ParseError, e.to_string()))?;
        *out = measured(degree_pcc(&g, a, b))?;
        Ok(())
    })
}

/// Share of explicit links that closed a triangle: `social` nonzero for
/// social links, zero for favorites.
///
/// # Safety
/// `log` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_measure_triadic_fraction(
    log: *const TnLog,
    social: u8,
    out: *mut f64,
) -> TnStatus {
    guard(|| {
        let log = reference(log, "log")?;
        let out = reference_mut(out, "out")?;
        let class = if social != 0 {
            LinkClass::Social
        } else {
            LinkClass::Cross
        };
        *out = measured(triadic_fraction(&log.0, class))?;
        Ok(())
    })
}
