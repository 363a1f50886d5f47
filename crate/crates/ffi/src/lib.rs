//! C ABI over `h2match-core`.
//!
//! Cases and reports are opaque handles created and freed by this library.
//! Every function returns an [`H2mStatus`]; on failure the message is
//! available from [`h2m_last_error`] on the same thread until the next
//! failing call. Panics are caught at the boundary and reported as
//! `H2M_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use h2match_core::analysis::{build_report, eac_cost, CaseReport, Solved};
use h2match_core::domain::{annuitize, load_case, validate_case, DomainError, SystemCase};
use h2match_core::lp::{solve, SolveOptions};
use h2match_core::model::{assemble, Mode, ModelError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H2mStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed input: bad UTF-8, unparsable case, failed validation.
    InvalidInput = 2,
    Io = 3,
    /// The LP could not be built or was not solved to optimality.
    SolveFailed = 4,
    /// The requested quantity does not exist for this report.
    NotAvailable = 5,
    Panic = 6,
}

/// Single-scenario design; the case must hold exactly one scenario.
pub const H2M_MODE_DETERMINISTIC: i32 = 0;
/// Design over every scenario of the case, weighted by probability.
pub const H2M_MODE_STOCHASTIC: i32 = 1;
/// The case without the hydrogen project, solved stochastically.
pub const H2M_MODE_BASELINE: i32 = 2;

/// A loaded problem instance.
pub struct H2mCase {
    case: SystemCase,
}

/// Metrics of one solved case.
pub struct H2mReport {
    report: CaseReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    let c = CString::new(msg).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(H2mStatus, String);

impl Failure {
    fn new(status: H2mStatus, msg: impl Into<String>) -> Self {
        Failure(status, msg.into())
    }
}

impl From<DomainError> for Failure {
    fn from(e: DomainError) -> Self {
        let status = if matches!(e, DomainError::Io { .. }) { H2mStatus::Io } else { H2mStatus::InvalidInput };
        Failure(status, e.to_string())
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let status = if matches!(e, ModelError::Lp(_)) { H2mStatus::SolveFailed } else { H2mStatus::InvalidInput };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, translating failures and panics into a status and the
/// thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> H2mStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => H2mStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            H2mStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure::new(H2mStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(H2mStatus::InvalidInput, format!("`{name}` is not valid UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn case_arg<'a>(p: *const H2mCase) -> Result<&'a SystemCase, Failure> {
    p.as_ref().map(|c| &c.case).ok_or_else(|| null("case"))
}

unsafe fn report_arg<'a>(p: *const H2mReport) -> Result<&'a CaseReport, Failure> {
    p.as_ref().map(|r| &r.report).ok_or_else(|| null("report"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn h2m_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn h2m_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Equal annual payment recovering `capex` over `lifetime` years at `rate`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn h2m_annuitize(capex: f64, lifetime: f64, rate: f64, out: *mut f64) -> H2mStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = annuitize(capex, lifetime, rate)?;
        Ok(())
    })
}

/// Certificate cost in $/kg for `consumption` MWh/t, certificate `share`
/// and `price` $/MWh.
#[no_mangle]
pub extern "C" fn h2m_eac_cost(consumption: f64, share: f64, price: f64) -> f64 {
    eac_cost(consumption, share, price)
}

/// Loads a case file (TOML, or JSON by extension) with its CSV series.
///
/// # Safety
/// `path` must be null or a NUL-terminated string; `out` must be null or
/// writable. On success `*out` owns a case to release with [`h2m_case_free`].
#[no_mangle]
pub unsafe extern "C" fn h2m_case_load(path: *const c_char, out: *mut *mut H2mCase) -> H2mStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        let case = load_case(Path::new(path))?;
        *out = Box::into_raw(Box::new(H2mCase { case }));
        Ok(())
    })
}

/// Builds a case from its JSON serialization, series inline.
///
/// # Safety
/// As for [`h2m_case_load`].
#[no_mangle]
pub unsafe extern "C" fn h2m_case_from_json(json: *const c_char, out: *mut *mut H2mCase) -> H2mStatus {
    guard(|| {
        let json = str_arg(json, "json")?;
        let out = out_arg(out, "out")?;
        let case: SystemCase =
            serde_json::from_str(json).map_err(|e| Failure::new(H2mStatus::InvalidInput, format!("case JSON: {e}")))?;
        *out = Box::into_raw(Box::new(H2mCase { case }));
        Ok(())
    })
}

/// Releases a case; null is ignored.
///
/// # Safety
/// `case` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn h2m_case_free(case: *mut H2mCase) {
    if !case.is_null() {
        drop(Box::from_raw(case));
    }
}

/// Writes the number of modeled hours and scenarios.
///
/// # Safety
/// `case` must be a live handle or null; outputs must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn h2m_case_dimensions(
    case: *const H2mCase,
    hours: *mut usize,
    scenarios: *mut usize,
) -> H2mStatus {
    guard(|| {
        let case = case_arg(case)?;
        *out_arg(hours, "hours")? = case.hours();
        *out_arg(scenarios, "scenarios")? = case.scenarios.len();
        Ok(())
    })
}

/// Checks the case. Writes the violation count to `count`; returns
/// `H2M_STATUS_INVALID_INPUT` with every violation in the last error when
/// the count is nonzero.
///
/// # Safety
/// `case` must be a live handle or null; `count` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn h2m_case_validate(case: *const H2mCase, count: *mut usize) -> H2mStatus {
    guard(|| {
        let case = case_arg(case)?;
        let count = out_arg(count, "count")?;
        let violations = validate_case(case);
        *count = violations.len();
        if violations.is_empty() {
            return Ok(());
        }
        let msg = violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n");
        Err(Failure::new(H2mStatus::InvalidInput, msg))
    })
}

/// Builds and solves the case with the embedded solver, then computes its
/// report. `mode` is one of the `H2M_MODE_*` constants.
///
/// # Safety
/// `case` must be a live handle or null; `out` must be null or writable.
/// On success `*out` owns a report to release with [`h2m_report_free`].
#[no_mangle]
pub unsafe extern "C" fn h2m_case_solve(case: *const H2mCase, mode: i32, out: *mut *mut H2mReport) -> H2mStatus {
    guard(|| {
        let case = case_arg(case)?;
        let out = out_arg(out, "out")?;
        let (case, mode) = match mode {
            H2M_MODE_DETERMINISTIC => (case.clone(), Mode::Deterministic),
            H2M_MODE_STOCHASTIC => (case.clone(), Mode::Stochastic),
            H2M_MODE_BASELINE => (case.without_h2(), Mode::Stochastic),
            m => return Err(Failure::new(H2mStatus::InvalidInput, format!("unknown mode {m}"))),
        };
        let model = assemble(&case, mode)?;
        let sol = solve(&model.lp, &SolveOptions::default())
            .map_err(|e| Failure::new(H2mStatus::SolveFailed, e.to_string()))?;
        let solved =
            Solved::new(&case, &model, &sol).map_err(|e| Failure::new(H2mStatus::SolveFailed, e.to_string()))?;
        let report = build_report(&solved, &case.label, 1e-6)
            .map_err(|e| Failure::new(H2mStatus::SolveFailed, e.to_string()))?;
        *out = Box::into_raw(Box::new(H2mReport { report }));
        Ok(())
    })
}

/// Releases a report; null is ignored.
///
/// # Safety
/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn h2m_report_free(report: *mut H2mReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Optimal objective, $/yr.
///
/// # Safety
/// `report` must be a live handle or null; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn h2m_report_objective(report: *const H2mReport, out: *mut f64) -> H2mStatus {
    guard(|| {
        *out_arg(out, "out")? = report_arg(report)?.objective;
        Ok(())
    })
}

/// System emissions, tCO2/yr.
///
/// # Safety
/// As for [`h2m_report_objective`].
#[no_mangle]
pub unsafe extern "C" fn h2m_report_emissions(report: *const H2mReport, out: *mut f64) -> H2mStatus {
    guard(|| {
        *out_arg(out, "out")? = report_arg(report)?.emissions_t;
        Ok(())
    })
}

/// Levelized cost of hydrogen, $/kg; `H2M_STATUS_NOT_AVAILABLE` when the
/// case produces no hydrogen.
///
/// # Safety
/// As for [`h2m_report_objective`].
#[no_mangle]
pub unsafe extern "C" fn h2m_report_lcoh(report: *const H2mReport, out: *mut f64) -> H2mStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let r = report_arg(report)?;
        let l = r.lcoh.as_ref().ok_or_else(|| Failure::new(H2mStatus::NotAvailable, "no hydrogen produced"))?;
        *out = l.lcoh;
        Ok(())
    })
}

/// Installed MW of technology `id`.
///
/// # Safety
/// `report` must be a live handle or null; `id` null or NUL-terminated;
/// `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn h2m_report_capacity(report: *const H2mReport, id: *const c_char, out: *mut f64) -> H2mStatus {
    guard(|| {
        let r = report_arg(report)?;
        let id = str_arg(id, "id")?;
        let out = out_arg(out, "out")?;
        let t = r
            .capacities
            .tech(id)
            .ok_or_else(|| Failure::new(H2mStatus::NotAvailable, format!("no technology `{id}`")))?;
        *out = t.power_total;
        Ok(())
    })
}

/// The full report as JSON. `*out` owns a string to release with
/// [`h2m_string_free`].
///
/// # Safety
/// `report` must be a live handle or null; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn h2m_report_json(report: *const H2mReport, out: *mut *mut c_char) -> H2mStatus {
    guard(|| {
        let r = report_arg(report)?;
        let out = out_arg(out, "out")?;
        let json = serde_json::to_string(r).map_err(|e| Failure::new(H2mStatus::InvalidInput, e.to_string()))?;
        *out = CString::new(json).map_err(|e| Failure::new(H2mStatus::InvalidInput, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn h2m_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
