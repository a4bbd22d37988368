//! C interface to `gstable`.
//!
//! Problems and reports are opaque handles. Every fallible call returns a
//! [`GstableStatus`]; on failure the message is available from
//! [`gstable_last_error`] on the same thread until the next call. Strings
//! returned through out-parameters are owned by the caller and released with
//! [`gstable_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gstable::report::{self, AnalysisReport, SystemSpec};
use gstable::spec::ProblemSpec;
use gstable::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GstableStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An input string was not UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON or a shape the schema does not accept.
    Json = 3,
    /// A field failed validation; the message names the field.
    Validation = 4,
    /// The document carries an unsupported schema version.
    Schema = 5,
    /// A configured size cap was exceeded.
    SizeLimit = 6,
    /// Any other library error.
    Failed = 7,
    /// The library panicked. This is a bug.
    Panic = 8,
}

/// A parsed problem description.
pub struct GstableProblem {
    spec: ProblemSpec,
}

/// An analysis report with its witnesses.
pub struct GstableReport {
    report: AnalysisReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> GstableStatus {
    match e {
        Error::Json(_) => GstableStatus::Json,
        Error::Validation { .. } => GstableStatus::Validation,
        Error::Schema { .. } => GstableStatus::Schema,
        Error::SizeLimit { .. } => GstableStatus::SizeLimit,
        _ => GstableStatus::Failed,
    }
}

struct Fail(GstableStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GstableStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GstableStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            GstableStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(GstableStatus::NullArgument, format!("{what} is null"))
}

unsafe fn input<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Fail(GstableStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn output<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn gstable_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gstable_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a problem document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gstable_problem_from_json(json: *const c_char, out: *mut *mut GstableProblem) -> GstableStatus {
    guard(|| {
        let text = input(json, "json")?;
        let spec: ProblemSpec = serde_json::from_str(text).map_err(Error::from)?;
        output(out, Box::into_raw(Box::new(GstableProblem { spec })), "out")
    })
}

/// Replaces the seed used by randomized searches.
///
/// # Safety
/// `problem` must be a handle from [`gstable_problem_from_json`].
#[no_mangle]
pub unsafe extern "C" fn gstable_problem_set_seed(problem: *mut GstableProblem, seed: u64) -> GstableStatus {
    guard(|| {
        let p = problem.as_mut().ok_or_else(|| null("problem"))?;
        p.spec.seed = seed;
        Ok(())
    })
}

/// Releases a problem. Null is ignored.
///
/// # Safety
/// `problem` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gstable_problem_free(problem: *mut GstableProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Runs the requested analyses.
///
/// # Safety
/// `problem` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gstable_run(problem: *const GstableProblem, out: *mut *mut GstableReport) -> GstableStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        let report = report::run(&p.spec)?;
        output(out, Box::into_raw(Box::new(GstableReport { report })), "out")
    })
}

/// Parses a report document, for example one written by the command line tool.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gstable_report_from_json(json: *const c_char, out: *mut *mut GstableReport) -> GstableStatus {
    guard(|| {
        let text = input(json, "json")?;
        let report: AnalysisReport = serde_json::from_str(text).map_err(Error::from)?;
        output(out, Box::into_raw(Box::new(GstableReport { report })), "out")
    })
}

/// Serializes a report. Free the string with [`gstable_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gstable_report_to_json(report: *const GstableReport, out: *mut *mut c_char) -> GstableStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let json = serde_json::to_string(&r.report).map_err(Error::from)?;
        output(out, owned_string(json), "out")
    })
}

/// Whether some decided verdict in the report is negative.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gstable_report_has_negative(report: *const GstableReport, out: *mut bool) -> GstableStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        output(out, r.report.has_negative(), "out")
    })
}

/// Re-checks every witness in a report. `passed` receives the overall result.
/// If `checks` is not null it receives a JSON array of `{name, ok, detail}`.
///
/// # Safety
/// `report` must be a live handle, `passed` a valid pointer, `checks` null or valid.
#[no_mangle]
pub unsafe extern "C" fn gstable_verify(
    report: *const GstableReport,
    passed: *mut bool,
    checks: *mut *mut c_char,
) -> GstableStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let outcome = report::verify(&r.report)?;
        output(passed, outcome.passed(), "passed")?;
        if !checks.is_null() {
            let json = serde_json::to_string(&outcome.checks).map_err(Error::from)?;
            checks.write(owned_string(json));
        }
        Ok(())
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gstable_report_free(report: *mut GstableReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Checks a standalone Schreier system document and writes the JSON result.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gstable_schreier(json: *const c_char, out: *mut *mut c_char) -> GstableStatus {
    guard(|| {
        let text = input(json, "json")?;
        let spec: SystemSpec = serde_json::from_str(text).map_err(Error::from)?;
        let result = report::analyze_system(&spec)?;
        let json = serde_json::to_string(&result).map_err(Error::from)?;
        output(out, owned_string(json), "out")
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gstable_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
