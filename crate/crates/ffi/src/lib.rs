//! C ABI over the `ncl` library.
//!
//! Realizations cross the boundary as opaque `NclRealization` handles created
//! by `ncl_realization_from_json` (or returned by a transforming call) and
//! released with `ncl_realization_free`. Every fallible function returns an
//! `NclStatus`; on failure `ncl_last_error_message` describes the error for
//! the calling thread. Strings returned through out-parameters are owned by
//! the caller and must be released with `ncl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use ncl::constructions::{trajectory_components, ComponentsError};
use ncl::document::DocumentError;
use ncl::oracle::EnumerationBudget;
use ncl::reduction::{minimize_cycle_free, reduce_to_fixpoint, ReductionError};
use ncl::{emit_realization, parse_realization, Realization};

/// Opaque realization handle.
pub struct NclRealization(Realization);

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NclStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The document could not be parsed.
    Parse = 3,
    /// The document parsed but does not describe a valid realization.
    InvalidRealization = 4,
    /// The operation does not apply, e.g. minimizing a graph with cycles.
    NotApplicable = 5,
    /// An enumeration exceeded its budget.
    BudgetExceeded = 6,
    /// An internal error; the library state is unaffected.
    Internal = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(NclStatus, String);

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        let status = match e {
            DocumentError::Invalid(_) | DocumentError::MissingEndpoint { .. } => NclStatus::InvalidRealization,
            _ => NclStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        Failure(NclStatus::NotApplicable, e.to_string())
    }
}

impl From<ComponentsError> for Failure {
    fn from(e: ComponentsError) -> Self {
        Failure(NclStatus::BudgetExceeded, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(NclStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `body`, converting failures and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> NclStatus {
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NclStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NclStatus::Internal
        }
    }
}

unsafe fn handle<'a>(r: *const NclRealization) -> Result<&'a Realization, Failure> {
    unsafe { r.as_ref() }.map(|h| &h.0).ok_or_else(|| null("realization"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { out.write(value) };
    Ok(())
}

fn boxed(r: Realization) -> *mut NclRealization {
    Box::into_raw(Box::new(NclRealization(r)))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Message for the last failed call on this thread, or null if the last
/// call succeeded. Valid until the next call into this library.
#[no_mangle]
pub extern "C" fn ncl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ncl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a JSON realization document.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_realization_from_json(json: *const c_char, out: *mut *mut NclRealization) -> NclStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Failure(NclStatus::InvalidUtf8, e.to_string()))?;
        let r = parse_realization(text)?;
        unsafe { write_out(out, boxed(r)) }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `r` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ncl_realization_free(r: *mut NclRealization) {
    if !r.is_null() {
        drop(unsafe { Box::from_raw(r) });
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ncl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Canonical JSON document of the realization.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_realization_to_json(r: *const NclRealization, out: *mut *mut c_char) -> NclStatus {
    guard(|| {
        let r = unsafe { handle(r) }?;
        unsafe { write_out(out, c_string(emit_realization(r))) }
    })
}

/// Full analysis report as JSON.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_analyze_json(r: *const NclRealization, out: *mut *mut c_char) -> NclStatus {
    guard(|| {
        let r = unsafe { handle(r) }?;
        let text = serde_json::to_string(&r.analyze()).map_err(|e| Failure(NclStatus::Internal, e.to_string()))?;
        unsafe { write_out(out, c_string(text)) }
    })
}

/// New handle holding the dual realization.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_realization_dualize(r: *const NclRealization, out: *mut *mut NclRealization) -> NclStatus {
    guard(|| {
        let r = unsafe { handle(r) }?;
        unsafe { write_out(out, boxed(r.dualize())) }
    })
}

/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_behavior_dim(r: *const NclRealization, out: *mut usize) -> NclStatus {
    guard(|| {
        let r = unsafe { handle(r) }?;
        unsafe { write_out(out, r.behavior().dim()) }
    })
}

/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_realized_code_dim(r: *const NclRealization, out: *mut usize) -> NclStatus {
    guard(|| {
        let r = unsafe { handle(r) }?;
        unsafe { write_out(out, r.realized_code().dim()) }
    })
}

/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_is_observable(r: *const NclRealization, out: *mut bool) -> NclStatus {
    guard(|| {
        let r = unsafe { handle(r) }?;
        unsafe { write_out(out, r.is_observable()) }
    })
}

/// dim B + dim S − Σ dim C_i; zero exactly when controllable.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_controllability_defect(r: *const NclRealization, out: *mut usize) -> NclStatus {
    guard(|| {
        let r = unsafe { handle(r) }?;
        unsafe { write_out(out, r.controllability_defect()) }
    })
}

/// Minimal realization of a cycle-free realization; `NotApplicable` on
/// graphs with cycles.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_minimize(r: *const NclRealization, out: *mut *mut NclRealization) -> NclStatus {
    guard(|| {
        let r = unsafe { handle(r) }?;
        let (m, _) = minimize_cycle_free(r)?;
        unsafe { write_out(out, boxed(m)) }
    })
}

/// Trim, proper, observable and controllable reduction of any realization.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_reduce(r: *const NclRealization, out: *mut *mut NclRealization) -> NclStatus {
    guard(|| {
        let r = unsafe { handle(r) }?;
        let (m, _) = reduce_to_fixpoint(r)?;
        unsafe { write_out(out, boxed(m)) }
    })
}

/// Number of trajectory-graph components. `budget` caps every enumerated
/// projection; 0 selects the default (or `NCL_BUDGET`).
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncl_trajectory_components(r: *const NclRealization, budget: u64, out: *mut usize) -> NclStatus {
    guard(|| {
        let r = unsafe { handle(r) }?;
        let budget = match budget {
            0 => EnumerationBudget::from_env(),
            n => EnumerationBudget::new(n).expect("positive"),
        };
        let rep = trajectory_components(r, budget)?;
        unsafe { write_out(out, rep.components) }
    })
}
