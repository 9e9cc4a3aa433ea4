//! C ABI for the isodef workbench.
//!
//! Problems are parsed from JSON text into opaque handles; each report
//! function returns the same deterministic JSON report text that the
//! command-line tool prints. All returned strings are heap-allocated and
//! must be released with `isodef_string_free`.
//!
//! Error handling is thread-local: a report function returning null leaves
//! the failure available through `isodef_last_error_code` (numeric class,
//! matching the command-line exit codes), `isodef_last_error_kind`
//! (kebab-case identifier), and `isodef_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::json;

use isodef::commands::{
    cohomology_results, deform_results, dgla_results, parse_ring_spec, rigidity_results,
};
use isodef::problem::{parse_problem, Problem};
use isodef::report::render_report;
use isodef::Error;

/// Error class for arguments the binding layer itself rejects
/// (null pointers, invalid UTF-8, handle/kind mismatches).
pub const ISODEF_ERR_ARGUMENT: c_int = 1;
/// Error class for malformed or schema-invalid input (exit code 2).
pub const ISODEF_ERR_INPUT: c_int = 2;
/// Error class for violated mathematical preconditions (exit code 3).
pub const ISODEF_ERR_DOMAIN: c_int = 3;
/// Error class for internal consistency failures (exit code 4).
pub const ISODEF_ERR_INTERNAL: c_int = 4;

/// Opaque handle to a parsed problem.
pub struct IsodefProblem {
    _private: [u8; 0],
}

struct ProblemInner {
    problem: Problem,
    raw: Vec<u8>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<(c_int, String, String)>> = const { RefCell::new(None) };
}

fn set_error(code: c_int, kind: &str, message: String) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some((code, kind.to_owned(), message)));
}

fn set_error_from(e: &Error) {
    set_error(e.exit_code() as c_int, e.code(), e.to_string());
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn to_c_string(s: String) -> *mut c_char {
    // interior NULs cannot occur in JSON reports, but fail closed anyway
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => {
            set_error(
                ISODEF_ERR_INTERNAL,
                "internal",
                "report contains an interior NUL byte".into(),
            );
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must be a valid NUL-terminated string or null.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Option<&'a str> {
    if s.is_null() {
        set_error(ISODEF_ERR_ARGUMENT, "argument", format!("{} is null", what));
        return None;
    }
    match unsafe { CStr::from_ptr(s) }.to_str() {
        Ok(t) => Some(t),
        Err(_) => {
            set_error(
                ISODEF_ERR_ARGUMENT,
                "argument",
                format!("{} is not valid UTF-8", what),
            );
            None
        }
    }
}

unsafe fn inner<'a>(handle: *const IsodefProblem) -> Option<&'a ProblemInner> {
    if handle.is_null() {
        set_error(ISODEF_ERR_ARGUMENT, "argument", "problem handle is null".into());
        return None;
    }
    Some(unsafe { &*(handle as *const ProblemInner) })
}

fn guarded<F: FnOnce() -> *mut c_char>(f: F) -> *mut c_char {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(p) => p,
        Err(_) => {
            set_error(
                ISODEF_ERR_INTERNAL,
                "internal",
                "unexpected panic inside the library".into(),
            );
            ptr::null_mut()
        }
    }
}

/// Returns the library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn isodef_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses a JSON problem. `expect_kind` may be null (infer the kind) or one
/// of "connection", "tuple", "dgla", "deform". Returns null on failure.
///
/// # Safety
/// `json_text` and `expect_kind` must be valid NUL-terminated strings
/// (or null where documented).
#[no_mangle]
pub unsafe extern "C" fn isodef_problem_parse(
    json_text: *const c_char,
    expect_kind: *const c_char,
) -> *mut IsodefProblem {
    clear_error();
    let out = catch_unwind(AssertUnwindSafe(|| {
        let text = match unsafe { read_str(json_text, "json_text") } {
            Some(t) => t,
            None => return ptr::null_mut(),
        };
        let expect = if expect_kind.is_null() {
            None
        } else {
            match unsafe { read_str(expect_kind, "expect_kind") } {
                Some(k) => Some(k.to_owned()),
                None => return ptr::null_mut(),
            }
        };
        match parse_problem(text, expect.as_deref()) {
            Ok(problem) => {
                let inner = ProblemInner {
                    problem,
                    raw: text.as_bytes().to_vec(),
                };
                Box::into_raw(Box::new(inner)) as *mut IsodefProblem
            }
            Err(e) => {
                set_error_from(&e);
                ptr::null_mut()
            }
        }
    }));
    match out {
        Ok(p) => p,
        Err(_) => {
            set_error(
                ISODEF_ERR_INTERNAL,
                "internal",
                "unexpected panic inside the library".into(),
            );
            ptr::null_mut()
        }
    }
}

/// Returns the problem kind ("connection", "tuple", "dgla", "deform") as a
/// newly allocated string.
///
/// # Safety
/// `handle` must be null or a pointer returned by `isodef_problem_parse`
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn isodef_problem_kind(handle: *const IsodefProblem) -> *mut c_char {
    clear_error();
    let p = match unsafe { inner(handle) } {
        Some(p) => p,
        None => return ptr::null_mut(),
    };
    to_c_string(p.problem.kind().to_owned())
}

/// Releases a problem handle. Passing null is a no-op.
///
/// # Safety
/// `handle` must be null or a pointer returned by `isodef_problem_parse`
/// that has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn isodef_problem_free(handle: *mut IsodefProblem) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle as *mut ProblemInner) });
    }
}

fn expect_kind<'a, T, F: FnOnce(&'a Problem) -> Option<&'a T>>(
    p: &'a ProblemInner,
    want: &str,
    project: F,
) -> Option<&'a T> {
    match project(&p.problem) {
        Some(t) => Some(t),
        None => {
            set_error(
                ISODEF_ERR_ARGUMENT,
                "argument",
                format!("expected a {} problem, got {}", want, p.problem.kind()),
            );
            None
        }
    }
}

/// Cohomology report for a connection problem. Returns the JSON report, or
/// null on failure.
///
/// # Safety
/// `handle` must be a live pointer returned by `isodef_problem_parse`.
#[no_mangle]
pub unsafe extern "C" fn isodef_cohomology_report(handle: *const IsodefProblem) -> *mut c_char {
    clear_error();
    let p = match unsafe { inner(handle) } {
        Some(p) => p,
        None => return ptr::null_mut(),
    };
    guarded(|| {
        let e = match expect_kind(p, "connection", |q| match q {
            Problem::Connection(e) => Some(e),
            _ => None,
        }) {
            Some(e) => e,
            None => return ptr::null_mut(),
        };
        match cohomology_results(e) {
            Ok((results, flags)) => to_c_string(render_report(
                "cohomology",
                &p.raw,
                json!({ "truncation": null, "precision": null }),
                results,
                &flags,
            )),
            Err(err) => {
                set_error_from(&err);
                ptr::null_mut()
            }
        }
    })
}

/// Rigidity report for a monodromy tuple. Returns the JSON report, or null
/// on failure.
///
/// # Safety
/// `handle` must be a live pointer returned by `isodef_problem_parse`.
#[no_mangle]
pub unsafe extern "C" fn isodef_rigidity_report(handle: *const IsodefProblem) -> *mut c_char {
    clear_error();
    let p = match unsafe { inner(handle) } {
        Some(p) => p,
        None => return ptr::null_mut(),
    };
    guarded(|| {
        let t = match expect_kind(p, "tuple", |q| match q {
            Problem::Tuple(t) => Some(t),
            _ => None,
        }) {
            Some(t) => t,
            None => return ptr::null_mut(),
        };
        match rigidity_results(t) {
            Ok((results, flags)) => {
                to_c_string(render_report("rigidity", &p.raw, json!({}), results, &flags))
            }
            Err(err) => {
                set_error_from(&err);
                ptr::null_mut()
            }
        }
    })
}

/// Deformation report: lifts the jet to the given truncation order
/// (1 to 6). When `sharp` is true the obstruction class is computed at
/// every lifting step. Returns the JSON report, or null on failure.
///
/// # Safety
/// `handle` must be a live pointer returned by `isodef_problem_parse`.
#[no_mangle]
pub unsafe extern "C" fn isodef_deform_report(
    handle: *const IsodefProblem,
    order: u32,
    sharp: bool,
) -> *mut c_char {
    clear_error();
    let p = match unsafe { inner(handle) } {
        Some(p) => p,
        None => return ptr::null_mut(),
    };
    guarded(|| {
        if !(1..=6).contains(&order) {
            set_error(
                ISODEF_ERR_INPUT,
                "option-error",
                format!("order must be between 1 and 6, got {}", order),
            );
            return ptr::null_mut();
        }
        let d = match expect_kind(p, "deform", |q| match q {
            Problem::Deform(d) => Some(d),
            _ => None,
        }) {
            Some(d) => d,
            None => return ptr::null_mut(),
        };
        match deform_results(d, order, sharp) {
            Ok((results, flags)) => to_c_string(render_report(
                "deform",
                &p.raw,
                json!({ "order": order, "sharp": sharp }),
                results,
                &flags,
            )),
            Err(err) => {
                set_error_from(&err);
                ptr::null_mut()
            }
        }
    })
}

/// DGLA report over the test ring given as `VARS:ORDER` (e.g. "e:3").
/// Returns the JSON report, or null on failure.
///
/// # Safety
/// `handle` must be a live pointer returned by `isodef_problem_parse` and
/// `ring_spec` a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn isodef_dgla_report(
    handle: *const IsodefProblem,
    ring_spec: *const c_char,
) -> *mut c_char {
    clear_error();
    let p = match unsafe { inner(handle) } {
        Some(p) => p,
        None => return ptr::null_mut(),
    };
    let spec = match unsafe { read_str(ring_spec, "ring_spec") } {
        Some(s) => s.to_owned(),
        None => return ptr::null_mut(),
    };
    guarded(|| {
        let l = match expect_kind(p, "dgla", |q| match q {
            Problem::Dgla(l) => Some(l),
            _ => None,
        }) {
            Some(l) => l,
            None => return ptr::null_mut(),
        };
        let ring = match parse_ring_spec(&spec) {
            Ok(r) => r,
            Err(err) => {
                set_error_from(&err);
                return ptr::null_mut();
            }
        };
        match dgla_results(l, &ring) {
            Ok((results, flags)) => to_c_string(render_report(
                "dgla",
                &p.raw,
                json!({ "ring": spec }),
                results,
                &flags,
            )),
            Err(err) => {
                set_error_from(&err);
                ptr::null_mut()
            }
        }
    })
}

/// Numeric class of the last error on this thread (0 if none):
/// 1 bad argument, 2 bad input, 3 domain precondition, 4 internal.
#[no_mangle]
pub extern "C" fn isodef_last_error_code() -> c_int {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(0, |(c, _, _)| *c))
}

/// Kebab-case identifier of the last error on this thread, or null if none.
#[no_mangle]
pub extern "C" fn isodef_last_error_kind() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some((_, kind, _)) => CString::new(kind.clone())
            .map(CString::into_raw)
            .unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    })
}

/// Human-readable message of the last error on this thread, or null if none.
#[no_mangle]
pub extern "C" fn isodef_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some((_, _, msg)) => CString::new(msg.clone())
            .map(CString::into_raw)
            .unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer returned by one of the report, kind, or
/// error accessors that has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn isodef_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
