//! C interface to `ordcov`.
//!
//! Ordinals cross the boundary as opaque `OrdcovOrdinal` handles; text results
//! are heap strings released with `ordcov_string_free`. Every function returns
//! an `OrdcovStatus`; on failure `ordcov_last_error` describes the cause for
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ordcov::covering_graph::build_prefix;
use ordcov::degree_word::{canonicalize, degree_word};
use ordcov::fundamental::{covers, fund_seq};
use ordcov::hopda::{decode_iso, encode_iso};
use ordcov::ordinal::add;
use ordcov::syntax::{parse_ordinal, parse_stack};
use ordcov::verify::{self, Params};
use ordcov::{Error, Ordinal};

/// Result codes shared by every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrdcovStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    NotALimit = 4,
    Overflow = 5,
    CapExceeded = 6,
    OutOfRange = 7,
    Failed = 8,
    Panic = 9,
}

/// Opaque ordinal below epsilon_0.
pub struct OrdcovOrdinal(Ordinal);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> OrdcovStatus {
    match e {
        Error::Syntax { .. } => OrdcovStatus::Syntax,
        Error::NotALimit(_) => OrdcovStatus::NotALimit,
        Error::Overflow => OrdcovStatus::Overflow,
        Error::CapExceeded { .. } | Error::IterationCapExceeded(_) | Error::TooLarge(_) => OrdcovStatus::CapExceeded,
        Error::OutOfRange(_) => OrdcovStatus::OutOfRange,
        _ => OrdcovStatus::Failed,
    }
}

enum Fail {
    Status(OrdcovStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OrdcovStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrdcovStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            OrdcovStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(OrdcovStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null("string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(OrdcovStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn ordinal<'a>(p: *const OrdcovOrdinal) -> Result<&'a Ordinal, Fail> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null("ordinal handle"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_ordinal(out: *mut *mut OrdcovOrdinal, a: Ordinal) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(OrdcovOrdinal(a))))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail::Status(OrdcovStatus::Failed, "interior NUL".into()))?;
    put(out, c.into_raw())
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ordcov_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ordcov_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses ordinal text such as `"w^w + 3"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_ordinal_parse(text: *const c_char, out: *mut *mut OrdcovOrdinal) -> OrdcovStatus {
    guard(|| put_ordinal(out, parse_ordinal(c_str(text)?)?))
}

/// Releases an ordinal handle. Null is ignored.
///
/// # Safety
/// `a` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ordcov_ordinal_free(a: *mut OrdcovOrdinal) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Canonical text of `a`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_ordinal_to_string(a: *const OrdcovOrdinal, out: *mut *mut c_char) -> OrdcovStatus {
    guard(|| put_string(out, ordinal(a)?.to_string()))
}

/// Writes -1, 0 or 1 as `a` is less than, equal to or greater than `b`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_ordinal_compare(
    a: *const OrdcovOrdinal,
    b: *const OrdcovOrdinal,
    out: *mut i32,
) -> OrdcovStatus {
    guard(|| put(out, ordinal(a)?.cmp(ordinal(b)?) as i32))
}

/// Ordinal sum `a + b` as a new handle.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_ordinal_add(
    a: *const OrdcovOrdinal,
    b: *const OrdcovOrdinal,
    out: *mut *mut OrdcovOrdinal,
) -> OrdcovStatus {
    guard(|| put_ordinal(out, add(ordinal(a)?, ordinal(b)?)))
}

/// The `n`-th element of the fundamental sequence of the limit `a`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_fund_seq(
    a: *const OrdcovOrdinal,
    n: u64,
    out: *mut *mut OrdcovOrdinal,
) -> OrdcovStatus {
    guard(|| put_ordinal(out, fund_seq(ordinal(a)?, n)?))
}

/// Whether there is a covering edge from `x` to `a`.
///
/// # Safety
/// `x` and `a` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_covers(
    x: *const OrdcovOrdinal,
    a: *const OrdcovOrdinal,
    out: *mut bool,
) -> OrdcovStatus {
    guard(|| put(out, covers(ordinal(x)?, ordinal(a)?).is_some()))
}

/// Canonical degree word of `a` in comma text form, e.g. `"1(2)^w"`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_degree_word(a: *const OrdcovOrdinal, out: *mut *mut c_char) -> OrdcovStatus {
    guard(|| put_string(out, canonicalize(&degree_word(ordinal(a)?)?).to_string()))
}

/// JSON export of the covering-graph prefix of `a` to the given depth.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_graph_json(
    a: *const OrdcovOrdinal,
    depth: usize,
    out: *mut *mut c_char,
) -> OrdcovStatus {
    guard(|| put_string(out, build_prefix(ordinal(a)?, depth)?.to_json()?))
}

/// Stack encoding of `a` at the given level, in bracketed text form.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_stack_encode(
    a: *const OrdcovOrdinal,
    level: usize,
    out: *mut *mut c_char,
) -> OrdcovStatus {
    guard(|| put_string(out, encode_iso(ordinal(a)?, level)?.to_string()))
}

/// Decodes stack text back to an ordinal handle.
///
/// # Safety
/// `stack` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_stack_decode(stack: *const c_char, out: *mut *mut OrdcovOrdinal) -> OrdcovStatus {
    guard(|| put_ordinal(out, decode_iso(&parse_stack(c_str(stack)?)?)))
}

/// Runs a property suite with default parameters. `passed` receives the
/// verdict and `report` the printed report.
///
/// # Safety
/// `name` must be a NUL-terminated string; `passed` and `report` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ordcov_verify(
    name: *const c_char,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> OrdcovStatus {
    guard(|| {
        if passed.is_null() || report.is_null() {
            return Err(null("output pointer"));
        }
        let reports = verify::run(c_str(name)?, &Params::default())?;
        let body: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
        put(passed, reports.iter().all(|r| r.passed))?;
        put_string(report, body.join("\n"))
    })
}
