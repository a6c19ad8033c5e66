//! C interface to `qrank`. Series live behind an opaque [`QrSeries`] handle;
//! every fallible call returns a [`QrStatus`] and leaves a message readable
//! with [`qr_last_error`] on the calling thread.
//!
//! Strings returned by the library are owned by the caller and released with
//! [`qr_string_free`]; series with [`qr_series_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qrank::exact::{fmt_rat, parse_rat};
use qrank::verify::{expand_target, load_db, named_scan, verify_records, VerifyOptions};
use qrank::{Error, PSeries};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed target, number or UTF-8.
    Parse = 2,
    /// Argument outside the mathematical domain.
    Domain = 3,
    /// A size limit was hit, or the series is not known far enough.
    ResourceLimit = 4,
    /// Any other library error.
    Math = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// An exact truncated q-series with rational coefficients.
pub struct QrSeries(PSeries);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QrStatus {
    match e {
        Error::Parse(_) => QrStatus::Parse,
        Error::Domain(_) | Error::ExponentDomain(_) => QrStatus::Domain,
        Error::ResourceLimit(_) | Error::TruncationEmpty => QrStatus::ResourceLimit,
        _ => QrStatus::Math,
    }
}

/// Runs `f`, recording errors and catching panics.
fn guard(f: impl FnOnce() -> Result<(), (QrStatus, String)>) -> QrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QrStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            QrStatus::Panic
        }
    }
}

fn lib(e: Error) -> (QrStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QrStatus, String) {
    (QrStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (QrStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (QrStatus::Parse, format!("{what} is not UTF-8")))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn qr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Expands `target` (see `qrank expand`) below `q^order` into `*out`.
///
/// # Safety
/// `target` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_expand(
    target: *const c_char,
    order: i64,
    out: *mut *mut QrSeries,
) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let t = read_str(target, "target")?;
        let s = expand_target(t, order).map_err(lib)?;
        *out = Box::into_raw(Box::new(QrSeries(s)));
        Ok(())
    })
}

/// Releases a series. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qr_series_free(s: *mut QrSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of stored nonzero coefficients.
///
/// # Safety
/// `s` must be null or a live series.
#[no_mangle]
pub unsafe extern "C" fn qr_series_len(s: *const QrSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Truncation order as a string such as `"25"` or `"7/5"`; `"exact"` for
/// finite series.
///
/// # Safety
/// `s` must be a live series and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_series_order(s: *const QrSeries, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = to_c(s.0.order().map_or_else(|| "exact".into(), |o| fmt_rat(&o)));
        Ok(())
    })
}

/// Coefficient of `q^exponent`, both as rational strings (`"-3/10"`).
/// Exponents at or beyond the truncation give [`QrStatus::ResourceLimit`].
///
/// # Safety
/// `s` must be a live series, `exponent` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qr_series_coeff(
    s: *const QrSeries,
    exponent: *const c_char,
    out: *mut *mut c_char,
) -> QrStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = parse_rat(read_str(exponent, "exponent")?).map_err(lib)?;
        let c = s.0.coeff(&e).map_err(lib)?;
        *out = to_c(fmt_rat(&c));
        Ok(())
    })
}

/// The series as `# O(q^N)` followed by `exponent<TAB>coefficient` lines.
///
/// # Safety
/// `s` must be a live series and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_series_dump(s: *const QrSeries, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = to_c(s.0.dump());
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Verifies the shipped database rows at prime `p` (0 for all rows) and
/// reports how many were checked and how many verified.
///
/// # Safety
/// `total` and `verified` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qr_verify_db(p: i64, total: *mut u32, verified: *mut u32) -> QrStatus {
    guard(|| {
        if total.is_null() || verified.is_null() {
            return Err(null("output count"));
        }
        let rows: Vec<_> = load_db(None)
            .map_err(lib)?
            .into_iter()
            .filter(|r| p == 0 || r.p == p)
            .collect();
        if rows.is_empty() {
            return Err((QrStatus::Domain, format!("no rows at p = {p}")));
        }
        let s = verify_records(&rows, &VerifyOptions::default()).summary();
        *total = s.total as u32;
        *verified = s.verified as u32;
        Ok(())
    })
}

/// Runs a named congruence scan over `n = 0..=n_max`; `*holds` is 1 when
/// every combination in it satisfies the congruence.
///
/// # Safety
/// `id` must be a NUL-terminated string and `holds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_scan(id: *const c_char, n_max: u32, holds: *mut i32) -> QrStatus {
    guard(|| {
        if holds.is_null() {
            return Err(null("holds"));
        }
        let outs = named_scan(read_str(id, "id")?, n_max as usize).map_err(lib)?;
        *holds = i32::from(outs.iter().all(|o| o.holds()));
        Ok(())
    })
}
