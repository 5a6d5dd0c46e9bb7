//! C interface: an opaque oracle handle built from ideal-file text, queries
//! on it, and staircase reconstruction. Every fallible call returns a
//! [`GbpStatus`]; the message for the last failure on the calling thread is
//! available from [`gbp_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gbprobe::format::{write_result, IdealFile};
use gbprobe::groebner::{buchberger, GroebnerBasis};
use gbprobe::staircase::reconstruct;
use gbprobe::{CanOracle, Error, MembershipOracle, Monomial, TermOracle, TermOrder};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GbpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Math = 4,
    Panic = 5,
}

/// Opaque oracle handle.
pub struct GbpOracle {
    inner: CanOracle,
    ord: TermOrder,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: GbpStatus, msg: impl Into<String>) -> GbpStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> GbpStatus {
    let status = match e {
        Error::Parse(_) | Error::VariableOutOfRange { .. } => GbpStatus::Parse,
        _ => GbpStatus::Math,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> GbpStatus) -> GbpStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(GbpStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, GbpStatus> {
    if s.is_null() {
        return Err(fail(GbpStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(GbpStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Builds an oracle from the text of a commutative ideal file
/// (`ring n=.. p=.. order=..` then one polynomial per line).
///
/// # Safety
/// `ideal` must be a NUL-terminated string and `out` a valid pointer. The
/// handle written to `*out` must be released with [`gbp_oracle_free`].
#[no_mangle]
pub unsafe extern "C" fn gbp_oracle_new(ideal: *const c_char, out: *mut *mut GbpOracle) -> GbpStatus {
    guard(|| {
        if out.is_null() {
            return fail(GbpStatus::NullPointer, "null output pointer");
        }
        let src = match text(ideal) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let file = match IdealFile::parse(src) {
            Ok(f) => f,
            Err(e) => return from_error(e),
        };
        let basis = if file.polys.iter().all(|p| p.is_zero()) {
            GroebnerBasis::zero_ideal(file.field, file.ord.clone())
        } else {
            match buchberger(&file.polys, &file.ord) {
                Ok(b) => b,
                Err(e) => return from_error(e),
            }
        };
        let handle = Box::new(GbpOracle {
            inner: CanOracle::from_basis(basis),
            ord: file.ord,
        });
        *out = Box::into_raw(handle);
        GbpStatus::Ok
    })
}

/// # Safety
/// `o` must come from [`gbp_oracle_new`] and not have been freed; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn gbp_oracle_free(o: *mut GbpOracle) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

unsafe fn with_oracle(o: *mut GbpOracle, f: impl FnOnce(&mut GbpOracle) -> GbpStatus) -> GbpStatus {
    guard(|| match o.as_mut() {
        Some(h) => f(h),
        None => fail(GbpStatus::NullPointer, "null oracle handle"),
    })
}

/// Canonical form of a term such as `X1^2*X2`, as polynomial text. The
/// string written to `*out` must be released with [`gbp_string_free`].
///
/// # Safety
/// `o` must be a live handle, `term` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gbp_oracle_can(o: *mut GbpOracle, term: *const c_char, out: *mut *mut c_char) -> GbpStatus {
    with_oracle(o, |h| {
        if out.is_null() {
            return fail(GbpStatus::NullPointer, "null output pointer");
        }
        let t = match text(term) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match Monomial::parse(t, h.inner.nvars()).and_then(|m| h.inner.can_term(&m)) {
            Ok(c) => {
                *out = into_c(c.format_with(&h.ord));
                GbpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Whether a term lies in the leading-term ideal. One query.
///
/// # Safety
/// `o` must be a live handle, `term` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gbp_oracle_member(o: *mut GbpOracle, term: *const c_char, out: *mut bool) -> GbpStatus {
    with_oracle(o, |h| {
        if out.is_null() {
            return fail(GbpStatus::NullPointer, "null output pointer");
        }
        let t = match text(term) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match Monomial::parse(t, h.inner.nvars()).and_then(|m| h.inner.member_t(&m)) {
            Ok(b) => {
                *out = b;
                GbpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Queries answered so far; 0 for a null handle.
///
/// # Safety
/// `o` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gbp_oracle_query_count(o: *const GbpOracle) -> u64 {
    o.as_ref().map_or(0, |h| h.inner.query_count())
}

/// Reconstructs generators and reduced basis inside the box of side `bound`
/// and writes the result file text to `*out`. Queries are charged to `o`.
///
/// # Safety
/// `o` must be a live handle and `out` a valid pointer. The string must be
/// released with [`gbp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gbp_reconstruct(o: *mut GbpOracle, bound: u32, out: *mut *mut c_char) -> GbpStatus {
    with_oracle(o, |h| {
        if out.is_null() {
            return fail(GbpStatus::NullPointer, "null output pointer");
        }
        match reconstruct(&mut h.inner, bound) {
            Ok(r) => {
                *out = into_c(write_result(&r, &h.ord));
                GbpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gbp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gbp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
