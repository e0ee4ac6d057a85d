//! C ABI over `tga-core`.
//!
//! Families are opaque handles created by `tga_family_build` and released
//! with `tga_family_free`. Strings returned through out-parameters are owned
//! by the caller and released with `tga_string_free`. Every entry point
//! returns a `TgaStatus`; on failure `tga_last_error` describes the cause
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use tga_core::algebra::AlgebraSpec;
use tga_core::builder::{build_with, BuildOptions, IdempotentFamily};
use tga_core::classify::classify;
use tga_core::oracle::verify_family;
use tga_core::parse::{parse_element, parse_field};
use tga_core::{report, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Verification = 5,
    IndexOutOfRange = 6,
    Internal = 7,
    Panic = 8,
}

/// Opaque family of minimal idempotents.
pub struct TgaFamily {
    inner: IdempotentFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> TgaStatus {
    match err {
        Error::Parse(_) => TgaStatus::Parse,
        Error::Verification(_) => TgaStatus::Verification,
        Error::Internal(_) => TgaStatus::Internal,
        _ => TgaStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (TgaStatus, String)>) -> TgaStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TgaStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside tga".into());
            TgaStatus::Panic
        }
    }
}

fn core_err(e: Error) -> (TgaStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TgaStatus, String)> {
    if p.is_null() {
        return Err((TgaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TgaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn out_string(out: *mut *mut c_char, s: String) -> Result<(), (TgaStatus, String)> {
    let c =
        CString::new(s).map_err(|_| (TgaStatus::Internal, "interior NUL in output".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn null_out<T>(out: *mut T, what: &str) -> Result<(), (TgaStatus, String)> {
    if out.is_null() {
        Err((TgaStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tga_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn tga_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tga_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Classification of `field` as JSON, with the emulation annotation for
/// groups of order 2^n.
///
/// # Safety
/// `field` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tga_classify_json(
    field: *const c_char,
    n: u32,
    out: *mut *mut c_char,
) -> TgaStatus {
    guard(|| {
        null_out(out, "out")?;
        let k = parse_field(text(field, "field")?).map_err(core_err)?;
        let c = classify(&k).for_order(n);
        out_string(out, report::classify_json(&k, &c))
    })
}

/// Build the minimal idempotents of K_t<g>, g^(2^n) = a. With `checked`
/// the family is verified first and a failure is reported as
/// `TGA_STATUS_VERIFICATION`.
///
/// # Safety
/// `field` and `a` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tga_family_build(
    field: *const c_char,
    n: u32,
    a: *const c_char,
    checked: bool,
    out: *mut *mut TgaFamily,
) -> TgaStatus {
    guard(|| {
        null_out(out, "out")?;
        *out = ptr::null_mut();
        let k = parse_field(text(field, "field")?).map_err(core_err)?;
        let a = parse_element(&k, text(a, "a")?).map_err(core_err)?;
        let spec = AlgebraSpec::new(k, n, a).map_err(core_err)?;
        let opts = BuildOptions {
            checked,
            ..BuildOptions::default()
        };
        let inner = build_with(&spec, &opts).map_err(core_err)?;
        *out = Box::into_raw(Box::new(TgaFamily { inner }));
        Ok(())
    })
}

/// Release a family. NULL is ignored.
///
/// # Safety
/// `family` must come from `tga_family_build` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tga_family_free(family: *mut TgaFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Number of idempotents, 0 for NULL.
///
/// # Safety
/// `family` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tga_family_len(family: *const TgaFamily) -> size_t {
    family.as_ref().map_or(0, |f| f.inner.items.len())
}

/// K-dimension of the component of idempotent `index`.
///
/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tga_family_dim(
    family: *const TgaFamily,
    index: size_t,
    out: *mut size_t,
) -> TgaStatus {
    guard(|| {
        null_out(out, "out")?;
        let f = family
            .as_ref()
            .ok_or((TgaStatus::NullPointer, "family is null".to_string()))?;
        let item = f.inner.items.get(index).ok_or((
            TgaStatus::IndexOutOfRange,
            format!(
                "index {index} out of range for {} items",
                f.inner.items.len()
            ),
        ))?;
        *out = item.component_dim;
        Ok(())
    })
}

/// Run every check on the family; `*ok` receives the overall verdict. When
/// it is false the first failed check is left in `tga_last_error`.
///
/// # Safety
/// `family` must be a live handle; `ok` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tga_family_verify(family: *const TgaFamily, ok: *mut bool) -> TgaStatus {
    guard(|| {
        null_out(ok, "ok")?;
        let f = family
            .as_ref()
            .ok_or((TgaStatus::NullPointer, "family is null".to_string()))?;
        let r = verify_family(&f.inner);
        *ok = r.overall;
        if let Some(why) = r.first_counterexample {
            set_error(why);
        }
        Ok(())
    })
}

/// The family as JSON, optionally with the verification report.
///
/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tga_family_json(
    family: *const TgaFamily,
    verify: bool,
    out: *mut *mut c_char,
) -> TgaStatus {
    guard(|| {
        null_out(out, "out")?;
        let f = family
            .as_ref()
            .ok_or((TgaStatus::NullPointer, "family is null".to_string()))?;
        let r = verify.then(|| verify_family(&f.inner));
        out_string(out, report::family_json(&f.inner, r.as_ref()))
    })
}
