//! C ABI for `spincount`.
//!
//! Functions and instances are opaque handles created by `*_parse` and released
//! by `*_free`. Every call returns an [`SpcStatus`]; on failure the message is
//! available from [`spc_last_error`] on the same thread. Strings returned
//! through `char **out` are owned by the caller and released by [`spc_string_free`].
//! Rationals cross the boundary as decimal strings (`"3/4"`).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use spincount::classify::classify_two_spin;
use spincount::funcs::{fourier, parse_rational, PBFunction};
use spincount::instances::{z_exact_capped, CspInstance, Table};
use spincount::matching::{estimate_z_fpras, EstimatorConfig};
use spincount::{Caps, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpcStatus {
    Ok = 0,
    /// Null pointer, invalid UTF-8 or a bad parameter.
    InvalidArgument = 1,
    Parse = 2,
    Precondition = 3,
    Capacity = 4,
    /// An internal consistency check failed.
    Verification = 5,
    Panic = 6,
}

/// A nonnegative pseudo-Boolean function.
pub struct SpcFunction(PBFunction);

/// A weighted CSP instance.
pub struct SpcInstance(CspInstance);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SpcStatus {
    match e {
        Error::Parse { .. } => SpcStatus::Parse,
        Error::Capacity { .. } => SpcStatus::Capacity,
        Error::Precondition(_) | Error::ArityMismatch { .. } | Error::UnknownFunction(_) => SpcStatus::Precondition,
        Error::Verification(_) => SpcStatus::Verification,
        Error::InvalidArgument(_) => SpcStatus::InvalidArgument,
    }
}

struct Fail(SpcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SpcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpcStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            SpcStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(SpcStatus::InvalidArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(SpcStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s).map_err(|_| Fail(SpcStatus::InvalidArgument, "interior nul".into()))?.into_raw();
    Ok(())
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn spc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static, nul-terminated crate version.
#[no_mangle]
pub extern "C" fn spc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn spc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a literal `"<arity> <v0> <v1> .."`.
///
/// # Safety
/// `literal` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spc_function_parse(literal: *const c_char, out: *mut *mut SpcFunction) -> SpcStatus {
    guard(|| {
        let f = PBFunction::from_str(text(literal, "literal")?)?;
        put(out, SpcFunction(f))
    })
}

/// # Safety
/// `f` must come from [`spc_function_parse`] and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn spc_function_free(f: *mut SpcFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Arity of `f`, or `usize::MAX` for null.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spc_function_arity(f: *const SpcFunction) -> usize {
    f.as_ref().map_or(usize::MAX, |f| f.0.arity())
}

/// Literal form of `f`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spc_function_to_string(f: *const SpcFunction, out: *mut *mut c_char) -> SpcStatus {
    guard(|| put_string(out, deref(f, "f")?.0.to_string()))
}

/// Fourier coefficients as a signed literal.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spc_fourier(f: *const SpcFunction, out: *mut *mut c_char) -> SpcStatus {
    guard(|| put_string(out, fourier(&deref(f, "f")?.0).to_string()))
}

/// Two-spin verdict tag of a binary function, e.g. `"FPRAS"`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spc_classify_two_spin(f: *const SpcFunction, out: *mut *mut c_char) -> SpcStatus {
    guard(|| {
        let v = classify_two_spin(&deref(f, "f")?.0)?;
        put_string(out, v.tag.name().to_string())
    })
}

/// Parses an instance in the `fun` / `var` / `con` text format.
///
/// # Safety
/// `source` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spc_instance_parse(source: *const c_char, out: *mut *mut SpcInstance) -> SpcStatus {
    guard(|| {
        let inst = CspInstance::parse(text(source, "source")?)?;
        put(out, SpcInstance(inst))
    })
}

/// # Safety
/// `inst` must come from [`spc_instance_parse`] and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn spc_instance_free(inst: *mut SpcInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of variables, or `usize::MAX` for null.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spc_instance_num_vars(inst: *const SpcInstance) -> usize {
    inst.as_ref().map_or(usize::MAX, |i| i.0.n_vars())
}

/// Canonical text form of `inst`.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spc_instance_to_string(inst: *const SpcInstance, out: *mut *mut c_char) -> SpcStatus {
    guard(|| put_string(out, deref(inst, "inst")?.0.serialize()))
}

/// Exact partition function by enumeration; `max_vars = 0` uses the default limit.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spc_z_exact(inst: *const SpcInstance, max_vars: usize, out: *mut *mut c_char) -> SpcStatus {
    guard(|| {
        let cap = if max_vars == 0 { Caps::from_env().brute_force } else { max_vars };
        put_string(out, z_exact_capped(&deref(inst, "inst")?.0, cap)?.to_string())
    })
}

/// Partition function of an instance over one binary function with
/// nonnegative spectrum, through the perfect matching estimator. `epsilon` is
/// a rational string (null for the default); graphs with at most `exact_cap`
/// vertices are counted exactly, and then `*exact` is set to 1.
///
/// # Safety
/// `inst` must be a live handle; `epsilon` null or nul-terminated; `out` writable; `exact` null or writable.
#[no_mangle]
pub unsafe extern "C" fn spc_z_estimate(
    inst: *const SpcInstance,
    epsilon: *const c_char,
    seed: u64,
    exact_cap: usize,
    out: *mut *mut c_char,
    exact: *mut i32,
) -> SpcStatus {
    guard(|| {
        let inst = &deref(inst, "inst")?.0;
        let mut cfg = EstimatorConfig { seed, exact_cap, ..EstimatorConfig::default() };
        if !epsilon.is_null() {
            cfg.epsilon = parse_rational(text(epsilon, "epsilon")?)?;
        }
        let f = match inst.used_functions().as_slice() {
            [] => spincount::funcs::named::eq(),
            [name] => match inst.function(name) {
                Some(Table::Function(f)) => f.clone(),
                _ => return Err(Fail(SpcStatus::Precondition, format!("`{name}` is a signed table"))),
            },
            _ => return Err(Fail(SpcStatus::Precondition, "instance uses more than one function".into())),
        };
        let e = estimate_z_fpras(&f, inst, &cfg)?;
        if !exact.is_null() {
            *exact = e.exact as i32;
        }
        put_string(out, e.value.to_string())
    })
}
