//! C interface to the `wreathvote` library.
//!
//! Rationals cross the boundary as `"p/q"` strings. Every function returns a
//! [`WvStatus`]; on failure [`wv_last_error`] describes what went wrong on the
//! calling thread. Objects handed out through `out` pointers belong to the
//! caller and must be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wreathvote::ballot::{schur_parameters, tally_committee_ballots, DistanceWeights};
use wreathvote::combinatorics::{orbit_count, Caps, Shape};
use wreathvote::decomposition::{decompose_result, distance_profile, DecompositionReport};
use wreathvote::error::Error;
use wreathvote::linalg::{format_rational, parse_rational, RatVector};
use wreathvote::paradox::{construct_paradox_profile, verify_solution, ParadoxInstance};
use wreathvote::ranking::parameter_count;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or inconsistent input.
    InvalidInput = 3,
    /// The request exceeds a size cap.
    SizeGuard = 4,
    /// A paradox instance has no solution.
    Infeasible = 5,
    OutOfRange = 6,
    /// A bug in the library; the message has details.
    Internal = 7,
}

/// Opaque vector of exact rationals.
pub struct WvVector {
    inner: RatVector,
}

/// Opaque decomposition of a vector into its components `k = 0..=n`.
pub struct WvDecomposition {
    inner: DecompositionReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(WvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::SizeGuard { .. } => WvStatus::SizeGuard,
            Error::Infeasible(_) => WvStatus::Infeasible,
            _ => WvStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> WvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WvStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            WvStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(WvStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(WvStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(WvStatus::NullPointer, "null handle".into()))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(WvStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn shape(m: usize, n: usize) -> Result<Shape, Failure> {
    Ok(Shape::new(m, n)?)
}

fn new_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|e| Failure(WvStatus::Internal, e.to_string()))
}

unsafe fn emit_vector(out: *mut *mut WvVector, v: RatVector) {
    *out = Box::into_raw(Box::new(WvVector { inner: v }));
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn wv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses comma-separated rationals such as `"1,-1/2,3"`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_vector_parse(text: *const c_char, out: *mut *mut WvVector) -> WvStatus {
    guard(|| {
        check_out(out)?;
        let s = read_str(text)?;
        let entries = s
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        emit_vector(out, RatVector::new(entries));
        Ok(())
    })
}

/// # Safety
/// `v` must be null or a live vector handle.
#[no_mangle]
pub unsafe extern "C" fn wv_vector_len(v: *const WvVector) -> usize {
    v.as_ref().map_or(0, |v| v.inner.dim())
}

/// Entry `i` as a newly allocated `"p/q"` string.
///
/// # Safety
/// `v` must be a live vector handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_vector_get(v: *const WvVector, i: usize, out: *mut *mut c_char) -> WvStatus {
    guard(|| {
        check_out(out)?;
        let v = deref(v)?;
        let x = v.inner.entries().get(i).ok_or_else(|| {
            Failure(WvStatus::OutOfRange, format!("index {i} out of range for length {}", v.inner.dim()))
        })?;
        *out = new_string(format_rational(x))?;
        Ok(())
    })
}

/// The whole vector as a comma-separated string.
///
/// # Safety
/// `v` must be a live vector handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_vector_to_string(v: *const WvVector, out: *mut *mut c_char) -> WvStatus {
    guard(|| {
        check_out(out)?;
        let v = deref(v)?;
        let parts: Vec<String> = v.inner.iter().map(format_rational).collect();
        *out = new_string(parts.join(","))?;
        Ok(())
    })
}

/// # Safety
/// `v` must be null or a vector handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wv_vector_free(v: *mut WvVector) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// The component-`k` distance profile `[p_0, ..., p_n]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_distance_profile(m: usize, n: usize, k: usize, out: *mut *mut WvVector) -> WvStatus {
    guard(|| {
        check_out(out)?;
        let p = distance_profile(shape(m, n)?, k)?;
        emit_vector(out, RatVector::new(p.values));
        Ok(())
    })
}

/// Splits `v` (length `m^n`) into its components.
///
/// # Safety
/// `v` must be a live vector handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_decompose(
    m: usize,
    n: usize,
    v: *const WvVector,
    out: *mut *mut WvDecomposition,
) -> WvStatus {
    guard(|| {
        check_out(out)?;
        let v = deref(v)?;
        let report = decompose_result(shape(m, n)?, &v.inner, &Caps::default())?;
        *out = Box::into_raw(Box::new(WvDecomposition { inner: report }));
        Ok(())
    })
}

/// Number of components, `n + 1`.
///
/// # Safety
/// `d` must be null or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn wv_decomposition_len(d: *const WvDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.inner.components.len())
}

/// Copy of component `k`.
///
/// # Safety
/// `d` must be a live decomposition handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_decomposition_component(
    d: *const WvDecomposition,
    k: usize,
    out: *mut *mut WvVector,
) -> WvStatus {
    guard(|| {
        check_out(out)?;
        let d = deref(d)?;
        let comp =
            d.inner.components.get(k).ok_or_else(|| Failure(WvStatus::OutOfRange, format!("no component k={k}")))?;
        emit_vector(out, comp.clone());
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a decomposition handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wv_decomposition_free(d: *mut WvDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Schur parameters `lambda[0..=n]` of the distance weights `a` (length `n + 1`).
///
/// # Safety
/// `a` must be a live vector handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_schur_parameters(
    m: usize,
    n: usize,
    a: *const WvVector,
    out: *mut *mut WvVector,
) -> WvStatus {
    guard(|| {
        check_out(out)?;
        let a = deref(a)?;
        let w = DistanceWeights::new(shape(m, n)?, a.inner.entries().to_vec())?;
        emit_vector(out, RatVector::new(schur_parameters(&w, &Caps::default())?.lambda));
        Ok(())
    })
}

/// Scores of a committee-ballot profile (length `m^n`) under distance weights `a`.
///
/// # Safety
/// `a` and `profile` must be live vector handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_tally_ballots(
    m: usize,
    n: usize,
    a: *const WvVector,
    profile: *const WvVector,
    out: *mut *mut WvVector,
) -> WvStatus {
    guard(|| {
        check_out(out)?;
        let (a, profile) = (deref(a)?, deref(profile)?);
        let w = DistanceWeights::new(shape(m, n)?, a.inner.entries().to_vec())?;
        emit_vector(out, tally_committee_ballots(&w, &profile.inner, &Caps::default())?.scores);
        Ok(())
    })
}

/// Number of orbits of rankings, as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_orbit_count(m: usize, n: usize, out: *mut *mut c_char) -> WvStatus {
    guard(|| {
        check_out(out)?;
        shape(m, n)?;
        *out = new_string(orbit_count(m, n).to_string())?;
        Ok(())
    })
}

/// Number of free weights of a general ranking rule, as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_parameter_count(m: usize, n: usize, out: *mut *mut c_char) -> WvStatus {
    guard(|| {
        check_out(out)?;
        shape(m, n)?;
        *out = new_string(parameter_count(m, n).to_string())?;
        Ok(())
    })
}

/// Solves a paradox instance given as JSON
/// `{"weights": [...], "targets": [...], "orbit": key}` and writes the
/// solution as JSON `{"profile", "solution_space_dim", "verified"}`.
///
/// # Safety
/// `instance_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wv_paradox(
    m: usize,
    n: usize,
    instance_json: *const c_char,
    out: *mut *mut c_char,
) -> WvStatus {
    guard(|| {
        check_out(out)?;
        let caps = Caps::default();
        let inst = ParadoxInstance::from_json(shape(m, n)?, read_str(instance_json)?, &caps)?;
        let sol = construct_paradox_profile(&inst, &caps)?;
        let verified = verify_solution(&inst, &sol, &caps);
        let json = serde_json::json!({
            "profile": sol.profile,
            "solution_space_dim": sol.solution_space_dim,
            "verified": verified,
        });
        *out = new_string(json.to_string())?;
        Ok(())
    })
}
