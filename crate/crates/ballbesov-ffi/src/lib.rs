//! C ABI for the ballbesov library.
//!
//! Objects cross the boundary as opaque handles created and destroyed by
//! this library; every function returns a [`BbStatus`] code. On any failure
//! the thread-local detail message is readable through
//! [`bb_last_error_message`] until the next failing call on that thread.
//! Strings returned through `char**` out-parameters are owned by the caller
//! and must be released with [`bb_string_free`]. Complex vectors are passed
//! as interleaved doubles (re0, im0, re1, im1, ...).
//!
//! All functions are null-safe on their pointer arguments and catch panics,
//! turning them into `BB_STATUS_PANIC`. Handles are not synchronized;
//! sharing one handle across threads requires external locking, matching the
//! underlying types (immutable after construction, safe for concurrent
//! reads).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ballbesov::error::Error;
use ballbesov::norms::{besov_norm_with, NormOptions};
use ballbesov::operators::{apply_m, apply_t_exact, OperatorSpec};
use ballbesov::quadrature::{BallRule, SphereRule};
use ballbesov::series::{kernel_series, BallPoint, HoloSeries};
use ballbesov::validation::{run_all, run_check, Manifest};
use ballbesov::weights::WeightS;
use num_complex::Complex64;

/// Status codes returned by every API function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BbStatus {
    BbStatusOk = 0,
    /// A required pointer argument was null.
    BbStatusNullArgument = 1,
    /// Malformed JSON or an unknown name.
    BbStatusParse = 2,
    /// Dimension mismatch between arguments.
    BbStatusDimension = 3,
    /// A numerical precondition was violated (divergent integral, |z| too
    /// close to the boundary, truncation too small, non-finite value).
    BbStatusPrecondition = 4,
    /// Invalid parameter value.
    BbStatusInvalid = 5,
    /// Filesystem error.
    BbStatusIo = 6,
    /// Argument was not valid UTF-8.
    BbStatusUtf8 = 7,
    /// An internal panic was caught.
    BbStatusPanic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn status_of(err: &Error) -> BbStatus {
    match err {
        Error::Parse(_) => BbStatus::BbStatusParse,
        Error::DimensionMismatch { .. } => BbStatus::BbStatusDimension,
        Error::InvalidParameter(_) => BbStatus::BbStatusInvalid,
        Error::Precondition(_)
        | Error::Truncation(_)
        | Error::NonFinite(_)
        | Error::DegreeOutOfRange { .. } => BbStatus::BbStatusPrecondition,
        Error::Io(_) => BbStatus::BbStatusIo,
    }
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn bb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned through a `char**` out-parameter.
///
/// # Safety
/// `s` must have been produced by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn bb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Opaque truncated holomorphic series handle.
pub struct BbSeries(HoloSeries);

/// Opaque weight handle.
pub struct BbWeight(WeightS);

fn guard<F: FnOnce() -> BbStatus>(f: F) -> BbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(e) => {
            let msg = e
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| e.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&msg);
            BbStatus::BbStatusPanic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, BbStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(BbStatus::BbStatusNullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        BbStatus::BbStatusUtf8
    })
}

fn write_string(out: *mut *mut c_char, s: String) -> BbStatus {
    let c = match CString::new(s) {
        Ok(c) => c,
        Err(_) => {
            set_error("output contained an interior NUL");
            return BbStatus::BbStatusPanic;
        }
    };
    unsafe { *out = c.into_raw() };
    BbStatus::BbStatusOk
}

unsafe fn read_complex_slice(
    coords: *const f64,
    dim: usize,
) -> Result<Vec<Complex64>, BbStatus> {
    if coords.is_null() {
        set_error("null coordinate pointer");
        return Err(BbStatus::BbStatusNullArgument);
    }
    let raw = std::slice::from_raw_parts(coords, 2 * dim);
    Ok(raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

macro_rules! nonnull {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(r) => r,
            None => {
                set_error("null handle argument");
                return BbStatus::BbStatusNullArgument;
            }
        }
    };
}

macro_rules! out_param {
    ($p:expr) => {
        if $p.is_null() {
            set_error("null output pointer");
            return BbStatus::BbStatusNullArgument;
        }
    };
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => {
                set_error(&err.to_string());
                return status_of(&err);
            }
        }
    };
}

/// Parses a series from its JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bb_series_from_json(
    json: *const c_char,
    out: *mut *mut BbSeries,
) -> BbStatus {
    guard(|| {
        out_param!(out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let series = try_ffi!(HoloSeries::from_json_str(text));
        unsafe { *out = Box::into_raw(Box::new(BbSeries(series))) };
        BbStatus::BbStatusOk
    })
}

/// Serializes a series to its JSON document.
///
/// # Safety
/// `series` must be a live handle; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bb_series_to_json(
    series: *const BbSeries,
    out_json: *mut *mut c_char,
) -> BbStatus {
    guard(|| {
        out_param!(out_json);
        let s = nonnull!(series);
        write_string(out_json, s.0.to_json_string())
    })
}

/// # Safety
/// `series` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bb_series_free(series: *mut BbSeries) {
    if !series.is_null() {
        drop(unsafe { Box::from_raw(series) });
    }
}

/// # Safety
/// `series` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_series_dim(series: *const BbSeries, out: *mut usize) -> BbStatus {
    guard(|| {
        out_param!(out);
        let s = nonnull!(series);
        unsafe { *out = s.0.dim() };
        BbStatus::BbStatusOk
    })
}

/// # Safety
/// `series` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_series_max_degree(
    series: *const BbSeries,
    out: *mut u32,
) -> BbStatus {
    guard(|| {
        out_param!(out);
        let s = nonnull!(series);
        unsafe { *out = s.0.max_degree() };
        BbStatus::BbStatusOk
    })
}

/// Evaluates the series at a point given as `dim` interleaved (re, im)
/// pairs; the point must lie in the open unit ball.
///
/// # Safety
/// `series` must be a live handle; `coords` must point at `2 dim` doubles;
/// `out_re`, `out_im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_series_evaluate(
    series: *const BbSeries,
    coords: *const f64,
    dim: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> BbStatus {
    guard(|| {
        out_param!(out_re);
        out_param!(out_im);
        let s = nonnull!(series);
        let z = match unsafe { read_complex_slice(coords, dim) } {
            Ok(v) => v,
            Err(st) => return st,
        };
        let point = try_ffi!(BallPoint::new(z));
        let v = try_ffi!(s.0.evaluate(&point));
        unsafe {
            *out_re = v.re;
            *out_im = v.im;
        }
        BbStatus::BbStatusOk
    })
}

/// Coefficient-convolution product truncated to `max_degree`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_series_multiply(
    a: *const BbSeries,
    b: *const BbSeries,
    max_degree: u32,
    out: *mut *mut BbSeries,
) -> BbStatus {
    guard(|| {
        out_param!(out);
        let fa = nonnull!(a);
        let fb = nonnull!(b);
        let prod = try_ffi!(fa.0.multiply(&fb.0, max_degree));
        unsafe { *out = Box::into_raw(Box::new(BbSeries(prod))) };
        BbStatus::BbStatusOk
    })
}

/// D^alpha: scales the degree-k block by (k+1)^alpha.
///
/// # Safety
/// `series` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_series_frac_derivative(
    series: *const BbSeries,
    alpha: f64,
    out: *mut *mut BbSeries,
) -> BbStatus {
    guard(|| {
        out_param!(out);
        let s = nonnull!(series);
        let d = ballbesov::calculus::frac_derivative(&s.0, alpha);
        unsafe { *out = Box::into_raw(Box::new(BbSeries(d))) };
        BbStatus::BbStatusOk
    })
}

/// R: scales the degree-k block by k.
///
/// # Safety
/// `series` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_series_radial_derivative(
    series: *const BbSeries,
    out: *mut *mut BbSeries,
) -> BbStatus {
    guard(|| {
        out_param!(out);
        let s = nonnull!(series);
        let d = ballbesov::calculus::radial_derivative(&s.0);
        unsafe { *out = Box::into_raw(Box::new(BbSeries(d))) };
        BbStatus::BbStatusOk
    })
}

/// Truncation of (1 - <xi, tau>)^{-s} to degree `max_degree`; `tau` is given
/// as interleaved pairs and must lie in the open ball.
///
/// # Safety
/// `tau` must point at `2 dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_kernel_series(
    tau: *const f64,
    dim: usize,
    s: f64,
    max_degree: u32,
    out: *mut *mut BbSeries,
) -> BbStatus {
    guard(|| {
        out_param!(out);
        let coords = match unsafe { read_complex_slice(tau, dim) } {
            Ok(v) => v,
            Err(st) => return st,
        };
        let point = try_ffi!(BallPoint::new(coords));
        let series = try_ffi!(kernel_series(&point, s, max_degree));
        unsafe { *out = Box::into_raw(Box::new(BbSeries(series))) };
        BbStatus::BbStatusOk
    })
}

/// Parses a weight from its JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_weight_from_json(
    json: *const c_char,
    out: *mut *mut BbWeight,
) -> BbStatus {
    guard(|| {
        out_param!(out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let w = try_ffi!(WeightS::from_json_str(text));
        unsafe { *out = Box::into_raw(Box::new(BbWeight(w))) };
        BbStatus::BbStatusOk
    })
}

/// omega(x) for x in (0, 1].
///
/// # Safety
/// `weight` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_weight_eval(
    weight: *const BbWeight,
    x: f64,
    out: *mut f64,
) -> BbStatus {
    guard(|| {
        out_param!(out);
        let w = nonnull!(weight);
        let v = try_ffi!(w.0.eval(x));
        unsafe { *out = v };
        BbStatus::BbStatusOk
    })
}

/// # Safety
/// `weight` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bb_weight_free(weight: *mut BbWeight) {
    if !weight.is_null() {
        drop(unsafe { Box::from_raw(weight) });
    }
}

/// Besov norm of `series` with the given parameters; the full result
/// (value, provenance, convergence flag) is returned as a JSON document.
/// `unchecked` nonzero computes divergent parameter sets anyway and flags
/// them.
///
/// # Safety
/// `series` and `weight` must be live handles; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_besov_norm(
    series: *const BbSeries,
    p: f64,
    weight: *const BbWeight,
    levels: u32,
    points: u32,
    sphere_degree: u32,
    unchecked: i32,
    out_json: *mut *mut c_char,
) -> BbStatus {
    guard(|| {
        out_param!(out_json);
        let f = nonnull!(series);
        let w = nonnull!(weight);
        let n = f.0.dim();
        let sphere = try_ffi!(SphereRule::exact(n, sphere_degree));
        let rule = try_ffi!(BallRule::build_lenient(
            n,
            p - n as f64 - 1.0,
            Some(&w.0),
            levels,
            points,
            sphere
        ));
        let opts = NormOptions {
            enforce_integrability: unchecked == 0,
            refinement_check: true,
            force_quadrature: false,
        };
        let result = try_ffi!(besov_norm_with(&f.0, p, &w.0, &rule, opts));
        write_string(
            out_json,
            serde_json::to_string_pretty(&result).expect("norm result serializes"),
        )
    })
}

/// Exact action of the integral operator with symbol `h` and the given
/// truncations on `f`.
///
/// # Safety
/// `h` and `f` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_apply_t_exact(
    h: *const BbSeries,
    alpha: f64,
    kernel_truncation: u32,
    output_truncation: u32,
    f: *const BbSeries,
    out: *mut *mut BbSeries,
) -> BbStatus {
    guard(|| {
        out_param!(out);
        let hh = nonnull!(h);
        let ff = nonnull!(f);
        let spec = try_ffi!(OperatorSpec::new(
            hh.0.clone(),
            alpha,
            kernel_truncation,
            output_truncation
        ));
        let result = try_ffi!(apply_t_exact(&spec, &ff.0));
        unsafe { *out = Box::into_raw(Box::new(BbSeries(result))) };
        BbStatus::BbStatusOk
    })
}

/// The multiplier h f truncated to `max_degree`.
///
/// # Safety
/// `h` and `f` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_apply_m(
    h: *const BbSeries,
    f: *const BbSeries,
    max_degree: u32,
    out: *mut *mut BbSeries,
) -> BbStatus {
    guard(|| {
        out_param!(out);
        let hh = nonnull!(h);
        let ff = nonnull!(f);
        let result = try_ffi!(apply_m(&hh.0, &ff.0, max_degree));
        unsafe { *out = Box::into_raw(Box::new(BbSeries(result))) };
        BbStatus::BbStatusOk
    })
}

/// Runs one validation check (or "all") against a manifest JSON (null for
/// the shipped default). The reports are returned as a JSON array;
/// `out_pass` is 1 when every gated check passed.
///
/// # Safety
/// `check_id` must be a NUL-terminated string; `manifest_json` may be null;
/// `out_json` and `out_pass` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bb_validate(
    check_id: *const c_char,
    manifest_json: *const c_char,
    out_json: *mut *mut c_char,
    out_pass: *mut i32,
) -> BbStatus {
    guard(|| {
        out_param!(out_json);
        out_param!(out_pass);
        let id = match read_str(check_id) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let manifest = if manifest_json.is_null() {
            Manifest::default_manifest()
        } else {
            let text = match read_str(manifest_json) {
                Ok(t) => t,
                Err(s) => return s,
            };
            try_ffi!(Manifest::from_json_str(text))
        };
        let reports = if id == "all" {
            try_ffi!(run_all(&manifest))
        } else {
            try_ffi!(run_check(id, &manifest))
        };
        let pass = reports.iter().all(|r| !r.gated || r.pass);
        unsafe { *out_pass = if pass { 1 } else { 0 } };
        write_string(
            out_json,
            serde_json::to_string_pretty(&reports).expect("reports serialize"),
        )
    })
}
