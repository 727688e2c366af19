//! C ABI over the harmap core: opaque handles, integer status codes, and a
//! thread-local error message.
//!
//! Conventions:
//! - Every fallible call returns a status code; HARMAP_OK is 0.
//! - On failure, `harmap_last_error` returns a NUL-terminated message that
//!   stays valid on the calling thread until the next failing call.
//! - Complex numbers cross the boundary as (re, im) double pairs.
//! - Handles own their data; release them with the matching `_free`. A
//!   NULL handle or output pointer yields HARMAP_ERR_NULL, never a crash.

use harmap::{AnalyticExpr, Error, HarmonicMap};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Parsed analytic expression handle.
pub struct HarmapExpr(AnalyticExpr);

/// Harmonic map handle (h plus conjugated g, g(0) = 0).
pub struct HarmapMap(HarmonicMap);

pub const HARMAP_OK: c_int = 0;
pub const HARMAP_ERR_SYNTAX: c_int = 1;
pub const HARMAP_ERR_UNKNOWN_IDENT: c_int = 2;
pub const HARMAP_ERR_NON_ANALYTIC: c_int = 3;
pub const HARMAP_ERR_MATH_DOMAIN: c_int = 4;
pub const HARMAP_ERR_OUTSIDE_DISK: c_int = 5;
pub const HARMAP_ERR_RANGE: c_int = 6;
pub const HARMAP_ERR_ORIENTATION: c_int = 7;
pub const HARMAP_ERR_UNIMODULAR: c_int = 8;
pub const HARMAP_ERR_CONTOUR: c_int = 9;
pub const HARMAP_ERR_WINDING_SIGN: c_int = 10;
pub const HARMAP_ERR_NONCONVERGENCE: c_int = 11;
pub const HARMAP_ERR_SINGULAR: c_int = 12;
pub const HARMAP_ERR_BUDGET: c_int = 13;
pub const HARMAP_ERR_PROFILE: c_int = 14;
pub const HARMAP_ERR_MISSING_PARAM: c_int = 15;
pub const HARMAP_ERR_ANALYTIC_ONLY: c_int = 16;
pub const HARMAP_ERR_BAD_GRID: c_int = 17;
pub const HARMAP_ERR_NULL: c_int = 100;
pub const HARMAP_ERR_UTF8: c_int = 101;
pub const HARMAP_ERR_PANIC: c_int = 102;

/// Channel selectors for `harmap_map_sup_norm`.
pub const HARMAP_CHANNEL_PRE_SCHWARZIAN: c_int = 0;
pub const HARMAP_CHANNEL_SCHWARZIAN: c_int = 1;
pub const HARMAP_CHANNEL_BECKER: c_int = 2;
pub const HARMAP_CHANNEL_HYPERBOLIC: c_int = 3;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let clean = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> c_int {
    match e {
        Error::Syntax { .. } => HARMAP_ERR_SYNTAX,
        Error::UnknownIdentifier { .. } => HARMAP_ERR_UNKNOWN_IDENT,
        Error::NonAnalyticConstruct { .. } => HARMAP_ERR_NON_ANALYTIC,
        Error::MathDomain { .. } => HARMAP_ERR_MATH_DOMAIN,
        Error::OutsideDisk { .. } => HARMAP_ERR_OUTSIDE_DISK,
        Error::RangeViolation { .. } => HARMAP_ERR_RANGE,
        Error::OrientationError { .. } => HARMAP_ERR_ORIENTATION,
        Error::DilatationUnimodular { .. } => HARMAP_ERR_UNIMODULAR,
        Error::ContourThroughTarget { .. } => HARMAP_ERR_CONTOUR,
        Error::OrientationViolation { .. } => HARMAP_ERR_WINDING_SIGN,
        Error::NonConvergence { .. } => HARMAP_ERR_NONCONVERGENCE,
        Error::JacobianSingular { .. } => HARMAP_ERR_SINGULAR,
        Error::SeedBudgetExceeded { .. } => HARMAP_ERR_BUDGET,
        Error::InsufficientProfile { .. } => HARMAP_ERR_PROFILE,
        Error::MissingParam { .. } => HARMAP_ERR_MISSING_PARAM,
        Error::AnalyticOnly { .. } => HARMAP_ERR_ANALYTIC_ONLY,
        Error::BadGrid { .. } => HARMAP_ERR_BAD_GRID,
    }
}

fn fail(e: Error) -> c_int {
    set_error(&e.to_string());
    status_of(&e)
}

fn guarded<F: FnOnce() -> c_int>(body: F) -> c_int {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            HARMAP_ERR_PANIC
        }
    }
}

/// # Safety
/// `p` must be NULL or a valid NUL-terminated string.
unsafe fn utf8_in<'a>(p: *const c_char) -> Result<&'a str, c_int> {
    if p.is_null() {
        set_error("null string argument");
        return Err(HARMAP_ERR_NULL);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        HARMAP_ERR_UTF8
    })
}

fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, c_int> {
    if p.is_null() {
        set_error("null output pointer");
        return Err(HARMAP_ERR_NULL);
    }
    Ok(unsafe { &mut *p })
}

fn handle<'a, T>(p: *const T) -> Result<&'a T, c_int> {
    if p.is_null() {
        set_error("null handle");
        return Err(HARMAP_ERR_NULL);
    }
    Ok(unsafe { &*p })
}

/// ABI revision; bump on any incompatible change.
#[no_mangle]
pub extern "C" fn harmap_abi_version() -> u32 {
    1
}

/// Message for the last failure on this thread. Never NULL; empty before
/// any failure. The pointer is invalidated by the next failing call on the
/// same thread.
#[no_mangle]
pub extern "C" fn harmap_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse an analytic expression in the variable z.
///
/// # Safety
/// `src` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn harmap_expr_parse(
    src: *const c_char,
    out: *mut *mut HarmapExpr,
) -> c_int {
    guarded(|| {
        let src = match utf8_in(src) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let out = match out_ptr(out) {
            Ok(o) => o,
            Err(code) => return code,
        };
        match AnalyticExpr::parse(src) {
            Ok(expr) => {
                *out = Box::into_raw(Box::new(HarmapExpr(expr)));
                HARMAP_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Release an expression handle. NULL is a no-op.
///
/// # Safety
/// `expr` must be NULL or a pointer from `harmap_expr_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn harmap_expr_free(expr: *mut HarmapExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Evaluate an expression at z = re + i*im, |z| < 1.
///
/// # Safety
/// Pointers must be valid; `expr` must come from `harmap_expr_parse`.
#[no_mangle]
pub unsafe extern "C" fn harmap_expr_eval(
    expr: *const HarmapExpr,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> c_int {
    guarded(|| {
        let expr = match handle(expr) {
            Ok(e) => e,
            Err(code) => return code,
        };
        let (out_re, out_im) = match (out_ptr(out_re), out_ptr(out_im)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(code), _) | (_, Err(code)) => return code,
        };
        match expr.0.eval(Complex64::new(re, im)) {
            Ok(w) => {
                *out_re = w.re;
                *out_im = w.im;
                HARMAP_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Value and first three derivatives at z. `out` receives 8 doubles:
/// f, f', f'', f''' as (re, im) pairs in that order.
///
/// # Safety
/// `out` must point to at least 8 doubles.
#[no_mangle]
pub unsafe extern "C" fn harmap_expr_jet(
    expr: *const HarmapExpr,
    re: f64,
    im: f64,
    out: *mut f64,
) -> c_int {
    guarded(|| {
        let expr = match handle(expr) {
            Ok(e) => e,
            Err(code) => return code,
        };
        if out.is_null() {
            set_error("null output pointer");
            return HARMAP_ERR_NULL;
        }
        match expr.0.eval_jet(Complex64::new(re, im)) {
            Ok(j) => {
                let vals = [j.f0, j.f1, j.f2, j.f3];
                for (i, v) in vals.iter().enumerate() {
                    *out.add(2 * i) = v.re;
                    *out.add(2 * i + 1) = v.im;
                }
                HARMAP_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Build a harmonic map f = h + conj(g) from two expression sources.
/// g is normalized to g(0) = 0; the map must be orientation preserving at
/// the origin.
///
/// # Safety
/// Strings must be valid NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn harmap_map_new(
    label: *const c_char,
    h_src: *const c_char,
    g_src: *const c_char,
    out: *mut *mut HarmapMap,
) -> c_int {
    guarded(|| {
        let label = match utf8_in(label) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let h_src = match utf8_in(h_src) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let g_src = match utf8_in(g_src) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let out = match out_ptr(out) {
            Ok(o) => o,
            Err(code) => return code,
        };
        match harmap::harmonic::make_harmonic(label, h_src, g_src) {
            Ok(map) => {
                *out = Box::into_raw(Box::new(HarmapMap(map)));
                HARMAP_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a map handle. NULL is a no-op.
///
/// # Safety
/// `map` must be NULL or a pointer from `harmap_map_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn harmap_map_free(map: *mut HarmapMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// f(z) and the Jacobian at z. `out` receives 3 doubles: value re, im,
/// Jacobian.
///
/// # Safety
/// `out` must point to at least 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn harmap_map_eval(
    map: *const HarmapMap,
    re: f64,
    im: f64,
    out: *mut f64,
) -> c_int {
    guarded(|| {
        let map = match handle(map) {
            Ok(m) => m,
            Err(code) => return code,
        };
        if out.is_null() {
            set_error("null output pointer");
            return HARMAP_ERR_NULL;
        }
        match map.0.eval_point(Complex64::new(re, im)) {
            Ok(p) => {
                *out = p.value.re;
                *out.add(1) = p.value.im;
                *out.add(2) = p.jacobian;
                HARMAP_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Operator values at z. `out` receives 9 doubles: pre-Schwarzian (re, im),
/// Schwarzian (re, im), hyperbolic derivative (re, im), then the weighted
/// channels |P|(1-|z|^2), |S|(1-|z|^2)^2, and the Becker sum.
///
/// # Safety
/// `out` must point to at least 9 doubles.
#[no_mangle]
pub unsafe extern "C" fn harmap_map_operators(
    map: *const HarmapMap,
    re: f64,
    im: f64,
    out: *mut f64,
) -> c_int {
    guarded(|| {
        let map = match handle(map) {
            Ok(m) => m,
            Err(code) => return code,
        };
        if out.is_null() {
            set_error("null output pointer");
            return HARMAP_ERR_NULL;
        }
        match harmap::operators::harmonic_operators(&map.0, Complex64::new(re, im)) {
            Ok(v) => {
                let pairs = [v.p, v.s, v.hyp];
                for (i, c) in pairs.iter().enumerate() {
                    *out.add(2 * i) = c.re;
                    *out.add(2 * i + 1) = c.im;
                }
                *out.add(6) = v.pre_q;
                *out.add(7) = v.nehari_q;
                *out.add(8) = v.becker_q;
                HARMAP_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Disk sup-norm of a weighted channel (HARMAP_CHANNEL_*). Zero
/// `ladder_depth` or `angular_base` picks the defaults (13 and 256).
/// An infinite result means the channel poisoned at a sampled point; that
/// is a value, not an error.
///
/// # Safety
/// Output pointers must be valid or NULL (NULL outputs are skipped).
#[no_mangle]
pub unsafe extern "C" fn harmap_map_sup_norm(
    map: *const HarmapMap,
    channel: c_int,
    ladder_depth: usize,
    angular_base: usize,
    out_value: *mut f64,
    out_converged: *mut c_int,
) -> c_int {
    guarded(|| {
        let map = match handle(map) {
            Ok(m) => m,
            Err(code) => return code,
        };
        let channel = match channel {
            HARMAP_CHANNEL_PRE_SCHWARZIAN => harmap::operators::Channel::PreSchwarzian,
            HARMAP_CHANNEL_SCHWARZIAN => harmap::operators::Channel::Nehari,
            HARMAP_CHANNEL_BECKER => harmap::operators::Channel::Becker,
            HARMAP_CHANNEL_HYPERBOLIC => harmap::operators::Channel::Hyperbolic,
            other => {
                set_error(&format!("unknown channel selector {other}"));
                return HARMAP_ERR_BAD_GRID;
            }
        };
        let mut cfg = harmap::sampling::SweepConfig::default();
        if ladder_depth > 0 {
            cfg.ladder_depth = ladder_depth;
        }
        if angular_base > 0 {
            cfg.base_angular = angular_base;
        }
        let q = harmap::operators::channel_quantity(&map.0, channel);
        let (est, _) = harmap::sampling::sup_norm(&q, &cfg);
        if !out_value.is_null() {
            *out_value = est.value;
        }
        if !out_converged.is_null() {
            *out_converged = est.converged as c_int;
        }
        HARMAP_OK
    })
}

/// Winding number of f around w = w_re + i*w_im on the circle |z| = radius.
///
/// # Safety
/// `out_count` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn harmap_map_winding(
    map: *const HarmapMap,
    w_re: f64,
    w_im: f64,
    radius: f64,
    out_count: *mut i64,
) -> c_int {
    guarded(|| {
        let map = match handle(map) {
            Ok(m) => m,
            Err(code) => return code,
        };
        let out = match out_ptr(out_count) {
            Ok(o) => o,
            Err(code) => return code,
        };
        match harmap::valence::winding_number(&map.0, Complex64::new(w_re, w_im), radius) {
            Ok(count) => {
                *out = count;
                HARMAP_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Count Newton-certified preimages of w inside |z| < radius.
///
/// # Safety
/// `out_count` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn harmap_map_preimage_count(
    map: *const HarmapMap,
    w_re: f64,
    w_im: f64,
    radius: f64,
    out_count: *mut i64,
) -> c_int {
    guarded(|| {
        let map = match handle(map) {
            Ok(m) => m,
            Err(code) => return code,
        };
        let out = match out_ptr(out_count) {
            Ok(o) => o,
            Err(code) => return code,
        };
        match harmap::valence::preimages_newton(&map.0, Complex64::new(w_re, w_im), radius) {
            Ok(roots) => {
                *out = roots.len() as i64;
                HARMAP_OK
            }
            Err(e) => fail(e),
        }
    })
}
