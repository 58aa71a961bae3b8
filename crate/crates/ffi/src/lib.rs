//! C ABI over the benford-audit core library.
//!
//! Every function returns a [`BaStatus`]; results travel through out
//! pointers that are written only on `BA_STATUS_OK`. Mod-1 CDFs are
//! opaque handles created by the `ba_cdf_*` constructors and released
//! with [`ba_cdf_free`]. Strings returned by the library are released
//! with [`ba_string_free`]. On failure a human-readable message is
//! stored per thread and can be read back with
//! [`ba_last_error_message`].
//!
//! # Safety
//!
//! One contract covers the whole surface: pointer arguments must be
//! valid for the access implied by their type (readable array of the
//! stated length, NUL-terminated string, writable out location), and
//! handle arguments must come from this library and not have been
//! freed. Null handles and null out pointers are tolerated and
//! reported as [`BaStatus::NullPointer`]; a dangling or foreign
//! pointer is undefined behavior, as in any C API.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use benford_audit::error::Error;
use benford_audit::{audit, digits, metrics, modone, Base};

/// Result of every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was structurally invalid (bad base, bad UTF-8, ...).
    InvalidArgument = 2,
    /// An argument lies outside the mathematical domain of the operation.
    DomainError = 3,
    /// The request exceeds an exact-representation budget.
    CapacityError = 4,
    /// Malformed serialized input.
    FormatError = 5,
    /// No usable data.
    EmptyData = 6,
    IoError = 7,
    /// The library caught a panic instead of unwinding across the ABI.
    Panic = 8,
}

/// Opaque handle to a piecewise mod-1 CDF.
pub struct BaModOneCdf {
    inner: modone::ModOneCdf,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let clean = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).unwrap_or_default();
    });
}

fn fail(status: BaStatus, msg: impl std::fmt::Display) -> BaStatus {
    set_last_error(&msg.to_string());
    status
}

fn error_status(e: &Error) -> BaStatus {
    let status = match e {
        Error::Domain(_) => BaStatus::DomainError,
        Error::Capacity(_) => BaStatus::CapacityError,
        Error::Config(_) => BaStatus::InvalidArgument,
        Error::Format { .. } => BaStatus::FormatError,
        Error::EmptyData(_) => BaStatus::EmptyData,
        Error::Io(_) => BaStatus::IoError,
    };
    fail(status, e)
}

fn null_pointer() -> BaStatus {
    fail(BaStatus::NullPointer, "null pointer argument")
}

fn guard(f: impl FnOnce() -> BaStatus) -> BaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(BaStatus::Panic, "internal panic"),
    }
}

fn checked_base(base: u32) -> Result<Base, BaStatus> {
    Base::new(base).map_err(|e| error_status(&e))
}

unsafe fn emit_handle(
    out: *mut *mut BaModOneCdf,
    result: Result<modone::ModOneCdf, Error>,
) -> BaStatus {
    match result {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(BaModOneCdf { inner }));
            BaStatus::Ok
        }
        Err(e) => error_status(&e),
    }
}

unsafe fn emit_f64(out: *mut f64, result: Result<f64, Error>) -> BaStatus {
    match result {
        Ok(v) => {
            *out = v;
            BaStatus::Ok
        }
        Err(e) => error_status(&e),
    }
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn ba_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn ba_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// CDF of `frac(log_b X)` for `X = U * b^theta`, `U` uniform on (0, 1].
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_uniform_phase(
    theta: f64,
    base: u32,
    out: *mut *mut BaModOneCdf,
) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        emit_handle(out, modone::uniform_phase_cdf(theta, base))
    })
}

/// CDF of `frac(log_b X)` for `X` uniform on `(lo, hi)`, `0 <= lo < hi`.
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_log_uniform(
    lo: f64,
    hi: f64,
    base: u32,
    out: *mut *mut BaModOneCdf,
) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        emit_handle(out, modone::log_mod_one_uniform(lo, hi, base))
    })
}

/// CDF of `frac(log_b X)` for `X` uniform on `(0, t)`.
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_uniform_continuous(
    t: f64,
    eval_base: u32,
    out: *mut *mut BaModOneCdf,
) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let base = match checked_base(eval_base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        let dist = modone::AnalyticDistribution::UniformContinuous { t };
        emit_handle(out, modone::log_mod_one(&dist, base))
    })
}

/// CDF of `frac(log_b X)` for `X = dist_base^(a U)`, `U` uniform on (0, 1).
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_power_of_uniform(
    a: f64,
    dist_base: u32,
    eval_base: u32,
    out: *mut *mut BaModOneCdf,
) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let (db, eb) = match (checked_base(dist_base), checked_base(eval_base)) {
            (Ok(db), Ok(eb)) => (db, eb),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let dist = modone::AnalyticDistribution::PowerOfUniform { a, base: db };
        emit_handle(out, modone::log_mod_one(&dist, eb))
    })
}

/// CDF of `frac(log_b X)` for `X` Benford-distributed on one decade
/// `[dist_base^k, dist_base^(k+1))`.
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_benford_decade(
    k: i32,
    dist_base: u32,
    eval_base: u32,
    out: *mut *mut BaModOneCdf,
) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let (db, eb) = match (checked_base(dist_base), checked_base(eval_base)) {
            (Ok(db), Ok(eb)) => (db, eb),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let dist = modone::AnalyticDistribution::BenfordDecade { k, base: db };
        emit_handle(out, modone::log_mod_one(&dist, eb))
    })
}

/// CDF of `frac(log_b X)` for `X` uniform on the integers `{1, ..., n}`.
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_uniform_integers(
    n: u64,
    eval_base: u32,
    out: *mut *mut BaModOneCdf,
) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let base = match checked_base(eval_base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        let dist = modone::AnalyticDistribution::UniformIntegers { n };
        emit_handle(out, modone::log_mod_one(&dist, base))
    })
}

/// Parse a CDF from the JSON produced by [`ba_cdf_to_json`].
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_from_json(
    text: *const c_char,
    out: *mut *mut BaModOneCdf,
) -> BaStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return null_pointer();
        }
        let text = match CStr::from_ptr(text).to_str() {
            Ok(t) => t,
            Err(e) => return fail(BaStatus::InvalidArgument, format!("invalid UTF-8: {e}")),
        };
        emit_handle(out, modone::ModOneCdf::from_json(text))
    })
}

/// New CDF of `frac(S + delta)` where `S` follows the given CDF.
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_shift(
    cdf: *const BaModOneCdf,
    delta: f64,
    out: *mut *mut BaModOneCdf,
) -> BaStatus {
    guard(|| {
        if cdf.is_null() || out.is_null() {
            return null_pointer();
        }
        if !delta.is_finite() {
            return fail(
                BaStatus::DomainError,
                format!("shift must be finite, got {delta}"),
            );
        }
        let shifted = modone::shift_mod_one(&(*cdf).inner, delta);
        emit_handle(out, Ok(shifted))
    })
}

/// Release a CDF handle. Null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_free(cdf: *mut BaModOneCdf) {
    if !cdf.is_null() {
        drop(Box::from_raw(cdf));
    }
}

/// Right-continuous CDF value `P(S <= s)`; `s` is clamped to [0, 1].
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_evaluate(
    cdf: *const BaModOneCdf,
    s: f64,
    out: *mut f64,
) -> BaStatus {
    guard(|| {
        if cdf.is_null() || out.is_null() {
            return null_pointer();
        }
        emit_f64(out, Ok((*cdf).inner.evaluate(s)))
    })
}

/// Left limit `P(S < s)`.
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_evaluate_left(
    cdf: *const BaModOneCdf,
    s: f64,
    out: *mut f64,
) -> BaStatus {
    guard(|| {
        if cdf.is_null() || out.is_null() {
            return null_pointer();
        }
        emit_f64(out, Ok((*cdf).inner.evaluate_left(s)))
    })
}

/// Radix the CDF's logarithm was taken in.
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_base(cdf: *const BaModOneCdf, out: *mut u32) -> BaStatus {
    guard(|| {
        if cdf.is_null() || out.is_null() {
            return null_pointer();
        }
        *out = (*cdf).inner.base().get();
        BaStatus::Ok
    })
}

/// Serialize the piece table to JSON. The string is owned by the caller
/// and must be released with [`ba_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_to_json(
    cdf: *const BaModOneCdf,
    out: *mut *mut c_char,
) -> BaStatus {
    guard(|| {
        if cdf.is_null() || out.is_null() {
            return null_pointer();
        }
        let text = (*cdf).inner.to_json();
        match CString::new(text) {
            Ok(s) => {
                *out = s.into_raw();
                BaStatus::Ok
            }
            Err(e) => fail(BaStatus::Panic, format!("unexpected NUL in JSON: {e}")),
        }
    })
}

/// Release a string returned by this library. Null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn ba_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact Kolmogorov-Smirnov distance to the uniform mod-1 law, with the
/// location where the supremum is attained.
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_ks(
    cdf: *const BaModOneCdf,
    out_statistic: *mut f64,
    out_location: *mut f64,
) -> BaStatus {
    guard(|| {
        if cdf.is_null() || out_statistic.is_null() || out_location.is_null() {
            return null_pointer();
        }
        let r = metrics::ks_distance(&(*cdf).inner);
        *out_statistic = r.statistic;
        *out_location = r.location;
        BaStatus::Ok
    })
}

/// Exact L1 (Wasserstein) distance to the uniform mod-1 law.
#[no_mangle]
pub unsafe extern "C" fn ba_cdf_wasserstein(cdf: *const BaModOneCdf, out: *mut f64) -> BaStatus {
    guard(|| {
        if cdf.is_null() || out.is_null() {
            return null_pointer();
        }
        emit_f64(out, Ok(metrics::wasserstein_distance(&(*cdf).inner)))
    })
}

/// Base-b significand and exponent of a positive finite `x`.
#[no_mangle]
pub unsafe extern "C" fn ba_significand(
    x: f64,
    base: u32,
    out_value: *mut f64,
    out_exponent: *mut i32,
) -> BaStatus {
    guard(|| {
        if out_value.is_null() || out_exponent.is_null() {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        match digits::significand(x, base) {
            Ok(s) => {
                *out_value = s.value;
                *out_exponent = s.exponent;
                BaStatus::Ok
            }
            Err(e) => error_status(&e),
        }
    })
}

/// First significant digit of `x` in the given base.
#[no_mangle]
pub unsafe extern "C" fn ba_first_digit(x: f64, base: u32, out: *mut u32) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        match digits::first_digit(x, base) {
            Ok(d) => {
                *out = d;
                BaStatus::Ok
            }
            Err(e) => error_status(&e),
        }
    })
}

/// Fractional part of `log_b x`, in [0, 1).
#[no_mangle]
pub unsafe extern "C" fn ba_log_fraction(x: f64, base: u32, out: *mut f64) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        emit_f64(out, digits::log_fraction(x, base))
    })
}

/// Benford first-digit law `log_b(1 + 1/d)`.
#[no_mangle]
pub unsafe extern "C" fn ba_benford_first_digit_pmf(
    digit: u32,
    base: u32,
    out: *mut f64,
) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        emit_f64(out, digits::benford_first_digit_pmf(digit, base))
    })
}

/// KS distance between the empirical law of `frac(log_b x_i)` and uniform.
#[no_mangle]
pub unsafe extern "C" fn ba_empirical_ks(
    values: *const f64,
    len: usize,
    base: u32,
    out: *mut f64,
) -> BaStatus {
    guard(|| {
        if out.is_null() || (values.is_null() && len > 0) {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        let samples = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(values, len)
        };
        emit_f64(out, metrics::empirical_ks(samples, base))
    })
}

/// Pearson chi-square of observed first digits against the Benford law,
/// with `base - 2` degrees of freedom.
#[no_mangle]
pub unsafe extern "C" fn ba_first_digit_chisq(
    values: *const f64,
    len: usize,
    base: u32,
    out_statistic: *mut f64,
    out_dof: *mut u32,
) -> BaStatus {
    guard(|| {
        if out_statistic.is_null() || out_dof.is_null() || (values.is_null() && len > 0) {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        let samples = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(values, len)
        };
        match metrics::first_digit_chisq(samples, base) {
            Ok((stat, dof)) => {
                *out_statistic = stat;
                *out_dof = dof;
                BaStatus::Ok
            }
            Err(e) => error_status(&e),
        }
    })
}

/// Sharp lower bound on the worst-case KS distance over scale phases.
#[no_mangle]
pub unsafe extern "C" fn ba_prop1_bound(base: u32, out: *mut f64) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        emit_f64(out, Ok(audit::prop1_bound(base)))
    })
}

/// Phase minimizing the KS distance of `frac(log_b(U b^theta))` to uniform,
/// found by a grid scan (at least 16 points) plus golden-section refinement.
#[no_mangle]
pub unsafe extern "C" fn ba_minimize_phase(
    base: u32,
    grid_size: usize,
    out_theta: *mut f64,
    out_distance: *mut f64,
) -> BaStatus {
    guard(|| {
        if out_theta.is_null() || out_distance.is_null() {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        match audit::minimize_phase(base, grid_size) {
            Ok((theta, d)) => {
                *out_theta = theta;
                *out_distance = d;
                BaStatus::Ok
            }
            Err(e) => error_status(&e),
        }
    })
}

/// Exact probability that a uniform integer from `{1, ..., N}` has first
/// digit 1, where `N = base^n`. Fails with `BA_STATUS_CAPACITY_ERROR` when
/// the reduced fraction does not fit in 64-bit integers.
#[no_mangle]
pub unsafe extern "C" fn ba_leading_one_fraction(
    n: u32,
    base: u32,
    out_numerator: *mut u64,
    out_denominator: *mut u64,
) -> BaStatus {
    guard(|| {
        if out_numerator.is_null() || out_denominator.is_null() {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        match audit::leading_one_fraction(n, base) {
            Ok(frac) => {
                let (Ok(num), Ok(den)) = (
                    u64::try_from(frac.numerator),
                    u64::try_from(frac.denominator),
                ) else {
                    return fail(
                        BaStatus::CapacityError,
                        format!("{frac} does not fit in 64-bit integers"),
                    );
                };
                *out_numerator = num;
                *out_denominator = den;
                BaStatus::Ok
            }
            Err(e) => error_status(&e),
        }
    })
}

/// Limit of [`ba_leading_one_fraction`] as `n` grows.
#[no_mangle]
pub unsafe extern "C" fn ba_leading_one_limit(base: u32, out: *mut f64) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer();
        }
        let base = match checked_base(base) {
            Ok(b) => b,
            Err(s) => return s,
        };
        emit_f64(out, Ok(audit::leading_one_limit(base)))
    })
}
