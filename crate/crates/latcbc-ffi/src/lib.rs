//! C ABI for the lattice-rule construction library.
//!
//! Constructions return an opaque `LatcbcResult` handle; accessors copy the
//! generating vector, the chosen weights, and the error-bound histories into
//! caller-owned buffers. Every entry point returns a status code; the last
//! failure message is kept per thread and can be fetched with
//! [`latcbc_last_error`]. Handles must be released with
//! [`latcbc_result_free`].

use std::cell::RefCell;
use std::os::raw::c_char;
use std::ptr;

use latcbc::{
    dcbc_pod, dcbc_product, icbc, wce_product, CoordinateFamily, GeneratingVector, IcbcOptions,
    IcbcTrace, NormBoundSpec, OrderFamily, OrderWeights, WeightScheme,
};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatcbcStatus {
    Ok = 0,
    /// A pointer argument was null or a length was inconsistent.
    NullPointer = 1,
    /// Arguments were rejected (bad modulus, nonpositive weights, ...).
    InvalidArgument = 2,
    /// A construction or evaluation failed numerically.
    NumericalFailure = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message.into().into_bytes());
}

fn fail(status: LatcbcStatus, message: impl Into<String>) -> LatcbcStatus {
    set_error(message);
    status
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncating) and returns the full message length in bytes.
/// `buf` may be null to query the length alone.
#[no_mangle]
pub unsafe extern "C" fn latcbc_last_error(buf: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        if !buf.is_null() && capacity > 0 {
            let n = msg.len().min(capacity - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// An opaque construction result.
pub struct LatcbcResult {
    result: latcbc::ConstructionResult,
    trace: Option<IcbcTrace>,
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(ptr, len))
    }
}

unsafe fn coordinate_family(b: *const f64, s: usize) -> Option<CoordinateFamily> {
    slice_arg(b, s).map(|v| CoordinateFamily::Explicit(v.to_vec()))
}

unsafe fn norm_spec(b: *const f64, b_order: *const f64, s: usize) -> Result<Option<NormBoundSpec>, String> {
    let Some(coord) = coordinate_family(b, s) else {
        if !b_order.is_null() {
            return Err("b_order given without b".into());
        }
        return Ok(None);
    };
    let order = match slice_arg(b_order, s) {
        None => OrderFamily::Ones,
        Some(values) => OrderFamily::from_values(values).map_err(|e| e.to_string())?,
    };
    Ok(Some(NormBoundSpec::new(coord, order)))
}

unsafe fn store(out: *mut *mut LatcbcResult, handle: LatcbcResult) -> LatcbcStatus {
    if out.is_null() {
        return fail(LatcbcStatus::NullPointer, "out handle pointer is null");
    }
    *out = Box::into_raw(Box::new(handle));
    LatcbcStatus::Ok
}

fn status_of(e: &latcbc::Error) -> LatcbcStatus {
    match e {
        latcbc::Error::Domain(_) | latcbc::Error::NotPrime(_) => LatcbcStatus::NumericalFailure,
        _ => LatcbcStatus::InvalidArgument,
    }
}

/// Classic CBC with product weights `gamma[0..s]`. `b` (and optionally
/// `b_order`, the values `B_1..B_s`) may be supplied to certify the RMS
/// bound; both may be null.
///
/// # Safety
/// `gamma` must point to `s` doubles; `b`/`b_order` must be null or point
/// to `s` doubles.
#[no_mangle]
pub unsafe extern "C" fn latcbc_cbc_product(
    n: u64,
    s: usize,
    gamma: *const f64,
    b: *const f64,
    b_order: *const f64,
    out: *mut *mut LatcbcResult,
) -> LatcbcStatus {
    let Some(gamma) = slice_arg(gamma, s) else {
        return fail(LatcbcStatus::NullPointer, "gamma is null");
    };
    let spec = match norm_spec(b, b_order, s) {
        Ok(spec) => spec,
        Err(m) => return fail(LatcbcStatus::InvalidArgument, m),
    };
    match latcbc::cbc_product(n, s, gamma, spec.as_ref()) {
        Ok(result) => store(out, LatcbcResult { result, trace: None }),
        Err(e) => fail(status_of(&e), e.to_string()),
    }
}

/// Classic CBC with POD weights: product part `gamma[0..s]` and order
/// factors `gamma_order` holding the values `Gamma_1..Gamma_s`.
///
/// # Safety
/// `gamma` and `gamma_order` must point to `s` doubles; `b`/`b_order` must
/// be null or point to `s` doubles.
#[no_mangle]
pub unsafe extern "C" fn latcbc_cbc_pod(
    n: u64,
    s: usize,
    gamma: *const f64,
    gamma_order: *const f64,
    b: *const f64,
    b_order: *const f64,
    out: *mut *mut LatcbcResult,
) -> LatcbcStatus {
    let Some(gamma) = slice_arg(gamma, s) else {
        return fail(LatcbcStatus::NullPointer, "gamma is null");
    };
    let Some(order_values) = slice_arg(gamma_order, s) else {
        return fail(LatcbcStatus::NullPointer, "gamma_order is null");
    };
    let spec = match norm_spec(b, b_order, s) {
        Ok(spec) => spec,
        Err(m) => return fail(LatcbcStatus::InvalidArgument, m),
    };
    let order = match OrderWeights::from_values(order_values) {
        Ok(order) => order,
        Err(e) => return fail(LatcbcStatus::InvalidArgument, e.to_string()),
    };
    let scheme = match WeightScheme::pod(gamma.to_vec(), order) {
        Ok(scheme) => scheme,
        Err(e) => return fail(LatcbcStatus::InvalidArgument, e.to_string()),
    };
    match latcbc::cbc_pod(n, s, &scheme, spec.as_ref()) {
        Ok(result) => store(out, LatcbcResult { result, trace: None }),
        Err(e) => fail(status_of(&e), e.to_string()),
    }
}

/// Double CBC with product-form bound data `b[0..s]`. Pass `gamma1 <= 0`
/// for the default first-dimension weight.
///
/// # Safety
/// `b` must point to `s` doubles.
#[no_mangle]
pub unsafe extern "C" fn latcbc_dcbc_product(
    n: u64,
    s: usize,
    b: *const f64,
    gamma1: f64,
    out: *mut *mut LatcbcResult,
) -> LatcbcStatus {
    let Some(spec) = coordinate_family(b, s).map(NormBoundSpec::product_form) else {
        return fail(LatcbcStatus::NullPointer, "b is null");
    };
    let gamma1 = if gamma1 > 0.0 {
        gamma1
    } else {
        latcbc::construct::default_gamma1()
    };
    match dcbc_product(n, s, &spec, gamma1) {
        Ok(result) => store(out, LatcbcResult { result, trace: None }),
        Err(e) => fail(status_of(&e), e.to_string()),
    }
}

/// Double CBC with POD weights: bound data `(b, B)` and order weight
/// factors `gamma_order` holding `Gamma_1..Gamma_s`. Pass `gamma1 <= 0`
/// for the default.
///
/// # Safety
/// `b`, `b_order`, and `gamma_order` must point to `s` doubles.
#[no_mangle]
pub unsafe extern "C" fn latcbc_dcbc_pod(
    n: u64,
    s: usize,
    b: *const f64,
    b_order: *const f64,
    gamma_order: *const f64,
    gamma1: f64,
    out: *mut *mut LatcbcResult,
) -> LatcbcStatus {
    let spec = match norm_spec(b, b_order, s) {
        Ok(Some(spec)) => spec,
        Ok(None) => return fail(LatcbcStatus::NullPointer, "b is null"),
        Err(m) => return fail(LatcbcStatus::InvalidArgument, m),
    };
    let Some(order_values) = slice_arg(gamma_order, s) else {
        return fail(LatcbcStatus::NullPointer, "gamma_order is null");
    };
    let order = match OrderWeights::from_values(order_values) {
        Ok(order) => order,
        Err(e) => return fail(LatcbcStatus::InvalidArgument, e.to_string()),
    };
    let gamma1 = if gamma1 > 0.0 {
        gamma1
    } else {
        latcbc::construct::default_gamma1()
    };
    match dcbc_pod(n, s, &spec, &order, gamma1) {
        Ok(result) => store(out, LatcbcResult { result, trace: None }),
        Err(e) => fail(status_of(&e), e.to_string()),
    }
}

/// Iterated CBC over the lambda-indexed weight family for bound data
/// `(b, B)`; `b_order` may be null for product-form data. Pass
/// `lambda0 <= 0`, `tau <= 0`, or `k_max == 0` for the defaults.
///
/// # Safety
/// `b` must point to `s` doubles; `b_order` must be null or point to `s`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn latcbc_icbc(
    n: u64,
    s: usize,
    b: *const f64,
    b_order: *const f64,
    lambda0: f64,
    tau: f64,
    k_max: usize,
    out: *mut *mut LatcbcResult,
) -> LatcbcStatus {
    let spec = match norm_spec(b, b_order, s) {
        Ok(Some(spec)) => spec,
        Ok(None) => return fail(LatcbcStatus::NullPointer, "b is null"),
        Err(m) => return fail(LatcbcStatus::InvalidArgument, m),
    };
    let defaults = IcbcOptions::default();
    let opts = IcbcOptions {
        lambda0: if lambda0 > 0.0 { lambda0 } else { defaults.lambda0 },
        tau: if tau > 0.0 { Some(tau) } else { None },
        k_max: if k_max > 0 { k_max } else { defaults.k_max },
    };
    match icbc(n, s, &spec, opts) {
        Ok((result, trace)) => store(
            out,
            LatcbcResult {
                result,
                trace: Some(trace),
            },
        ),
        Err(e) => fail(status_of(&e), e.to_string()),
    }
}

/// Shift-averaged worst-case error of an explicit vector under product
/// weights, without a result handle.
///
/// # Safety
/// `z` and `gamma` must point to `s` entries; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn latcbc_wce_product(
    n: u64,
    s: usize,
    z: *const u64,
    gamma: *const f64,
    out: *mut f64,
) -> LatcbcStatus {
    if z.is_null() || gamma.is_null() || out.is_null() {
        return fail(LatcbcStatus::NullPointer, "z, gamma, or out is null");
    }
    let z = std::slice::from_raw_parts(z, s);
    let gamma = std::slice::from_raw_parts(gamma, s);
    let gv = match GeneratingVector::new(n, z.to_vec()) {
        Ok(gv) => gv,
        Err(e) => return fail(LatcbcStatus::InvalidArgument, e.to_string()),
    };
    match wce_product(&gv, gamma) {
        Ok(e) => {
            *out = e;
            LatcbcStatus::Ok
        }
        Err(e) => fail(status_of(&e), e.to_string()),
    }
}

unsafe fn with_result<T>(
    handle: *const LatcbcResult,
    f: impl FnOnce(&LatcbcResult) -> Result<T, LatcbcStatus>,
    write: impl FnOnce(T),
) -> LatcbcStatus {
    if handle.is_null() {
        return fail(LatcbcStatus::NullPointer, "result handle is null");
    }
    match f(&*handle) {
        Ok(v) => {
            write(v);
            LatcbcStatus::Ok
        }
        Err(status) => status,
    }
}

/// Number of dimensions of a result. Returns 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn latcbc_result_dimension(handle: *const LatcbcResult) -> usize {
    if handle.is_null() {
        0
    } else {
        (*handle).result.gv.dimension()
    }
}

/// Modulus of a result. Returns 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn latcbc_result_modulus(handle: *const LatcbcResult) -> u64 {
    if handle.is_null() {
        0
    } else {
        (*handle).result.gv.modulus()
    }
}

unsafe fn copy_out<T: Copy>(src: &[T], dst: *mut T, len: usize) -> Result<(), LatcbcStatus> {
    if dst.is_null() {
        return Err(fail(LatcbcStatus::NullPointer, "output buffer is null"));
    }
    if len < src.len() {
        return Err(fail(
            LatcbcStatus::InvalidArgument,
            format!("buffer holds {len} entries, {} needed", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

/// Copies the generating vector into `out_z` (`len >= dimension`).
///
/// # Safety
/// `out_z` must point to at least `len` entries.
#[no_mangle]
pub unsafe extern "C" fn latcbc_result_vector(
    handle: *const LatcbcResult,
    out_z: *mut u64,
    len: usize,
) -> LatcbcStatus {
    with_result(handle, |h| copy_out(h.result.gv.components(), out_z, len).map(|_| ()), |_| ())
}

/// Copies the product weight factors `gamma_1..gamma_s` into `out`.
///
/// # Safety
/// `out` must point to at least `len` entries.
#[no_mangle]
pub unsafe extern "C" fn latcbc_result_weights(
    handle: *const LatcbcResult,
    out: *mut f64,
    len: usize,
) -> LatcbcStatus {
    with_result(
        handle,
        |h| {
            let s = h.result.gv.dimension();
            let gamma: Vec<f64> = (1..=s).map(|j| h.result.scheme.gamma(j)).collect();
            copy_out(&gamma, out, len).map(|_| ())
        },
        |_| (),
    )
}

/// Copies the order weight ratios `Gamma_l / Gamma_(l-1)` into `out`
/// (all ones for product schemes).
///
/// # Safety
/// `out` must point to at least `len` entries.
#[no_mangle]
pub unsafe extern "C" fn latcbc_result_order_ratios(
    handle: *const LatcbcResult,
    out: *mut f64,
    len: usize,
) -> LatcbcStatus {
    with_result(
        handle,
        |h| {
            let s = h.result.gv.dimension();
            let ratios: Vec<f64> = (1..=s).map(|l| h.result.scheme.order_ratio(l)).collect();
            copy_out(&ratios, out, len).map(|_| ())
        },
        |_| (),
    )
}

/// Final squared shift-averaged worst-case error.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn latcbc_result_wce_sq(
    handle: *const LatcbcResult,
    out: *mut f64,
) -> LatcbcStatus {
    if out.is_null() {
        return fail(LatcbcStatus::NullPointer, "out is null");
    }
    with_result(
        handle,
        |h| Ok(h.result.e2_history.last().copied().unwrap_or(0.0)),
        |v| *out = v,
    )
}

/// Final certified RMS error bound `e_sh * sqrt(M)`; fails when the
/// construction ran without bound data.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn latcbc_result_rms_bound(
    handle: *const LatcbcResult,
    out: *mut f64,
) -> LatcbcStatus {
    if out.is_null() {
        return fail(LatcbcStatus::NullPointer, "out is null");
    }
    with_result(
        handle,
        |h| {
            h.result.rms_bound().ok_or_else(|| {
                fail(
                    LatcbcStatus::InvalidArgument,
                    "no bound data was supplied to this construction",
                )
            })
        },
        |v| *out = v,
    )
}

/// Copies the per-dimension RMS bound history into `out`.
///
/// # Safety
/// `out` must point to at least `len` entries.
#[no_mangle]
pub unsafe extern "C" fn latcbc_result_rms_history(
    handle: *const LatcbcResult,
    out: *mut f64,
    len: usize,
) -> LatcbcStatus {
    with_result(
        handle,
        |h| {
            if h.result.e_history.is_empty() {
                return Err(fail(
                    LatcbcStatus::InvalidArgument,
                    "no bound data was supplied to this construction",
                ));
            }
            copy_out(&h.result.e_history, out, len).map(|_| ())
        },
        |_| (),
    )
}

/// Final lambda of an iterated run; fails for other algorithms.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn latcbc_result_lambda_star(
    handle: *const LatcbcResult,
    out: *mut f64,
) -> LatcbcStatus {
    if out.is_null() {
        return fail(LatcbcStatus::NullPointer, "out is null");
    }
    with_result(
        handle,
        |h| {
            h.trace.as_ref().map(|t| t.lambda_star).ok_or_else(|| {
                fail(
                    LatcbcStatus::InvalidArgument,
                    "the result did not come from an iterated run",
                )
            })
        },
        |v| *out = v,
    )
}

/// Releases a result handle. Null is accepted.
///
/// # Safety
/// `handle` must have come from a construction entry point and must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn latcbc_result_free(handle: *mut LatcbcResult) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
