//! C ABI over `wmlab`.
//!
//! Every function returns a [`WmlabStatus`]; results go through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`wmlab_last_error_message`]. Weight sequences are opaque handles created
//! by `wmlab_weights_*` and released with [`wmlab_weights_free`].

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use wmlab::conditions::cartlidge;
use wmlab::lab::{bliss_constant, BlissParams};
use wmlab::schur::{build_certificate, verify_schur, CertificateVariant};
use wmlab::sequences::generalized_mean;
use wmlab::solver::{norm_negative_p, operator_norm};
use wmlab::{Error, ExponentPair, SolverOptions, WeightSequence};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WmlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    LengthMismatch = 3,
    NonPositiveInput = 4,
    TooLarge = 5,
    HypothesisFailed = 6,
    Panic = 99,
}

/// Opaque weight sequence.
pub struct WmlabWeights {
    inner: WeightSequence,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WmlabNormResult {
    /// `||A||^p` for `p > 1`, the supremum for `p < 0`.
    pub mu: f64,
    pub norm: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WmlabCertificate {
    Bennett = 0,
    Improved = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> WmlabStatus {
    match err {
        Error::LengthMismatch { .. } => WmlabStatus::LengthMismatch,
        Error::NonPositiveWeight { .. } | Error::NonPositiveEntry { .. } | Error::ZeroSequence => {
            WmlabStatus::NonPositiveInput
        }
        Error::TooLarge { .. } => WmlabStatus::TooLarge,
        Error::PrefixHypothesis { .. }
        | Error::NotMonotone
        | Error::AuxInvariant { .. }
        | Error::InconsistentLimit { .. } => WmlabStatus::HypothesisFailed,
        _ => WmlabStatus::InvalidParameter,
    }
}

/// Runs `f`, recording errors and turning panics into [`WmlabStatus::Panic`].
fn guard<F: FnOnce() -> Result<(), WmlabStatus>>(f: F) -> WmlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WmlabStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            WmlabStatus::Panic
        }
    }
}

fn lift<T>(r: wmlab::Result<T>) -> Result<T, WmlabStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null() -> WmlabStatus {
    set_error("null pointer argument".to_string());
    WmlabStatus::NullPointer
}

unsafe fn weights<'a>(w: *const WmlabWeights) -> Result<&'a WeightSequence, WmlabStatus> {
    w.as_ref().map(|w| &w.inner).ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), WmlabStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn store(seq: WeightSequence, out: *mut *mut WmlabWeights) -> Result<(), WmlabStatus> {
    let handle = Box::into_raw(Box::new(WmlabWeights { inner: seq }));
    // SAFETY: `out` was checked for null by the caller.
    unsafe { out.write(handle) };
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full message length in bytes,
/// excluding the terminator. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn wmlab_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Weights from `len` strictly positive values.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmlab_weights_new(
    values: *const f64,
    len: usize,
    out: *mut *mut WmlabWeights,
) -> WmlabStatus {
    guard(|| {
        if values.is_null() || out.is_null() {
            return Err(null());
        }
        let v = std::slice::from_raw_parts(values, len).to_vec();
        store(lift(WeightSequence::new(v))?, out)
    })
}

/// `λ_n = n^α`, `n = 1..N`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmlab_weights_power(
    alpha: f64,
    n: usize,
    out: *mut *mut WmlabWeights,
) -> WmlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        store(lift(WeightSequence::power(alpha, n))?, out)
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `w` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wmlab_weights_free(w: *mut WmlabWeights) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmlab_weights_len(w: *const WmlabWeights, out: *mut usize) -> WmlabStatus {
    guard(|| write(out, weights(w)?.len()))
}

/// Finite-section norm (`p > 1`) or negative-exponent supremum (`p < 0`)
/// with default solver settings and the given seed. When `maximizer` is not
/// null it receives the maximizing sequence and `maximizer_len` must equal
/// the section length.
///
/// # Safety
/// `w` must be a live handle, `out` writable, and `maximizer` null or
/// pointing to `maximizer_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn wmlab_operator_norm(
    w: *const WmlabWeights,
    p: f64,
    seed: u64,
    out: *mut WmlabNormResult,
    maximizer: *mut f64,
    maximizer_len: usize,
) -> WmlabStatus {
    guard(|| {
        let w = weights(w)?;
        if out.is_null() {
            return Err(null());
        }
        if !maximizer.is_null() && maximizer_len != w.len() {
            set_error(format!(
                "maximizer buffer has {maximizer_len} slots, need {}",
                w.len()
            ));
            return Err(WmlabStatus::LengthMismatch);
        }
        let e = lift(ExponentPair::new(p))?;
        let opts = SolverOptions {
            seed,
            ..SolverOptions::default()
        };
        let r = lift(if e.is_negative() {
            norm_negative_p(w, e, &opts)
        } else {
            operator_norm(w, e, &opts)
        })?;
        if !maximizer.is_null() {
            std::slice::from_raw_parts_mut(maximizer, maximizer_len).copy_from_slice(&r.maximizer);
        }
        write(
            out,
            WmlabNormResult {
                mu: r.mu,
                norm: r.norm,
                kkt_residual: r.kkt_residual,
                iterations: r.iterations,
                converged: r.converged,
            },
        )
    })
}

/// Cartlidge constant `L`, whether `L < p` holds, and the implied bound
/// `(p/(p-L))^p` on `μ` (NaN when the condition fails).
///
/// # Safety
/// `w` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmlab_cartlidge(
    w: *const WmlabWeights,
    p: f64,
    out_l: *mut f64,
    out_holds: *mut bool,
    out_bound: *mut f64,
) -> WmlabStatus {
    guard(|| {
        let w = weights(w)?;
        if out_l.is_null() || out_holds.is_null() || out_bound.is_null() {
            return Err(null());
        }
        let report = cartlidge(w, lift(ExponentPair::new(p))?);
        write(out_l, report.constant.unwrap_or(f64::NAN))?;
        write(out_holds, report.holds)?;
        write(out_bound, report.implied_bound.unwrap_or(f64::NAN))
    })
}

/// The mean `L_r(a, b)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmlab_generalized_mean(
    a: f64,
    b: f64,
    r: f64,
    out: *mut f64,
) -> WmlabStatus {
    guard(|| write(out, lift(generalized_mean(a, b, r))?))
}

/// Best constant of the continuous Bliss-type inequality.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmlab_bliss_constant(
    r: f64,
    s: f64,
    alpha: f64,
    out: *mut f64,
) -> WmlabStatus {
    guard(|| {
        let params = lift(BlissParams::new(r, s, alpha))?;
        write(out, lift(bliss_constant(params))?)
    })
}

/// Builds and verifies a Schur certificate for the `N × N` section; writes
/// whether both inequality families hold and the certified norm bound.
///
/// # Safety
/// The out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn wmlab_verify_certificate(
    variant: WmlabCertificate,
    alpha: f64,
    p: f64,
    n: usize,
    out_holds: *mut bool,
    out_bound: *mut f64,
) -> WmlabStatus {
    guard(|| {
        if out_holds.is_null() || out_bound.is_null() {
            return Err(null());
        }
        let variant = match variant {
            WmlabCertificate::Bennett => CertificateVariant::Bennett,
            WmlabCertificate::Improved => CertificateVariant::Improved,
        };
        let e = lift(ExponentPair::new(p))?;
        let cert = lift(build_certificate(variant, alpha, e, n))?;
        let report = lift(verify_schur(&cert, e))?;
        write(out_holds, report.holds)?;
        write(out_bound, report.bound)
    })
}
