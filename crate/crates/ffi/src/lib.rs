//! C ABI over `multijet`.
//!
//! Objects cross the boundary as opaque handles (`MjKernel`, `MjPoly`,
//! `MjSubspace`) created by `mj_*` constructors and released with the
//! matching `*_free`. Every fallible call returns an `MjStatus`; on failure
//! `mj_last_error()` describes the problem until the next call on the same
//! thread. Point lists are row-major `p × n` arrays of doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use multijet::cli::config::FunctionSpec;
use multijet::configspace::{ev_kernel, subspace_angle, Configuration, Subspace};
use multijet::gaussfield::{nondegeneracy_check, Kernel, KernelSpec};
use multijet::interp::kergin;
use multijet::kacrice::{rho1, rho_p};
use multijet::polycore::Poly;
use multijet::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MjStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DimensionMismatch = 3,
    InsufficientSmoothness = 4,
    RankDeficient = 5,
    DegenerateConditioning = 6,
    NotPsd = 7,
    OrderExceeded = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// A covariance kernel.
pub struct MjKernel(Kernel);

/// A polynomial in graded-lex coefficient order.
pub struct MjPoly(Poly);

/// A linear subspace held by an orthonormal basis.
pub struct MjSubspace(Subspace);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MjStatus {
    match e {
        Error::DimensionMismatch { .. } | Error::ArityMismatch { .. } | Error::ShapeMismatch(_) => {
            MjStatus::DimensionMismatch
        }
        Error::InsufficientSmoothness { .. } | Error::MissingDerivative { .. } | Error::MissingJet(_) => {
            MjStatus::InsufficientSmoothness
        }
        Error::RankDeficient { .. } => MjStatus::RankDeficient,
        Error::DegenerateConditioning { .. } => MjStatus::DegenerateConditioning,
        Error::NotPsd { .. } | Error::NotSpd => MjStatus::NotPsd,
        Error::OrderExceeded { .. } => MjStatus::OrderExceeded,
        _ => MjStatus::InvalidInput,
    }
}

enum Failure {
    Status(MjStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn null() -> Failure {
    Failure::Status(MjStatus::NullPointer, "null pointer argument".into())
}

/// Runs `body`, converting errors and panics into a status plus message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MjStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MjStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&format!("{}: {e}", e.code()));
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            MjStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure::Status(MjStatus::InvalidInput, "string is not UTF-8".into()))
}

unsafe fn points_arg(points: *const f64, p: usize, n: usize) -> Result<Vec<Vec<f64>>, Failure> {
    if points.is_null() {
        return Err(null());
    }
    if p == 0 || n == 0 {
        return Err(Failure::Status(MjStatus::InvalidInput, "need p ≥ 1 points in dimension n ≥ 1".into()));
    }
    Ok(slice::from_raw_parts(points, p * n).chunks(n).map(<[f64]>::to_vec).collect())
}

unsafe fn out_arg<'a, T>(out: *mut T) -> Result<&'a mut T, Failure> {
    out.as_mut().ok_or_else(null)
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(null)
}

/// Copies `src` into `buf` if it fits; `*len` receives the needed length.
unsafe fn copy_out(src: &[f64], buf: *mut f64, len: *mut usize) -> Result<(), Failure> {
    let len = out_arg(len)?;
    let cap = *len;
    *len = src.len();
    if buf.is_null() || cap < src.len() {
        return Err(Failure::Status(MjStatus::BufferTooSmall, format!("need a buffer of {} doubles", src.len())));
    }
    slice::from_raw_parts_mut(buf, src.len()).copy_from_slice(src);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mj_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread ("" after a success).
/// The pointer stays valid until the next `mj_*` call on the same thread.
#[no_mangle]
pub extern "C" fn mj_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Kernel from its JSON form, e.g. `{"name": "bargmann_fock", "n": 2}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mj_kernel_from_json(json: *const c_char, out: *mut *mut MjKernel) -> MjStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        let spec: KernelSpec = serde_json::from_str(str_arg(json)?)
            .map_err(|e| Failure::Status(MjStatus::InvalidInput, format!("kernel JSON: {e}")))?;
        *out = Box::into_raw(Box::new(MjKernel(Kernel::from_spec(&spec)?)));
        Ok(())
    })
}

/// # Safety
/// `k` must come from `mj_kernel_from_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mj_kernel_free(k: *mut MjKernel) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Kergin interpolant of a registry function given as JSON
/// (`{"id": "sin"}`, `{"poly": …}` or `{"ridge": …}`) at `p` points of ℝⁿ.
///
/// # Safety
/// `function` is NUL-terminated, `points` holds `p·n` doubles, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mj_kergin(
    function: *const c_char,
    points: *const f64,
    p: usize,
    n: usize,
    out: *mut *mut MjPoly,
) -> MjStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        let spec: FunctionSpec = serde_json::from_str(str_arg(function)?)
            .map_err(|e| Failure::Status(MjStatus::InvalidInput, format!("function JSON: {e}")))?;
        let f = spec.build()?;
        let pts = points_arg(points, p, n)?;
        if multijet::interp::FnOracle::n(&f) != n {
            return Err(Error::DimensionMismatch { expected: multijet::interp::FnOracle::n(&f), got: n }.into());
        }
        *out = Box::into_raw(Box::new(MjPoly(kergin(&f, &pts)?)));
        Ok(())
    })
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `poly` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mj_poly_nvars(poly: *const MjPoly) -> usize {
    poly.as_ref().map_or(0, |p| p.0.n())
}

/// Graded-lex coefficients; call with `*len` = 0 to query the length.
///
/// # Safety
/// `poly` is a live handle, `buf` holds `*len` doubles (or is null), `len` is writable.
#[no_mangle]
pub unsafe extern "C" fn mj_poly_coeffs(poly: *const MjPoly, buf: *mut f64, len: *mut usize) -> MjStatus {
    guard(|| copy_out(handle(poly)?.0.coeffs(), buf, len))
}

/// Value at x ∈ ℝⁿ.
///
/// # Safety
/// `poly` is a live handle, `x` holds `n` doubles, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mj_poly_eval(poly: *const MjPoly, x: *const f64, n: usize, out: *mut f64) -> MjStatus {
    guard(|| {
        let p = handle(poly)?;
        let x = points_arg(x, 1, n)?;
        *out_arg(out)? = p.0.eval(&x[0])?;
        Ok(())
    })
}

/// # Safety
/// `poly` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mj_poly_free(poly: *mut MjPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Kernel of the evaluation map at `p` distinct points, inside the
/// polynomials of degree ≤ p − 1.
///
/// # Safety
/// `points` holds `p·n` doubles and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mj_ev_kernel(points: *const f64, p: usize, n: usize, out: *mut *mut MjSubspace) -> MjStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = ptr::null_mut();
        let config = Configuration::new(points_arg(points, p, n)?)?;
        *out = Box::into_raw(Box::new(MjSubspace(ev_kernel(&config)?)));
        Ok(())
    })
}

/// (ambient dimension, subspace dimension); zeros for a null handle.
///
/// # Safety
/// `s` is null or a live handle; the out pointers are writable or null.
#[no_mangle]
pub unsafe extern "C" fn mj_subspace_dims(s: *const MjSubspace, ambient: *mut usize, dim: *mut usize) {
    let (a, d) = s.as_ref().map_or((0, 0), |s| (s.0.ambient_dim(), s.0.dim()));
    if let Some(x) = ambient.as_mut() {
        *x = a;
    }
    if let Some(x) = dim.as_mut() {
        *x = d;
    }
}

/// Orthonormal basis, column-major (ambient × dim).
///
/// # Safety
/// As for `mj_poly_coeffs`.
#[no_mangle]
pub unsafe extern "C" fn mj_subspace_basis(s: *const MjSubspace, buf: *mut f64, len: *mut usize) -> MjStatus {
    guard(|| copy_out(handle(s)?.0.basis().as_slice(), buf, len))
}

/// Largest principal angle between two subspaces of equal dimensions.
///
/// # Safety
/// `a`, `b` are live handles and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn mj_subspace_angle(a: *const MjSubspace, b: *const MjSubspace, out: *mut f64) -> MjStatus {
    guard(|| {
        *out_arg(out)? = subspace_angle(&handle(a)?.0, &handle(b)?.0)?;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mj_subspace_free(s: *mut MjSubspace) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// One-point Kac–Rice density of r iid copies of the field at x.
/// `std_error` is 0 when a closed form applies.
///
/// # Safety
/// `kernel` is live, `x` holds the kernel's n doubles, out pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn mj_rho1(
    kernel: *const MjKernel,
    r: usize,
    x: *const f64,
    samples: usize,
    seed: u64,
    value: *mut f64,
    std_error: *mut f64,
) -> MjStatus {
    guard(|| {
        let k = &handle(kernel)?.0;
        let x = points_arg(x, 1, k.n())?;
        let d = rho1(k, r, &x[0], samples, seed)?;
        *out_arg(value)? = d.value;
        *out_arg(std_error)? = d.std_error;
        Ok(())
    })
}

/// p-point Kac–Rice density at a configuration of distinct points.
///
/// # Safety
/// `kernel` is live, `points` holds `p·n` doubles, out pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn mj_rho_p(
    kernel: *const MjKernel,
    r: usize,
    points: *const f64,
    p: usize,
    samples: usize,
    seed: u64,
    value: *mut f64,
    std_error: *mut f64,
) -> MjStatus {
    guard(|| {
        let k = &handle(kernel)?.0;
        let config = Configuration::new(points_arg(points, p, k.n())?)?;
        let d = rho_p(k, r, &config, samples, seed)?;
        *out_arg(value)? = d.value;
        *out_arg(std_error)? = d.std_error;
        Ok(())
    })
}

/// Smallest eigenvalue of the q-jet covariance and whether it certifies
/// q-non-degeneracy.
///
/// # Safety
/// `kernel` is live and out pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn mj_nondeg(
    kernel: *const MjKernel,
    q: usize,
    min_eigenvalue: *mut f64,
    certified: *mut bool,
) -> MjStatus {
    guard(|| {
        let rep = nondegeneracy_check(&handle(kernel)?.0, q, 1)?;
        *out_arg(min_eigenvalue)? = rep.min_eigenvalue;
        *out_arg(certified)? = rep.certified;
        Ok(())
    })
}
