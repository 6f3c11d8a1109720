//! C ABI over `algpaths`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/producer
//! functions and released by the matching `*_free`. Every fallible function
//! returns an [`AlgpathsStatus`]; on failure a message is kept per thread and
//! read with [`algpaths_last_error`]. Matrices are passed as separate
//! row-major real and imaginary arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use algpaths::components::{component_distance_oracle, separation_lower_bound, signature, ComponentSignature};
use algpaths::linalg::{Complex64, ComplexMatrix};
use algpaths::spectral::{decompose, AlgebraicElement, SpectralError, SpectrumSpec};
use algpaths::tolerances::Tolerances;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgpathsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NotAlgebraic = 4,
    NumericalFailure = 5,
    Panic = 6,
}

/// Roots of the polynomial `p`.
pub struct AlgpathsSpec(SpectrumSpec);

/// Dense complex matrix.
pub struct AlgpathsMatrix(ComplexMatrix);

/// A decomposed algebraic element.
pub struct AlgpathsElement(AlgebraicElement);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(AlgpathsStatus, String);

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        let status = match e {
            SpectralError::NotAlgebraic { .. } => AlgpathsStatus::NotAlgebraic,
            SpectralError::BadRoot(_) => AlgpathsStatus::ParseError,
            SpectralError::Linalg(_) => AlgpathsStatus::NumericalFailure,
            _ => AlgpathsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(AlgpathsStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AlgpathsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AlgpathsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AlgpathsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(AlgpathsStatus::NullPointer, "null handle".into()))
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure(AlgpathsStatus::NullPointer, "null array".into()));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(AlgpathsStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn tolerances(base: f64) -> Result<Tolerances, Failure> {
    if base == 0.0 {
        Ok(Tolerances::default())
    } else if base.is_finite() && base > 0.0 {
        Ok(Tolerances::with_base(base))
    } else {
        Err(invalid(format!("tolerance must be positive, got {base}")))
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn algpaths_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn algpaths_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Roots `re[k] + i·im[k]`; `im` may be null for real roots.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn algpaths_spec_new(re: *const f64, im: *const f64, n: usize, real_only: bool, out: *mut *mut AlgpathsSpec) -> AlgpathsStatus {
    guard(|| {
        let re = slice(re, n)?;
        let im = if im.is_null() { vec![0.0; n] } else { slice(im, n)?.to_vec() };
        let roots = re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        let spec = SpectrumSpec::new(roots, real_only)?;
        write_out(out, Box::into_raw(Box::new(AlgpathsSpec(spec))))
    })
}

/// Parses a comma-separated root list such as `"0,1+2i,3"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn algpaths_spec_parse(text: *const c_char, real_only: bool, out: *mut *mut AlgpathsSpec) -> AlgpathsStatus {
    guard(|| {
        if text.is_null() {
            return Err(Failure(AlgpathsStatus::NullPointer, "null string".into()));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|e| Failure(AlgpathsStatus::ParseError, e.to_string()))?;
        let spec = SpectrumSpec::parse(text, real_only)?;
        write_out(out, Box::into_raw(Box::new(AlgpathsSpec(spec))))
    })
}

/// # Safety
/// `spec` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn algpaths_spec_free(spec: *mut AlgpathsSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn algpaths_spec_len(spec: *const AlgpathsSpec, out: *mut usize) -> AlgpathsStatus {
    guard(|| write_out(out, deref(spec)?.0.n()))
}

/// Lower bound on the distance between distinct self-adjoint components.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn algpaths_separation_bound(spec: *const AlgpathsSpec, out: *mut f64) -> AlgpathsStatus {
    guard(|| write_out(out, separation_lower_bound(&deref(spec)?.0)))
}

/// Exact distance between the self-adjoint components with multiplicities
/// `sig0` and `sig1` (each of length `n`, the number of roots).
///
/// # Safety
/// `sig0`, `sig1` must point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn algpaths_component_distance(
    spec: *const AlgpathsSpec,
    sig0: *const usize,
    sig1: *const usize,
    n: usize,
    out: *mut f64,
) -> AlgpathsStatus {
    guard(|| {
        let spec = &deref(spec)?.0;
        let s0 = ComponentSignature::new(slice(sig0, n)?.to_vec());
        let s1 = ComponentSignature::new(slice(sig1, n)?.to_vec());
        let d = component_distance_oracle(&s0, &s1, spec).map_err(|e| invalid(e.to_string()))?;
        write_out(out, d)
    })
}

/// Square matrix of size `dim` from row-major `re`/`im` (`im` may be null).
///
/// # Safety
/// `re` (and `im` when non-null) must point to `dim·dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn algpaths_matrix_new(dim: usize, re: *const f64, im: *const f64, out: *mut *mut AlgpathsMatrix) -> AlgpathsStatus {
    guard(|| {
        let len = dim.checked_mul(dim).ok_or_else(|| invalid("dimension overflow"))?;
        let re = slice(re, len)?;
        let im = if im.is_null() { vec![0.0; len] } else { slice(im, len)?.to_vec() };
        let data = re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        let m = ComplexMatrix::from_row_major(dim, dim, data).map_err(|e| invalid(e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(AlgpathsMatrix(m))))
    })
}

/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn algpaths_matrix_free(m: *mut AlgpathsMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn algpaths_matrix_dim(m: *const AlgpathsMatrix, out: *mut usize) -> AlgpathsStatus {
    guard(|| write_out(out, deref(m)?.0.rows()))
}

/// Copies the entries row-major into `re`/`im`, each of length `dim·dim`.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn algpaths_matrix_read(m: *const AlgpathsMatrix, re: *mut f64, im: *mut f64, len: usize) -> AlgpathsStatus {
    guard(|| {
        let m = &deref(m)?.0;
        let data = m.as_slice();
        if len != data.len() {
            return Err(invalid(format!("buffer holds {len} entries, matrix has {}", data.len())));
        }
        if re.is_null() || im.is_null() {
            return Err(Failure(AlgpathsStatus::NullPointer, "null buffer".into()));
        }
        for (k, z) in data.iter().enumerate() {
            re.add(k).write(z.re);
            im.add(k).write(z.im);
        }
        Ok(())
    })
}

/// Spectral decomposition of `m`; `tol` is the base tolerance (0 for the
/// default).
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn algpaths_decompose(
    m: *const AlgpathsMatrix,
    spec: *const AlgpathsSpec,
    tol: f64,
    out: *mut *mut AlgpathsElement,
) -> AlgpathsStatus {
    guard(|| {
        let tol = tolerances(tol)?;
        let a = decompose(&deref(m)?.0, &deref(spec)?.0, &tol)?;
        write_out(out, Box::into_raw(Box::new(AlgpathsElement(a))))
    })
}

/// # Safety
/// `a` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn algpaths_element_free(a: *mut AlgpathsElement) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// `||p(a)||` measured at decomposition time.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn algpaths_element_residual(a: *const AlgpathsElement, out: *mut f64) -> AlgpathsStatus {
    guard(|| write_out(out, deref(a)?.0.residual()))
}

/// New matrix handle holding the idempotent for root `i`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn algpaths_element_idempotent(a: *const AlgpathsElement, i: usize, out: *mut *mut AlgpathsMatrix) -> AlgpathsStatus {
    guard(|| {
        let a = &deref(a)?.0;
        let n = a.spec().n();
        if i >= n {
            return Err(invalid(format!("root index {i} out of range for {n} roots")));
        }
        write_out(out, Box::into_raw(Box::new(AlgpathsMatrix(a.idempotent(i).clone()))))
    })
}

/// Writes the multiplicity of each root into `out` (length `n`, the number
/// of roots).
///
/// # Safety
/// `out` must point to `n` writable values.
#[no_mangle]
pub unsafe extern "C" fn algpaths_element_signature(a: *const AlgpathsElement, out: *mut usize, n: usize) -> AlgpathsStatus {
    guard(|| {
        let a = &deref(a)?.0;
        if n != a.spec().n() {
            return Err(invalid(format!("buffer holds {n} entries, spec has {} roots", a.spec().n())));
        }
        if out.is_null() {
            return Err(Failure(AlgpathsStatus::NullPointer, "null buffer".into()));
        }
        let sig = signature(a, &Tolerances::default()).map_err(|e| Failure(AlgpathsStatus::NumericalFailure, e.to_string()))?;
        for (k, &m) in sig.multiplicities().iter().enumerate() {
            out.add(k).write(m);
        }
        Ok(())
    })
}
