//! C ABI for the `iplus` library.
//!
//! Functions return an [`IplusStatus`]; on failure a message is available
//! from [`iplus_last_error`] on the same thread. Functions never unwind
//! across the boundary: a panic is reported as `IPLUS_STATUS_PANIC`.
//!
//! Expressions live behind the opaque [`IplusFunction`] handle, created by
//! [`iplus_function_parse`] and released with [`iplus_function_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use iplus::domain::Rect;
use iplus::modulus::{self, CircleSampling, MinModVerdict};
use iplus::orbits::{self, OrbitPolicy, PointClass};
use iplus::raster::{self, GridSpec};
use iplus::FunctionExpression;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IplusStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque parsed expression.
pub struct IplusFunction {
    inner: FunctionExpression,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IplusComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for IplusComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<IplusComplex> for Complex64 {
    fn from(z: IplusComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IplusExtremum {
    pub radius: f64,
    pub value: f64,
    pub arg_extremum: f64,
    pub samples_used: usize,
    pub refined: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IplusOrbitPolicy {
    pub budget: usize,
    pub escape_radius: f64,
    pub cycle_tol: f64,
    pub cycle_window: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IplusPointClass {
    UnboundedSuspect = 0,
    BoundedSuspect = 1,
    Undecided = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IplusMinModVerdict {
    Diverges = 0,
    NotDiverging = 1,
    Undecided = 2,
}

impl From<PointClass> for IplusPointClass {
    fn from(c: PointClass) -> Self {
        match c {
            PointClass::UnboundedSuspect => IplusPointClass::UnboundedSuspect,
            PointClass::BoundedSuspect => IplusPointClass::BoundedSuspect,
            PointClass::Undecided => IplusPointClass::Undecided,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: IplusStatus, msg: impl Into<String>) -> IplusStatus {
    set_error(msg);
    status
}

fn guard(body: impl FnOnce() -> IplusStatus) -> IplusStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => fail(IplusStatus::Panic, "internal panic"),
    }
}

unsafe fn function_ref<'a>(f: *const IplusFunction) -> Result<&'a FunctionExpression, IplusStatus> {
    if f.is_null() {
        return Err(fail(IplusStatus::NullPointer, "function handle is null"));
    }
    Ok(&(*f).inner)
}

fn policy_of(p: *const IplusOrbitPolicy) -> Result<OrbitPolicy, IplusStatus> {
    let policy = if p.is_null() {
        OrbitPolicy::default()
    } else {
        let p = unsafe { *p };
        OrbitPolicy {
            budget: p.budget,
            escape_radius: p.escape_radius,
            cycle_tol: p.cycle_tol,
            cycle_window: p.cycle_window,
        }
    };
    policy
        .validate()
        .map_err(|e| fail(IplusStatus::InvalidArgument, e.to_string()))?;
    Ok(policy)
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next `iplus_*` call on the same thread.
#[no_mangle]
pub extern "C" fn iplus_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn iplus_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `source` (NUL-terminated UTF-8) into a new handle stored in `*out`.
#[no_mangle]
pub unsafe extern "C" fn iplus_function_parse(
    source: *const c_char,
    out: *mut *mut IplusFunction,
) -> IplusStatus {
    guard(|| {
        if source.is_null() || out.is_null() {
            return fail(IplusStatus::NullPointer, "source and out must be non-null");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(source).to_str() else {
            return fail(IplusStatus::InvalidUtf8, "source is not valid UTF-8");
        };
        match FunctionExpression::parse(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(IplusFunction { inner }));
                IplusStatus::Ok
            }
            Err(e) => fail(IplusStatus::ParseError, e.to_string()),
        }
    })
}

/// Releases a handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn iplus_function_free(f: *mut IplusFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Evaluates `f` at `z`. `overflowed` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn iplus_function_eval(
    f: *const IplusFunction,
    z: IplusComplex,
    out: *mut IplusComplex,
    overflowed: *mut bool,
) -> IplusStatus {
    guard(|| {
        let f = match function_ref(f) {
            Ok(f) => f,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(IplusStatus::NullPointer, "out is null");
        }
        let e = f.evaluate(z.into());
        *out = e.value.into();
        if !overflowed.is_null() {
            *overflowed = e.overflowed;
        }
        IplusStatus::Ok
    })
}

/// New handle for the symbolic derivative of `f`.
#[no_mangle]
pub unsafe extern "C" fn iplus_function_derivative(
    f: *const IplusFunction,
    out: *mut *mut IplusFunction,
) -> IplusStatus {
    guard(|| {
        let f = match function_ref(f) {
            Ok(f) => f,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(IplusStatus::NullPointer, "out is null");
        }
        *out = Box::into_raw(Box::new(IplusFunction {
            inner: f.derivative(),
        }));
        IplusStatus::Ok
    })
}

/// Writes the canonical form of `f` into `buf` (capacity `len` bytes,
/// NUL included). `*needed` receives the required capacity; pass
/// `buf = NULL, len = 0` to query it.
#[no_mangle]
pub unsafe extern "C" fn iplus_function_print(
    f: *const IplusFunction,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> IplusStatus {
    guard(|| {
        let f = match function_ref(f) {
            Ok(f) => f,
            Err(s) => return s,
        };
        let text = f.print();
        let need = text.len() + 1;
        if !needed.is_null() {
            *needed = need;
        }
        if buf.is_null() || len < need {
            return fail(IplusStatus::BufferTooSmall, format!("need {need} bytes"));
        }
        ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
        *buf.add(text.len()) = 0;
        IplusStatus::Ok
    })
}

unsafe fn extremum(
    f: *const IplusFunction,
    r: f64,
    n_coarse: usize,
    tol: f64,
    out: *mut IplusExtremum,
    max: bool,
) -> IplusStatus {
    guard(|| {
        let f = match function_ref(f) {
            Ok(f) => f,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(IplusStatus::NullPointer, "out is null");
        }
        let res = if max {
            modulus::max_modulus(f, r, n_coarse, tol)
        } else {
            modulus::min_modulus(f, r, n_coarse, tol)
        };
        match res {
            Ok(e) => {
                *out = IplusExtremum {
                    radius: e.radius,
                    value: e.value,
                    arg_extremum: e.arg_extremum,
                    samples_used: e.samples_used,
                    refined: e.refined,
                };
                IplusStatus::Ok
            }
            Err(e) => fail(IplusStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Minimum of `|f|` on `|z| = r`.
#[no_mangle]
pub unsafe extern "C" fn iplus_min_modulus(
    f: *const IplusFunction,
    r: f64,
    n_coarse: usize,
    tol: f64,
    out: *mut IplusExtremum,
) -> IplusStatus {
    extremum(f, r, n_coarse, tol, out, false)
}

/// Maximum of `|f|` on `|z| = r`.
#[no_mangle]
pub unsafe extern "C" fn iplus_max_modulus(
    f: *const IplusFunction,
    r: f64,
    n_coarse: usize,
    tol: f64,
    out: *mut IplusExtremum,
) -> IplusStatus {
    extremum(f, r, n_coarse, tol, out, true)
}

/// Iterates `r ↦ m(r)` from `r0`. The sequence (starting with `r0`) is
/// copied into `seq` up to `cap` values; `*len` receives its full length.
/// `seq` may be NULL when `cap` is 0.
#[no_mangle]
pub unsafe extern "C" fn iplus_iterate_min_modulus(
    f: *const IplusFunction,
    r0: f64,
    n_max: usize,
    blow_up: f64,
    verdict: *mut IplusMinModVerdict,
    seq: *mut f64,
    cap: usize,
    len: *mut usize,
) -> IplusStatus {
    guard(|| {
        let f = match function_ref(f) {
            Ok(f) => f,
            Err(s) => return s,
        };
        if verdict.is_null() || len.is_null() || (seq.is_null() && cap > 0) {
            return fail(
                IplusStatus::NullPointer,
                "verdict, len and seq must be non-null",
            );
        }
        let rep =
            match modulus::iterate_min_modulus(f, r0, n_max, blow_up, CircleSampling::default()) {
                Ok(r) => r,
                Err(e) => return fail(IplusStatus::InvalidArgument, e.to_string()),
            };
        *verdict = match rep.verdict {
            MinModVerdict::Diverges => IplusMinModVerdict::Diverges,
            MinModVerdict::NotDiverging => IplusMinModVerdict::NotDiverging,
            MinModVerdict::Undecided => IplusMinModVerdict::Undecided,
        };
        *len = rep.sequence.len();
        let n = rep.sequence.len().min(cap);
        if n > 0 {
            ptr::copy_nonoverlapping(rep.sequence.as_ptr(), seq, n);
        }
        IplusStatus::Ok
    })
}

/// Default orbit policy: budget 200, escape radius 1e6, cycle tolerance
/// 1e-9, cycle window 32.
#[no_mangle]
pub extern "C" fn iplus_orbit_policy_default() -> IplusOrbitPolicy {
    let p = OrbitPolicy::default();
    IplusOrbitPolicy {
        budget: p.budget,
        escape_radius: p.escape_radius,
        cycle_tol: p.cycle_tol,
        cycle_window: p.cycle_window,
    }
}

/// Classifies the orbit of `z`. `policy` may be NULL for the default.
#[no_mangle]
pub unsafe extern "C" fn iplus_classify_point(
    f: *const IplusFunction,
    z: IplusComplex,
    policy: *const IplusOrbitPolicy,
    out: *mut IplusPointClass,
) -> IplusStatus {
    guard(|| {
        let f = match function_ref(f) {
            Ok(f) => f,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(IplusStatus::NullPointer, "out is null");
        }
        let policy = match policy_of(policy) {
            Ok(p) => p,
            Err(s) => return s,
        };
        *out = orbits::classify_point(f, z.into(), &policy).into();
        IplusStatus::Ok
    })
}

/// Classifies an `nx × ny` pixel grid over `[x_min, x_max] × [y_min, y_max]`
/// into `out` (`nx * ny` bytes, row-major, row 0 at the top), each byte an
/// [`IplusPointClass`] value.
#[no_mangle]
pub unsafe extern "C" fn iplus_classify_grid(
    f: *const IplusFunction,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
    policy: *const IplusOrbitPolicy,
    out: *mut u8,
    out_len: usize,
) -> IplusStatus {
    guard(|| {
        let f = match function_ref(f) {
            Ok(f) => f,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(IplusStatus::NullPointer, "out is null");
        }
        let policy = match policy_of(policy) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let grid = match Rect::new(x_min, x_max, y_min, y_max)
            .map_err(|e| e.to_string())
            .and_then(|w| GridSpec::new(w, nx, ny).map_err(|e| e.to_string()))
        {
            Ok(g) => g,
            Err(e) => return fail(IplusStatus::InvalidArgument, e),
        };
        if out_len < grid.len() {
            return fail(
                IplusStatus::BufferTooSmall,
                format!("need {} bytes", grid.len()),
            );
        }
        let c = raster::classify_grid(f, &grid, &policy);
        let dst = std::slice::from_raw_parts_mut(out, grid.len());
        for (d, &class) in dst.iter_mut().zip(&c.classes) {
            *d = IplusPointClass::from(class) as u8;
        }
        IplusStatus::Ok
    })
}
