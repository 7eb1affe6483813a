//! C interface. Expressions live behind opaque handles; every call returns
//! a `NogoStatus`, and the message for the last failure on the calling
//! thread is available from `nogo_last_error`.
//!
//! Strings returned through `char **` are owned by the caller and must be
//! released with `nogo_string_free`. Handles are released with their
//! `*_free` function. Passing NULL to a free function is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nogo_core::parse::{parse_operator, parse_tensor, parse_tensor_with};
use nogo_core::tensor::{canonical_equal, canonicalize, generalize, wellposedness_check, TensorExpr};
use nogo_core::weyl::{commutator, gvh_witness, WeylElement};
use nogo_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NogoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    EngineError = 4,
    Panic = 5,
}

/// A parsed tensor expression.
pub struct NogoTensor {
    expr: TensorExpr,
}

/// An element of the Weyl algebra in normal form.
pub struct NogoOperator {
    op: WeylElement,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(NogoStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. } | Error::UnknownSymbol(_) | Error::UnknownVariable(_) | Error::Index(_) => {
                NogoStatus::ParseError
            }
            _ => NogoStatus::EngineError,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NogoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NogoStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NogoStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(NogoStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(NogoStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(NogoStatus::NullPointer, "null handle".into()))
}

unsafe fn store<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(NogoStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior nul removed").into_raw()
}

fn boxed_tensor(expr: TensorExpr) -> *mut NogoTensor {
    Box::into_raw(Box::new(NogoTensor { expr }))
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call from the same thread.
#[no_mangle]
pub extern "C" fn nogo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Engine version as a static string.
#[no_mangle]
pub extern "C" fn nogo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn nogo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a tensor source (`antisym F {1 2}; D[eta,^a] F_{ab}`).
///
/// # Safety
/// `src` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nogo_tensor_parse(src: *const c_char, out: *mut *mut NogoTensor) -> NogoStatus {
    guard(|| {
        let s = parse_tensor(text(src)?)?;
        store(out, boxed_tensor(s.expr))
    })
}

/// # Safety
/// `t` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nogo_tensor_free(t: *mut NogoTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nogo_tensor_to_string(t: *const NogoTensor, out: *mut *mut c_char) -> NogoStatus {
    guard(|| store(out, c_string(handle(t)?.expr.to_string())))
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nogo_tensor_canonicalize(t: *const NogoTensor, out: *mut *mut NogoTensor) -> NogoStatus {
    guard(|| {
        let t = handle(t)?;
        store(out, boxed_tensor(canonicalize(&t.expr)?))
    })
}

/// Curved image of a flat expression, canonicalized.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nogo_tensor_generalize(t: *const NogoTensor, out: *mut *mut NogoTensor) -> NogoStatus {
    guard(|| {
        let t = handle(t)?;
        store(out, boxed_tensor(canonicalize(&generalize(&t.expr)?)?))
    })
}

/// Canonical equality.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nogo_tensor_equal(a: *const NogoTensor, b: *const NogoTensor, out: *mut bool) -> NogoStatus {
    guard(|| store(out, canonical_equal(&handle(a)?.expr, &handle(b)?.expr)?))
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nogo_tensor_is_zero(t: *const NogoTensor, out: *mut bool) -> NogoStatus {
    guard(|| store(out, canonicalize(&handle(t)?.expr)?.is_zero()))
}

/// Compares the curved images of two flat sources. `b` is parsed with the
/// declarations of `a`.
///
/// # Safety
/// Strings must be valid C strings; `flat_equal` and `residual` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn nogo_wellposed(
    a: *const c_char,
    b: *const c_char,
    flat_equal: *mut bool,
    residual: *mut *mut NogoTensor,
) -> NogoStatus {
    guard(|| {
        let sa = parse_tensor(text(a)?)?;
        let sb = parse_tensor_with(text(b)?, sa.decls.clone())?;
        let w = wellposedness_check(&sa.expr, &sb.expr)?;
        store(flat_equal, w.flat_equal)?;
        store(residual, boxed_tensor(w.curved_residual))
    })
}

/// Parses an operator expression (`qh^2*ph + i*qh`).
///
/// # Safety
/// `src` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nogo_operator_parse(src: *const c_char, out: *mut *mut NogoOperator) -> NogoStatus {
    guard(|| {
        let op = parse_operator(text(src)?)?;
        store(out, Box::into_raw(Box::new(NogoOperator { op })))
    })
}

/// # Safety
/// `op` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nogo_operator_free(op: *mut NogoOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// `[a, b]` in normal form.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nogo_operator_commutator(
    a: *const NogoOperator,
    b: *const NogoOperator,
    out: *mut *mut NogoOperator,
) -> NogoStatus {
    guard(|| {
        let op = commutator(&handle(a)?.op, &handle(b)?.op);
        store(out, Box::into_raw(Box::new(NogoOperator { op })))
    })
}

/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nogo_operator_to_string(op: *const NogoOperator, out: *mut *mut c_char) -> NogoStatus {
    guard(|| store(out, c_string(handle(op)?.op.to_string())))
}

/// The constant `c` with quantum residual `c·Î` in the degree-three
/// quantization witness, as text.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nogo_gvh_constant(out: *mut *mut c_char) -> NogoStatus {
    guard(|| {
        let w = gvh_witness();
        let c = w.constant().ok_or_else(|| Fail(NogoStatus::EngineError, "residual is not scalar".into()))?;
        store(out, c_string(c.to_string()))
    })
}

/// Runs the command-line front end. `argv` excludes the program name.
/// Standard output goes to `out`; `exit_code` receives the exit status.
///
/// # Safety
/// `argv` must point to `argc` valid C strings; `out` and `exit_code` must
/// be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn nogo_run(
    argv: *const *const c_char,
    argc: usize,
    out: *mut *mut c_char,
    exit_code: *mut i32,
) -> NogoStatus {
    guard(|| {
        if argv.is_null() && argc > 0 {
            return Err(Fail(NogoStatus::NullPointer, "null argv".into()));
        }
        let mut args = vec!["nogo".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i))?.to_string());
        }
        let r = nogo_core::cli::run_args(args);
        if !r.stderr.is_empty() {
            set_error(r.stderr.trim_end());
        }
        store(exit_code, r.code)?;
        store(out, c_string(r.stdout))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_status() {
        let st = guard(|| panic!("boom"));
        assert_eq!(st, NogoStatus::Panic);
        let msg = unsafe { CStr::from_ptr(nogo_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }

    #[test]
    fn engine_errors_are_classified() {
        let f: Fail = Error::UnknownSymbol("X".into()).into();
        assert_eq!(f.0, NogoStatus::ParseError);
        let f: Fail = Error::Shape("x".into()).into();
        assert_eq!(f.0, NogoStatus::EngineError);
    }
}
