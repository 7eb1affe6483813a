use std::ffi::{c_char, CStr, CString};
use std::ptr;

use nogo_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    nogo_string_free(s);
    out
}

unsafe fn parse(src: &str) -> *mut NogoTensor {
    let mut t = ptr::null_mut();
    assert_eq!(nogo_tensor_parse(cs(src).as_ptr(), &mut t), NogoStatus::Ok);
    t
}

unsafe fn show(t: *const NogoTensor) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(nogo_tensor_to_string(t, &mut s), NogoStatus::Ok);
    take(s)
}

unsafe fn last_error() -> String {
    let p = nogo_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn tensor_round_trip() {
    unsafe {
        let t = parse("D[eta,a] D[eta,b] T^c");
        let mut g = ptr::null_mut();
        assert_eq!(nogo_tensor_generalize(t, &mut g), NogoStatus::Ok);
        assert_eq!(show(g), "D[g,a] D[g,b] bar[T]^c");
        let mut c = ptr::null_mut();
        assert_eq!(nogo_tensor_canonicalize(g, &mut c), NogoStatus::Ok);
        let mut eq = false;
        assert_eq!(nogo_tensor_equal(g, c, &mut eq), NogoStatus::Ok);
        assert!(eq);
        for h in [t, g, c] {
            nogo_tensor_free(h);
        }
        nogo_tensor_free(ptr::null_mut());
    }
}

#[test]
fn wellposedness_witness() {
    unsafe {
        let mut flat = false;
        let mut r = ptr::null_mut();
        let st = nogo_wellposed(
            cs("D[eta,a] D[eta,b] T^c").as_ptr(),
            cs("D[eta,b] D[eta,a] T^c").as_ptr(),
            &mut flat,
            &mut r,
        );
        assert_eq!(st, NogoStatus::Ok);
        assert!(flat);
        let mut zero = true;
        assert_eq!(nogo_tensor_is_zero(r, &mut zero), NogoStatus::Ok);
        assert!(!zero);
        assert!(show(r).contains("R[g]^c_{abd} bar[T]^d"), "{}", show(r));
        nogo_tensor_free(r);
    }
}

#[test]
fn operators() {
    unsafe {
        let (mut a, mut b, mut c) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(nogo_operator_parse(cs("qh").as_ptr(), &mut a), NogoStatus::Ok);
        assert_eq!(nogo_operator_parse(cs("ph").as_ptr(), &mut b), NogoStatus::Ok);
        assert_eq!(nogo_operator_commutator(a, b, &mut c), NogoStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(nogo_operator_to_string(c, &mut s), NogoStatus::Ok);
        assert_eq!(take(s), "i");
        for h in [a, b, c] {
            nogo_operator_free(h);
        }
        assert_eq!(nogo_gvh_constant(&mut s), NogoStatus::Ok);
        assert_eq!(take(s), "-1/3");
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(nogo_tensor_parse(cs("D[eta,a").as_ptr(), &mut t), NogoStatus::ParseError);
        assert!(t.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(nogo_tensor_parse(ptr::null(), &mut t), NogoStatus::NullPointer);
        assert_eq!(nogo_tensor_parse(cs("T^a").as_ptr(), ptr::null_mut()), NogoStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(nogo_tensor_parse(bad.as_ptr().cast(), &mut t), NogoStatus::InvalidUtf8);
        let mut s = ptr::null_mut();
        assert_eq!(nogo_tensor_to_string(ptr::null(), &mut s), NogoStatus::NullPointer);
        // success clears the message
        let ok = parse("T^a");
        assert!(nogo_last_error().is_null());
        nogo_tensor_free(ok);
    }
}

#[test]
fn cli_entry_point() {
    unsafe {
        let args = [cs("poisson"), cs("{q^3, p^3}")];
        let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        let mut out = ptr::null_mut();
        let mut code = -1;
        assert_eq!(nogo_run(argv.as_ptr(), argv.len(), &mut out, &mut code), NogoStatus::Ok);
        assert_eq!(code, 0);
        assert!(take(out).contains("9*q^2*p^2"));

        let args = [cs("no-such-command")];
        let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        assert_eq!(nogo_run(argv.as_ptr(), 1, &mut out, &mut code), NogoStatus::Ok);
        assert_eq!(code, 2);
        nogo_string_free(out);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(nogo_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
