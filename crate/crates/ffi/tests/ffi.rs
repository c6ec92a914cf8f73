use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use spincount_ffi::*;

fn owned(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { spc_string_free(p) };
    s
}

fn last_error() -> String {
    let p = spc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn function(lit: &str) -> *mut SpcFunction {
    let c = CString::new(lit).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { spc_function_parse(c.as_ptr(), &mut f) }, SpcStatus::Ok);
    f
}

fn instance(src: &str) -> *mut SpcInstance {
    let c = CString::new(src).unwrap();
    let mut i = ptr::null_mut();
    assert_eq!(unsafe { spc_instance_parse(c.as_ptr(), &mut i) }, SpcStatus::Ok);
    i
}

#[test]
fn function_round_trip_and_classify() {
    let f = function("2 2 1 1 2");
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(spc_function_arity(f), 2);
        assert_eq!(spc_function_to_string(f, &mut s), SpcStatus::Ok);
        assert_eq!(owned(s), "2 2 1 1 2");
        assert_eq!(spc_classify_two_spin(f, &mut s), SpcStatus::Ok);
        assert_eq!(owned(s), "FPRAS");
        assert_eq!(spc_fourier(f, &mut s), SpcStatus::Ok);
        assert_eq!(owned(s), "2 3/2 0 0 1/2");
        spc_function_free(f);
    }
}

#[test]
fn error_codes() {
    let bad = CString::new("2 1 1").unwrap();
    let mut f = ptr::null_mut();
    unsafe {
        assert_ne!(spc_function_parse(bad.as_ptr(), &mut f), SpcStatus::Ok);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(spc_function_parse(ptr::null(), &mut f), SpcStatus::InvalidArgument);
        assert!(last_error().contains("null"));
        assert_eq!(spc_function_arity(ptr::null()), usize::MAX);
        let u = function("1 1 2");
        let mut s = ptr::null_mut();
        assert_eq!(spc_classify_two_spin(u, &mut s), SpcStatus::Precondition);
        spc_function_free(u);
        let src = CString::new("con f a b").unwrap();
        let mut i = ptr::null_mut();
        assert_eq!(spc_instance_parse(src.as_ptr(), &mut i), SpcStatus::Parse);
        assert!(last_error().starts_with("line 1"));
        spc_function_free(ptr::null_mut());
        spc_instance_free(ptr::null_mut());
        spc_string_free(ptr::null_mut());
    }
}

#[test]
fn partition_functions() {
    let i = instance("fun f 2 2 1 1 2\ncon f a b\ncon f b c\ncon f c a\ncon f a d\n");
    let mut s = ptr::null_mut();
    let mut exact = 0;
    unsafe {
        assert_eq!(spc_instance_num_vars(i), 4);
        assert_eq!(spc_z_exact(i, 0, &mut s), SpcStatus::Ok);
        assert_eq!(owned(s), "84");
        assert_eq!(spc_z_exact(i, 2, &mut s), SpcStatus::Capacity);
        assert_eq!(spc_z_estimate(i, ptr::null(), 1, 30, &mut s, &mut exact), SpcStatus::Ok);
        assert_eq!((owned(s), exact), ("84".to_string(), 1));
        let eps = CString::new("-1").unwrap();
        assert_eq!(spc_z_estimate(i, eps.as_ptr(), 1, 30, &mut s, ptr::null_mut()), SpcStatus::InvalidArgument);
        assert_eq!(spc_instance_to_string(i, &mut s), SpcStatus::Ok);
        assert!(owned(s).starts_with("fun f 2 2 1 1 2\n"));
        spc_instance_free(i);
    }
    let anti = instance("fun g 2 1 2 2 1\ncon g a b\n");
    unsafe {
        assert_eq!(spc_z_estimate(anti, ptr::null(), 0, 30, &mut s, ptr::null_mut()), SpcStatus::Precondition);
        spc_instance_free(anti);
    }
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/spincount.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["spc_function_parse", "spc_z_estimate", "spc_last_error", "SPC_STATUS_CAPACITY", "typedef struct SpcInstance"] {
        assert!(text.contains(name), "{name} missing");
    }
    let version = unsafe { CStr::from_ptr(spc_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
    // Compile-check the header when a C compiler is around.
    if let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-xc", "-Wall", "-Werror"]).arg(&header).status() {
        assert!(status.success());
    }
}
