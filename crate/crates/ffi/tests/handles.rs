use std::ffi::{CStr, CString};
use std::ptr;

use gbprobe_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    gbp_string_free(s);
    out
}

unsafe fn new_oracle(text: &str) -> *mut GbpOracle {
    let mut o = ptr::null_mut();
    assert_eq!(gbp_oracle_new(c(text).as_ptr(), &mut o), GbpStatus::Ok);
    assert!(!o.is_null());
    o
}

#[test]
fn reconstruct_through_handle() {
    unsafe {
        let o = new_oracle("ring n=2 order=deglex\nX1^2*X2^2\nX1*X2^3\nX1^4*X2\nX2^8\n");
        let mut out = ptr::null_mut();
        assert_eq!(gbp_reconstruct(o, 8, &mut out), GbpStatus::Ok);
        let text = take(out);
        assert!(text.starts_with("generators k=4 D=8\n"), "{text}");
        let used = gbp_oracle_query_count(o);
        assert!(used > 0 && used < 81 + 4);
        gbp_oracle_free(o);
    }
}

#[test]
fn canonical_forms_and_membership() {
    unsafe {
        let o = new_oracle("ring n=2 p=7 order=deglex\nX1^2 + X2\nX2^2 + 1\n");
        let mut out = ptr::null_mut();
        assert_eq!(gbp_oracle_can(o, c("X1^3").as_ptr(), &mut out), GbpStatus::Ok);
        assert_eq!(take(out), "-X1*X2");
        let mut member = false;
        assert_eq!(gbp_oracle_member(o, c("X1*X2").as_ptr(), &mut member), GbpStatus::Ok);
        assert!(!member);
        assert_eq!(gbp_oracle_member(o, c("X2^2").as_ptr(), &mut member), GbpStatus::Ok);
        assert!(member);
        assert_eq!(gbp_oracle_query_count(o), 3);
        gbp_oracle_free(o);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut o = ptr::null_mut();
        assert_eq!(gbp_oracle_new(ptr::null(), &mut o), GbpStatus::NullPointer);
        assert_eq!(gbp_oracle_new(c("ring n=2\nX1 +* X2").as_ptr(), &mut o), GbpStatus::Parse);
        let msg = CStr::from_ptr(gbp_last_error()).to_str().unwrap();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(o.is_null());

        let o = new_oracle("ring n=2\nX1\n");
        let mut out = ptr::null_mut();
        assert_eq!(gbp_oracle_can(o, c("X3").as_ptr(), &mut out), GbpStatus::Parse);
        assert_eq!(gbp_reconstruct(o, 0, &mut out), GbpStatus::Math);
        assert_eq!(gbp_reconstruct(ptr::null_mut(), 3, &mut out), GbpStatus::NullPointer);
        assert_eq!(gbp_oracle_query_count(ptr::null()), 0);
        gbp_oracle_free(o);
        gbp_oracle_free(ptr::null_mut());
        gbp_string_free(ptr::null_mut());
    }
}

#[test]
fn zero_ideal() {
    unsafe {
        let o = new_oracle("ring n=3\n");
        let mut out = ptr::null_mut();
        assert_eq!(gbp_reconstruct(o, 4, &mut out), GbpStatus::Ok);
        assert!(take(out).starts_with("generators k=0 D=4\n"));
        gbp_oracle_free(o);
    }
}

#[test]
fn header_lists_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gbprobe.h")).unwrap();
    for name in [
        "gbp_oracle_new",
        "gbp_oracle_free",
        "gbp_oracle_can",
        "gbp_oracle_member",
        "gbp_oracle_query_count",
        "gbp_reconstruct",
        "gbp_string_free",
        "gbp_last_error",
        "typedef struct GbpOracle GbpOracle",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
