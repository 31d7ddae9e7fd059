use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ordcov_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { ordcov_string_free(s) };
    out
}

fn parse(text: &str) -> *mut OrdcovOrdinal {
    let c = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ordcov_ordinal_parse(c.as_ptr(), &mut h) }, OrdcovStatus::Ok);
    h
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ordcov_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn ordinal_round_trip_and_arithmetic() {
    let a = parse("w + w^2");
    let b = parse("w^2+1");
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ordcov_ordinal_to_string(a, &mut s), OrdcovStatus::Ok);
        assert_eq!(take(s), "w^2");
        let mut c = 0;
        assert_eq!(ordcov_ordinal_compare(a, b, &mut c), OrdcovStatus::Ok);
        assert_eq!(c, -1);
        let mut sum = ptr::null_mut();
        assert_eq!(ordcov_ordinal_add(a, b, &mut sum), OrdcovStatus::Ok);
        assert_eq!(ordcov_ordinal_to_string(sum, &mut s), OrdcovStatus::Ok);
        assert_eq!(take(s), "w^2*2 + 1");
        ordcov_ordinal_free(sum);
        ordcov_ordinal_free(a);
        ordcov_ordinal_free(b);
    }
}

#[test]
fn covering_queries() {
    let a = parse("w^w");
    let x = parse("w^2");
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(ordcov_fund_seq(a, 1, &mut f), OrdcovStatus::Ok);
        let mut c = 1;
        assert_eq!(ordcov_ordinal_compare(f, x, &mut c), OrdcovStatus::Ok);
        assert_eq!(c, 0);
        let mut yes = false;
        assert_eq!(ordcov_covers(x, a, &mut yes), OrdcovStatus::Ok);
        assert!(yes);
        let mut w = ptr::null_mut();
        assert_eq!(ordcov_degree_word(a, &mut w), OrdcovStatus::Ok);
        assert_eq!(take(w), "1(2)^w");
        let mut json = ptr::null_mut();
        assert_eq!(ordcov_graph_json(x, 3, &mut json), OrdcovStatus::Ok);
        assert!(take(json).starts_with("{\"bound\":\"w^2\""));
        for h in [a, x, f] {
            ordcov_ordinal_free(h);
        }
    }
}

#[test]
fn stacks_round_trip() {
    let a = parse("w^3 + w + 2");
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ordcov_stack_encode(a, 2, &mut s), OrdcovStatus::Ok);
        let text = CString::new(take(s)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(ordcov_stack_decode(text.as_ptr(), &mut back), OrdcovStatus::Ok);
        let mut c = 1;
        assert_eq!(ordcov_ordinal_compare(a, back, &mut c), OrdcovStatus::Ok);
        assert_eq!(c, 0);
        ordcov_ordinal_free(back);
        ordcov_ordinal_free(a);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let bad = CString::new("w^").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { ordcov_ordinal_parse(bad.as_ptr(), &mut h) },
        OrdcovStatus::Syntax
    );
    assert!(h.is_null());
    assert!(last_error().contains("position"));
    let succ = parse("w+1");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ordcov_fund_seq(succ, 0, &mut out) }, OrdcovStatus::NotALimit);
    unsafe { ordcov_ordinal_free(succ) };
    let name = CString::new("nope").unwrap();
    let (mut passed, mut rep) = (false, ptr::null_mut());
    assert_eq!(
        unsafe { ordcov_verify(name.as_ptr(), &mut passed, &mut rep) },
        OrdcovStatus::OutOfRange
    );
}

#[test]
fn verify_suite_through_the_boundary() {
    let name = CString::new("cnk").unwrap();
    let (mut passed, mut rep) = (false, ptr::null_mut());
    assert_eq!(
        unsafe { ordcov_verify(name.as_ptr(), &mut passed, &mut rep) },
        OrdcovStatus::Ok
    );
    assert!(passed);
    assert!(take(rep).ends_with("PASS cnk: 4 instances"));
}

/// Compiles a C program against the generated header and static library.
#[test]
fn c_program_links_against_the_header() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    assert!(
        lib_dir.join("libordcov_ffi.a").exists(),
        "static library missing in {lib_dir:?}"
    );
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let bin = out_dir.join("ffi_smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(lib_dir.join("libordcov_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler runs");
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(
        String::from_utf8_lossy(&run.stdout),
        "w^2 + w\n1,2,2(2,1)^w\nstatus 3\n"
    );
}
