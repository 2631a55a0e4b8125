use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use libc::c_char;

use hsze_ffi::*;

struct Ctx(*mut HszeContext);

impl Ctx {
    fn new(bits: u32) -> Self {
        let mut p = ptr::null_mut();
        assert_eq!(unsafe { hsze_context_new(bits, &mut p) }, HszeStatus::Ok);
        Ctx(p)
    }
}

impl Drop for Ctx {
    fn drop(&mut self) {
        unsafe { hsze_context_free(self.0) }
    }
}

fn take(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { hsze_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(hsze_last_error()) }.to_str().unwrap().to_string()
}

fn eval(ctx: &Ctx, kind: &str, params: &str) -> Result<serde_json::Value, (HszeStatus, String)> {
    let (k, p) = (CString::new(kind).unwrap(), CString::new(params).unwrap());
    let mut out = ptr::null_mut();
    let st = unsafe { hsze_eval(ctx.0, k.as_ptr(), p.as_ptr(), &mut out) };
    if st != HszeStatus::Ok {
        return Err((st, last_error()));
    }
    Ok(serde_json::from_str(&take(out)).unwrap())
}

#[test]
fn eval_returns_value_and_closed_form() {
    let ctx = Ctx::new(256);
    let v = eval(&ctx, "g", "k=3 r=1 z=1/2 basis=1,i").unwrap();
    assert!(v["value"].as_str().unwrap().starts_with("2.363967032381760060370819485893834088928"));
    assert!(v["closed_form"].as_str().unwrap().contains("w^4"));
    let v = eval(&ctx, "hurwitz", "k=8").unwrap();
    assert!(v["closed_form"].as_str().unwrap().contains("-384/5"));
}

#[test]
fn errors_map_to_status_codes() {
    let ctx = Ctx::new(128);
    assert_eq!(eval(&ctx, "g", "k=1 r=2 z=1/2").unwrap_err().0, HszeStatus::Inadmissible);
    assert_eq!(eval(&ctx, "nope", "").unwrap_err().0, HszeStatus::ParseError);
    assert_eq!(eval(&ctx, "g", "k=3 bogus=1").unwrap_err().0, HszeStatus::InvalidArgument);
    let (st, msg) = eval(&ctx, "g", "k=three").unwrap_err();
    assert_eq!(st, HszeStatus::ParseError);
    assert!(msg.contains("three"));
    assert!(eval(&ctx, "hurwitz", "k=4").is_ok());
    assert_eq!(last_error(), "");
}

#[test]
fn null_pointers_are_rejected() {
    let mut out = ptr::null_mut();
    let k = CString::new("g").unwrap();
    let st = unsafe { hsze_eval(ptr::null(), k.as_ptr(), k.as_ptr(), &mut out) };
    assert_eq!(st, HszeStatus::NullPointer);
    assert_eq!(unsafe { hsze_context_new(128, ptr::null_mut()) }, HszeStatus::NullPointer);
    unsafe { hsze_context_free(ptr::null_mut()) };
    unsafe { hsze_string_free(ptr::null_mut()) };
}

#[test]
fn context_settings() {
    let ctx = Ctx::new(128);
    assert_eq!(unsafe { hsze_context_set_caps(ctx.0, 512, 64) }, HszeStatus::Ok);
    assert_eq!(unsafe { hsze_context_set_naive_route(ctx.0, 1) }, HszeStatus::Ok);
    let v = eval(&ctx, "g", "k=3 r=1 z=1/2").unwrap();
    assert_eq!(v["route"], "naive_symmetric");
    let mut bad = ptr::null_mut();
    assert_ne!(unsafe { hsze_context_new(1, &mut bad) }, HszeStatus::Ok);
}

#[test]
fn verify_suite_report() {
    let suite = CString::new("qzeta").unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { hsze_verify(suite.as_ptr(), 256, 30, 1, &mut out) };
    assert_eq!(st, HszeStatus::Ok, "{}", last_error());
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["records"][0].get("wall_time").is_none());
    let st = unsafe { hsze_verify(suite.as_ptr(), 64, 30, 1, &mut out) };
    assert_eq!(st, HszeStatus::InvalidArgument);
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(hsze_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/hsze.h")
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "hsze_context_new",
        "hsze_context_free",
        "hsze_context_set_caps",
        "hsze_context_set_naive_route",
        "hsze_eval",
        "hsze_eval_value",
        "hsze_verify",
        "hsze_last_error",
        "hsze_string_free",
        "hsze_version",
        "HSZE_STATUS_INADMISSIBLE",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_library() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let tmp = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let libdir = tmp.parent().unwrap().join(if cfg!(debug_assertions) { "debug" } else { "release" });
    if !libdir.join("libhsze_ffi.so").exists() {
        eprintln!("shared library not found in {}, skipping", libdir.display());
        return;
    }
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c");
    let exe = tmp.join("hsze_smoke");
    let st = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg("-L")
        .arg(&libdir)
        .arg(format!("-Wl,-rpath,{}", libdir.display()))
        .arg("-lhsze_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("2.36396703238176006037081948589"));
}
