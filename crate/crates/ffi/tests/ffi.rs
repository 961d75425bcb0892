use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use twolocal_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(twolocal_last_error()) }.to_string_lossy().into_owned()
}

struct Ctx(*mut TwolocalContext);

impl Ctx {
    fn new(p: u32, e: u32, m: u32) -> Ctx {
        let mut raw = ptr::null_mut();
        assert_eq!(unsafe { twolocal_context_new(p, e, m, &mut raw) }, TwolocalStatus::Ok);
        Ctx(raw)
    }
}

impl Drop for Ctx {
    fn drop(&mut self) {
        unsafe { twolocal_context_free(self.0) }
    }
}

#[test]
fn conductor_through_the_abi() {
    let ctx = Ctx::new(2, 1, 2);
    let mut out = -1;
    let st = unsafe { twolocal_conductor(ctx.0, c("[0; pi^-1]").as_ptr(), &mut out) };
    assert_eq!(st, TwolocalStatus::Ok, "{}", last_error());
    assert_eq!(out, 1);
    let st = unsafe { twolocal_conductor(ctx.0, c("[pi^-1]").as_ptr(), &mut out) };
    assert_eq!(st, TwolocalStatus::LengthMismatch);
    assert!(last_error().contains("LengthMismatch"));
}

#[test]
fn invalid_contexts_are_rejected() {
    let mut raw = ptr::null_mut();
    assert_eq!(unsafe { twolocal_context_new(7, 1, 1, &mut raw) }, TwolocalStatus::InvalidContext);
    assert!(raw.is_null());
    assert_eq!(unsafe { twolocal_context_new(5, 1, 4, &mut raw) }, TwolocalStatus::InvalidContext);
    let ctx = Ctx::new(3, 1, 1);
    assert_eq!(unsafe { twolocal_context_set_windows(ctx.0, 2, 2, 0, 1) }, TwolocalStatus::InvalidContext);
}

#[test]
fn null_pointers_are_reported() {
    let ctx = Ctx::new(2, 1, 1);
    let mut out = 0u32;
    assert_eq!(unsafe { twolocal_res_k(ptr::null(), c("1 * dlog t ^ dlog pi").as_ptr(), &mut out) }, TwolocalStatus::NullPointer);
    assert_eq!(unsafe { twolocal_res_k(ctx.0, ptr::null(), &mut out) }, TwolocalStatus::NullPointer);
    assert_eq!(unsafe { twolocal_res_k(ctx.0, c("1 * dlog t ^ dlog pi").as_ptr(), ptr::null_mut()) }, TwolocalStatus::NullPointer);
}

#[test]
fn residues_and_pairings() {
    let ctx = Ctx::new(2, 1, 1);
    let mut r = 9u32;
    assert_eq!(unsafe { twolocal_res_k(ctx.0, c("1 * dlog t ^ dlog pi").as_ptr(), &mut r) }, TwolocalStatus::Ok);
    assert_eq!(r, 1);
    let st = unsafe { twolocal_rec_pair(ctx.0, c("[t + t^2]").as_ptr(), c("{1+pi, t}").as_ptr(), &mut r) };
    assert_eq!(st, TwolocalStatus::Ok, "{}", last_error());
    assert_eq!(r, 0);
    let mut rank = 0usize;
    let st = unsafe { twolocal_gram_rank(ctx.0, TwolocalPairing::Dual, 1, -1, 1, -3, -1, &mut rank) };
    assert_eq!(st, TwolocalStatus::Ok, "{}", last_error());
    assert_eq!(rank, 4);
}

#[test]
fn json_runner_returns_cli_output() {
    let mut resp = ptr::null_mut();
    let st = unsafe { twolocal_run_json(c(r#"{"argv": ["weil", "--p", "3", "--f", "T", "--g", "T+1"]}"#).as_ptr(), &mut resp) };
    assert_eq!(st, TwolocalStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(resp) }.to_str().unwrap()).unwrap();
    unsafe { twolocal_string_free(resp) };
    assert_eq!((v["v"].clone(), v["ok"].clone()), (1.into(), true.into()));

    let st = unsafe { twolocal_run_json(c(r#"{"argv": ["conductor", "--p", "7", "[t]"]}"#).as_ptr(), &mut resp) };
    assert_eq!(st, TwolocalStatus::CommandFailed);
    assert!(unsafe { CStr::from_ptr(resp) }.to_str().unwrap().contains("InvalidContext"));
    unsafe { twolocal_string_free(resp) };

    assert_eq!(unsafe { twolocal_run_json(c("not json").as_ptr(), &mut resp) }, TwolocalStatus::Parse);
    assert!(resp.is_null());
}

/// Compiles `tests/c/smoke.c` against the shipped header and the static
/// library built alongside this test, then runs it.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = target.join("libtwolocal_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let exe = target.join("twolocal_ffi_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("run cc");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
