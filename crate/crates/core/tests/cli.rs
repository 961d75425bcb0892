use std::process::{Command, Output};

use serde_json::Value;

fn twolocal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twolocal")).args(args).env_remove("TWOLOCAL_P").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn conductor_of_pi_inverse_squared() {
    let out = twolocal(&["conductor", "--p", "2", "--m", "1", "[t^-0*pi^-2]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["v"].clone(), v["conductor"].clone(), v["reduced"].clone()), (1.into(), 1.into(), "pi^-1".into()));
}

#[test]
fn reduce_reports_shift() {
    let v = json(&twolocal(&["reduce", "[pi^-4]"]));
    assert_eq!(v["reduced"], "pi^-1");
    assert_eq!(v["conductor"], 1);
}

#[test]
fn gram_csv_export() {
    let out = twolocal(&["gram", "--which", "dual", "--n", "1", "--t-range", "0:2", "--pi-range", "-3:-1", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.split(',').count() == 4));
}

#[test]
fn weil_example() {
    let v = json(&twolocal(&["weil", "--p", "2", "--f", "T", "--g", "1+T"]));
    assert_eq!(v["ok"], true);
}

#[test]
fn environment_overrides_defaults() {
    let out = Command::new(env!("CARGO_BIN_EXE_twolocal"))
        .args(["conductor", "[pi^-3]"])
        .env("TWOLOCAL_P", "3")
        .output()
        .unwrap();
    // pi^-3 is a p-th power for p = 3.
    assert_eq!(json(&out)["reduced"], "pi^-1");
}

#[test]
fn exit_codes_name_the_error() {
    let usage = twolocal(&["conductor"]);
    assert_eq!(usage.status.code(), Some(1));
    let domain = twolocal(&["residue", "--map", "resK", "--twist", "0", "pi^-1 * dlog t ^ dlog pi"]);
    assert_eq!(domain.status.code(), Some(2));
    assert_eq!(json(&domain)["error"]["kind"], "TwistViolation");
    assert!(String::from_utf8_lossy(&domain.stderr).contains("TwistViolation"));
}

#[test]
fn same_arguments_same_bytes() {
    let args = ["selftest", "--seed", "11"];
    assert_eq!(twolocal(&args).stdout, twolocal(&args).stdout);
}
