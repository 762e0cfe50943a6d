use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use rank2spec_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let v = CStr::from_ptr(s).to_str().unwrap().to_owned();
    r2s_string_free(s);
    v
}

fn last_error() -> String {
    unsafe { take(r2s_last_error_message()) }
}

#[test]
fn group_handles() {
    unsafe {
        let name = CString::new("D6_1").unwrap();
        let mut g: *mut R2sGroup = ptr::null_mut();
        assert_eq!(r2s_group_new(name.as_ptr(), &mut g), R2sStatus::Ok);
        let mut order = 0usize;
        assert_eq!(r2s_group_order(g, &mut order), R2sStatus::Ok);
        assert_eq!(order, 6);

        let mut text = ptr::null_mut();
        assert_eq!(r2s_character_text(g, 1, 0, &mut text), R2sStatus::Ok);
        let text = take(text);
        assert!(text.contains("(0,0): 2"));
        assert_eq!(text.lines().count(), 7);

        let mut ct = -1i64;
        assert_eq!(r2s_orthogonality(g, R2sOrbitKind::S, 2, 1, 2, 1, &mut ct), R2sStatus::Ok);
        assert_eq!(ct, 6);
        assert_eq!(r2s_orthogonality(g, R2sOrbitKind::C, 2, 1, 3, 1, &mut ct), R2sStatus::Ok);
        assert_eq!(ct, 0);
        r2s_group_free(g);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let name = CString::new("D7").unwrap();
        let mut g: *mut R2sGroup = ptr::null_mut();
        assert_eq!(r2s_group_new(name.as_ptr(), &mut g), R2sStatus::UnknownGroup);
        assert!(g.is_null());
        assert!(last_error().contains("unknown subgroup"));
        assert_eq!(r2s_group_new(ptr::null(), &mut g), R2sStatus::NullPointer);
        let mut order = 0usize;
        assert_eq!(r2s_group_order(ptr::null(), &mut order), R2sStatus::NullPointer);
        let mut passed = 0;
        assert_eq!(r2s_run_criterion(13, 0, &mut passed), R2sStatus::InvalidArgument);
        r2s_group_free(ptr::null_mut());
        r2s_string_free(ptr::null_mut());
    }
}

#[test]
fn graph_moments() {
    unsafe {
        let name = CString::new("D4_2").unwrap();
        let mut g: *mut R2sGraph = ptr::null_mut();
        assert_eq!(r2s_graph_new(R2sFamily::G, name.as_ptr(), 1, 0, 1, &mut g), R2sStatus::Ok);
        let mut need = 0i64;
        assert_eq!(r2s_graph_required_radius(g, 8, 0, &mut need), R2sStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(r2s_graph_moment(g, 8, 0, &mut s), R2sStatus::InvalidArgument);
        assert!(last_error().contains("too small"));
        r2s_graph_free(g);

        assert_eq!(r2s_graph_new(R2sFamily::G, name.as_ptr(), 1, 0, need, &mut g), R2sStatus::Ok);
        let mut n = 0usize;
        assert_eq!(r2s_graph_vertex_count(g, &mut n), R2sStatus::Ok);
        assert!(n > 1);
        assert_eq!(r2s_graph_moment(g, 8, 0, &mut s), R2sStatus::Ok);
        assert_eq!(take(s), "196");
        assert_eq!(r2s_graph_to_json(g, &mut s), R2sStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["group"], "D4_2");
        r2s_graph_free(g);

        assert_eq!(r2s_moment_exact(R2sFamily::G, name.as_ptr(), 8, 0, 0, 0, &mut s), R2sStatus::Ok);
        assert_eq!(take(s), "196");
        assert_eq!(r2s_count_walks_quadrant(4, &mut s), R2sStatus::Ok);
        assert_eq!(take(s), "196");
    }
}

#[test]
fn densities() {
    unsafe {
        let id = CString::new("D4_1-rho1-H").unwrap();
        let mut d: *mut R2sDensity = ptr::null_mut();
        assert_eq!(r2s_density_new(id.as_ptr(), &mut d), R2sStatus::Ok);
        let mut dim = 0usize;
        assert_eq!(r2s_density_dim(d, &mut dim), R2sStatus::Ok);
        assert_eq!(dim, 1);
        let (p, mut v) = ([0.0f64], 0.0f64);
        assert_eq!(r2s_density_eval(d, p.as_ptr(), 1, &mut v), R2sStatus::Ok);
        assert!((v - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert_eq!(r2s_density_eval(d, p.as_ptr(), 0, &mut v), R2sStatus::InvalidArgument);
        r2s_density_free(d);

        let bad = CString::new("nope").unwrap();
        assert_ne!(r2s_density_new(bad.as_ptr(), &mut d), R2sStatus::Ok);
    }
}

#[test]
fn criteria_through_the_abi() {
    for n in [3, 4, 12] {
        let mut passed = 0;
        assert_eq!(unsafe { r2s_run_criterion(n, 1, &mut passed) }, R2sStatus::Ok);
        assert_eq!(passed, 1, "criterion {n}");
    }
    let v = unsafe { CStr::from_ptr(r2s_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/rank2spec.h")
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header()).unwrap();
    let src = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let mut n = 0;
    for line in src.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(h.contains(&format!("{name}(")), "{name} missing from header");
            n += 1;
        }
    }
    assert!(n >= 20);
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "rank2spec.h"

int main(void) {
    R2sGroup *g = NULL;
    if (r2s_group_new("D4_2", &g) != R2S_STATUS_OK) return 1;
    size_t order = 0;
    r2s_group_order(g, &order);
    r2s_group_free(g);
    if (order != 4) return 2;

    char *s = NULL;
    if (r2s_moment_exact(R2S_FAMILY_G, "D4_2", 6, 0, 0, 0, &s) != R2S_STATUS_OK) return 3;
    int ok = strcmp(s, "25") == 0;
    r2s_string_free(s);
    if (!ok) return 4;

    if (r2s_group_new("nope", &g) != R2S_STATUS_UNKNOWN_GROUP) return 5;
    char *msg = r2s_last_error_message();
    if (msg == NULL) return 6;
    r2s_string_free(msg);
    printf("ok\n");
    return 0;
}
"#;

/// Compiles and runs a C client against the header and the static library,
/// when a C compiler and the library are present.
#[test]
fn c_client() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("librank2spec_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping C client: no compiler or {} missing", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.path().join("client");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to build");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
