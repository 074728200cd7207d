use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use nbc_ffi::*;

fn named(spec: &str) -> *mut NbcGraph {
    let spec = std::ffi::CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { nbc_graph_named(spec.as_ptr(), &mut g) }, NbcStatus::Ok);
    g
}

fn complex(g: *const NbcGraph, order: Option<&[usize]>, truncate: usize) -> *mut NbcComplex {
    let mut c = ptr::null_mut();
    let (p, n) = order.map_or((ptr::null(), 0), |o| (o.as_ptr(), o.len()));
    assert_eq!(unsafe { nbc_complex_new(g, p, n, truncate, &mut c) }, NbcStatus::Ok);
    c
}

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    let mut needed = 0;
    assert_eq!(unsafe { nbc_last_error_message(buf.as_mut_ptr(), buf.len(), &mut needed) }, NbcStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn k3_round_trip() {
    let edges = [0usize, 1, 0, 2, 1, 2];
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { nbc_graph_new(3, edges.as_ptr(), 3, &mut g) }, NbcStatus::Ok);
    let (mut v, mut e) = (0, 0);
    assert_eq!(unsafe { nbc_graph_size(g, &mut v, &mut e) }, NbcStatus::Ok);
    assert_eq!((v, e), (3, 3));

    let c = complex(g, None, NBC_NO_TRUNCATION);
    let mut faces = [0u64; 4];
    let mut len = 0;
    assert_eq!(unsafe { nbc_face_numbers(c, false, faces.as_mut_ptr(), 4, &mut len) }, NbcStatus::Ok);
    assert_eq!(&faces[..len], &[1, 3, 2]);

    let mut bases = 0;
    assert_eq!(unsafe { nbc_count_bases(c, false, &mut bases) }, NbcStatus::Ok);
    assert_eq!(bases, 2);

    let mut gap = 0.0;
    assert_eq!(unsafe { nbc_down_up_gap(c, false, &mut gap) }, NbcStatus::Ok);
    assert!((gap - 0.5).abs() < 1e-9);

    let mut flag = true;
    let s = [1usize, 2];
    assert_eq!(unsafe { nbc_is_nbc(c, s.as_ptr(), 2, &mut flag) }, NbcStatus::Ok);
    assert!(!flag);

    let mut chi = [0i64; 4];
    assert_eq!(unsafe { nbc_chromatic_polynomial(g, false, chi.as_mut_ptr(), 4, &mut len) }, NbcStatus::Ok);
    assert_eq!(&chi[..len], &[0, 2, -3, 1]);

    unsafe {
        nbc_complex_free(c);
        nbc_graph_free(g);
    }
}

#[test]
fn profile_and_truncation() {
    let g = named("complete:4");
    let c = complex(g, Some(&[5, 4, 3, 2, 1, 0]), 2);
    let mut rank = 0;
    assert_eq!(unsafe { nbc_complex_rank(c, &mut rank) }, NbcStatus::Ok);
    assert_eq!(rank, 2);
    let mut gammas = [0.0f64; 2];
    let mut len = 0;
    assert_eq!(unsafe { nbc_local_profile(c, false, gammas.as_mut_ptr(), 2, &mut len) }, NbcStatus::Ok);
    assert_eq!(len, 1);
    unsafe {
        nbc_complex_free(c);
        nbc_graph_free(g);
    }
}

#[test]
fn error_statuses() {
    let mut g = ptr::null_mut();
    let loop_edge = [1usize, 1];
    assert_eq!(unsafe { nbc_graph_new(2, loop_edge.as_ptr(), 1, &mut g) }, NbcStatus::Invalid);
    assert!(last_error().contains("loop"), "{}", last_error());
    assert_eq!(unsafe { nbc_graph_new(2, ptr::null(), 1, &mut g) }, NbcStatus::Null);
    assert_eq!(unsafe { nbc_face_numbers(ptr::null(), false, ptr::null_mut(), 0, &mut 0) }, NbcStatus::Null);

    let k3 = named("complete:3");
    let c = complex(k3, None, NBC_NO_TRUNCATION);
    let mut len = 0;
    let mut small = [0u64; 2];
    assert_eq!(
        unsafe { nbc_face_numbers(c, false, small.as_mut_ptr(), 2, &mut len) },
        NbcStatus::BufferTooSmall
    );
    assert_eq!(len, 3);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nbc_complex_new(k3, ptr::null(), 0, 5, &mut out) }, NbcStatus::Invalid);

    let big = named("complete:9");
    let mut chi = [0i64; 16];
    assert_eq!(
        unsafe { nbc_chromatic_polynomial(big, false, chi.as_mut_ptr(), 16, &mut len) },
        NbcStatus::SizeGuard
    );
    unsafe {
        nbc_complex_free(c);
        nbc_graph_free(k3);
        nbc_graph_free(big);
        nbc_graph_free(ptr::null_mut());
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(nbc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles and runs a C client against the generated header and the
/// static library, when a C compiler is available.
#[test]
fn c_client_links_against_header() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libnbc_ffi.a");
    if !lib.exists() {
        eprintln!("{} missing; skipping", lib.display());
        return;
    }
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("client.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "nbc.h"
int main(void) {
    NbcGraph *g = NULL;
    NbcComplex *c = NULL;
    uint64_t faces[8];
    size_t len = 0;
    if (nbc_graph_named("cycle:4", &g) != NBC_STATUS_OK) return 1;
    if (nbc_complex_new(g, NULL, 0, NBC_NO_TRUNCATION, &c) != NBC_STATUS_OK) return 2;
    if (nbc_face_numbers(c, false, faces, 8, &len) != NBC_STATUS_OK) return 3;
    for (size_t i = 0; i < len; i++) printf("%llu ", (unsigned long long)faces[i]);
    nbc_complex_free(c);
    nbc_graph_free(g);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = tmp.join("client");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to build");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1 4 6 3");
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
