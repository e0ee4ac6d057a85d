use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tga_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = tga_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn build_query_and_free() {
    let mut fam = ptr::null_mut();
    let st = unsafe { tga_family_build(c("F:3").as_ptr(), 2, c("1").as_ptr(), true, &mut fam) };
    assert_eq!(st, TgaStatus::Ok);
    assert!(tga_last_error().is_null());
    assert_eq!(unsafe { tga_family_len(fam) }, 3);

    let mut dims = Vec::new();
    for i in 0..3 {
        let mut d = 0;
        assert_eq!(unsafe { tga_family_dim(fam, i, &mut d) }, TgaStatus::Ok);
        dims.push(d);
    }
    dims.sort();
    assert_eq!(dims, [1, 1, 2]);

    let mut d = 0;
    assert_eq!(
        unsafe { tga_family_dim(fam, 3, &mut d) },
        TgaStatus::IndexOutOfRange
    );
    assert!(last_error().contains("out of range"));

    let mut ok = false;
    assert_eq!(unsafe { tga_family_verify(fam, &mut ok) }, TgaStatus::Ok);
    assert!(ok);

    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { tga_family_json(fam, true, &mut json) },
        TgaStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }
        .to_str()
        .unwrap()
        .to_string();
    unsafe { tga_string_free(json) };
    assert!(text.contains("\"field\": \"F:3\""));
    assert!(text.contains("\"overall\": true"));

    unsafe { tga_family_free(fam) };
}

#[test]
fn classify_json() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { tga_classify_json(c("QR:5").as_ptr(), 2, &mut out) },
        TgaStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { tga_string_free(out) };
    assert!(text.contains("\"emulates\": \"C\""));
}

#[test]
fn errors_map_to_status_codes() {
    let mut fam = ptr::null_mut();
    let cases = [
        ("QE:2", "1", 1, TgaStatus::Parse),
        ("Q", "x", 1, TgaStatus::Parse),
        ("Q", "0", 1, TgaStatus::InvalidInput),
        ("Q", "1", 40, TgaStatus::InvalidInput),
    ];
    for (field, a, n, want) in cases {
        let st = unsafe { tga_family_build(c(field).as_ptr(), n, c(a).as_ptr(), true, &mut fam) };
        assert_eq!(st, want, "{field} {n} {a}");
        assert!(fam.is_null());
        assert!(!last_error().is_empty());
    }
    let st = unsafe { tga_family_build(ptr::null(), 1, c("1").as_ptr(), true, &mut fam) };
    assert_eq!(st, TgaStatus::NullPointer);
    let st =
        unsafe { tga_family_build(c("Q").as_ptr(), 1, c("1").as_ptr(), true, ptr::null_mut()) };
    assert_eq!(st, TgaStatus::NullPointer);
    let bad = [0xffu8, 0];
    let st = unsafe { tga_family_build(bad.as_ptr().cast(), 1, c("1").as_ptr(), true, &mut fam) };
    assert_eq!(st, TgaStatus::InvalidUtf8);
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        tga_family_free(ptr::null_mut());
        tga_string_free(ptr::null_mut());
        assert_eq!(tga_family_len(ptr::null()), 0);
        let mut ok = true;
        assert_eq!(
            tga_family_verify(ptr::null(), &mut ok),
            TgaStatus::NullPointer
        );
    }
    let v = unsafe { CStr::from_ptr(tga_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tga.h")).unwrap();
    for name in [
        "tga_version",
        "tga_last_error",
        "tga_string_free",
        "tga_classify_json",
        "tga_family_build",
        "tga_family_free",
        "tga_family_len",
        "tga_family_dim",
        "tga_family_verify",
        "tga_family_json",
        "typedef struct TgaFamily TgaFamily",
        "TGA_STATUS_VERIFICATION = 5",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

/// Compile and run a C program against the header and the static library.
/// Skipped when no C compiler or static library is around.
#[test]
fn c_program_links_and_runs() {
    let profile_dir: PathBuf = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .into();
    let lib = profile_dir.join("libtga_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = env!("CARGO_MANIFEST_DIR");
    let exe = std::env::temp_dir().join(format!("tga_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir}/include"))
        .arg(format!("{dir}/tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("2 2 1 1"));
    assert!(lines.next().unwrap().contains("odd prime"));
}
