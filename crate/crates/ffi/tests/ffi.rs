use std::ffi::{CStr, CString};
use std::ptr;

use qrank_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { qr_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qr_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn expand_and_read_coefficients() {
    let target = CString::new("t@5").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { qr_expand(target.as_ptr(), 6, &mut s) },
        QrStatus::Ok
    );
    assert!(!s.is_null());
    assert_eq!(unsafe { qr_series_len(s) }, 5);
    let mut out = ptr::null_mut();
    let e = CString::new("2").unwrap();
    assert_eq!(
        unsafe { qr_series_coeff(s, e.as_ptr(), &mut out) },
        QrStatus::Ok
    );
    assert_eq!(take(out), "-5");
    assert_eq!(unsafe { qr_series_order(s, &mut out) }, QrStatus::Ok);
    assert_eq!(take(out), "6");
    assert_eq!(unsafe { qr_series_dump(s, &mut out) }, QrStatus::Ok);
    assert!(take(out).starts_with("# O(q^6)\n1\t1\n"));
    let beyond = CString::new("6").unwrap();
    assert_eq!(
        unsafe { qr_series_coeff(s, beyond.as_ptr(), &mut out) },
        QrStatus::ResourceLimit
    );
    unsafe { qr_series_free(s) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut s = ptr::null_mut();
    let bad = CString::new("nonsense(1)").unwrap();
    assert_eq!(
        unsafe { qr_expand(bad.as_ptr(), 5, &mut s) },
        QrStatus::Parse
    );
    assert!(s.is_null());
    assert!(last_error().contains("nonsense"));
    let dom = CString::new("L(7,9)").unwrap();
    assert_eq!(
        unsafe { qr_expand(dom.as_ptr(), 5, &mut s) },
        QrStatus::Domain
    );
    assert_eq!(
        unsafe { qr_expand(ptr::null(), 5, &mut s) },
        QrStatus::NullPointer
    );
    let ok = CString::new("t@7").unwrap();
    assert_eq!(
        unsafe { qr_expand(ok.as_ptr(), 5, ptr::null_mut()) },
        QrStatus::NullPointer
    );
    assert_eq!(unsafe { qr_expand(ok.as_ptr(), 5, &mut s) }, QrStatus::Ok);
    assert_eq!(last_error(), "");
    unsafe { qr_series_free(s) };
    unsafe { qr_series_free(ptr::null_mut()) };
    unsafe { qr_string_free(ptr::null_mut()) };
}

#[test]
fn verify_and_scan() {
    let (mut total, mut verified) = (0u32, 0u32);
    assert_eq!(
        unsafe { qr_verify_db(5, &mut total, &mut verified) },
        QrStatus::Ok
    );
    assert_eq!((total, verified), (20, 20));
    assert_eq!(
        unsafe { qr_verify_db(13, &mut total, &mut verified) },
        QrStatus::Domain
    );
    let id = CString::new("nt-mod5").unwrap();
    let mut holds = 0;
    assert_eq!(
        unsafe { qr_scan(id.as_ptr(), 12, &mut holds) },
        QrStatus::Ok
    );
    assert_eq!(holds, 1);
}

#[test]
fn header_declares_the_api() {
    let h = include_str!("../include/qrank.h");
    for name in [
        "qr_expand",
        "qr_series_free",
        "qr_series_coeff",
        "qr_verify_db",
        "qr_scan",
        "QR_STATUS_OK",
        "typedef struct QrSeries",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let status = std::process::Command::new("cc")
        .args([
            "-std=c99",
            "-Wall",
            "-Werror",
            "-fsyntax-only",
            "-I",
            &format!("{dir}/include"),
            &format!("{dir}/tests/c/smoke.c"),
        ])
        .status();
    match status {
        Ok(s) => assert!(s.success(), "C compiler rejected the header"),
        Err(e) => eprintln!("no C compiler available, skipping: {e}"),
    }
}

/// Links the smoke program against the static library when cargo left one
/// next to this test binary.
#[test]
fn c_program_links_and_runs() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = deps.join("libqrank_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let out = std::env::temp_dir().join(format!("qrank-smoke-{}", std::process::id()));
    let built = std::process::Command::new("cc")
        .args([
            "-std=c99",
            "-I",
            &format!("{dir}/include"),
            &format!("{dir}/tests/c/smoke.c"),
        ])
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status();
    let Ok(built) = built else {
        eprintln!("no C compiler available, skipping");
        return;
    };
    assert!(built.success());
    let code = std::process::Command::new(&out).status().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(code.success(), "smoke program exited with {code}");
}
