//! Exercises the C ABI end to end from Rust and checks the generated
//! header compiles as C.

use std::ptr;

use latcbc_ffi::*;

fn b_poly2(s: usize) -> Vec<f64> {
    (1..=s).map(|i| (i as f64).powf(-2.0)).collect()
}

#[test]
fn dcbc_product_roundtrip_matches_library() {
    let s = 10usize;
    let n = 101u64;
    let b = b_poly2(s);
    let mut handle: *mut LatcbcResult = ptr::null_mut();
    unsafe {
        let status = latcbc_dcbc_product(n, s, b.as_ptr(), 0.0, &mut handle);
        assert_eq!(status, LatcbcStatus::Ok);
        assert_eq!(latcbc_result_dimension(handle), s);
        assert_eq!(latcbc_result_modulus(handle), n);

        let mut z = vec![0u64; s];
        assert_eq!(latcbc_result_vector(handle, z.as_mut_ptr(), s), LatcbcStatus::Ok);
        let mut gamma = vec![0.0; s];
        assert_eq!(latcbc_result_weights(handle, gamma.as_mut_ptr(), s), LatcbcStatus::Ok);
        let mut e = 0.0;
        assert_eq!(latcbc_result_rms_bound(handle, &mut e), LatcbcStatus::Ok);
        let mut hist = vec![0.0; s];
        assert_eq!(latcbc_result_rms_history(handle, hist.as_mut_ptr(), s), LatcbcStatus::Ok);
        assert_eq!(hist[s - 1], e);

        // cross-check against the library
        let spec = latcbc::NormBoundSpec::product_form(latcbc::CoordinateFamily::Explicit(b.clone()));
        let expect = latcbc::dcbc_product(n, s, &spec, 1.0).unwrap();
        assert_eq!(z, expect.gv.components());
        for j in 1..=s {
            assert_eq!(gamma[j - 1], expect.scheme.gamma(j));
        }
        assert_eq!(e, expect.rms_bound().unwrap());

        // a lambda_star query must fail on a non-iterated result
        let mut ls = 0.0;
        assert_eq!(
            latcbc_result_lambda_star(handle, &mut ls),
            LatcbcStatus::InvalidArgument
        );
        latcbc_result_free(handle);
    }
}

#[test]
fn cbc_and_wce_agree() {
    let s = 8usize;
    let n = 53u64;
    let gamma: Vec<f64> = (1..=s).map(|i| (i as f64).powf(-1.5)).collect();
    let mut handle: *mut LatcbcResult = ptr::null_mut();
    unsafe {
        let status = latcbc_cbc_product(n, s, gamma.as_ptr(), ptr::null(), ptr::null(), &mut handle);
        assert_eq!(status, LatcbcStatus::Ok);
        let mut z = vec![0u64; s];
        assert_eq!(latcbc_result_vector(handle, z.as_mut_ptr(), s), LatcbcStatus::Ok);
        let mut e2 = 0.0;
        assert_eq!(latcbc_result_wce_sq(handle, &mut e2), LatcbcStatus::Ok);
        // without bound data the rms accessor must fail
        let mut e = 0.0;
        assert_eq!(latcbc_result_rms_bound(handle, &mut e), LatcbcStatus::InvalidArgument);

        let mut direct = 0.0;
        assert_eq!(
            latcbc_wce_product(n, s, z.as_ptr(), gamma.as_ptr(), &mut direct),
            LatcbcStatus::Ok
        );
        assert!((direct * direct - e2).abs() / e2 < 1e-12);
        latcbc_result_free(handle);
    }
}

#[test]
fn icbc_and_pod_paths() {
    let s = 6usize;
    let n = 31u64;
    let b = b_poly2(s);
    let b_order: Vec<f64> = (1..=s).map(|l| l as f64).collect();
    let gamma_order: Vec<f64> = (1..=s).map(|l| l as f64).collect();
    unsafe {
        let mut handle: *mut LatcbcResult = ptr::null_mut();
        let status = latcbc_dcbc_pod(
            n,
            s,
            b.as_ptr(),
            b_order.as_ptr(),
            gamma_order.as_ptr(),
            0.0,
            &mut handle,
        );
        assert_eq!(status, LatcbcStatus::Ok);
        let mut ratios = vec![0.0; s];
        assert_eq!(
            latcbc_result_order_ratios(handle, ratios.as_mut_ptr(), s),
            LatcbcStatus::Ok
        );
        assert!((ratios[2] - 1.5).abs() < 1e-15, "Gamma_3/Gamma_2 = 3/2");
        latcbc_result_free(handle);

        let mut handle: *mut LatcbcResult = ptr::null_mut();
        let status = latcbc_icbc(n, s, b.as_ptr(), b_order.as_ptr(), 0.0, 0.0, 0, &mut handle);
        assert_eq!(status, LatcbcStatus::Ok);
        let mut ls = 0.0;
        assert_eq!(latcbc_result_lambda_star(handle, &mut ls), LatcbcStatus::Ok);
        assert!(ls > 0.5 && ls <= 1.0);
        latcbc_result_free(handle);
    }
}

#[test]
fn error_paths_and_messages() {
    unsafe {
        let mut handle: *mut LatcbcResult = ptr::null_mut();
        assert_eq!(
            latcbc_dcbc_product(101, 4, ptr::null(), 1.0, &mut handle),
            LatcbcStatus::NullPointer
        );
        let b = [1.0, 1.0, 1.0, 1.0];
        assert_eq!(
            latcbc_dcbc_product(1, 4, b.as_ptr(), 1.0, &mut handle),
            LatcbcStatus::InvalidArgument
        );
        let mut buf = vec![0i8; 128];
        let len = latcbc_last_error(buf.as_mut_ptr(), buf.len());
        assert!(len > 0);
        let msg: Vec<u8> = buf[..len.min(buf.len() - 1)]
            .iter()
            .map(|&c| c as u8)
            .collect();
        let msg = String::from_utf8_lossy(&msg).to_string();
        assert!(msg.contains("must be >= 2"), "{msg}");
        // free of null is a no-op
        latcbc_result_free(ptr::null_mut());
    }
}

#[test]
fn generated_header_compiles_as_c() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/latcbc.h");
    assert!(header.exists(), "cbindgen header missing");
    let dir = std::env::temp_dir().join(format!("latcbc_hdr_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let main_c = dir.join("use_header.c");
    std::fs::write(
        &main_c,
        r#"
#include "latcbc.h"
#include <stddef.h>

int check(uint64_t n, size_t s, const double *b) {
    LatcbcResult *res = NULL;
    LatcbcStatus status = latcbc_dcbc_product(n, s, b, 0.0, &res);
    if (status != LATCBC_STATUS_OK) return 1;
    double e = 0.0;
    status = latcbc_result_rms_bound(res, &e);
    latcbc_result_free(res);
    return status == LATCBC_STATUS_OK ? 0 : 1;
}
"#,
    )
    .unwrap();
    let out = std::process::Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&main_c)
        .output()
        .expect("cc runs");
    assert!(
        out.status.success(),
        "header does not compile:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let _ = std::fs::remove_dir_all(&dir);
}
