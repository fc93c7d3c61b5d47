//! Exercises the C ABI the way a foreign binding would: through raw
//! pointers and status codes only.

use std::ffi::{CStr, CString};
use std::ptr;

use sumprod_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let out = CStr::from_ptr(ptr).to_str().unwrap().to_string();
    sumprod_string_free(ptr);
    out
}

#[test]
fn parse_render_round_trip() {
    unsafe {
        let mut set: *mut SumprodSet = ptr::null_mut();
        let text = c("1 0\n2 0\n1/2 -3/4\n");
        assert_eq!(sumprod_set_parse(text.as_ptr(), &mut set), SumprodStatus::Ok);
        assert_eq!(sumprod_set_len(set), 3);

        let mut rendered: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(sumprod_set_render(set, &mut rendered), SumprodStatus::Ok);
        let rendered = take_string(rendered);
        assert_eq!(rendered, "1/2 -3/4\n1 0\n2 0\n");

        sumprod_set_free(set);
    }
}

#[test]
fn parse_error_reports_message() {
    unsafe {
        let mut set: *mut SumprodSet = ptr::null_mut();
        let text = c("not a set");
        assert_eq!(
            sumprod_set_parse(text.as_ptr(), &mut set),
            SumprodStatus::ParseError
        );
        let msg = sumprod_last_error_message();
        let msg = take_string(msg);
        assert!(msg.contains("line 1"), "{msg}");
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut set: *mut SumprodSet = ptr::null_mut();
        assert_eq!(
            sumprod_set_parse(ptr::null(), &mut set),
            SumprodStatus::NullPointer
        );
        assert_eq!(sumprod_set_len(ptr::null()), 0);
        // freeing NULL is a no-op
        sumprod_set_free(ptr::null_mut());
        sumprod_string_free(ptr::null_mut());
    }
}

#[test]
fn generate_and_sector_check() {
    unsafe {
        let mut set: *mut SumprodSet = ptr::null_mut();
        let spec = c("sector:6");
        let eps = c("1/100");
        assert_eq!(
            sumprod_set_generate(spec.as_ptr(), 9, eps.as_ptr(), &mut set),
            SumprodStatus::Ok
        );
        assert_eq!(sumprod_set_len(set), 6);

        let mut flag = -1i32;
        assert_eq!(
            sumprod_sector_check(set, eps.as_ptr(), &mut flag),
            SumprodStatus::Ok
        );
        assert_eq!(flag, 1);
        sumprod_set_free(set);

        // bad generator spec
        let bad = c("nope:3");
        let mut set2: *mut SumprodSet = ptr::null_mut();
        assert_eq!(
            sumprod_set_generate(bad.as_ptr(), 1, eps.as_ptr(), &mut set2),
            SumprodStatus::BadParams
        );
    }
}

#[test]
fn combine_and_stats() {
    unsafe {
        let mut a: *mut SumprodSet = ptr::null_mut();
        let text = c("1 0\n2 0\n");
        assert_eq!(sumprod_set_parse(text.as_ptr(), &mut a), SumprodStatus::Ok);

        let mut sum: *mut SumprodSet = ptr::null_mut();
        assert_eq!(
            sumprod_set_combine(SumprodSetOp::Sum, a, a, &mut sum),
            SumprodStatus::Ok
        );
        assert_eq!(sumprod_set_len(sum), 3);

        let mut json: *mut std::ffi::c_char = ptr::null_mut();
        let id = c("pair");
        assert_eq!(sumprod_stats_json(a, id.as_ptr(), &mut json), SumprodStatus::Ok);
        let parsed: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(parsed["sizes"]["sum"], 3);
        assert_eq!(parsed["energies"]["multiplicative"], "6");

        sumprod_set_free(sum);
        sumprod_set_free(a);
    }
}

#[test]
fn ratio_with_zero_reports_zero_element() {
    unsafe {
        let mut a: *mut SumprodSet = ptr::null_mut();
        let text = c("0 0\n1 0\n");
        assert_eq!(sumprod_set_parse(text.as_ptr(), &mut a), SumprodStatus::Ok);
        let mut out: *mut SumprodSet = ptr::null_mut();
        assert_eq!(
            sumprod_set_combine(SumprodSetOp::Ratio, a, a, &mut out),
            SumprodStatus::ZeroElement
        );
        sumprod_set_free(a);
    }
}

#[test]
fn energy_reports() {
    unsafe {
        let mut a: *mut SumprodSet = ptr::null_mut();
        let text = c("1 0\n2 0\n4 0\n");
        assert_eq!(sumprod_set_parse(text.as_ptr(), &mut a), SumprodStatus::Ok);
        let mut json: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            sumprod_energy_json(a, SumprodEnergyKind::Multiplicative, &mut json),
            SumprodStatus::Ok
        );
        let parsed: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(parsed["energy"], "19");
        sumprod_set_free(a);
    }
}

#[test]
fn claim_report_passes_on_sector_pair() {
    unsafe {
        let mut a: *mut SumprodSet = ptr::null_mut();
        let text = c("1 0\n2 0\n3 0\n");
        assert_eq!(sumprod_set_parse(text.as_ptr(), &mut a), SumprodStatus::Ok);
        let eps = c("1/100");
        let mut json: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            sumprod_claim_json(a, eps.as_ptr(), 0, &mut json),
            SumprodStatus::Ok
        );
        let parsed: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(parsed["passes"], true);
        assert_eq!(parsed["vertex_count"], 7);

        // a non-sector set is rejected up front
        let mut bad: *mut SumprodSet = ptr::null_mut();
        let text = c("1 1\n2 0\n");
        assert_eq!(sumprod_set_parse(text.as_ptr(), &mut bad), SumprodStatus::Ok);
        let mut json2: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            sumprod_claim_json(bad, eps.as_ptr(), 0, &mut json2),
            SumprodStatus::SectorViolation
        );
        sumprod_set_free(bad);
        sumprod_set_free(a);
    }
}

#[test]
fn verify_suite_through_ffi() {
    unsafe {
        let suite = c("identities");
        let family = c("mixed:6");
        let eps = c("1/100");
        let mut report: *mut std::ffi::c_char = ptr::null_mut();
        let status = sumprod_verify_suite(
            suite.as_ptr(),
            family.as_ptr(),
            4,
            7,
            eps.as_ptr(),
            0,
            ptr::null(),
            &mut report,
        );
        assert_eq!(status, SumprodStatus::Ok);
        let report = take_string(report);
        assert!(report.contains("result PASS"), "{report}");
    }
}

#[test]
fn generated_header_is_in_sync() {
    let header = include_str!("../include/sumprod.h");
    for symbol in [
        "sumprod_set_parse",
        "sumprod_set_generate",
        "sumprod_set_combine",
        "sumprod_set_render",
        "sumprod_set_free",
        "sumprod_sector_check",
        "sumprod_stats_json",
        "sumprod_energy_json",
        "sumprod_claim_json",
        "sumprod_verify_suite",
        "sumprod_last_error_message",
        "sumprod_string_free",
        "SUMPROD_STATUS_CHECK_FAILED",
    ] {
        assert!(header.contains(symbol), "header missing {symbol}");
    }
}
