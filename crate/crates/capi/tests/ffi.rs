//! Exercises the C surface the way a foreign caller would: through raw
//! pointers and explicit frees.

use std::ffi::{CStr, CString};
use std::io::Write;
use std::ptr;

use igroupoid::fixtures;
use igroupoid::format::table_to_json;
use igroupoid_capi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::os::raw::c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    igt_string_free(p);
    s
}

#[test]
fn load_validate_product_free() {
    let json = c(&table_to_json(&fixtures::example_5()));
    unsafe {
        let mut table: *mut IgtTable = ptr::null_mut();
        assert_eq!(igt_table_from_json(json.as_ptr(), &mut table), IgtStatus::Ok);

        let mut passed = -1;
        let mut report: *mut std::os::raw::c_char = ptr::null_mut();
        assert_eq!(
            igt_table_validate(table, &mut passed, &mut report),
            IgtStatus::Ok
        );
        assert_eq!(passed, 1);
        let report = take_string(report);
        let parsed: serde_json::Value = serde_json::from_str(&report).unwrap();
        assert_eq!(parsed["checks"].as_array().unwrap().len(), 8);

        let (l, r) = (c("-1"), c("-2"));
        let mut product: *mut std::os::raw::c_char = ptr::null_mut();
        assert_eq!(
            igt_table_product(table, l.as_ptr(), r.as_ptr(), &mut product),
            IgtStatus::Ok
        );
        assert_eq!(take_string(product), r#"["-1"]"#);

        igt_table_free(table);
    }
}

#[test]
fn analyze_reports_all_sections() {
    let json = c(&table_to_json(&fixtures::example_3()));
    unsafe {
        let mut table: *mut IgtTable = ptr::null_mut();
        assert_eq!(igt_table_from_json(json.as_ptr(), &mut table), IgtStatus::Ok);
        let mut report: *mut std::os::raw::c_char = ptr::null_mut();
        assert_eq!(igt_table_analyze(table, &mut report), IgtStatus::Ok);
        let parsed: serde_json::Value =
            serde_json::from_str(&take_string(report)).unwrap();
        for key in ["classify", "sop", "lattice", "pip"] {
            assert!(parsed.get(key).is_some(), "missing {key}");
        }
        assert_eq!(parsed["sop"]["eligible"], true);
        igt_table_free(table);
    }
}

#[test]
fn document_round_trips_through_the_handle() {
    let doc = table_to_json(&fixtures::example_6());
    let json = c(&doc);
    unsafe {
        let mut table: *mut IgtTable = ptr::null_mut();
        assert_eq!(igt_table_from_json(json.as_ptr(), &mut table), IgtStatus::Ok);
        let mut out: *mut std::os::raw::c_char = ptr::null_mut();
        assert_eq!(igt_table_to_json(table, &mut out), IgtStatus::Ok);
        assert_eq!(take_string(out), doc);
        igt_table_free(table);
    }
}

#[test]
fn from_file_reads_a_table() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(table_to_json(&fixtures::example_4()).as_bytes())
        .unwrap();
    let path = c(file.path().to_str().unwrap());
    unsafe {
        let mut table: *mut IgtTable = ptr::null_mut();
        assert_eq!(igt_table_from_file(path.as_ptr(), &mut table), IgtStatus::Ok);
        igt_table_free(table);

        let missing = c("/nonexistent/igt-table.json");
        assert_eq!(
            igt_table_from_file(missing.as_ptr(), &mut table),
            IgtStatus::Io
        );
    }
}

#[test]
fn failures_set_codes_and_messages() {
    unsafe {
        let mut table: *mut IgtTable = ptr::null_mut();
        assert_eq!(
            igt_table_from_json(ptr::null(), &mut table),
            IgtStatus::NullArgument
        );

        let bad = c("{\"labels\": []}");
        assert_eq!(igt_table_from_json(bad.as_ptr(), &mut table), IgtStatus::Parse);
        let message = CStr::from_ptr(igt_last_error()).to_str().unwrap();
        assert!(!message.is_empty());

        let json = c(&table_to_json(&fixtures::omega_star(6)));
        assert_eq!(igt_table_from_json(json.as_ptr(), &mut table), IgtStatus::Ok);
        let (l, r) = (c("-4"), c("-5"));
        let mut out: *mut std::os::raw::c_char = ptr::null_mut();
        assert_eq!(
            igt_table_product(table, l.as_ptr(), r.as_ptr(), &mut out),
            IgtStatus::Eval
        );
        let (l, r) = (c("missing"), c("0"));
        assert_eq!(
            igt_table_product(table, l.as_ptr(), r.as_ptr(), &mut out),
            IgtStatus::UnknownLabel
        );
        igt_table_free(table);
    }
}

#[test]
fn version_and_header_exist() {
    unsafe {
        let v = CStr::from_ptr(igt_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/igroupoid.h");
    let text = std::fs::read_to_string(header).expect("generated header");
    for symbol in [
        "igt_table_from_json",
        "igt_table_validate",
        "igt_table_product",
        "igt_string_free",
        "IGT_STATUS_OK",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}
