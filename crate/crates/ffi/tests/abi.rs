use std::ffi::{CStr, CString};
use std::ptr;

use gstable::corpus;
use gstable_ffi::*;

fn problem_json(name: &str) -> CString {
    let inst = corpus::instances().into_iter().find(|i| i.name == name).unwrap();
    CString::new(serde_json::to_string(&inst.spec).unwrap()).unwrap()
}

fn last_error() -> String {
    let p = gstable_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    gstable_string_free(s);
    out
}

#[test]
fn run_serialize_and_verify() {
    unsafe {
        let json = problem_json("z4-z2-sign-gf5");
        let mut problem = ptr::null_mut();
        assert_eq!(gstable_problem_from_json(json.as_ptr(), &mut problem), GstableStatus::Ok);
        assert_eq!(gstable_problem_set_seed(problem, 4), GstableStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(gstable_run(problem, &mut report), GstableStatus::Ok);
        gstable_problem_free(problem);

        let mut negative = true;
        assert_eq!(gstable_report_has_negative(report, &mut negative), GstableStatus::Ok);
        assert!(!negative);

        let mut text = ptr::null_mut();
        assert_eq!(gstable_report_to_json(report, &mut text), GstableStatus::Ok);
        let text = take(text);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["extension"]["extends"], true);
        assert_eq!(value["problem"]["seed"], 4);
        gstable_report_free(report);

        // A tampered report parses but fails verification, and the checks name the section.
        let mut tampered = value.clone();
        tampered["extension"]["extended_rep"][0]["entries"][0] = serde_json::json!(1);
        let tampered = CString::new(tampered.to_string()).unwrap();
        let mut report = ptr::null_mut();
        assert_eq!(gstable_report_from_json(tampered.as_ptr(), &mut report), GstableStatus::Ok);
        let mut passed = true;
        let mut checks = ptr::null_mut();
        assert_eq!(gstable_verify(report, &mut passed, &mut checks), GstableStatus::Ok);
        assert!(!passed);
        let checks: serde_json::Value = serde_json::from_str(&take(checks)).unwrap();
        let failed: Vec<&str> =
            checks.as_array().unwrap().iter().filter(|c| c["ok"] == false).map(|c| c["name"].as_str().unwrap()).collect();
        assert!(failed.contains(&"extension"), "{failed:?}");
        gstable_report_free(report);
    }
}

#[test]
fn errors_map_to_codes() {
    unsafe {
        let mut problem = ptr::null_mut();
        assert_eq!(gstable_problem_from_json(ptr::null(), &mut problem), GstableStatus::NullArgument);
        assert!(problem.is_null());

        let bad = CString::new("{").unwrap();
        assert_eq!(gstable_problem_from_json(bad.as_ptr(), &mut problem), GstableStatus::Json);

        let mut spec = corpus::instances().into_iter().find(|i| i.name == "heis2-central-jordan").unwrap().spec;
        spec.p = 9;
        let json = CString::new(serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(gstable_problem_from_json(json.as_ptr(), &mut problem), GstableStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(gstable_run(problem, &mut report), GstableStatus::Validation);
        assert!(last_error().contains("p"));
        assert!(report.is_null());
        gstable_problem_free(problem);

        let mut spec = corpus::instances().into_iter().find(|i| i.name == "s4-v4-perm-gf2").unwrap().spec;
        spec.caps.group = 10;
        let json = CString::new(serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(gstable_problem_from_json(json.as_ptr(), &mut problem), GstableStatus::Ok);
        assert_eq!(gstable_run(problem, &mut report), GstableStatus::SizeLimit);
        gstable_problem_free(problem);

        let mut passed = false;
        assert_eq!(gstable_verify(ptr::null(), &mut passed, ptr::null_mut()), GstableStatus::NullArgument);

        // A successful call clears the previous message.
        assert!(!gstable_version().is_null());
        let json = problem_json("heis2-central-trivial");
        assert_eq!(gstable_problem_from_json(json.as_ptr(), &mut problem), GstableStatus::Ok);
        assert!(gstable_last_error().is_null());
        gstable_problem_free(problem);
        gstable_problem_free(ptr::null_mut());
        gstable_report_free(ptr::null_mut());
        gstable_string_free(ptr::null_mut());
    }
}

#[test]
fn schreier_system_roundtrip() {
    let c2 = serde_json::json!({"domain": 2, "generators": [[1, 0]]});
    let system = serde_json::json!({
        "schema": "gstable.schreier/1",
        "base": c2,
        "coeff": {"kind": "enumerated", "group": c2},
        "kappa": [0, 1, 0, 1],
        "gamma": [0, 0, 0, 1],
    });
    let json = CString::new(system.to_string()).unwrap();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(gstable_schreier(json.as_ptr(), &mut out), GstableStatus::Ok);
        let out: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(out["valid"], true);
        assert_eq!(out["extension_order"], 4);
        assert_eq!(out["split"], false);
    }
}
