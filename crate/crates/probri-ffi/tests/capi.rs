//! Exercise the C ABI from Rust: status codes, string ownership, opaque
//! space handles, and the suggestion JSON.

use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use probri_ffi::*;

use probri::corpus::TimeSlicedCorpus;
use probri::format;
use probri::ri::{GenStrategy, RSpec};
use probri::space::{build_spaces, SpaceConfig};

unsafe fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
    probri_string_free(ptr);
    s
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(probri_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn capacity_and_probability() {
    unsafe {
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(probri_capacity(1000, 2, 2, &mut s), ProbriStatus::Ok);
        assert_eq!(take_string(s), "1998000");

        assert_eq!(
            probri_capacity(4, 9, 2, &mut s),
            ProbriStatus::InvalidParameters
        );
        assert_eq!(
            probri_capacity(4, 2, 2, ptr::null_mut()),
            ProbriStatus::NullPointer
        );

        let mut p = 0.0f64;
        assert_eq!(probri_p_ortho(2, 2, 40, &mut p), ProbriStatus::Ok);
        assert!((p - 2814.0 / 3120.0).abs() < 1e-12);

        let mut num: *mut c_char = ptr::null_mut();
        let mut den: *mut c_char = ptr::null_mut();
        assert_eq!(
            probri_p_ortho_exact(2, 2, 40, &mut num, &mut den),
            ProbriStatus::Ok
        );
        assert_eq!(take_string(num), "2814");
        assert_eq!(take_string(den), "3120");

        assert_eq!(probri_p_ortho_k1(1, 10, &mut p), ProbriStatus::Ok);
        assert!((p - 0.9).abs() < 1e-12);
    }
}

#[test]
fn expected_probability_point_mass_degenerates() {
    unsafe {
        let support = [2u32];
        let num = [1u64];
        let den = [1u64];
        let mut e = 0.0f64;
        assert_eq!(
            probri_expected_p_ortho(support.as_ptr(), num.as_ptr(), den.as_ptr(), 1, 40, &mut e),
            ProbriStatus::Ok
        );
        let mut p = 0.0f64;
        probri_p_ortho(2, 2, 40, &mut p);
        assert_eq!(e, p);

        // weights must sum to 1
        let bad_num = [1u64];
        let bad_den = [2u64];
        assert_eq!(
            probri_expected_p_ortho(
                support.as_ptr(),
                bad_num.as_ptr(),
                bad_den.as_ptr(),
                1,
                40,
                &mut e
            ),
            ProbriStatus::InvalidParameters
        );
    }
}

#[test]
fn cutoff_search() {
    unsafe {
        let p90 = CString::new("0.90").unwrap();
        let mut n = 0u64;
        let mut cap: *mut c_char = ptr::null_mut();
        assert_eq!(
            probri_cutoff_n(2, p90.as_ptr(), 1000, &mut n, &mut cap),
            ProbriStatus::Ok
        );
        assert_eq!(n, 40);
        assert_eq!(take_string(cap), "3120");

        let p975 = CString::new("0.975").unwrap();
        assert_eq!(
            probri_cutoff_n(6, p975.as_ptr(), 1000, &mut n, &mut cap),
            ProbriStatus::NotFound
        );

        let junk = CString::new("junk").unwrap();
        assert_eq!(
            probri_cutoff_n(2, junk.as_ptr(), 1000, &mut n, &mut cap),
            ProbriStatus::InvalidParameters
        );
    }
}

fn write_test_spaces(dir: &Path) -> (CString, CString) {
    let mut docs = Vec::new();
    for _ in 0..6 {
        docs.push(("pre", vec!["virus".to_string(), "infection".to_string()]));
        docs.push(("pre", vec!["virus".to_string(), "hospital".to_string()]));
        docs.push(("pre", vec!["flu".to_string(), "infection".to_string()]));
        docs.push(("post", vec!["virus".to_string(), "infection".to_string()]));
        docs.push(("post", vec!["virus".to_string(), "hospital".to_string()]));
        docs.push(("post", vec!["corona".to_string(), "infection".to_string()]));
        docs.push(("post", vec!["corona".to_string(), "hospital".to_string()]));
    }
    let corpus = TimeSlicedCorpus::from_token_documents(docs);
    let config = SpaceConfig::new(
        40,
        GenStrategy::RandomPlacement(RSpec::uniform(2..=6).unwrap()),
        2,
        9,
    )
    .unwrap();
    let spaces = build_spaces(&corpus, &config).unwrap();
    let pre_path = dir.join("pre.space");
    let post_path = dir.join("post.space");
    format::persist(&spaces[0], &pre_path).unwrap();
    format::persist(&spaces[1], &post_path).unwrap();
    (
        CString::new(pre_path.to_str().unwrap()).unwrap(),
        CString::new(post_path.to_str().unwrap()).unwrap(),
    )
}

#[test]
fn space_handles_and_suggestions() {
    let dir = tempfile::tempdir().unwrap();
    let (pre_path, post_path) = write_test_spaces(dir.path());
    unsafe {
        let mut pre: *mut ProbriSpace = ptr::null_mut();
        let mut post: *mut ProbriSpace = ptr::null_mut();
        assert_eq!(
            probri_space_load(pre_path.as_ptr(), &mut pre),
            ProbriStatus::Ok
        );
        assert_eq!(
            probri_space_load(post_path.as_ptr(), &mut post),
            ProbriStatus::Ok
        );

        let mut count = 0u64;
        assert_eq!(probri_space_word_count(pre, &mut count), ProbriStatus::Ok);
        assert_eq!(count, 4);
        let mut dim = 0u64;
        assert_eq!(probri_space_dim(pre, &mut dim), ProbriStatus::Ok);
        assert_eq!(dim, 40);

        let virus = CString::new("virus").unwrap();
        let flu = CString::new("flu").unwrap();
        let nope = CString::new("nope").unwrap();
        let mut theta = -1.0f64;
        assert_eq!(
            probri_space_angle(pre, flu.as_ptr(), virus.as_ptr(), &mut theta),
            ProbriStatus::Ok
        );
        assert!((0.0..=std::f64::consts::PI).contains(&theta));
        assert_eq!(
            probri_space_angle(pre, nope.as_ptr(), virus.as_ptr(), &mut theta),
            ProbriStatus::UnknownWord
        );

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(
            probri_suggest_json(pre, post, virus.as_ptr(), 2, 2, false, &mut json),
            ProbriStatus::Ok
        );
        let rows: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        let words: Vec<&str> = rows
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["word"].as_str().unwrap())
            .collect();
        assert!(words.contains(&"corona"), "suggestions were {words:?}");

        assert_eq!(
            probri_suggest_json(pre, post, nope.as_ptr(), 2, 2, false, &mut json),
            ProbriStatus::UnknownWord
        );

        probri_space_free(pre);
        probri_space_free(post);
    }
}

#[test]
fn load_failure_codes() {
    unsafe {
        let mut space: *mut ProbriSpace = ptr::null_mut();
        let missing = CString::new("/definitely/not/here.space").unwrap();
        assert_eq!(
            probri_space_load(missing.as_ptr(), &mut space),
            ProbriStatus::IoError
        );

        let dir = tempfile::tempdir().unwrap();
        let junk = dir.path().join("junk.space");
        std::fs::write(&junk, b"NOTASPACEFILE--------").unwrap();
        let junk_c = CString::new(junk.to_str().unwrap()).unwrap();
        assert_eq!(
            probri_space_load(junk_c.as_ptr(), &mut space),
            ProbriStatus::FormatError
        );

        assert_eq!(
            probri_space_load(ptr::null(), &mut space),
            ProbriStatus::NullPointer
        );
    }
}
