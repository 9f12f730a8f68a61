//! C ABI over the probri library.
//!
//! Conventions: every function returns a [`ProbriStatus`] and writes results
//! through out-pointers. Strings returned through `char **` out-params are
//! heap-allocated by this library and must be released with
//! [`probri_string_free`]. Semantic spaces are opaque [`ProbriSpace`]
//! handles released with [`probri_space_free`]. Arbitrary-precision counts
//! are returned as decimal strings since they routinely exceed 64 bits.

use std::ffi::{c_char, CStr, CString};
use std::path::Path;

use num_rational::Ratio;
use num_traits::ToPrimitive;

use probri::detect::{self, DetectionParams};
use probri::format::{self, FormatError};
use probri::ortho;
use probri::ri::RSpec;
use probri::space::{SemanticSpace, SpaceError};

/// Result code of every C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbriStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidParameters = 3,
    IoError = 4,
    FormatError = 5,
    UnknownWord = 6,
    CapacityExceeded = 7,
    NotFound = 8,
    InternalError = 9,
}

/// Opaque handle to a loaded semantic space.
pub struct ProbriSpace {
    inner: SemanticSpace,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn probri_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Release a string allocated by this library. NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by a probri function and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn probri_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn out_string(value: String, out: *mut *mut c_char) -> ProbriStatus {
    match CString::new(value) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            ProbriStatus::Ok
        }
        Err(_) => ProbriStatus::InternalError,
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ProbriStatus> {
    if s.is_null() {
        return Err(ProbriStatus::NullPointer);
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| ProbriStatus::InvalidUtf8)
}

fn space_status(err: &SpaceError) -> ProbriStatus {
    match err {
        SpaceError::UnknownWord { .. } => ProbriStatus::UnknownWord,
        SpaceError::CapacityExceeded { .. } => ProbriStatus::CapacityExceeded,
        _ => ProbriStatus::InvalidParameters,
    }
}

/// Representation capacity N(n, r, K) as a decimal string.
///
/// # Safety
/// `out_capacity` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn probri_capacity(
    n: u64,
    r: u64,
    k: u8,
    out_capacity: *mut *mut c_char,
) -> ProbriStatus {
    if out_capacity.is_null() {
        return ProbriStatus::NullPointer;
    }
    match ortho::capacity(n, r, k) {
        Ok(cap) => out_string(cap.to_string(), out_capacity),
        Err(_) => ProbriStatus::InvalidParameters,
    }
}

/// Orthogonality probability of two context vectors with r1 and r2 nonzero
/// ±1 entries in dimension n, as a float.
///
/// # Safety
/// `out_probability` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn probri_p_ortho(
    r1: u64,
    r2: u64,
    n: u64,
    out_probability: *mut f64,
) -> ProbriStatus {
    if out_probability.is_null() {
        return ProbriStatus::NullPointer;
    }
    match ortho::p_ortho(r1, r2, n) {
        Ok(res) => {
            *out_probability = res.as_f64();
            ProbriStatus::Ok
        }
        Err(_) => ProbriStatus::InvalidParameters,
    }
}

/// Exact orthogonality probability as decimal numerator and denominator
/// strings.
///
/// # Safety
/// `out_numerator` and `out_denominator` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn probri_p_ortho_exact(
    r1: u64,
    r2: u64,
    n: u64,
    out_numerator: *mut *mut c_char,
    out_denominator: *mut *mut c_char,
) -> ProbriStatus {
    if out_numerator.is_null() || out_denominator.is_null() {
        return ProbriStatus::NullPointer;
    }
    match ortho::p_ortho(r1, r2, n) {
        Ok(res) => {
            let status = out_string(res.numerator().to_string(), out_numerator);
            if status != ProbriStatus::Ok {
                return status;
            }
            out_string(res.denominator().to_string(), out_denominator)
        }
        Err(_) => ProbriStatus::InvalidParameters,
    }
}

/// Orthogonality probability when all nonzero entries are +1 (K = 1).
///
/// # Safety
/// `out_probability` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn probri_p_ortho_k1(
    r: u64,
    n: u64,
    out_probability: *mut f64,
) -> ProbriStatus {
    if out_probability.is_null() {
        return ProbriStatus::NullPointer;
    }
    match ortho::p_ortho_k1(r, n) {
        Ok(res) => {
            *out_probability = res.as_f64();
            ProbriStatus::Ok
        }
        Err(_) => ProbriStatus::InvalidParameters,
    }
}

/// Expected orthogonality probability under a distribution on r.
///
/// The distribution is given as parallel arrays: `support[i]` with weight
/// `weight_num[i] / weight_den[i]`; the weights must sum to 1.
///
/// # Safety
/// The three arrays must hold `len` readable elements and
/// `out_probability` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn probri_expected_p_ortho(
    support: *const u32,
    weight_num: *const u64,
    weight_den: *const u64,
    len: usize,
    n: u64,
    out_probability: *mut f64,
) -> ProbriStatus {
    if support.is_null()
        || weight_num.is_null()
        || weight_den.is_null()
        || out_probability.is_null()
    {
        return ProbriStatus::NullPointer;
    }
    let mut entries = Vec::with_capacity(len);
    for i in 0..len {
        let den = *weight_den.add(i);
        if den == 0 {
            return ProbriStatus::InvalidParameters;
        }
        entries.push((*support.add(i), Ratio::new(*weight_num.add(i), den)));
    }
    let spec = match RSpec::weighted(entries) {
        Ok(s) => s,
        Err(_) => return ProbriStatus::InvalidParameters,
    };
    match ortho::expected_p_ortho(&spec, n) {
        Ok(e) => {
            *out_probability = e.to_f64().unwrap_or(f64::NAN);
            ProbriStatus::Ok
        }
        Err(_) => ProbriStatus::InvalidParameters,
    }
}

/// Smallest dimension n <= n_max with p_ortho(r, r, n) >= p_min.
///
/// `p_min` is a decimal string such as "0.95" so the target stays exact.
/// Writes the dimension and the capacity at that dimension; returns
/// NOT_FOUND when no dimension within the bound reaches the target.
///
/// # Safety
/// `p_min`, `out_n`, and `out_capacity` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn probri_cutoff_n(
    r: u64,
    p_min: *const c_char,
    n_max: u64,
    out_n: *mut u64,
    out_capacity: *mut *mut c_char,
) -> ProbriStatus {
    if out_n.is_null() || out_capacity.is_null() {
        return ProbriStatus::NullPointer;
    }
    let p_str = match read_str(p_min) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let target = match ortho::parse_decimal_rational(p_str) {
        Ok(t) => t,
        Err(_) => return ProbriStatus::InvalidParameters,
    };
    match ortho::cutoff_n(r, &target, n_max) {
        Ok(Some(cut)) => {
            *out_n = cut.n;
            out_string(cut.capacity.to_string(), out_capacity)
        }
        Ok(None) => ProbriStatus::NotFound,
        Err(_) => ProbriStatus::InvalidParameters,
    }
}

/// Load a persisted semantic space. The handle must be released with
/// [`probri_space_free`].
///
/// # Safety
/// `path` and `out_space` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn probri_space_load(
    path: *const c_char,
    out_space: *mut *mut ProbriSpace,
) -> ProbriStatus {
    if out_space.is_null() {
        return ProbriStatus::NullPointer;
    }
    let path = match read_str(path) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match format::load(Path::new(path)) {
        Ok(inner) => {
            *out_space = Box::into_raw(Box::new(ProbriSpace { inner }));
            ProbriStatus::Ok
        }
        Err(FormatError::Io { .. }) => ProbriStatus::IoError,
        Err(_) => ProbriStatus::FormatError,
    }
}

/// Release a space handle. NULL is a no-op.
///
/// # Safety
/// `space` must have come from [`probri_space_load`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn probri_space_free(space: *mut ProbriSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Vocabulary size of a loaded space.
///
/// # Safety
/// `space` must be a live handle; `out_count` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn probri_space_word_count(
    space: *const ProbriSpace,
    out_count: *mut u64,
) -> ProbriStatus {
    if space.is_null() || out_count.is_null() {
        return ProbriStatus::NullPointer;
    }
    *out_count = (*space).inner.len() as u64;
    ProbriStatus::Ok
}

/// Context-vector dimension of a loaded space.
///
/// # Safety
/// `space` must be a live handle; `out_dim` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn probri_space_dim(
    space: *const ProbriSpace,
    out_dim: *mut u64,
) -> ProbriStatus {
    if space.is_null() || out_dim.is_null() {
        return ProbriStatus::NullPointer;
    }
    *out_dim = (*space).inner.config().dim as u64;
    ProbriStatus::Ok
}

/// Angle in radians between the semantic vectors of two words.
///
/// # Safety
/// `space` must be a live handle; `word`, `query`, and `out_angle` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn probri_space_angle(
    space: *const ProbriSpace,
    word: *const c_char,
    query: *const c_char,
    out_angle: *mut f64,
) -> ProbriStatus {
    if space.is_null() || out_angle.is_null() {
        return ProbriStatus::NullPointer;
    }
    let (word, query) = match (read_str(word), read_str(query)) {
        (Ok(w), Ok(q)) => (w, q),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match (*space).inner.angle_between(word, query) {
        Ok(theta) => {
            *out_angle = theta;
            ProbriStatus::Ok
        }
        Err(e) => space_status(&e),
    }
}

/// Run the two-slice suggestion algorithm and return the rows as a JSON
/// array (objects with word, score, delta, rank_pre, rank_post, freq_pre,
/// freq_post, theta_pre, theta_post).
///
/// # Safety
/// `pre` and `post` must be live handles; `query` and `out_json` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn probri_suggest_json(
    pre: *const ProbriSpace,
    post: *const ProbriSpace,
    query: *const c_char,
    kappa: u64,
    top: u64,
    invert_freq_ratio: bool,
    out_json: *mut *mut c_char,
) -> ProbriStatus {
    if pre.is_null() || post.is_null() || out_json.is_null() {
        return ProbriStatus::NullPointer;
    }
    let query = match read_str(query) {
        Ok(q) => q,
        Err(status) => return status,
    };
    let params = match DetectionParams::new(query, kappa as usize, top as usize) {
        Ok(p) => p.with_invert_freq_ratio(invert_freq_ratio),
        Err(_) => return ProbriStatus::InvalidParameters,
    };
    match detect::suggest(&(*pre).inner, &(*post).inner, &params) {
        Ok(rows) => match serde_json::to_string(&rows) {
            Ok(json) => out_string(json, out_json),
            Err(_) => ProbriStatus::InternalError,
        },
        Err(detect::DetectError::UnknownWord { .. }) => ProbriStatus::UnknownWord,
        Err(_) => ProbriStatus::InvalidParameters,
    }
}
