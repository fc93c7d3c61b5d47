//! C ABI surface for the sumprod laboratory.
//!
//! Conventions:
//! - Sets are opaque handles created by the `sumprod_set_*` constructors and
//!   released with [`sumprod_set_free`].
//! - Every fallible call returns a [`SumprodStatus`]; results come back
//!   through out-pointers. A human-readable message for the most recent
//!   failure on the current thread is available from
//!   [`sumprod_last_error_message`].
//! - Strings returned by the library are NUL-terminated, UTF-8, and owned
//!   by the caller, who must release them with [`sumprod_string_free`].
//! - Reports are JSON documents; all arbitrary-precision integers inside
//!   them are decimal strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;

use sumprod_core::energy;
use sumprod_core::gen::{self, parse_family_spec, parse_generator_spec};
use sumprod_core::geometry::{verify_claim, ClaimVertices};
use sumprod_core::rational::parse_rational;
use sumprod_core::report::bound_report;
use sumprod_core::set::{parse_set, render_set, FiniteComplexSet, SetOp};
use sumprod_core::suite::{run_suite, RunConfig, SuiteKind};
use sumprod_core::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumprodStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input text could not be parsed.
    ParseError = 3,
    /// Parameters violate a precondition.
    BadParams = 4,
    /// The operation requires `0 ∉ A`.
    ZeroElement = 5,
    /// The set fails the sector condition.
    SectorViolation = 6,
    /// The requested verification ran and found a violation.
    CheckFailed = 7,
    /// Any other error; see `sumprod_last_error_message`.
    InternalError = 8,
}

/// Opaque handle to a finite complex set.
pub struct SumprodSet {
    inner: FiniteComplexSet,
}

/// The four element-wise set operations.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumprodSetOp {
    Sum = 0,
    Diff = 1,
    Prod = 2,
    Ratio = 3,
}

/// Energy selector for [`sumprod_energy_json`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumprodEnergyKind {
    Additive = 0,
    Multiplicative = 1,
    Cubic = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> SumprodStatus {
    match err {
        Error::Parse { .. } => SumprodStatus::ParseError,
        Error::ZeroElement | Error::ZeroInRatioDenominator => SumprodStatus::ZeroElement,
        Error::SectorViolation => SumprodStatus::SectorViolation,
        Error::BadParams(_) | Error::EmptySet | Error::BudgetExceeded(_) => {
            SumprodStatus::BadParams
        }
        _ => SumprodStatus::InternalError,
    }
}

fn fail(err: Error) -> SumprodStatus {
    let status = status_of(&err);
    set_last_error(err.to_string());
    status
}

/// # Safety
/// `ptr` must be NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, SumprodStatus> {
    if ptr.is_null() {
        set_last_error("null string argument".into());
        return Err(SumprodStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|e| {
        set_last_error(format!("invalid utf-8: {e}"));
        SumprodStatus::InvalidUtf8
    })
}

fn give_string(out: *mut *mut c_char, text: String) -> SumprodStatus {
    if out.is_null() {
        set_last_error("null output pointer".into());
        return SumprodStatus::NullPointer;
    }
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SumprodStatus::Ok
        }
        Err(_) => {
            set_last_error("interior NUL in output".into());
            SumprodStatus::InternalError
        }
    }
}

fn give_set(out: *mut *mut SumprodSet, set: FiniteComplexSet) -> SumprodStatus {
    if out.is_null() {
        set_last_error("null output pointer".into());
        return SumprodStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(SumprodSet { inner: set })) };
    SumprodStatus::Ok
}

/// # Safety
/// `set` must be NULL or a pointer previously returned by a constructor.
unsafe fn borrow_set<'a>(set: *const SumprodSet) -> Result<&'a FiniteComplexSet, SumprodStatus> {
    if set.is_null() {
        set_last_error("null set handle".into());
        return Err(SumprodStatus::NullPointer);
    }
    Ok(&(*set).inner)
}

/// Returns the most recent error message for this thread, or NULL when no
/// error has occurred. The caller owns the string.
#[no_mangle]
pub extern "C" fn sumprod_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => CString::new(msg.clone())
            .map(CString::into_raw)
            .unwrap_or(std::ptr::null_mut()),
        None => std::ptr::null_mut(),
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer returned by a `sumprod_*` function and not
/// already freed.
#[no_mangle]
pub unsafe extern "C" fn sumprod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses set-file text (`re im` per line, `#` comments) into a handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_parse(
    text: *const c_char,
    out: *mut *mut SumprodSet,
) -> SumprodStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_set(text) {
        Ok(set) => give_set(out, set),
        Err(e) => fail(e),
    }
}

/// Generates a set from a spec string: `ap:start,step,n`, `gp:start,ratio,n`,
/// `lattice:w,h`, `random:n`, or `sector:n`; `eps` is a rational like `1/100`.
///
/// # Safety
/// `spec` and `eps` must be valid NUL-terminated strings; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_generate(
    spec: *const c_char,
    seed: u64,
    eps: *const c_char,
    out: *mut *mut SumprodSet,
) -> SumprodStatus {
    let spec = match read_str(spec) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let eps = match read_str(eps) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let eps = match parse_rational(eps) {
        Ok(r) => r,
        Err(msg) => return fail(Error::BadParams(msg)),
    };
    let generator = match parse_generator_spec(spec, seed, &eps) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    match gen::generate(&generator) {
        Ok(set) => give_set(out, set),
        Err(e) => fail(e),
    }
}

/// Number of elements; 0 for a NULL handle.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_len(set: *const SumprodSet) -> usize {
    match borrow_set(set) {
        Ok(s) => s.len(),
        Err(_) => 0,
    }
}

/// Renders a set in the set file format.
///
/// # Safety
/// `set` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_render(
    set: *const SumprodSet,
    out: *mut *mut c_char,
) -> SumprodStatus {
    let set = match borrow_set(set) {
        Ok(s) => s,
        Err(e) => return e,
    };
    give_string(out, render_set(set))
}

/// Releases a set handle.
///
/// # Safety
/// `set` must be NULL or a handle returned by a constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_free(set: *mut SumprodSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Element-wise binary set operation; the result is a new handle.
///
/// # Safety
/// `a` and `b` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumprod_set_combine(
    op: SumprodSetOp,
    a: *const SumprodSet,
    b: *const SumprodSet,
    out: *mut *mut SumprodSet,
) -> SumprodStatus {
    let a = match borrow_set(a) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let b = match borrow_set(b) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let op = match op {
        SumprodSetOp::Sum => SetOp::Sum,
        SumprodSetOp::Diff => SetOp::Diff,
        SumprodSetOp::Prod => SetOp::Prod,
        SumprodSetOp::Ratio => SetOp::Ratio,
    };
    let result = match op {
        SetOp::Sum => a.sumset(b),
        SetOp::Diff => a.difference_set(b),
        SetOp::Prod => a.product_set(b),
        SetOp::Ratio => a.ratio_set(b),
    };
    match result {
        Ok(set) => give_set(out, set),
        Err(e) => fail(e),
    }
}

/// Exact sector membership test; writes 1 or 0 to `out`.
///
/// # Safety
/// `set` must be a live handle; `eps` a valid string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sumprod_sector_check(
    set: *const SumprodSet,
    eps: *const c_char,
    out: *mut i32,
) -> SumprodStatus {
    let set = match borrow_set(set) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let eps = match read_str(eps) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let eps = match parse_rational(eps) {
        Ok(r) => r,
        Err(msg) => return fail(Error::BadParams(msg)),
    };
    if out.is_null() {
        set_last_error("null output pointer".into());
        return SumprodStatus::NullPointer;
    }
    match set.sector_check(&eps) {
        Ok(v) => {
            *out = v as i32;
            SumprodStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Sizes, energies and observed exponent ratios as a JSON document.
///
/// # Safety
/// `set` must be a live handle; `set_id` a valid string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sumprod_stats_json(
    set: *const SumprodSet,
    set_id: *const c_char,
    out: *mut *mut c_char,
) -> SumprodStatus {
    let set = match borrow_set(set) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let id = match read_str(set_id) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match bound_report(id, set) {
        Ok(r) => give_string(out, r.to_json().to_string()),
        Err(e) => fail(e),
    }
}

/// One energy report (value, per-value counts, cited lower bound) as JSON.
///
/// # Safety
/// `set` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumprod_energy_json(
    set: *const SumprodSet,
    kind: SumprodEnergyKind,
    out: *mut *mut c_char,
) -> SumprodStatus {
    let set = match borrow_set(set) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let report = match kind {
        SumprodEnergyKind::Additive => energy::additive_energy(set, set),
        SumprodEnergyKind::Multiplicative => energy::multiplicative_energy(set),
        SumprodEnergyKind::Cubic => energy::cubic_energy(set),
    };
    match report {
        Ok(r) => give_string(out, r.to_json().to_string()),
        Err(e) => fail(e),
    }
}

/// Runs the geometric disjointness construction on a sector set and returns
/// the full report as JSON. `use_popular` restricts the tree vertices to
/// the popular ratio lines. Returns `CheckFailed` when the report records a
/// violation (the JSON is still written).
///
/// # Safety
/// `set` must be a live handle; `eps` a valid string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sumprod_claim_json(
    set: *const SumprodSet,
    eps: *const c_char,
    use_popular: i32,
    out: *mut *mut c_char,
) -> SumprodStatus {
    let set = match borrow_set(set) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let eps = match read_str(eps) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let eps = match parse_rational(eps) {
        Ok(r) => r,
        Err(msg) => return fail(Error::BadParams(msg)),
    };
    let vertices = if use_popular != 0 {
        ClaimVertices::PopularLines
    } else {
        ClaimVertices::FullRatioSet
    };
    match verify_claim(set, &eps, vertices) {
        Ok(report) => {
            let passed = report.passes();
            let status = give_string(out, report.to_json().to_string());
            if status != SumprodStatus::Ok {
                return status;
            }
            if passed {
                SumprodStatus::Ok
            } else {
                set_last_error("claim verification found violations".into());
                SumprodStatus::CheckFailed
            }
        }
        Err(e) => fail(e),
    }
}

/// Runs a verification suite (`identities`, `claim`, `incidence`, `all`)
/// over a generated family (`kind:n_max`) and returns the textual report.
/// `use_popular` switches the construction's tree vertices to the popular
/// ratio lines. `artifact_dir` may be NULL; when set, counterexamples are
/// persisted there. Returns `CheckFailed` if any exact assertion failed.
///
/// # Safety
/// String arguments must be valid or NULL as documented; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sumprod_verify_suite(
    suite: *const c_char,
    family: *const c_char,
    count: usize,
    seed: u64,
    eps: *const c_char,
    use_popular: i32,
    artifact_dir: *const c_char,
    out: *mut *mut c_char,
) -> SumprodStatus {
    let suite = match read_str(suite) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let family = match read_str(family) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let eps = match read_str(eps) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let eps = match parse_rational(eps) {
        Ok(r) => r,
        Err(msg) => return fail(Error::BadParams(msg)),
    };
    let artifact_dir = if artifact_dir.is_null() {
        None
    } else {
        match read_str(artifact_dir) {
            Ok(t) => Some(PathBuf::from(t)),
            Err(s) => return s,
        }
    };
    let cfg = RunConfig {
        suite: match SuiteKind::parse(suite) {
            Ok(k) => k,
            Err(e) => return fail(e),
        },
        family: match parse_family_spec(family) {
            Ok(f) => f,
            Err(e) => return fail(e),
        },
        count,
        seed,
        epsilon: eps,
        claim_vertices: if use_popular != 0 {
            ClaimVertices::PopularLines
        } else {
            ClaimVertices::FullRatioSet
        },
        budget_ms: None,
        artifact_dir,
    };
    match run_suite(&cfg) {
        Ok(outcome) => {
            let passed = outcome.passed;
            let status = give_string(out, outcome.lines.join("\n"));
            if status != SumprodStatus::Ok {
                return status;
            }
            if passed {
                SumprodStatus::Ok
            } else {
                set_last_error("suite reported failures".into());
                SumprodStatus::CheckFailed
            }
        }
        Err(e) => fail(e),
    }
}
