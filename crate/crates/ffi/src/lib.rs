//! C ABI for reeb-index. Objects cross the boundary as opaque handles that
//! the caller frees; every call returns a `ReebStatus`, and the message of
//! the last failure on the calling thread is available from
//! `reeb_last_error_message`.

use reeb_index::index::{cz_minus, cz_plus, rs_index};
use reeb_index::sympath::SymplecticPath;
use reeb_index::toric::{self, HCTable, MomentCone};
use reeb_index::{bott, estimates, Error};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes; one per library error plus the ABI's own failures.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ReebStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    UnknownDegree = 4,
    BufferTooSmall = 5,
    ParseError = 10,
    NonSymmetricGenerator = 20,
    InvalidPath = 21,
    IntegrationDivergence = 22,
    EigenSolverFailure = 23,
    DegenerateEndpoint = 24,
    CrossingResolutionFailure = 25,
    EngineDisagreement = 26,
    EpsilonSelectionFailure = 27,
    ContinuationAmbiguity = 28,
    GapTooSmall = 29,
    PreconditionViolated = 30,
    CertificateViolation = 31,
    NotStrictlyConvex = 40,
    EmptyInterior = 41,
    NonPrimitiveNormal = 42,
    RedundantNormal = 43,
    FaceFacetCountMismatch = 44,
    NotIntegralBasisCompletable = 45,
    NotInInteriorDualCone = 46,
    DegenerateEdgeBasis = 47,
    DegenerateReebVector = 48,
    CutoffTooSmall = 49,
    PerturbationFailure = 50,
    NotInSubgroupK = 51,
    Overflow = 52,
    MorseIndexOutOfRange = 60,
    HypothesesNotMet = 61,
    PinchingViolated = 62,
}

fn status_of(e: &Error) -> ReebStatus {
    use ReebStatus as S;
    match e {
        Error::NonSymmetricGenerator { .. } => S::NonSymmetricGenerator,
        Error::InvalidPath(_) => S::InvalidPath,
        Error::IntegrationDivergence(_) => S::IntegrationDivergence,
        Error::EigenSolverFailure(_) => S::EigenSolverFailure,
        Error::DegenerateEndpoint(_) => S::DegenerateEndpoint,
        Error::CrossingResolutionFailure(_) => S::CrossingResolutionFailure,
        Error::EngineDisagreement { .. } => S::EngineDisagreement,
        Error::EpsilonSelectionFailure => S::EpsilonSelectionFailure,
        Error::ContinuationAmbiguity(_) => S::ContinuationAmbiguity,
        Error::GapTooSmall => S::GapTooSmall,
        Error::PreconditionViolated(_) => S::PreconditionViolated,
        Error::CertificateViolation(_) => S::CertificateViolation,
        Error::NotStrictlyConvex => S::NotStrictlyConvex,
        Error::EmptyInterior => S::EmptyInterior,
        Error::NonPrimitiveNormal(_) => S::NonPrimitiveNormal,
        Error::RedundantNormal(_) => S::RedundantNormal,
        Error::FaceFacetCountMismatch(_) => S::FaceFacetCountMismatch,
        Error::NotIntegralBasisCompletable(_) => S::NotIntegralBasisCompletable,
        Error::NotInInteriorDualCone => S::NotInInteriorDualCone,
        Error::DegenerateEdgeBasis => S::DegenerateEdgeBasis,
        Error::DegenerateReebVector(_) => S::DegenerateReebVector,
        Error::CutoffTooSmall(_) => S::CutoffTooSmall,
        Error::PerturbationFailure => S::PerturbationFailure,
        Error::NotInSubgroupK => S::NotInSubgroupK,
        Error::Overflow => S::Overflow,
        Error::MorseIndexOutOfRange(_) => S::MorseIndexOutOfRange,
        Error::HypothesesNotMet(_) => S::HypothesesNotMet,
        Error::PinchingViolated { .. } => S::PinchingViolated,
        Error::Parse(_) => S::ParseError,
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: ReebStatus, msg: impl Into<String>) -> ReebStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), ReebStatus>) -> ReebStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ReebStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(ReebStatus::Panic, "internal panic"),
    }
}

fn lib(e: Error) -> ReebStatus {
    fail(status_of(&e), format!("{}: {e}", e.name()))
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, ReebStatus> {
    if p.is_null() {
        return Err(fail(ReebStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(ReebStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, ReebStatus> {
    p.as_mut().ok_or_else(|| fail(ReebStatus::NullArgument, "null output pointer"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, ReebStatus> {
    p.as_ref().ok_or_else(|| fail(ReebStatus::NullArgument, "null handle"))
}

fn string_out(s: String, out: &mut *mut c_char) {
    *out = CString::new(s).expect("json has no nul").into_raw();
}

/// Opaque moment cone.
pub struct ReebCone(MomentCone);
/// Opaque symplectic path.
pub struct ReebPath(SymplecticPath);
/// Opaque contact homology table.
pub struct ReebHcTable(HCTable);

/// Message of the last failure on this thread, or NULL. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn reeb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn reeb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"dim": n+1, "normals": [[int]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_cone_from_json(json: *const c_char, out: *mut *mut ReebCone) -> ReebStatus {
    guard(|| {
        let out = out_arg(out)?;
        let cone = MomentCone::from_json(str_arg(json)?).map_err(lib)?;
        *out = Box::into_raw(Box::new(ReebCone(cone)));
        Ok(())
    })
}

/// # Safety
/// `cone` must come from `reeb_cone_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn reeb_cone_free(cone: *mut ReebCone) {
    if !cone.is_null() {
        drop(Box::from_raw(cone));
    }
}

/// Ok when the cone is good, otherwise the status of the first violation.
///
/// # Safety
/// `cone` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn reeb_cone_check(cone: *const ReebCone) -> ReebStatus {
    guard(|| {
        toric::check_good_cone(&handle(cone)?.0).map_err(lib)?;
        Ok(())
    })
}

/// Writes the invariant factors of π₁ into `factors` (capacity `cap`) and
/// their count into `len`; an empty list means the group is trivial.
///
/// # Safety
/// `factors` must hold `cap` elements; `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn reeb_cone_pi1(
    cone: *const ReebCone,
    factors: *mut i64,
    cap: usize,
    len: *mut usize,
) -> ReebStatus {
    guard(|| {
        let g = toric::fundamental_group(&handle(cone)?.0).map_err(lib)?;
        *out_arg(len)? = g.len();
        if g.len() > cap {
            return Err(fail(ReebStatus::BufferTooSmall, "factor buffer too small"));
        }
        if !g.is_empty() && factors.is_null() {
            return Err(fail(ReebStatus::NullArgument, "null factor buffer"));
        }
        for (i, f) in g.into_iter().enumerate() {
            *factors.add(i) = i64::try_from(f).map_err(|_| lib(Error::Overflow))?;
        }
        Ok(())
    })
}

/// Contact homology ranks up to `cutoff` for the seeded perturbation of Σν_j.
///
/// # Safety
/// `cone` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_hc_table_auto(
    cone: *const ReebCone,
    seed: u64,
    cutoff: i64,
    out: *mut *mut ReebHcTable,
) -> ReebStatus {
    guard(|| {
        let out = out_arg(out)?;
        let t = toric::hc_table_auto(&handle(cone)?.0, seed, cutoff).map_err(lib)?;
        *out = Box::into_raw(Box::new(ReebHcTable(t)));
        Ok(())
    })
}

/// # Safety
/// `table` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn reeb_hc_table_free(table: *mut ReebHcTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Rank in `degree`; `UnknownDegree` above the cutoff.
///
/// # Safety
/// `table` must be a valid handle and `rank` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_hc_table_rank(table: *const ReebHcTable, degree: i64, rank: *mut u64) -> ReebStatus {
    guard(|| {
        let t = handle(table)?;
        let r = out_arg(rank)?;
        *r = t.0.rank(degree).ok_or_else(|| fail(ReebStatus::UnknownDegree, "degree above the cutoff"))?;
        Ok(())
    })
}

/// Lowest degree with non-zero rank.
///
/// # Safety
/// `table` must be a valid handle and `k_minus` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_hc_table_k_minus(table: *const ReebHcTable, k_minus: *mut i64) -> ReebStatus {
    guard(|| {
        let t = handle(table)?;
        let out = out_arg(k_minus)?;
        *out = t.0.k_minus.ok_or_else(|| fail(ReebStatus::UnknownDegree, "k_minus not known"))?;
        Ok(())
    })
}

/// JSON form of the table; free with `reeb_string_free`.
///
/// # Safety
/// `table` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_hc_table_to_json(table: *const ReebHcTable, out: *mut *mut c_char) -> ReebStatus {
    guard(|| {
        let t = handle(table)?;
        string_out(t.0.to_json(), out_arg(out)?);
        Ok(())
    })
}

/// Parses `{"n": int, "samples": [{"t": float, "A": [[float]]}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_path_from_json(json: *const c_char, out: *mut *mut ReebPath) -> ReebStatus {
    guard(|| {
        let out = out_arg(out)?;
        let p = SymplecticPath::from_json(str_arg(json)?).map_err(lib)?;
        *out = Box::into_raw(Box::new(ReebPath(p)));
        Ok(())
    })
}

/// # Safety
/// `path` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn reeb_path_free(path: *mut ReebPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Lower Conley–Zehnder index μ⁻.
///
/// # Safety
/// `path` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_path_cz_minus(path: *const ReebPath, out: *mut i64) -> ReebStatus {
    guard(|| {
        let p = handle(path)?;
        *out_arg(out)? = cz_minus(&p.0).map_err(lib)?;
        Ok(())
    })
}

/// Upper Conley–Zehnder index μ⁺.
///
/// # Safety
/// `path` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_path_cz_plus(path: *const ReebPath, out: *mut i64) -> ReebStatus {
    guard(|| {
        let p = handle(path)?;
        *out_arg(out)? = cz_plus(&p.0).map_err(lib)?;
        Ok(())
    })
}

/// Twice the Robbin–Salamon index (it is a half-integer).
///
/// # Safety
/// `path` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_path_rs_index_twice(path: *const ReebPath, out: *mut i64) -> ReebStatus {
    guard(|| {
        let p = handle(path)?;
        *out_arg(out)? = rs_index(&p.0).map_err(lib)?.0;
        Ok(())
    })
}

/// Bott function at e^{iθ}.
///
/// # Safety
/// `path` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_path_bott_value(path: *const ReebPath, theta: f64, out: *mut i64) -> ReebStatus {
    guard(|| {
        let p = handle(path)?;
        *out_arg(out)? = bott::bott_value_at_angle(&p.0, theta).map_err(lib)?;
        Ok(())
    })
}

/// Ellipticity certificate for iterate `j` as JSON; free with
/// `reeb_string_free`.
///
/// # Safety
/// `path` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_path_elliptic_certificate(
    path: *const ReebPath,
    j: usize,
    out: *mut *mut c_char,
) -> ReebStatus {
    guard(|| {
        let p = handle(path)?;
        let out = out_arg(out)?;
        let v = bott::elliptic_certificate(&p.0, j).map_err(lib)?;
        string_out(v.to_json(), out);
        Ok(())
    })
}

/// μ⁻_CZ of the linearized flow of |x|²/2R² on R^{2n+2} over time S.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reeb_ind_hr(n: usize, s: f64, r: f64, out: *mut i64) -> ReebStatus {
    guard(|| {
        *out_arg(out)? = estimates::ind_hr(n, s, r).map_err(lib)?;
        Ok(())
    })
}

const STATUS_NAMES: [(ReebStatus, &CStr); 35] = [
    (ReebStatus::Ok, c"Ok"),
    (ReebStatus::NullArgument, c"NullArgument"),
    (ReebStatus::InvalidUtf8, c"InvalidUtf8"),
    (ReebStatus::Panic, c"Panic"),
    (ReebStatus::UnknownDegree, c"UnknownDegree"),
    (ReebStatus::BufferTooSmall, c"BufferTooSmall"),
    (ReebStatus::ParseError, c"ParseError"),
    (ReebStatus::NonSymmetricGenerator, c"NonSymmetricGenerator"),
    (ReebStatus::InvalidPath, c"InvalidPath"),
    (ReebStatus::IntegrationDivergence, c"IntegrationDivergence"),
    (ReebStatus::EigenSolverFailure, c"EigenSolverFailure"),
    (ReebStatus::DegenerateEndpoint, c"DegenerateEndpoint"),
    (ReebStatus::CrossingResolutionFailure, c"CrossingResolutionFailure"),
    (ReebStatus::EngineDisagreement, c"EngineDisagreement"),
    (ReebStatus::EpsilonSelectionFailure, c"EpsilonSelectionFailure"),
    (ReebStatus::ContinuationAmbiguity, c"ContinuationAmbiguity"),
    (ReebStatus::GapTooSmall, c"GapTooSmall"),
    (ReebStatus::PreconditionViolated, c"PreconditionViolated"),
    (ReebStatus::CertificateViolation, c"CertificateViolation"),
    (ReebStatus::NotStrictlyConvex, c"NotStrictlyConvex"),
    (ReebStatus::EmptyInterior, c"EmptyInterior"),
    (ReebStatus::NonPrimitiveNormal, c"NonPrimitiveNormal"),
    (ReebStatus::RedundantNormal, c"RedundantNormal"),
    (ReebStatus::FaceFacetCountMismatch, c"FaceFacetCountMismatch"),
    (ReebStatus::NotIntegralBasisCompletable, c"NotIntegralBasisCompletable"),
    (ReebStatus::NotInInteriorDualCone, c"NotInInteriorDualCone"),
    (ReebStatus::DegenerateEdgeBasis, c"DegenerateEdgeBasis"),
    (ReebStatus::DegenerateReebVector, c"DegenerateReebVector"),
    (ReebStatus::CutoffTooSmall, c"CutoffTooSmall"),
    (ReebStatus::PerturbationFailure, c"PerturbationFailure"),
    (ReebStatus::NotInSubgroupK, c"NotInSubgroupK"),
    (ReebStatus::Overflow, c"Overflow"),
    (ReebStatus::MorseIndexOutOfRange, c"MorseIndexOutOfRange"),
    (ReebStatus::HypothesesNotMet, c"HypothesesNotMet"),
    (ReebStatus::PinchingViolated, c"PinchingViolated"),
];

/// Stable machine-readable name of a status code, or NULL for an unknown
/// code.
#[no_mangle]
pub extern "C" fn reeb_status_name(code: i32) -> *const c_char {
    STATUS_NAMES
        .iter()
        .find(|(s, _)| *s as i32 == code)
        .map_or(ptr::null(), |(_, name)| name.as_ptr())
}
