//! C ABI over the specbound library.
//!
//! Objects are opaque heap handles created by `sb_*_new`-style constructors and released
//! with the matching `sb_*_free`. Every fallible call returns an `SbStatus`; on failure a
//! description is available from `sb_last_error_message` on the same thread until the
//! next failing call. Results are written through out-pointers, which are left untouched
//! on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use specbound::bounds::{self, Status};
use specbound::{config, radial, runner};
use specbound::{AifEvaluator, Error, IsoperimetricFunction, TabulatedProfile, WarpingModel};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    Numeric = 4,
    InvalidModel = 5,
    InvalidProfile = 6,
    Range = 7,
    Search = 8,
    Precondition = 9,
    Config = 10,
    Io = 11,
    Panic = 12,
}

/// Outcome of an inequality check.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SbCheckStatus {
    Satisfied = 0,
    Violated = 1,
    NotApplicable = 2,
    Failed = 3,
}

/// Numeric summary of a verification report.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SbCheckResult {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub status: SbCheckStatus,
}

/// A rotationally symmetric model manifold.
pub struct SbModel(WarpingModel);

/// An isoperimetric function.
pub struct SbProfile(IsoperimetricFunction);

/// Cached evaluator of the associated isoperimetric function and its inverse.
pub struct SbAif(AifEvaluator);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SbStatus {
    match err {
        Error::Domain(_) => SbStatus::Domain,
        Error::Numeric(_) => SbStatus::Numeric,
        Error::InvalidModel(_) => SbStatus::InvalidModel,
        Error::InvalidProfile(_) => SbStatus::InvalidProfile,
        Error::Range { .. } => SbStatus::Range,
        Error::Search(_) => SbStatus::Search,
        Error::Precondition(_) => SbStatus::Precondition,
        Error::Config(_) => SbStatus::Config,
        Error::Io { .. } => SbStatus::Io,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
    Utf8(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into a status plus a thread-local message.
fn guard<F>(body: F) -> SbStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SbStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("{what} is a null pointer"));
            SbStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(what))) => {
            set_last_error(format!("{what} is not valid UTF-8"));
            SbStatus::InvalidUtf8
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            SbStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(what))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message of the most recent failure on this thread, or NULL if none. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Euclidean space of dimension `n`.
///
/// # Safety
/// `out_model` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn sb_model_euclidean(n: u32, out_model: *mut *mut SbModel) -> SbStatus {
    guard(|| {
        let slot = out(out_model, "out_model")?;
        *slot = boxed(SbModel(WarpingModel::euclidean(n)?));
        Ok(())
    })
}

/// Hyperbolic space of dimension `n` and curvature `-kappa`.
///
/// # Safety
/// `out_model` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn sb_model_hyperbolic(n: u32, kappa: f64, out_model: *mut *mut SbModel) -> SbStatus {
    guard(|| {
        let slot = out(out_model, "out_model")?;
        *slot = boxed(SbModel(WarpingModel::hyperbolic(n, kappa)?));
        Ok(())
    })
}

/// Releases a model. NULL is ignored.
///
/// # Safety
/// `model` must be NULL or a handle from an `sb_model_*` constructor not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sb_model_free(model: *mut SbModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Volume of the geodesic ball of radius `radius`.
///
/// # Safety
/// `model` must be a live model handle and `out_volume` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_ball_volume(model: *const SbModel, radius: f64, out_volume: *mut f64) -> SbStatus {
    guard(|| {
        let m = get(model, "model")?;
        let slot = out(out_volume, "out_volume")?;
        *slot = m.0.ball_volume(radius)?;
        Ok(())
    })
}

/// Principal Dirichlet eigenvalue of the geodesic ball of radius `radius`.
///
/// # Safety
/// `model` must be a live model handle and `out_lambda` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_principal_eigenvalue(
    model: *const SbModel,
    radius: f64,
    tol: f64,
    out_lambda: *mut f64,
) -> SbStatus {
    guard(|| {
        let m = get(model, "model")?;
        let slot = out(out_lambda, "out_lambda")?;
        *slot = radial::principal_dirichlet_eigenvalue(&m.0, radius, tol)?.eigenvalue;
        Ok(())
    })
}

/// Power-law profile `H(s) = d·s^{1-1/n}`.
///
/// # Safety
/// `out_profile` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_power_law(d: f64, n: u32, out_profile: *mut *mut SbProfile) -> SbStatus {
    guard(|| {
        let slot = out(out_profile, "out_profile")?;
        *slot = boxed(SbProfile(IsoperimetricFunction::power_law(d, n)?));
        Ok(())
    })
}

/// Ball profile of a model: boundary area of the ball with the given volume.
///
/// # Safety
/// `model` must be a live model handle and `out_profile` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_model(model: *const SbModel, out_profile: *mut *mut SbProfile) -> SbStatus {
    guard(|| {
        let m = get(model, "model")?;
        let slot = out(out_profile, "out_profile")?;
        *slot = boxed(SbProfile(IsoperimetricFunction::model_profile(m.0.clone())));
        Ok(())
    })
}

/// Tabulated profile read from a two-column CSV file with header `s,H`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out_profile` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_tabulated_csv(path: *const c_char, out_profile: *mut *mut SbProfile) -> SbStatus {
    guard(|| {
        let path = text(path, "path")?;
        let slot = out(out_profile, "out_profile")?;
        let table = TabulatedProfile::from_csv_path(Path::new(path))?;
        *slot = boxed(SbProfile(IsoperimetricFunction::tabulated(table)));
        Ok(())
    })
}

/// Tabulated profile from `len` sample pairs `(volumes[i], values[i])`.
///
/// # Safety
/// `volumes` and `values` must each point to `len` readable doubles; `out_profile` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_tabulated(
    volumes: *const f64,
    values: *const f64,
    len: usize,
    out_profile: *mut *mut SbProfile,
) -> SbStatus {
    guard(|| {
        if volumes.is_null() {
            return Err(Failure::Null("volumes"));
        }
        if values.is_null() {
            return Err(Failure::Null("values"));
        }
        let slot = out(out_profile, "out_profile")?;
        let vs = std::slice::from_raw_parts(volumes, len);
        let hs = std::slice::from_raw_parts(values, len);
        let samples: Vec<(f64, f64)> = vs.iter().copied().zip(hs.iter().copied()).collect();
        *slot = boxed(SbProfile(IsoperimetricFunction::tabulated(TabulatedProfile::new(&samples)?)));
        Ok(())
    })
}

/// Releases a profile. NULL is ignored.
///
/// # Safety
/// `profile` must be NULL or a handle from an `sb_profile_*` constructor not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_free(profile: *mut SbProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Evaluator of `H_a(t) = ∫₀ᵗ s/H(s)² ds` for a profile. The profile handle may be freed
/// afterwards.
///
/// # Safety
/// `profile` must be a live profile handle and `out_aif` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_aif_new(profile: *const SbProfile, out_aif: *mut *mut SbAif) -> SbStatus {
    guard(|| {
        let p = get(profile, "profile")?;
        let slot = out(out_aif, "out_aif")?;
        *slot = boxed(SbAif(AifEvaluator::new(p.0.clone())?));
        Ok(())
    })
}

/// Releases an evaluator. NULL is ignored.
///
/// # Safety
/// `aif` must be NULL or a handle from `sb_aif_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sb_aif_free(aif: *mut SbAif) {
    if !aif.is_null() {
        drop(Box::from_raw(aif));
    }
}

/// `H_a(t)`.
///
/// # Safety
/// `aif` must be a live evaluator handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_aif_eval(aif: *const SbAif, t: f64, out_value: *mut f64) -> SbStatus {
    guard(|| {
        let a = get(aif, "aif")?;
        let slot = out(out_value, "out_value")?;
        *slot = a.0.eval(t)?;
        Ok(())
    })
}

/// `H_a⁻¹(y)`.
///
/// # Safety
/// `aif` must be a live evaluator handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_aif_inverse(aif: *const SbAif, y: f64, out_value: *mut f64) -> SbStatus {
    guard(|| {
        let a = get(aif, "aif")?;
        let slot = out(out_value, "out_value")?;
        *slot = a.0.inverse(y)?;
        Ok(())
    })
}

/// `C(λ, p, H) = 2·(H_a⁻¹(1/(2λ)))^{-1/p}`.
///
/// # Safety
/// `aif` must be a live evaluator handle and `out_constant` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_eigen_bound_constant(
    lambda: f64,
    p: f64,
    aif: *const SbAif,
    out_constant: *mut f64,
) -> SbStatus {
    guard(|| {
        let a = get(aif, "aif")?;
        let slot = out(out_constant, "out_constant")?;
        *slot = bounds::eigen_bound_constant(lambda, p, &a.0)?;
        Ok(())
    })
}

/// Closed-form constant `2(nλ)^{n/(2p)}/D^{n/p}` for a power-law profile.
///
/// # Safety
/// `out_constant` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_hadamard_constant(lambda: f64, p: f64, n: u32, d: f64, out_constant: *mut f64) -> SbStatus {
    guard(|| {
        let slot = out(out_constant, "out_constant")?;
        *slot = bounds::hadamard_constant(lambda, p, n, d)?;
        Ok(())
    })
}

/// Torsion bound `sup u ≤ H_a(|B_R|)` on one ball.
///
/// # Safety
/// `model` and `profile` must be live handles and `out_result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_torsion_bound_check(
    model: *const SbModel,
    radius: f64,
    profile: *const SbProfile,
    out_result: *mut SbCheckResult,
) -> SbStatus {
    guard(|| {
        let m = get(model, "model")?;
        let p = get(profile, "profile")?;
        let slot = out(out_result, "out_result")?;
        let r = bounds::torsion_bound_check(&m.0, radius, &p.0)?;
        *slot = SbCheckResult {
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            status: match r.status {
                Status::Satisfied => SbCheckStatus::Satisfied,
                Status::Violated => SbCheckStatus::Violated,
                Status::NotApplicable(_) => SbCheckStatus::NotApplicable,
                Status::Failed { .. } => SbCheckStatus::Failed,
            },
        };
        Ok(())
    })
}

/// Runs a configuration file, writing reports into `out_dir` (NULL selects the config's
/// own choice) on `jobs` threads (0 selects the default). `out_exit_code` receives the
/// batch exit code: 0 all satisfied, 1 violation, 2 configuration error, 3 numeric failure.
///
/// # Safety
/// `config_path` must be a NUL-terminated string, `out_dir` NULL or a NUL-terminated
/// string, and `out_exit_code` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_run_config(
    config_path: *const c_char,
    out_dir: *const c_char,
    jobs: usize,
    out_exit_code: *mut i32,
) -> SbStatus {
    guard(|| {
        let path = text(config_path, "config_path")?;
        let dir = if out_dir.is_null() { None } else { Some(text(out_dir, "out_dir")?) };
        let slot = out(out_exit_code, "out_exit_code")?;
        let cfg = config::parse_config(Path::new(path))?;
        let jobs = (jobs > 0).then_some(jobs);
        *slot = runner::run(&cfg, dir.map(Path::new), jobs);
        Ok(())
    })
}
