//! C interface to `torus-renorm`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free`. Every fallible call returns a [`TrStatus`]; on failure
//! [`tr_last_error`] holds a message for the calling thread. Panics are caught
//! and reported as [`TrStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use torus_renorm::cli_experiments::{orbit_for, parse_config_text, run_scenario, ExperimentConfig, ExperimentError};
use torus_renorm::number_theory::{cf_expand, CfExpansion, Slope};
use torus_renorm::renorm_driver::{constant_block, Orbit};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ConfigInvalid = 4,
    NumberTheory = 5,
    Field = 6,
    Renormalization = 7,
    Io = 8,
    OutOfRange = 9,
    Panic = 10,
}

/// Continued-fraction expansion of a slope.
pub struct TrCfExpansion(CfExpansion);

/// Renormalisation orbit with its per-step norms.
pub struct TrOrbit {
    orbit: Orbit,
    alpha0: f64,
}

/// Norms of the deviation `X_n − ω_n` at one step.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TrStepNorms {
    pub n: usize,
    pub alpha: f64,
    pub total: f64,
    pub oscillatory: f64,
    pub const_omega: f64,
    pub const_orthogonal: f64,
    /// Signed coefficient along the expanding direction `(1, −1/α)`.
    pub orthogonal_coefficient: f64,
}

/// The linearised step on constant fields.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TrConstantBlock {
    /// Row-major 2×2 matrix.
    pub matrix: [f64; 4],
    pub nu: f64,
    pub kernel: [f64; 2],
    pub unstable: [f64; 2],
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(TrStatus, String);

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        let status = match &e {
            ExperimentError::ConfigInvalid(_) => TrStatus::ConfigInvalid,
            ExperimentError::Cf(_) => TrStatus::NumberTheory,
            ExperimentError::Field(_) => TrStatus::Field,
            ExperimentError::Io { .. } => TrStatus::Io,
            ExperimentError::Renorm(_) | ExperimentError::Scale(_) | ExperimentError::Normalization(_) => TrStatus::Renormalization,
        };
        Failure(status, e.to_string())
    }
}

fn failure(status: TrStatus, message: impl Into<String>) -> Failure {
    Failure(status, message.into())
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TrStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            TrStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(failure(TrStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| failure(TrStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| failure(TrStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| failure(TrStatus::NullPointer, "output pointer is null"))
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Expands `slope` (e.g. `"golden"`, `"7/5"`, or a decimal such as `"0.71828@256"`) to `terms` coefficients.
///
/// # Safety
/// `slope` must be a nul-terminated string and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tr_cf_expand(slope: *const c_char, terms: usize, result: *mut *mut TrCfExpansion) -> TrStatus {
    guard(|| {
        let result = out(result)?;
        let slope: Slope = text(slope, "slope")?.parse().map_err(|e: torus_renorm::number_theory::CfError| failure(TrStatus::NumberTheory, e.to_string()))?;
        let cf = cf_expand(&slope, terms).map_err(|e| failure(TrStatus::NumberTheory, e.to_string()))?;
        *result = Box::into_raw(Box::new(TrCfExpansion(cf)));
        Ok(())
    })
}

/// Number of certified coefficients; 0 for a null handle.
///
/// # Safety
/// `cf` must be null or a handle from [`tr_cf_expand`].
#[no_mangle]
pub unsafe extern "C" fn tr_cf_len(cf: *const TrCfExpansion) -> usize {
    cf.as_ref().map_or(0, |c| c.0.len())
}

/// Partial quotient `a_n`.
///
/// # Safety
/// `cf` must be a handle from [`tr_cf_expand`] and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tr_cf_coefficient(cf: *const TrCfExpansion, n: usize, value: *mut u64) -> TrStatus {
    guard(|| {
        let cf = handle(cf, "cf")?;
        let value = out(value)?;
        let a = cf.0.coefficient(n).map_err(|e| failure(TrStatus::OutOfRange, e.to_string()))?;
        *value = u64::try_from(a).map_err(|_| failure(TrStatus::OutOfRange, format!("a_{n} = {a} does not fit in 64 bits")))?;
        Ok(())
    })
}

/// Tail `α_n` rounded to double precision.
///
/// # Safety
/// `cf` must be a handle from [`tr_cf_expand`] and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tr_cf_tail(cf: *const TrCfExpansion, n: usize, value: *mut f64) -> TrStatus {
    guard(|| {
        let cf = handle(cf, "cf")?;
        let value = out(value)?;
        *value = cf.0.tail(n).map_err(|e| failure(TrStatus::OutOfRange, e.to_string()))?.to_f64();
        Ok(())
    })
}

/// # Safety
/// `cf` must be null or a handle from [`tr_cf_expand`] not freed before.
#[no_mangle]
pub unsafe extern "C" fn tr_cf_free(cf: *mut TrCfExpansion) {
    if !cf.is_null() {
        drop(Box::from_raw(cf));
    }
}

unsafe fn config_from(config: *const c_char, scenario: Option<&str>) -> Result<ExperimentConfig, Failure> {
    let mut pairs = parse_config_text(text(config, "config")?)?;
    if let Some(s) = scenario {
        pairs.push(("scenario".into(), s.into()));
    }
    Ok(ExperimentConfig::from_pairs(pairs)?)
}

/// Runs an orbit from `key = value` configuration text (any `scenario` key is ignored).
///
/// An orbit that stops early is still returned; see [`tr_orbit_failure`].
///
/// # Safety
/// `config` must be a nul-terminated string and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tr_orbit_run(config: *const c_char, result: *mut *mut TrOrbit) -> TrStatus {
    guard(|| {
        let result = out(result)?;
        let c = config_from(config, Some("orbit"))?;
        let (orbit, alpha0) = orbit_for(&c, &c.slope)?;
        *result = Box::into_raw(Box::new(TrOrbit { orbit, alpha0 }));
        Ok(())
    })
}

/// Number of stored states, including the initial one; 0 for a null handle.
///
/// # Safety
/// `orbit` must be null or a handle from [`tr_orbit_run`].
#[no_mangle]
pub unsafe extern "C" fn tr_orbit_len(orbit: *const TrOrbit) -> usize {
    orbit.as_ref().map_or(0, |o| o.orbit.states.len())
}

/// Starting slope after the transient adjustment.
///
/// # Safety
/// `orbit` must be a handle from [`tr_orbit_run`] and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tr_orbit_alpha0(orbit: *const TrOrbit, value: *mut f64) -> TrStatus {
    guard(|| {
        *out(value)? = handle(orbit, "orbit")?.alpha0;
        Ok(())
    })
}

/// # Safety
/// `orbit` must be a handle from [`tr_orbit_run`] and `norms` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tr_orbit_norms(orbit: *const TrOrbit, n: usize, norms: *mut TrStepNorms) -> TrStatus {
    guard(|| {
        let o = handle(orbit, "orbit")?;
        let norms = out(norms)?;
        let s = o.orbit.states.get(n).ok_or_else(|| failure(TrStatus::OutOfRange, format!("state {n} of {}", o.orbit.states.len())))?;
        *norms = TrStepNorms {
            n: s.n,
            alpha: s.alpha,
            total: s.norms.total,
            oscillatory: s.norms.oscillatory,
            const_omega: s.norms.const_omega,
            const_orthogonal: s.norms.const_orthogonal,
            orthogonal_coefficient: s.norms.orthogonal_coefficient,
        };
        Ok(())
    })
}

/// Fitted decay rate `θ̂`; writes NaN when too few states were produced.
///
/// # Safety
/// `orbit` must be a handle from [`tr_orbit_run`]; `theta` and `consistent` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tr_orbit_decay(orbit: *const TrOrbit, theta: *mut f64, consistent: *mut bool) -> TrStatus {
    guard(|| {
        let d = &handle(orbit, "orbit")?.orbit.decay;
        *out(theta)? = d.theta_hat.unwrap_or(f64::NAN);
        *out(consistent)? = d.consistent;
        Ok(())
    })
}

/// Why the orbit stopped early: [`TrStatus::Ok`] if it ran to completion, otherwise
/// [`TrStatus::Renormalization`] with the reason in [`tr_last_error`].
///
/// # Safety
/// `orbit` must be a handle from [`tr_orbit_run`].
#[no_mangle]
pub unsafe extern "C" fn tr_orbit_failure(orbit: *const TrOrbit) -> TrStatus {
    guard(|| match &handle(orbit, "orbit")?.orbit.failure {
        None => Ok(()),
        Some(e) => Err(failure(TrStatus::Renormalization, e.to_string())),
    })
}

/// # Safety
/// `orbit` must be null or a handle from [`tr_orbit_run`] not freed before.
#[no_mangle]
pub unsafe extern "C" fn tr_orbit_free(orbit: *mut TrOrbit) {
    if !orbit.is_null() {
        drop(Box::from_raw(orbit));
    }
}

/// Constant block of the linearised step at tail `alpha > 1`.
///
/// # Safety
/// `block` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tr_constant_block(alpha: f64, block: *mut TrConstantBlock) -> TrStatus {
    guard(|| {
        let block = out(block)?;
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(failure(TrStatus::InvalidArgument, format!("alpha must exceed 1, got {alpha}")));
        }
        let b = constant_block(alpha);
        *block = TrConstantBlock {
            matrix: [b.matrix[0][0], b.matrix[0][1], b.matrix[1][0], b.matrix[1][1]],
            nu: b.nu,
            kernel: b.kernel,
            unstable: b.unstable,
        };
        Ok(())
    })
}

/// Runs the scenario described by `config` and writes its CSV tables and JSON
/// manifest into `out_dir`. `passed` receives whether every certificate passed.
///
/// # Safety
/// `config` and `out_dir` must be nul-terminated strings and `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tr_run_scenario(config: *const c_char, out_dir: *const c_char, passed: *mut bool) -> TrStatus {
    guard(|| {
        let passed = out(passed)?;
        let c = config_from(config, None)?;
        let dir = text(out_dir, "out_dir")?;
        let output = run_scenario(&c)?;
        output.write(Path::new(dir))?;
        *passed = output.passed();
        Ok(())
    })
}
