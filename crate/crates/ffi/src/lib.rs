//! C ABI over `ising_avn`.
//!
//! Objects cross the boundary as opaque handles (`IaState`, `IaConstraintSet`)
//! created by `ia_*_new`-style constructors and released with the matching
//! `*_free`. Every fallible call returns an [`IaStatus`]; on failure a message
//! is available from [`ia_last_error_message`] on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and must
//! be released with [`ia_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ising_avn::avn::{self, Constraint, ConstraintSet};
use ising_avn::measure;
use ising_avn::model::{self, IsingParams, Parity};
use ising_avn::report::{self, RunConfig};
use ising_avn::search;
use ising_avn::{Error, PauliString, Sign, StateVector};
use num_complex::Complex64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SizeMismatch = 3,
    CapExceeded = 4,
    Parse = 5,
    NotHermitian = 6,
    NotCommuting = 7,
    NotAnEigenstate = 8,
    DegenerateGroundState = 9,
    Numerical = 10,
    /// The check ran but did not pass (e.g. a report whose certification failed).
    CheckFailed = 11,
    Panic = 12,
}

/// Normalized state vector on `n` sites.
pub struct IaState {
    inner: StateVector,
}

/// Ordered, pairwise commuting list of eigenvalue constraints.
pub struct IaConstraintSet {
    inner: ConstraintSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> IaStatus {
    match err {
        Error::SizeMismatch { .. } => IaStatus::SizeMismatch,
        Error::CapExceeded { .. } => IaStatus::CapExceeded,
        Error::InvalidParameter(_) | Error::TooManyLevels { .. } => IaStatus::InvalidArgument,
        Error::Parse { .. } => IaStatus::Parse,
        Error::NotHermitian(_) => IaStatus::NotHermitian,
        Error::NotCommuting { .. } => IaStatus::NotCommuting,
        Error::NotAnEigenstate { .. } => IaStatus::NotAnEigenstate,
        Error::DegenerateGroundState { .. } => IaStatus::DegenerateGroundState,
        Error::Numerical(_) => IaStatus::Numerical,
    }
}

struct Failure(IaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(IaStatus::NullPointer, format!("{what} is NULL"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(IaStatus::InvalidArgument, msg.into())
}

/// Runs `body`, recording the error message and mapping panics to `IaStatus::Panic`.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> IaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            IaStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {msg}"));
            IaStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    let c = CString::new(text).map_err(|_| Failure(IaStatus::Numerical, "string contains NUL".into()))?;
    write_out(out, c.into_raw(), "string out-pointer")
}

unsafe fn new_state(out: *mut *mut IaState, make: impl FnOnce() -> ising_avn::Result<StateVector>) -> IaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = make()?;
        write_out(out, Box::into_raw(Box::new(IaState { inner })), "out")
    })
}

unsafe fn new_set(out: *mut *mut IaConstraintSet, make: impl FnOnce() -> ising_avn::Result<ConstraintSet>) -> IaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = make()?;
        write_out(out, Box::into_raw(Box::new(IaConstraintSet { inner })), "out")
    })
}

fn sign_of(value: i32) -> Result<Sign, Failure> {
    Sign::from_value(value.into()).ok_or_else(|| invalid(format!("eigenvalue must be +1 or -1, got {value}")))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| Failure(IaStatus::Numerical, e.to_string()))
}

/// Message for the last failed call on this thread, or NULL after a success.
///
/// The pointer stays valid until the next `ia_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ia_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ia_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ia_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Uniform superposition of the even-parity basis states on `n >= 2` sites.
#[no_mangle]
pub unsafe extern "C" fn ia_state_even_parity(n: usize, out: *mut *mut IaState) -> IaStatus {
    new_state(out, || model::even_parity_uniform_state(n))
}

#[no_mangle]
pub unsafe extern "C" fn ia_state_odd_parity(n: usize, out: *mut *mut IaState) -> IaStatus {
    new_state(out, || model::odd_parity_uniform_state(n))
}

/// `(-|0000> + |1111>)/sqrt(2)`.
#[no_mangle]
pub unsafe extern "C" fn ia_state_first_excited_4(out: *mut *mut IaState) -> IaStatus {
    new_state(out, model::first_excited_state_4)
}

#[no_mangle]
pub unsafe extern "C" fn ia_state_closed_form_3(field_b: f64, out: *mut *mut IaState) -> IaStatus {
    new_state(out, || model::closed_form_ground_state_3(field_b))
}

#[no_mangle]
pub unsafe extern "C" fn ia_state_closed_form_4(field_b: f64, out: *mut *mut IaState) -> IaStatus {
    new_state(out, || model::closed_form_ground_state_4(field_b))
}

/// Numerical ground state of the ring.
///
/// `parity`: 0 for the even sector, 1 for odd, any negative value for none.
/// Without a sector a degenerate ground level yields
/// `IA_STATUS_DEGENERATE_GROUND_STATE`.
#[no_mangle]
pub unsafe extern "C" fn ia_state_ground(n: usize, field_b: f64, parity: i32, out: *mut *mut IaState) -> IaStatus {
    let sector = match parity {
        p if p < 0 => None,
        0 => Some(Parity::Even),
        1 => Some(Parity::Odd),
        other => {
            set_last_error(format!("parity must be 0, 1 or negative, got {other}"));
            return IaStatus::InvalidArgument;
        }
    };
    new_state(out, || model::select_ground_state(&IsingParams::new(n, field_b)?, sector, model::DEFAULT_DEGENERACY_TOL))
}

/// Copies `len = 2^n` amplitudes (real and imaginary parts) and normalizes.
///
/// `imag` may be NULL for a real vector.
#[no_mangle]
pub unsafe extern "C" fn ia_state_from_amplitudes(
    n: usize,
    real: *const f64,
    imag: *const f64,
    len: usize,
    out: *mut *mut IaState,
) -> IaStatus {
    if real.is_null() {
        set_last_error("real is NULL");
        return IaStatus::NullPointer;
    }
    let re = std::slice::from_raw_parts(real, len);
    let im = (!imag.is_null()).then(|| std::slice::from_raw_parts(imag, len));
    let amps: Vec<Complex64> = (0..len).map(|k| Complex64::new(re[k], im.map_or(0.0, |im| im[k]))).collect();
    new_state(out, || StateVector::new(n, amps))
}

#[no_mangle]
pub unsafe extern "C" fn ia_state_free(state: *mut IaState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ia_state_sites(state: *const IaState, out: *mut usize) -> IaStatus {
    guard(|| write_out(out, deref(state, "state")?.inner.n(), "out"))
}

/// Writes the `2^n` amplitudes; `len` must equal `2^n`. Either output may be NULL.
#[no_mangle]
pub unsafe extern "C" fn ia_state_amplitudes(state: *const IaState, real: *mut f64, imag: *mut f64, len: usize) -> IaStatus {
    guard(|| {
        let s = &deref(state, "state")?.inner;
        if len != s.dim() {
            return Err(Failure(IaStatus::SizeMismatch, format!("buffer holds {len} amplitudes, state has {}", s.dim())));
        }
        for (k, a) in s.amplitudes().iter().enumerate() {
            if !real.is_null() {
                real.add(k).write(a.re);
            }
            if !imag.is_null() {
                imag.add(k).write(a.im);
            }
        }
        Ok(())
    })
}

/// Empty set on `n` sites; fill it with [`ia_set_push`].
#[no_mangle]
pub unsafe extern "C" fn ia_set_new(n: usize, out: *mut *mut IaConstraintSet) -> IaStatus {
    new_set(out, || {
        if n == 0 || n > ising_avn::pauli::MAX_SITES {
            return Err(Error::InvalidParameter(format!("site count {n} out of range")));
        }
        ConstraintSet::new(n, Vec::new())
    })
}

/// The four-operator contradiction set for `n >= 3` sites.
#[no_mangle]
pub unsafe extern "C" fn ia_set_standard(n: usize, out: *mut *mut IaConstraintSet) -> IaStatus {
    new_set(out, || avn::standard_ghz_set(n))
}

#[no_mangle]
pub unsafe extern "C" fn ia_set_excited_4(out: *mut *mut IaConstraintSet) -> IaStatus {
    new_set(out, || Ok(avn::excited_ghz_set_4()))
}

/// Appends `observable` (e.g. `"+YYZ"` or `"-Y1 Y2 Z3"`) with `eigenvalue` ±1.
///
/// Fails with `IA_STATUS_NOT_COMMUTING` if it anticommutes with an existing entry.
#[no_mangle]
pub unsafe extern "C" fn ia_set_push(set: *mut IaConstraintSet, observable: *const c_char, eigenvalue: i32) -> IaStatus {
    guard(|| {
        let set = deref_mut(set, "set")?;
        let text = read_str(observable, "observable")?;
        let obs = PauliString::parse_sized(text, Some(set.inner.n()))?;
        set.inner.push(Constraint::new(obs, sign_of(eigenvalue)?)?)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ia_set_len(set: *const IaConstraintSet, out: *mut usize) -> IaStatus {
    guard(|| write_out(out, deref(set, "set")?.inner.len(), "out"))
}

#[no_mangle]
pub unsafe extern "C" fn ia_set_free(set: *mut IaConstraintSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Checks the eigenequations on `state` and the classical sign system.
///
/// `certified` receives whether both the quantum side passes at `tol` and no
/// hidden-variable assignment exists. `json_out`, if not NULL, receives the
/// full certificate as JSON.
#[no_mangle]
pub unsafe extern "C" fn ia_certify(
    set: *const IaConstraintSet,
    state: *const IaState,
    tol: f64,
    certified: *mut bool,
    json_out: *mut *mut c_char,
) -> IaStatus {
    guard(|| {
        let set = &deref(set, "set")?.inner;
        let state = &deref(state, "state")?.inner;
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(invalid(format!("bad tolerance {tol}")));
        }
        if certified.is_null() {
            return Err(null("certified"));
        }
        let cert = avn::certify_avn(set, state, tol)?;
        if !json_out.is_null() {
            write_string(json_out, to_json(&cert)?)?;
        }
        certified.write(cert.holds());
        Ok(())
    })
}

/// Writes the `len` lowest eigenvalues of the ring, ascending.
#[no_mangle]
pub unsafe extern "C" fn ia_lowest_eigenvalues(n: usize, field_b: f64, out: *mut f64, len: usize) -> IaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = model::exact_diagonalize(&IsingParams::new(n, field_b)?, 1, model::DEFAULT_DEGENERACY_TOL)?;
        if len > spec.eigenvalues.len() {
            return Err(invalid(format!("asked for {len} eigenvalues, spectrum has {}", spec.eigenvalues.len())));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(&spec.eigenvalues[..len]);
        Ok(())
    })
}

/// Dimension of the ground level, grouping eigenvalues closer than `degeneracy_tol`.
#[no_mangle]
pub unsafe extern "C" fn ia_ground_degeneracy(n: usize, field_b: f64, degeneracy_tol: f64, out: *mut usize) -> IaStatus {
    guard(|| {
        let spec = model::exact_diagonalize(&IsingParams::new(n, field_b)?, 1, degeneracy_tol)?;
        write_out(out, spec.ground_dimension(), "out")
    })
}

/// Stabilizer scan of `state` plus the contradiction subsets of at most
/// `max_subset` entries, as JSON `{"inventory": ..., "avn_sets": [...]}`.
#[no_mangle]
pub unsafe extern "C" fn ia_search(state: *const IaState, tol: f64, max_subset: usize, json_out: *mut *mut c_char) -> IaStatus {
    guard(|| {
        let state = &deref(state, "state")?.inner;
        if json_out.is_null() {
            return Err(null("json_out"));
        }
        let inventory = search::enumerate_stabilizers(state, tol)?;
        let avn_sets = search::find_avn_subsets(&inventory, max_subset)?;
        let value = serde_json::json!({ "inventory": inventory, "avn_sets": avn_sets });
        write_string(json_out, value.to_string())
    })
}

/// Seeded measurement experiment with `shots` shots per constraint.
///
/// `matched_fractions`, if not NULL, receives one value per constraint
/// (`fractions_len` must equal the set length). `json_out`, if not NULL,
/// receives the statistics table.
#[no_mangle]
pub unsafe extern "C" fn ia_run_experiment(
    state: *const IaState,
    set: *const IaConstraintSet,
    shots: usize,
    seed: u64,
    matched_fractions: *mut f64,
    fractions_len: usize,
    json_out: *mut *mut c_char,
) -> IaStatus {
    guard(|| {
        let state = &deref(state, "state")?.inner;
        let set = &deref(set, "set")?.inner;
        let stats = measure::run_experiment(state, set, shots, seed)?;
        if !matched_fractions.is_null() {
            if fractions_len != set.len() {
                return Err(Failure(
                    IaStatus::SizeMismatch,
                    format!("buffer holds {fractions_len} values, set has {}", set.len()),
                ));
            }
            for (i, c) in stats.constraints.iter().enumerate() {
                matched_fractions.add(i).write(c.matched_fraction);
            }
        }
        if !json_out.is_null() {
            write_string(json_out, to_json(&stats)?)?;
        }
        Ok(())
    })
}

/// Whether two Pauli strings in text form commute.
#[no_mangle]
pub unsafe extern "C" fn ia_pauli_commutes(a: *const c_char, b: *const c_char, out: *mut bool) -> IaStatus {
    guard(|| {
        let a: PauliString = read_str(a, "a")?.parse()?;
        let b = PauliString::parse_sized(read_str(b, "b")?, Some(a.n()))?;
        write_out(out, a.commutes(&b)?, "out")
    })
}

/// Product `a·b` including its phase, e.g. `"+X" * "+Z" = "-iY"`.
#[no_mangle]
pub unsafe extern "C" fn ia_pauli_multiply(a: *const c_char, b: *const c_char, out: *mut *mut c_char) -> IaStatus {
    guard(|| {
        let a: PauliString = read_str(a, "a")?.parse()?;
        let b = PauliString::parse_sized(read_str(b, "b")?, Some(a.n()))?;
        write_string(out, a.multiply(&b)?.to_string())
    })
}

/// Runs one command from a JSON run configuration and returns the JSON report.
///
/// Same payloads as the command-line tool. When the command runs but its
/// check fails, the report is still written and the status is
/// `IA_STATUS_CHECK_FAILED`.
#[no_mangle]
pub unsafe extern "C" fn ia_run_command(config_json: *const c_char, report_out: *mut *mut c_char) -> IaStatus {
    guard(|| {
        let text = read_str(config_json, "config_json")?;
        if report_out.is_null() {
            return Err(null("report_out"));
        }
        let config: RunConfig = serde_json::from_str(text).map_err(|e| invalid(format!("bad run configuration: {e}")))?;
        let report = report::run(&config)?;
        write_string(report_out, report.to_json())?;
        if report.succeeded() {
            Ok(())
        } else {
            Err(Failure(IaStatus::CheckFailed, "the command's check did not pass; see the report".into()))
        }
    })
}
