//! C ABI over `dpl-core`.
//!
//! Every function returns a [`DplStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and read with
//! [`dpl_last_error_message`]. Handles are opaque and freed with their own
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dpl_core::error::DplError;
use dpl_core::experiment::ExperimentConfig;
use dpl_core::influence::speed_bound;
use dpl_core::model::{DelayPair, Geometry1D, MaterialField, Problem, Profile, Regime, MIN_CELLS};
use dpl_core::steady::{
    assemble_and_solve, critical_frequency, decay_certificate, decay_measure, decay_rate,
    SteadyAmplitude, StripGeometry, StripMaterial,
};
use dpl_core::transient::{characteristic_speed, step, StepControl, TransientState};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DplStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Config = 3,
    Regime = 4,
    Divergence = 5,
    Domain = 6,
    Solver = 7,
    BufferTooSmall = 8,
    Unsupported = 9,
    Panic = 10,
    Other = 11,
}

impl From<&DplError> for DplStatus {
    fn from(e: &DplError) -> Self {
        match e {
            DplError::InvalidInput(_) | DplError::DegenerateModel(_) => DplStatus::InvalidInput,
            DplError::Config(_) => DplStatus::Config,
            DplError::Regime { .. } => DplStatus::Regime,
            DplError::Divergence { .. } | DplError::StepControl(_) => DplStatus::Divergence,
            DplError::Domain(_) | DplError::AboveCriticalFrequency { .. } => DplStatus::Domain,
            DplError::Solver(_) | DplError::Certification { .. } => DplStatus::Solver,
            DplError::UnsupportedSetting(_) => DplStatus::Unsupported,
            _ => DplStatus::Other,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DplRegime {
    Stable = 0,
    Growth = 1,
    DegenerateZeroTauT = 2,
}

impl From<Regime> for DplRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::Stable => DplRegime::Stable,
            Regime::Growth => DplRegime::Growth,
            Regime::DegenerateZeroTauT => DplRegime::DegenerateZeroTauT,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DplField {
    Temperature = 0,
    Flux = 1,
    FluxRate = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: DplStatus, msg: impl Into<String>) -> DplStatus {
    set_error(msg.into());
    status
}

/// Run `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), DplStatus>) -> DplStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DplStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(DplStatus::Panic, "internal panic"),
    }
}

fn check(e: DplError) -> DplStatus {
    fail(DplStatus::from(&e), e.to_string())
}

fn out<T>(p: *mut T, v: T) -> Result<(), DplStatus> {
    if p.is_null() {
        return Err(fail(DplStatus::NullPointer, "null output pointer"));
    }
    // SAFETY: non-null and, by contract, valid for writes.
    unsafe { p.write(v) };
    Ok(())
}

fn delays(tau_q: f64, tau_t: f64) -> Result<DelayPair, DplStatus> {
    DelayPair::new(tau_q, tau_t).map_err(check)
}

fn rod_material(a: f64, k: f64) -> Result<MaterialField, DplStatus> {
    let g = Geometry1D::new(1.0, 1.0, MIN_CELLS).map_err(check)?;
    MaterialField::uniform(&g, a, k).map_err(check)
}

fn strip(width: f64, a: f64, k: f64) -> Result<(StripGeometry, StripMaterial), DplStatus> {
    let g = StripGeometry::new(width, width, 5, 5).map_err(check)?;
    let m = StripMaterial::uniform(&g, a, k).map_err(check)?;
    Ok((g, m))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn dpl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Delay regime of `(tau_q, tau_T)`.
///
/// # Safety
/// `out_regime` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpl_classify_regime(
    tau_q: f64,
    tau_t: f64,
    out_regime: *mut DplRegime,
) -> DplStatus {
    guard(|| out(out_regime, delays(tau_q, tau_t)?.regime().into()))
}

/// Characteristic speed and the regime's front-speed bound for uniform `a`, `k`.
///
/// # Safety
/// `out_c_char` and `out_c_bound` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpl_speeds(
    tau_q: f64,
    tau_t: f64,
    a: f64,
    k: f64,
    out_c_char: *mut f64,
    out_c_bound: *mut f64,
) -> DplStatus {
    guard(|| {
        let d = delays(tau_q, tau_t)?;
        let m = rod_material(a, k)?;
        out(out_c_char, characteristic_speed(&m, d).map_err(check)?)?;
        out(out_c_bound, speed_bound(&m, d).map_err(check)?)
    })
}

/// Critical frequency of a strip of width `width`; `+inf` when `tau_q = 0`.
///
/// # Safety
/// `out_omega_c` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpl_critical_frequency(
    width: f64,
    tau_q: f64,
    tau_t: f64,
    a: f64,
    k: f64,
    out_omega_c: *mut f64,
) -> DplStatus {
    guard(|| {
        let d = delays(tau_q, tau_t)?;
        let (g, m) = strip(width, a, k)?;
        out(out_omega_c, critical_frequency(&g, &m, d))
    })
}

/// Decay length `nu` of the steady amplitude below the critical frequency.
///
/// # Safety
/// `out_nu` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpl_decay_rate(
    width: f64,
    tau_q: f64,
    tau_t: f64,
    a: f64,
    k: f64,
    omega: f64,
    out_nu: *mut f64,
) -> DplStatus {
    guard(|| {
        let d = delays(tau_q, tau_t)?;
        let (g, m) = strip(width, a, k)?;
        out(out_nu, decay_rate(&g, &m, d, omega).map_err(check)?)
    })
}

/// A transient rod problem with its marching state.
pub struct DplTransient {
    problem: Problem,
    control: StepControl,
    state: TransientState,
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, DplStatus> {
    if s.is_null() {
        return Err(fail(DplStatus::NullPointer, "null string"));
    }
    // SAFETY: caller passes a NUL-terminated string.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| fail(DplStatus::InvalidInput, "string is not UTF-8"))
}

/// Build a transient run from experiment config text (same format as the
/// `dpl` CLI). The run starts at `t = 0`.
///
/// # Safety
/// `config` must be a NUL-terminated string; `out_handle` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpl_transient_new(
    config: *const c_char,
    out_handle: *mut *mut DplTransient,
) -> DplStatus {
    guard(|| {
        let cfg = ExperimentConfig::parse(unsafe { text(config)? }, "config").map_err(check)?;
        let problem = cfg.problem().map_err(check)?;
        let control = StepControl::new(
            &problem,
            cfg.experiment.cfl_safety,
            cfg.experiment.relax_safety,
            cfg.t_end(),
        )
        .map_err(check)?;
        let state = TransientState::initial(&problem);
        let h = Box::new(DplTransient {
            problem,
            control,
            state,
        });
        out(out_handle, Box::into_raw(h))
    })
}

unsafe fn handle<'a, T>(h: *mut T) -> Result<&'a mut T, DplStatus> {
    // SAFETY: caller passes a live handle from the matching constructor.
    unsafe { h.as_mut() }.ok_or_else(|| fail(DplStatus::NullPointer, "null handle"))
}

/// Step until `t >= t_target` or the configured end time. Writes the time reached.
///
/// # Safety
/// `h` must be a live handle; `out_t` valid for writes or NULL.
#[no_mangle]
pub unsafe extern "C" fn dpl_transient_advance(
    h: *mut DplTransient,
    t_target: f64,
    out_t: *mut f64,
) -> DplStatus {
    guard(|| {
        let h = unsafe { handle(h)? };
        let n = h.control.n_steps();
        while h.state.step_index < n && h.state.t < t_target {
            step(&mut h.state, &h.problem, &h.control).map_err(check)?;
        }
        if out_t.is_null() {
            Ok(())
        } else {
            out(out_t, h.state.t)
        }
    })
}

/// Number of grid nodes.
///
/// # Safety
/// `h` must be a live handle; `out_n` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpl_transient_node_count(
    h: *mut DplTransient,
    out_n: *mut usize,
) -> DplStatus {
    guard(|| {
        let h = unsafe { handle(h)? };
        out(out_n, h.state.n_nodes())
    })
}

/// Copy one nodal field into `buf` of length `len` (at least the node count).
///
/// # Safety
/// `h` must be a live handle; `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn dpl_transient_copy_field(
    h: *mut DplTransient,
    field: DplField,
    buf: *mut f64,
    len: usize,
) -> DplStatus {
    guard(|| {
        let h = unsafe { handle(h)? };
        let src = match field {
            DplField::Temperature => &h.state.temp,
            DplField::Flux => &h.state.flux,
            DplField::FluxRate => &h.state.rate,
        };
        copy_out(src, buf, len)
    })
}

fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), DplStatus> {
    if buf.is_null() {
        return Err(fail(DplStatus::NullPointer, "null buffer"));
    }
    if len < src.len() {
        return Err(fail(
            DplStatus::BufferTooSmall,
            format!("buffer holds {len}, need {}", src.len()),
        ));
    }
    // SAFETY: `buf` holds at least `src.len()` elements by the check above.
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
    Ok(())
}

/// # Safety
/// `h` must be NULL or a handle from [`dpl_transient_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dpl_transient_free(h: *mut DplTransient) {
    if !h.is_null() {
        // SAFETY: allocated by `Box::into_raw` in `dpl_transient_new`.
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Solved harmonic amplitude on a uniform strip.
pub struct DplSteady {
    solution: SteadyAmplitude,
    material: StripMaterial,
}

/// Solve the amplitude problem on a `nx1 × nx3` strip with base profile
/// `amp sin(pi x1 / width)` at `x3 = 0`.
///
/// # Safety
/// `out_handle` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpl_steady_solve(
    width: f64,
    length: f64,
    nx1: usize,
    nx3: usize,
    a: f64,
    k: f64,
    tau_q: f64,
    tau_t: f64,
    omega: f64,
    amp: f64,
    out_handle: *mut *mut DplSteady,
) -> DplStatus {
    guard(|| {
        let d = delays(tau_q, tau_t)?;
        let g = StripGeometry::new(width, length, nx1, nx3).map_err(check)?;
        let material = StripMaterial::uniform(&g, a, k).map_err(check)?;
        let base = Profile::Sine { width, amp };
        let solution = assemble_and_solve(&g, &material, d, omega, &base).map_err(check)?;
        let h = Box::new(DplSteady { solution, material });
        out(out_handle, Box::into_raw(h))
    })
}

/// Copy `M(x3)` at the `nx3` cross-sections into `buf`.
///
/// # Safety
/// `h` must be a live handle; `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn dpl_steady_decay_measure(
    h: *mut DplSteady,
    buf: *mut f64,
    len: usize,
) -> DplStatus {
    guard(|| {
        let h = unsafe { handle(h)? };
        copy_out(&decay_measure(&h.solution, &h.material), buf, len)
    })
}

/// Copy the amplitude, `x1` fastest, as separate real and imaginary parts.
///
/// # Safety
/// `h` must be a live handle; `re` and `im` valid for `len` writes each.
#[no_mangle]
pub unsafe extern "C" fn dpl_steady_copy_amplitude(
    h: *mut DplSteady,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> DplStatus {
    guard(|| {
        let h = unsafe { handle(h)? };
        let theta = &h.solution.theta;
        let (r, i): (Vec<f64>, Vec<f64>) = theta.iter().map(|z| (z.re, z.im)).unzip();
        copy_out(&r, re, len)?;
        copy_out(&i, im, len)
    })
}

/// Check the decay estimate with relative slack `tol`. Fails with
/// `Domain` at or above the critical frequency.
///
/// # Safety
/// `h` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpl_steady_certify(
    h: *mut DplSteady,
    tol: f64,
    out_certified: *mut bool,
    out_min_margin: *mut f64,
) -> DplStatus {
    guard(|| {
        let h = unsafe { handle(h)? };
        let v = decay_certificate(&h.solution, &h.material, tol).map_err(check)?;
        out(out_certified, v.certified)?;
        out(out_min_margin, v.min_margin)
    })
}

/// # Safety
/// `h` must be NULL or a handle from [`dpl_steady_solve`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dpl_steady_free(h: *mut DplSteady) {
    if !h.is_null() {
        // SAFETY: allocated by `Box::into_raw` in `dpl_steady_solve`.
        drop(unsafe { Box::from_raw(h) });
    }
}
