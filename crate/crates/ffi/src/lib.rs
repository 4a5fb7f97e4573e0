//! C ABI for the `qwalk` simulator.
//!
//! Objects are opaque heap handles created by `qw_*_new`-style functions and
//! released with the matching `qw_*_free`. Every fallible call returns a
//! [`QwStatus`]; the message of the most recent failure on the calling
//! thread is available through [`qw_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64 as C64;
use qwalk::entanglement::{negativity_mixed, negativity_pure};
use qwalk::spectral;
use qwalk::state::{localization_strength, ChannelKind, DensityOperator, NoiseChannel, PureState};
use qwalk::symmetry::symmetry_report;
use qwalk::walk::{CoinProfile, Lattice, WalkSpec};
use qwalk::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QwChannelKind {
    None = 0,
    BitFlip = 1,
    YFlip = 2,
    ZFlip = 3,
    Depolarizing = 4,
}

impl From<QwChannelKind> for ChannelKind {
    fn from(k: QwChannelKind) -> Self {
        match k {
            QwChannelKind::None => ChannelKind::None,
            QwChannelKind::BitFlip => ChannelKind::BitFlip,
            QwChannelKind::YFlip => ChannelKind::YFlip,
            QwChannelKind::ZFlip => ChannelKind::ZFlip,
            QwChannelKind::Depolarizing => ChannelKind::Depolarizing,
        }
    }
}

/// A walk: variant plus coin profiles.
pub struct QwSpec {
    inner: WalkSpec,
}

/// A pure state on an open line sized for a fixed number of steps.
pub struct QwState {
    inner: PureState,
}

/// A density operator on the same lattice as the state it came from.
pub struct QwDensity {
    inner: DensityOperator,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

enum Failure {
    Null(&'static str),
    Small(usize),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QwStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            QwStatus::NullPointer
        }
        Ok(Err(Failure::Small(need))) => {
            set_error(format!("buffer too small: need {need} elements"));
            QwStatus::BufferTooSmall
        }
        Ok(Err(Failure::Lib(e))) => {
            let status = if e.is_numerical() {
                QwStatus::Numerical
            } else {
                QwStatus::InvalidArgument
            };
            set_error(e.to_string());
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QwStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn as_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn profile(minus: f64, plus: f64) -> Result<CoinProfile, Error> {
    if minus == plus {
        CoinProfile::uniform(minus)
    } else {
        CoinProfile::two_domain(minus, plus)
    }
}

fn new_spec(spec: WalkSpec, out: *mut *mut QwSpec) -> Result<(), Failure> {
    unsafe { put(out, Box::into_raw(Box::new(QwSpec { inner: spec })), "out") }
}

/// Standard walk with one coin angle, uniform in space.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qw_spec_standard(theta: f64, out: *mut *mut QwSpec) -> QwStatus {
    guard(|| new_spec(WalkSpec::standard(CoinProfile::uniform(theta)?), out))
}

/// Split-step walk. Equal `minus`/`plus` angles give a uniform coin.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qw_spec_split_step(
    theta1: f64,
    theta2_minus: f64,
    theta2_plus: f64,
    out: *mut *mut QwSpec,
) -> QwStatus {
    guard(|| {
        new_spec(
            WalkSpec::split_step(
                CoinProfile::uniform(theta1)?,
                profile(theta2_minus, theta2_plus)?,
            ),
            out,
        )
    })
}

/// Double split-step walk; `angles` holds `(minus, plus)` for theta1..theta4.
///
/// # Safety
/// `angles` must point to 8 readable doubles and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qw_spec_double_split_step(
    angles: *const f64,
    out: *mut *mut QwSpec,
) -> QwStatus {
    guard(|| {
        if angles.is_null() {
            return Err(Failure::Null("angles"));
        }
        let a = std::slice::from_raw_parts(angles, 8);
        let spec = WalkSpec::double_split_step(
            profile(a[0], a[1])?,
            profile(a[2], a[3])?,
            profile(a[4], a[5])?,
            profile(a[6], a[7])?,
        );
        new_spec(spec, out)
    })
}

/// # Safety
/// `spec` must come from a `qw_spec_*` constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn qw_spec_free(spec: *mut QwSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Bulk quasienergy gaps at 0 and pi (uniform walks only).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_spec_gaps(
    spec: *const QwSpec,
    k_samples: usize,
    gap0: *mut f64,
    gap_pi: *mut f64,
) -> QwStatus {
    guard(|| {
        let (a, b) = spectral::gaps(&as_ref(spec, "spec")?.inner, k_samples)?;
        put(gap0, a, "gap0")?;
        put(gap_pi, b, "gap_pi")
    })
}

/// Runs the symmetry checks on a ring; `passed` is 1 when all hold.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_spec_validate(
    spec: *const QwSpec,
    ring_sites: usize,
    chiral_residual: *mut f64,
    passed: *mut i32,
) -> QwStatus {
    guard(|| {
        let r = symmetry_report(&as_ref(spec, "spec")?.inner, ring_sites, None)?;
        put(chiral_residual, r.chiral_residual, "chiral_residual")?;
        put(passed, r.passed as i32, "passed")
    })
}

/// `(alpha|0> + beta|1>) (x) |0>` on a line wide enough for `max_steps` steps.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_state_new(
    spec: *const QwSpec,
    max_steps: usize,
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    out: *mut *mut QwState,
) -> QwStatus {
    guard(|| {
        let lattice = Lattice::for_steps(&as_ref(spec, "spec")?.inner, max_steps);
        let s = PureState::initial(
            C64::new(alpha_re, alpha_im),
            C64::new(beta_re, beta_im),
            lattice,
        )?;
        put(out, Box::into_raw(Box::new(QwState { inner: s })), "out")
    })
}

/// # Safety
/// `state` must come from [`qw_state_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn qw_state_free(state: *mut QwState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_state_step(
    state: *mut QwState,
    spec: *const QwSpec,
    steps: usize,
) -> QwStatus {
    guard(|| {
        let spec = &as_ref(spec, "spec")?.inner;
        Ok(as_mut(state, "state")?.inner.evolve(spec, steps)?)
    })
}

/// Leftmost site and number of sites of the state's lattice.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_state_sites(
    state: *const QwState,
    x_min: *mut i64,
    sites: *mut usize,
) -> QwStatus {
    guard(|| {
        let l = *as_ref(state, "state")?.inner.lattice();
        put(x_min, l.x_min(), "x_min")?;
        put(sites, l.sites(), "sites")
    })
}

unsafe fn copy_out(values: &[f64], buf: *mut f64, len: usize) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(Failure::Null("buf"));
    }
    if len < values.len() {
        return Err(Failure::Small(values.len()));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

/// Writes `p(x)` for every site, leftmost first.
///
/// # Safety
/// `buf` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qw_state_distribution(
    state: *const QwState,
    buf: *mut f64,
    len: usize,
) -> QwStatus {
    guard(|| copy_out(&as_ref(state, "state")?.inner.distribution().p, buf, len))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_state_negativity(state: *const QwState, out: *mut f64) -> QwStatus {
    guard(|| {
        put(
            out,
            negativity_pure(&as_ref(state, "state")?.inner)?.value(),
            "out",
        )
    })
}

/// Probability within `|x| <= window`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_state_localization(
    state: *const QwState,
    window: u64,
    out: *mut f64,
) -> QwStatus {
    guard(|| {
        put(
            out,
            localization_strength(&as_ref(state, "state")?.inner.distribution(), window),
            "out",
        )
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_density_from_state(
    state: *const QwState,
    out: *mut *mut QwDensity,
) -> QwStatus {
    guard(|| {
        let rho = DensityOperator::from_pure(&as_ref(state, "state")?.inner);
        put(
            out,
            Box::into_raw(Box::new(QwDensity { inner: rho })),
            "out",
        )
    })
}

/// # Safety
/// `rho` must come from [`qw_density_from_state`] or be null.
#[no_mangle]
pub unsafe extern "C" fn qw_density_free(rho: *mut QwDensity) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// `steps` noisy steps with channel `kind` of strength `p` in `[0, 0.5]`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_density_step(
    rho: *mut QwDensity,
    spec: *const QwSpec,
    kind: QwChannelKind,
    p: f64,
    steps: usize,
) -> QwStatus {
    guard(|| {
        let spec = &as_ref(spec, "spec")?.inner;
        let rho = &mut as_mut(rho, "rho")?.inner;
        let channel = NoiseChannel::new(kind.into(), p)?;
        for _ in 0..steps {
            rho.step(spec, &channel)?;
        }
        Ok(())
    })
}

/// # Safety
/// `buf` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qw_density_distribution(
    rho: *const QwDensity,
    buf: *mut f64,
    len: usize,
) -> QwStatus {
    guard(|| copy_out(&as_ref(rho, "rho")?.inner.distribution().p, buf, len))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_density_negativity(rho: *const QwDensity, out: *mut f64) -> QwStatus {
    guard(|| {
        put(
            out,
            negativity_mixed(&as_ref(rho, "rho")?.inner)?.value(),
            "out",
        )
    })
}

/// Real part of the trace.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_density_trace(rho: *const QwDensity, out: *mut f64) -> QwStatus {
    guard(|| put(out, as_ref(rho, "rho")?.inner.trace().re, "out"))
}

/// Copies the last error message of this thread, NUL terminated and
/// truncated to `len`. Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must have room for `len` bytes, or be null to query the length.
#[no_mangle]
pub unsafe extern "C" fn qw_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qw_version() -> *const c_char {
    static VERSION: std::sync::OnceLock<CString> = std::sync::OnceLock::new();
    VERSION
        .get_or_init(|| CString::new(qwalk::VERSION).unwrap())
        .as_ptr()
}
