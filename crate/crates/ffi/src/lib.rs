//! C ABI for `homop`.
//!
//! Functions return a [`HomopStatus`] and write results through out
//! pointers. On failure the message is kept per thread and read with
//! [`homop_last_error_message`]. Functions are parsed from the same registry
//! strings the command line accepts (`gaussian:0,1`, `trigpoly:k=1:1`, ...)
//! into opaque handles that the caller releases with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use homop::bounds::riesz_constant;
use homop::circle_ops::{k1_apply, Backend};
use homop::funcspace::{Function1D, PeriodicFn, TensorSum2D};
use homop::plane_ops::{k_apply, kernel_eval, PlanePoint, Representation};
use homop::pvquad::{pv_line_hilbert, PVQuadratureConfig};
use homop::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomopStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parameter = 3,
    Parse = 4,
    Aliasing = 5,
    Precondition = 6,
    Domain = 7,
    SingularKernel = 8,
    Divergent = 9,
    Panic = 10,
}

pub const HOMOP_REP_EST1: u32 = 0;
pub const HOMOP_REP_STEPANOV: u32 = 1;
pub const HOMOP_REP_RADON: u32 = 2;

pub const HOMOP_BACKEND_SPECTRAL: u32 = 0;
pub const HOMOP_BACKEND_QUADRATURE: u32 = 1;

/// A function on the line.
pub struct HomopLineFn(Function1D);

/// A 2π-periodic function.
pub struct HomopPeriodicFn(PeriodicFn);

/// Quadrature settings.
pub struct HomopConfig(PVQuadratureConfig);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HomopStatus {
    match e {
        Error::Parameter { .. } => HomopStatus::Parameter,
        Error::Parse { .. } => HomopStatus::Parse,
        Error::Aliasing { .. } => HomopStatus::Aliasing,
        Error::MissingWitness | Error::Precondition(_) => HomopStatus::Precondition,
        Error::Domain(_) => HomopStatus::Domain,
        Error::SingularKernel { .. } => HomopStatus::SingularKernel,
        Error::Divergent(_) => HomopStatus::Divergent,
    }
}

enum Fail {
    Status(HomopStatus, String),
    Op(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Op(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(HomopStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic, and returns the status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HomopStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HomopStatus::Ok,
        Ok(Err(Fail::Op(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            HomopStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(HomopStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn config<'a>(cfg: *const HomopConfig, default: &'a PVQuadratureConfig) -> &'a PVQuadratureConfig {
    match cfg.as_ref() {
        Some(c) => &c.0,
        None => default,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn homop_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn homop_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code, `"unknown"` for values outside the enum.
#[no_mangle]
pub extern "C" fn homop_status_name(status: u32) -> *const c_char {
    let s: &'static str = match status {
        0 => "ok\0",
        1 => "null pointer\0",
        2 => "invalid utf-8\0",
        3 => "invalid parameter\0",
        4 => "parse error\0",
        5 => "aliasing\0",
        6 => "precondition violated\0",
        7 => "domain error\0",
        8 => "singular kernel\0",
        9 => "divergent integral\0",
        10 => "internal panic\0",
        _ => "unknown\0",
    };
    s.as_ptr().cast()
}

/// `1/(π(x₁y₂ − x₂y₁))`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn homop_kernel_eval(x1: f64, x2: f64, y1: f64, y2: f64, out: *mut f64) -> HomopStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = kernel_eval(PlanePoint::new(x1, x2), PlanePoint::new(y1, y2))?;
        Ok(())
    })
}

/// Riesz constant `C_p`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn homop_riesz_constant(p: f64, out: *mut f64) -> HomopStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = riesz_constant(p)?;
        Ok(())
    })
}

/// Default quadrature settings.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn homop_config_new(out: *mut *mut HomopConfig) -> HomopStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(HomopConfig(PVQuadratureConfig::default())));
        Ok(())
    })
}

/// Sets one of the keys `N`, `R`, `R_power`, `tail_policy`, `log_spacing`.
/// The configuration is left unchanged on error.
///
/// # Safety
/// `cfg` must come from [`homop_config_new`]; `key` and `value` must be
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn homop_config_set(cfg: *mut HomopConfig, key: *const c_char, value: *const c_char) -> HomopStatus {
    guard(|| {
        let cfg = out_arg(cfg, "cfg")?;
        let key = str_arg(key, "key")?;
        let value = str_arg(value, "value")?;
        let mut kv = cfg.0.to_kv();
        if !kv.contains_key(key) {
            return Err(Fail::Status(HomopStatus::Parse, format!("unknown configuration key `{key}`")));
        }
        kv.insert(key.to_string(), value.to_string());
        cfg.0 = PVQuadratureConfig::from_kv(kv.iter().map(|(k, v)| (k.as_str(), v.as_str())))?;
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from [`homop_config_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn homop_config_free(cfg: *mut HomopConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Parses a line function such as `gaussian:0,1` or `power:0.5`.
///
/// # Safety
/// `desc` must be a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn homop_line_fn_new(desc: *const c_char, out: *mut *mut HomopLineFn) -> HomopStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let f: Function1D = str_arg(desc, "desc")?.parse()?;
        *out = Box::into_raw(Box::new(HomopLineFn(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from [`homop_line_fn_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn homop_line_fn_free(f: *mut HomopLineFn) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Parses a periodic function such as `trigpoly:k=1:1` or `holder-cusp:0.5`.
///
/// # Safety
/// `desc` must be a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn homop_periodic_fn_new(desc: *const c_char, out: *mut *mut HomopPeriodicFn) -> HomopStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let f: PeriodicFn = str_arg(desc, "desc")?.parse()?;
        *out = Box::into_raw(Box::new(HomopPeriodicFn(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from [`homop_periodic_fn_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn homop_periodic_fn_free(f: *mut HomopPeriodicFn) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Hilbert transform on the line at `x`. A null `cfg` uses the defaults.
///
/// # Safety
/// `g` must be a live handle, `cfg` a live handle or null, `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn homop_hilbert_line(
    g: *const HomopLineFn,
    x: f64,
    cfg: *const HomopConfig,
    out: *mut f64,
) -> HomopStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("g"))?;
        let out = out_arg(out, "out")?;
        let d = PVQuadratureConfig::default();
        *out = pv_line_hilbert(&g.0, x, config(cfg, &d))?.value;
        Ok(())
    })
}

/// `𝒦₁φ` at `len` angles, real and imaginary parts written to `out_re` and
/// `out_im`. `n` is the quadrature grid size, `backend` one of the
/// `HOMOP_BACKEND_*` constants.
///
/// # Safety
/// `phi` must be a live handle; `alphas`, `out_re`, `out_im` must each be
/// valid for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn homop_k1_apply(
    phi: *const HomopPeriodicFn,
    alphas: *const f64,
    len: usize,
    n: usize,
    backend: u32,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HomopStatus {
    guard(|| {
        let phi = phi.as_ref().ok_or_else(|| null("phi"))?;
        if len > 0 && (alphas.is_null() || out_re.is_null() || out_im.is_null()) {
            return Err(null("array argument"));
        }
        let backend = match backend {
            HOMOP_BACKEND_SPECTRAL => Backend::Spectral,
            HOMOP_BACKEND_QUADRATURE => Backend::Quadrature,
            b => return Err(Fail::Status(HomopStatus::Parameter, format!("unknown backend {b}"))),
        };
        if len == 0 {
            return Ok(());
        }
        let a = std::slice::from_raw_parts(alphas, len);
        let vals = k1_apply(&phi.0, a, backend, n)?;
        let re = std::slice::from_raw_parts_mut(out_re, len);
        let im = std::slice::from_raw_parts_mut(out_im, len);
        for ((r, i), v) in re.iter_mut().zip(im.iter_mut()).zip(vals) {
            *r = v.re;
            *i = v.im;
        }
        Ok(())
    })
}

/// `K(f₁ ⊗ f₂)(x₁, x₂)` by the representation `rep`, one of the
/// `HOMOP_REP_*` constants. A null `cfg` uses the defaults.
///
/// # Safety
/// `f1`, `f2` must be live handles, `cfg` a live handle or null, `out` valid
/// for a write.
#[no_mangle]
pub unsafe extern "C" fn homop_k_apply(
    f1: *const HomopLineFn,
    f2: *const HomopLineFn,
    x1: f64,
    x2: f64,
    rep: u32,
    cfg: *const HomopConfig,
    out: *mut f64,
) -> HomopStatus {
    guard(|| {
        let f1 = f1.as_ref().ok_or_else(|| null("f1"))?;
        let f2 = f2.as_ref().ok_or_else(|| null("f2"))?;
        let out = out_arg(out, "out")?;
        let rep = match rep {
            HOMOP_REP_EST1 => Representation::Est1,
            HOMOP_REP_STEPANOV => Representation::Stepanov,
            HOMOP_REP_RADON => Representation::Radon,
            r => return Err(Fail::Status(HomopStatus::Parameter, format!("unknown representation {r}"))),
        };
        let d = PVQuadratureConfig::default();
        let f = TensorSum2D::simple(f1.0.clone(), f2.0.clone());
        *out = k_apply(&f, PlanePoint::new(x1, x2), rep, config(cfg, &d))?.value;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn last_error() -> String {
        unsafe { CStr::from_ptr(homop_last_error_message()).to_str().unwrap().to_string() }
    }

    #[test]
    fn kernel_and_errors() {
        let mut v = 0.0;
        unsafe {
            assert_eq!(homop_kernel_eval(1.0, 0.0, 0.0, 1.0, &mut v), HomopStatus::Ok);
            assert_eq!(v, 1.0 / std::f64::consts::PI);
            assert_eq!(homop_kernel_eval(1.0, 1.0, 2.0, 2.0, &mut v), HomopStatus::SingularKernel);
            assert!(last_error().contains("collinear"));
            assert_eq!(homop_kernel_eval(1.0, 0.0, 0.0, 1.0, ptr::null_mut()), HomopStatus::NullPointer);
        }
    }

    #[test]
    fn riesz() {
        let mut c = 0.0;
        unsafe {
            assert_eq!(homop_riesz_constant(2.0, &mut c), HomopStatus::Ok);
            assert_eq!(c, 1.0);
            assert_eq!(homop_riesz_constant(1.0, &mut c), HomopStatus::Parameter);
        }
    }

    #[test]
    fn handles_and_operators() {
        unsafe {
            let mut g = ptr::null_mut();
            assert_eq!(homop_line_fn_new(cstr("gaussian:0,1").as_ptr(), &mut g), HomopStatus::Ok);
            let mut h = 0.0;
            assert_eq!(homop_hilbert_line(g, 0.0, ptr::null(), &mut h), HomopStatus::Ok);
            assert!(h.abs() < 1e-14);

            let mut s = ptr::null_mut();
            assert_eq!(homop_line_fn_new(cstr("power:0.5").as_ptr(), &mut s), HomopStatus::Ok);
            let mut ind = ptr::null_mut();
            assert_eq!(homop_line_fn_new(cstr("indicator:0,1").as_ptr(), &mut ind), HomopStatus::Ok);
            let mut k = 0.0;
            assert_eq!(homop_k_apply(ind, s, 1.0, 4.0, HOMOP_REP_EST1, ptr::null(), &mut k), HomopStatus::Ok);
            assert!((k - 1.0).abs() < 1e-9);
            assert_eq!(homop_k_apply(ind, s, 1.0, 4.0, 9, ptr::null(), &mut k), HomopStatus::Parameter);
            assert_eq!(homop_k_apply(ind, s, 0.0, 4.0, HOMOP_REP_EST1, ptr::null(), &mut k), HomopStatus::Domain);

            let mut phi = ptr::null_mut();
            assert_eq!(homop_periodic_fn_new(cstr("trigpoly:k=1:1").as_ptr(), &mut phi), HomopStatus::Ok);
            let alphas = [0.3, 1.1];
            let (mut re, mut im) = ([0.0; 2], [0.0; 2]);
            for b in [HOMOP_BACKEND_SPECTRAL, HOMOP_BACKEND_QUADRATURE] {
                assert_eq!(
                    homop_k1_apply(phi, alphas.as_ptr(), 2, 2048, b, re.as_mut_ptr(), im.as_mut_ptr()),
                    HomopStatus::Ok
                );
                let c = 2.0 / (2.0 * std::f64::consts::PI).sqrt();
                for j in 0..2 {
                    assert!((re[j] - c * alphas[j].sin()).abs() < 1e-12);
                    assert!((im[j] + c * alphas[j].cos()).abs() < 1e-12);
                }
            }

            homop_line_fn_free(g);
            homop_line_fn_free(s);
            homop_line_fn_free(ind);
            homop_periodic_fn_free(phi);
            homop_line_fn_free(ptr::null_mut());
        }
    }

    #[test]
    fn parse_errors_and_utf8() {
        unsafe {
            let mut f = ptr::null_mut();
            assert_eq!(homop_line_fn_new(cstr("wave").as_ptr(), &mut f), HomopStatus::Parse);
            assert!(f.is_null());
            assert!(last_error().contains("wave"));
            let bad = [0xffu8, 0];
            assert_eq!(homop_line_fn_new(bad.as_ptr().cast(), &mut f), HomopStatus::InvalidUtf8);
            assert_eq!(homop_line_fn_new(ptr::null(), &mut f), HomopStatus::NullPointer);
        }
    }

    #[test]
    fn config_round_trip() {
        unsafe {
            let mut c = ptr::null_mut();
            assert_eq!(homop_config_new(&mut c), HomopStatus::Ok);
            assert_eq!(homop_config_set(c, cstr("R").as_ptr(), cstr("500").as_ptr()), HomopStatus::Ok);
            assert_eq!((*c).0.radius, 500.0);
            assert_eq!(homop_config_set(c, cstr("R").as_ptr(), cstr("-1").as_ptr()), HomopStatus::Parameter);
            assert_eq!((*c).0.radius, 500.0);
            assert_eq!(homop_config_set(c, cstr("bogus").as_ptr(), cstr("1").as_ptr()), HomopStatus::Parse);
            homop_config_free(c);
        }
    }

    #[test]
    fn names_are_static() {
        let name = |s: u32| unsafe { CStr::from_ptr(homop_status_name(s)) }.to_str().unwrap().to_string();
        assert_eq!(name(HomopStatus::Domain as u32), "domain error");
        assert_eq!(name(HomopStatus::Panic as u32), "internal panic");
        assert_eq!(name(99), "unknown");
        let v = unsafe { CStr::from_ptr(homop_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
