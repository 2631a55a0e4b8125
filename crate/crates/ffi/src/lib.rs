//! C interface to `hsze`.
//!
//! Every function returns an [`HszeStatus`]; on failure a message is kept
//! per thread and read with [`hsze_last_error`]. Strings handed out by the
//! library are owned by the caller and released with [`hsze_string_free`].
//! Numbers cross the boundary as decimal strings so no precision is lost.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::{c_char, c_int};

use hsze::evaluate::{evaluate, EvalKind, EvalRequest};
use hsze::input::parse_rational;
use hsze::lattice::{Route, TruncationPolicy};
use hsze::verify::{output_digits, run, OutputFormat, RunConfig, Suite};
use hsze::{Context, Error};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HszeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    Inadmissible = 4,
    Nonconvergent = 5,
    NumericalError = 6,
    VerificationFailed = 7,
    Panic = 8,
}

/// Opaque evaluation context: precision, truncation caps and route.
pub struct HszeContext {
    ctx: Context,
    policy: TruncationPolicy,
    route: Route,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HszeStatus {
    match e {
        Error::Parse(_) => HszeStatus::ParseError,
        Error::InvalidConfig(_) | Error::NonconvergentTau | Error::IllegalLerchPoint(_) => HszeStatus::InvalidArgument,
        Error::CasePreconditionViolated(_) | Error::InadmissibleParameters(_) | Error::PoleHit(_) => {
            HszeStatus::Inadmissible
        }
        Error::QuadratureNonconvergence { .. } | Error::NonconvergenceAtPolicyCap(_) | Error::NonconvergentQSeries(_) => {
            HszeStatus::Nonconvergent
        }
        _ => HszeStatus::NumericalError,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (HszeStatus, String)>) -> HszeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HszeStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            HszeStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (HszeStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (HszeStatus, String) {
    (HszeStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, (HszeStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (HszeStatus::ParseError, format!("{name} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (HszeStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| (HszeStatus::NumericalError, "output contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Creates a context with `bits` of precision and default truncation caps.
///
/// # Safety
/// `out` must be a valid pointer; the context is released with
/// [`hsze_context_free`].
#[no_mangle]
pub unsafe extern "C" fn hsze_context_new(bits: u32, out: *mut *mut HszeContext) -> HszeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let ctx = Context::with_bits(bits).map_err(lib_err)?;
        let policy = TruncationPolicy::default_for(&ctx);
        *out = Box::into_raw(Box::new(HszeContext { ctx, policy, route: Route::RowAccelerated }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from [`hsze_context_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hsze_context_free(ctx: *mut HszeContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Sets the row and column caps of the lattice summation.
///
/// # Safety
/// `ctx` must be a live context.
#[no_mangle]
pub unsafe extern "C" fn hsze_context_set_caps(ctx: *mut HszeContext, max_m: u64, max_n: u64) -> HszeStatus {
    guard(|| {
        let c = ctx.as_mut().ok_or_else(|| null("ctx"))?;
        c.policy = TruncationPolicy::with_caps(&c.ctx, max_m, max_n).map_err(lib_err)?;
        Ok(())
    })
}

/// Selects the summation route: nonzero `naive` picks the symmetric box sums.
///
/// # Safety
/// `ctx` must be a live context.
#[no_mangle]
pub unsafe extern "C" fn hsze_context_set_naive_route(ctx: *mut HszeContext, naive: c_int) -> HszeStatus {
    guard(|| {
        let c = ctx.as_mut().ok_or_else(|| null("ctx"))?;
        c.route = if naive != 0 { Route::NaiveSymmetric } else { Route::RowAccelerated };
        Ok(())
    })
}

fn parse_request(kind: &str, params: &str) -> Result<EvalRequest, (HszeStatus, String)> {
    let kind: EvalKind = kind.parse().map_err(lib_err)?;
    let mut req = EvalRequest::new(kind);
    let bad = |k: &str, v: &str| (HszeStatus::ParseError, format!("bad value {v:?} for {k}"));
    for item in params.split_whitespace() {
        let (k, v) = item.split_once('=').ok_or_else(|| (HszeStatus::ParseError, format!("expected key=value, got {item:?}")))?;
        match k {
            "k" => req.k = Some(v.parse().map_err(|_| bad(k, v))?),
            "r" => req.r = Some(v.parse().map_err(|_| bad(k, v))?),
            "deriv" => req.deriv = v.parse().map_err(|_| bad(k, v))?,
            "x" => req.x = parse_rational(v).map_err(lib_err)?,
            "y" => req.y = parse_rational(v).map_err(lib_err)?,
            "alpha" => req.alpha = Some(parse_rational(v).map_err(lib_err)?),
            "q" => req.q = Some(parse_rational(v).map_err(lib_err)?),
            "z" => req.z = Some(v.parse().map_err(lib_err)?),
            "tau" => req.tau = Some(v.parse().map_err(lib_err)?),
            "beta" => req.beta = Some(v.parse().map_err(lib_err)?),
            "s" => req.s = Some(v.parse().map_err(lib_err)?),
            "t" => req.t = Some(v.parse().map_err(lib_err)?),
            "basis" => req.basis = v.parse().map_err(lib_err)?,
            _ => return Err((HszeStatus::InvalidArgument, format!("unknown parameter {k:?}"))),
        }
    }
    Ok(req)
}

/// Evaluates `kind` (`g`, `k_coeff`, `hurwitz`, `eisenstein`, `theta`,
/// `phi`, `qzeta`) with whitespace separated `key=value` parameters, e.g.
/// `"k=3 r=1 z=1/2 basis=1,i"`. `out_json` receives an object with
/// `value`, `est_error`, `route` and, where available, `closed_form`.
///
/// # Safety
/// `ctx` must be live; `kind` and `params` must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn hsze_eval(
    ctx: *const HszeContext,
    kind: *const c_char,
    params: *const c_char,
    out_json: *mut *mut c_char,
) -> HszeStatus {
    guard(|| {
        let c = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        let req = parse_request(read_str(kind, "kind")?, read_str(params, "params")?)?;
        let res = evaluate(&c.ctx, &c.policy, c.route, &req).map_err(lib_err)?;
        let out = res.output(req.kind, output_digits(c.ctx.cfg.bits()));
        write_string(out_json, serde_json::to_string(&out).expect("output serializes"))
    })
}

/// Like [`hsze_eval`] but returns only the value as `re+imi` with `digits`
/// significant digits.
///
/// # Safety
/// As for [`hsze_eval`].
#[no_mangle]
pub unsafe extern "C" fn hsze_eval_value(
    ctx: *const HszeContext,
    kind: *const c_char,
    params: *const c_char,
    digits: u32,
    out_value: *mut *mut c_char,
) -> HszeStatus {
    guard(|| {
        let c = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        let req = parse_request(read_str(kind, "kind")?, read_str(params, "params")?)?;
        let res = evaluate(&c.ctx, &c.policy, c.route, &req).map_err(lib_err)?;
        write_string(out_value, res.value.to_decimal(digits.max(1) as usize))
    })
}

/// Runs a verification suite and writes the JSON report (without timing
/// fields). Returns `VerificationFailed` when any identity fails; the report
/// is written in that case too.
///
/// # Safety
/// `suite` must be a NUL-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsze_verify(
    suite: *const c_char,
    bits: u32,
    tolerance_exp: u32,
    jobs: u32,
    out_json: *mut *mut c_char,
) -> HszeStatus {
    let mut failed = false;
    let status = guard(|| {
        let suite: Suite = read_str(suite, "suite")?.parse().map_err(lib_err)?;
        let cfg = RunConfig { precision_bits: bits, tolerance_exp, suite, jobs: jobs.max(1) as usize, ..RunConfig::default() };
        let report = run(&cfg).map_err(lib_err)?.canonical();
        failed = !report.all_passed();
        write_string(out_json, report.render(OutputFormat::Json))
    });
    if status == HszeStatus::Ok && failed {
        set_error("some identities failed");
        return HszeStatus::VerificationFailed;
    }
    status
}

/// Message for the last failing call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hsze_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn hsze_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hsze_version() -> *const c_char {
    static V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr() as *const c_char
}
