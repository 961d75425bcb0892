//! C ABI over `twolocal`.
//!
//! Every entry point returns a [`TwolocalStatus`]; results come back through
//! out-pointers. On failure a message is kept per thread and can be read with
//! [`twolocal_last_error`]. Strings handed out by the library must be released
//! with [`twolocal_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twolocal::asw::{self, CharacterRep};
use twolocal::pairing::{self, Which, WindowSpec};
use twolocal::residue::{self, Modulo, ResidueClass2};
use twolocal::ring::Precision;
use twolocal::series::Context;
use twolocal::{cli, parse, weil, Error};

/// Outcome of a call. Library errors map one-to-one onto the error kinds
/// of the Rust API.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwolocalStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    DivisionByZero = 10,
    ZeroDivision = 11,
    EmptyWindow = 12,
    UndeterminedValuation = 13,
    NotAPthPower = 14,
    PrecisionLoss = 15,
    LengthMismatch = 16,
    TwistViolation = 17,
    FactorizationBudgetExceeded = 18,
    InvalidContext = 19,
    Parse = 20,
    /// The command ran but reported failure (nonzero CLI exit).
    CommandFailed = 30,
}

impl From<&Error> for TwolocalStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DivisionByZero => TwolocalStatus::DivisionByZero,
            Error::ZeroDivision => TwolocalStatus::ZeroDivision,
            Error::EmptyWindow => TwolocalStatus::EmptyWindow,
            Error::UndeterminedValuation(_) => TwolocalStatus::UndeterminedValuation,
            Error::NotAPthPower { .. } => TwolocalStatus::NotAPthPower,
            Error::PrecisionLoss(_) => TwolocalStatus::PrecisionLoss,
            Error::LengthMismatch { .. } => TwolocalStatus::LengthMismatch,
            Error::TwistViolation(_) => TwolocalStatus::TwistViolation,
            Error::FactorizationBudgetExceeded(_) => TwolocalStatus::FactorizationBudgetExceeded,
            Error::InvalidContext(_) => TwolocalStatus::InvalidContext,
            Error::Parse(_) => TwolocalStatus::Parse,
        }
    }
}

/// Which pairing a Gram matrix is built from.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwolocalPairing {
    Dual = 0,
    Rec = 1,
}

/// Opaque arithmetic context: field, Witt length and precision windows.
pub struct TwolocalContext {
    ctx: Context,
    m: usize,
}

impl TwolocalContext {
    fn prec(&self) -> Precision {
        self.ctx.precision()
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(TwolocalStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail((&e).into(), e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Fail>;

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Outcome<()>) -> TwolocalStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            TwolocalStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            TwolocalStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Outcome<&'a str> {
    if s.is_null() {
        return Err(Fail(TwolocalStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Fail(TwolocalStatus::InvalidUtf8, e.to_string()))
}

unsafe fn context<'a>(ctx: *const TwolocalContext) -> Outcome<&'a TwolocalContext> {
    ctx.as_ref().ok_or_else(|| Fail(TwolocalStatus::NullPointer, "null context".into()))
}

unsafe fn write<T>(out: *mut T, value: T) -> Outcome<()> {
    if out.is_null() {
        return Err(Fail(TwolocalStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Creates a context for `F_{p^e}` and Witt length `m`.
///
/// # Safety
/// `out` must be a valid pointer; the handle it receives is released with
/// [`twolocal_context_free`].
#[no_mangle]
pub unsafe extern "C" fn twolocal_context_new(p: u32, e: u32, m: u32, out: *mut *mut TwolocalContext) -> TwolocalStatus {
    guard(|| {
        let ctx = Context::new(p, e)?;
        let max = twolocal::witt::max_length(p);
        if m == 0 || m as usize > max {
            return Err(Error::InvalidContext(format!("m = {m} not in 1..={max} for p = {p}")).into());
        }
        write(out, Box::into_raw(Box::new(TwolocalContext { ctx, m: m as usize })))
    })
}

/// Replaces the precision windows (`lo < hi` on both axes).
///
/// # Safety
/// `ctx` must come from [`twolocal_context_new`].
#[no_mangle]
pub unsafe extern "C" fn twolocal_context_set_windows(
    ctx: *mut TwolocalContext,
    t_lo: i64,
    t_hi: i64,
    pi_lo: i64,
    pi_hi: i64,
) -> TwolocalStatus {
    guard(|| {
        let c = ctx.as_mut().ok_or_else(|| Fail(TwolocalStatus::NullPointer, "null context".into()))?;
        c.ctx = c.ctx.with_windows((t_lo, t_hi), (pi_lo, pi_hi))?;
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from [`twolocal_context_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn twolocal_context_free(ctx: *mut TwolocalContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Conductor of the character given by a Witt vector expression such as
/// `"[pi^-2]"`.
///
/// # Safety
/// Pointers must be valid; `witt` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn twolocal_conductor(ctx: *const TwolocalContext, witt: *const c_char, out: *mut i64) -> TwolocalStatus {
    guard(|| {
        let c = context(ctx)?;
        let a = parse::parse_witt(c.ctx.field, text(witt)?, &c.prec())?;
        if a.len() != c.m {
            return Err(Error::LengthMismatch { left: a.len(), right: c.m }.into());
        }
        write(out, asw::conductor(&a)?)
    })
}

/// `Res_K` of a two-form modulo `Omega^2_A`, as an element of `F_p`.
///
/// # Safety
/// Pointers must be valid; `form` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn twolocal_res_k(ctx: *const TwolocalContext, form: *const c_char, out: *mut u32) -> TwolocalStatus {
    guard(|| {
        let c = context(ctx)?;
        let alpha = parse::parse_form2(c.ctx.field, text(form)?, &c.prec())?;
        write(out, residue::res_k_total(&ResidueClass2::new(&alpha, Modulo::OmegaA)?)?)
    })
}

/// Reciprocity pairing of a length-one Witt vector with a symbol sum.
///
/// # Safety
/// Pointers must be valid; strings must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn twolocal_rec_pair(
    ctx: *const TwolocalContext,
    witt: *const c_char,
    symbol: *const c_char,
    out: *mut u32,
) -> TwolocalStatus {
    guard(|| {
        let c = context(ctx)?;
        let prec = c.prec();
        let a = CharacterRep::new(parse::parse_witt(c.ctx.field, text(witt)?, &prec)?);
        let s = parse::parse_symbol(c.ctx.field, text(symbol)?, &prec)?;
        write(out, pairing::rec_pair(&a, &s, &prec)?)
    })
}

/// Rank over `F_p` of the Gram matrix on the row window
/// `[t_lo, t_hi) x [pi_lo, pi_hi)` against its mirror.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn twolocal_gram_rank(
    ctx: *const TwolocalContext,
    which: TwolocalPairing,
    n: i64,
    t_lo: i64,
    t_hi: i64,
    pi_lo: i64,
    pi_hi: i64,
    out: *mut usize,
) -> TwolocalStatus {
    guard(|| {
        let c = context(ctx)?;
        let rows = WindowSpec::new((t_lo, t_hi), (pi_lo, pi_hi), n);
        let which = match which {
            TwolocalPairing::Dual => Which::Dual,
            TwolocalPairing::Rec => Which::Rec,
        };
        write(out, pairing::gram_matrix(c.ctx.field, &rows, &rows.mirrored(), which, &c.prec())?.rank)
    })
}

/// Weil reciprocity for rational functions in `T`; `out` is 1 when the
/// product of local symbols is trivial.
///
/// # Safety
/// Pointers must be valid; strings must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn twolocal_weil_check(
    ctx: *const TwolocalContext,
    f: *const c_char,
    g: *const c_char,
    out: *mut i32,
) -> TwolocalStatus {
    guard(|| {
        let c = context(ctx)?;
        let f = parse::parse_ratfn(c.ctx.field, text(f)?)?;
        let g = parse::parse_ratfn(c.ctx.field, text(g)?)?;
        write(out, i32::from(weil::weil_check(&f, &g)?.ok))
    })
}

/// Runs a CLI command given as a JSON request `{"argv": ["verb", ...]}` and
/// returns the command's output in `*response`, even on failure.
///
/// # Safety
/// Pointers must be valid; `request` must be NUL-terminated. Free the
/// response with [`twolocal_string_free`].
#[no_mangle]
pub unsafe extern "C" fn twolocal_run_json(request: *const c_char, response: *mut *mut c_char) -> TwolocalStatus {
    guard(|| {
        if response.is_null() {
            return Err(Fail(TwolocalStatus::NullPointer, "null output pointer".into()));
        }
        response.write(ptr::null_mut());
        let req: serde_json::Value =
            serde_json::from_str(text(request)?).map_err(|e| Fail(TwolocalStatus::Parse, format!("Parse: {e}")))?;
        let argv: Vec<String> = req
            .get("argv")
            .and_then(|v| v.as_array())
            .and_then(|a| a.iter().map(|x| x.as_str().map(str::to_owned)).collect())
            .ok_or_else(|| Fail(TwolocalStatus::Parse, "Parse: request needs \"argv\": [strings]".into()))?;
        let out = cli::run(std::iter::once("twolocal".to_owned()).chain(argv));
        response.write(owned(out.stdout));
        if out.code == 0 {
            Ok(())
        } else {
            Err(Fail(TwolocalStatus::CommandFailed, out.stderr.trim_end().to_owned()))
        }
    })
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn twolocal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn twolocal_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn twolocal_status_name(status: TwolocalStatus) -> *const c_char {
    let name: &'static CStr = match status {
        TwolocalStatus::Ok => c"Ok",
        TwolocalStatus::NullPointer => c"NullPointer",
        TwolocalStatus::InvalidUtf8 => c"InvalidUtf8",
        TwolocalStatus::Panic => c"Panic",
        TwolocalStatus::DivisionByZero => c"DivisionByZero",
        TwolocalStatus::ZeroDivision => c"ZeroDivision",
        TwolocalStatus::EmptyWindow => c"EmptyWindow",
        TwolocalStatus::UndeterminedValuation => c"UndeterminedValuation",
        TwolocalStatus::NotAPthPower => c"NotAPthPower",
        TwolocalStatus::PrecisionLoss => c"PrecisionLoss",
        TwolocalStatus::LengthMismatch => c"LengthMismatch",
        TwolocalStatus::TwistViolation => c"TwistViolation",
        TwolocalStatus::FactorizationBudgetExceeded => c"FactorizationBudgetExceeded",
        TwolocalStatus::InvalidContext => c"InvalidContext",
        TwolocalStatus::Parse => c"Parse",
        TwolocalStatus::CommandFailed => c"CommandFailed",
    };
    name.as_ptr()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_header_is_current() {
        let generated = include_str!(concat!(env!("OUT_DIR"), "/twolocal.h"));
        let shipped = include_str!("../include/twolocal.h");
        assert_eq!(generated, shipped, "regenerate include/twolocal.h from the build output");
    }

    #[test]
    fn error_names_match_library_kinds() {
        let errors = [
            Error::DivisionByZero,
            Error::ZeroDivision,
            Error::EmptyWindow,
            Error::UndeterminedValuation(String::new()),
            Error::NotAPthPower { witness: String::new() },
            Error::PrecisionLoss(String::new()),
            Error::LengthMismatch { left: 0, right: 0 },
            Error::TwistViolation(String::new()),
            Error::FactorizationBudgetExceeded(0),
            Error::InvalidContext(String::new()),
            Error::Parse(String::new()),
        ];
        for e in errors {
            let name = unsafe { CStr::from_ptr(twolocal_status_name((&e).into())) };
            assert_eq!(name.to_str().unwrap(), e.kind());
        }
    }
}
