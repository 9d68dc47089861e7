//! C bindings for the `linkform` library.
//!
//! The surface is deliberately small: parse a model file into an opaque
//! handle, query it (name, group, linking and triple forms, obstruction
//! summary), and run family sweeps. Everything crosses the boundary as
//! plain C types; exact rationals and big integers travel as decimal
//! strings, which keeps the ABI trivial and the arithmetic exact.
//!
//! Conventions, uniform across the API:
//!
//! * Every fallible call returns an [`LfStatus`]; `LF_STATUS_OK` is zero.
//!   On failure, [`lf_last_error`] returns a message for the current
//!   thread's most recent failed call.
//! * `char**`/`LfModel**` out-parameters are written only on success.
//!   Returned strings are owned by the caller and must be released with
//!   [`lf_string_free`]; models with [`lf_model_free`].
//! * Panics never unwind across the boundary: they are caught and
//!   reported as `LF_STATUS_PANIC`.
//!
//! The matching header, `include/linkform.h`, is generated from this file
//! at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use linkform::clasper::{family, ClasperError};
use linkform::linking::LinkingError;
use linkform::model::{parse_model, ManifoldModel, ModelError};
use linkform::obstruct::{obstruct, ObstructError};
use linkform::search::{sweep, SearchError, SweepMode, SweepOptions};
use linkform::triple::TripleError;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LfStatus {
    /// Success.
    Ok = 0,
    /// Malformed input text (bad JSON, bad UTF-8).
    Parse = 1,
    /// Well-formed input with invalid content (bad rational, shape
    /// mismatch, unknown element, non-isotropic triple).
    Validation = 2,
    /// Input is meaningful but outside the supported exact-checking or
    /// enumeration bounds.
    Scope = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
    /// A panic was caught at the boundary; see [`lf_last_error`].
    Panic = 5,
}

/// An opaque parsed manifold model.
pub struct LfModel {
    inner: ManifoldModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl std::fmt::Display) {
    let text = message.to_string().replace('\0', "?");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(text).expect("nul bytes replaced"));
    });
}

fn fail(status: LfStatus, message: impl std::fmt::Display) -> LfStatus {
    set_last_error(message);
    status
}

fn model_status(e: &ModelError) -> LfStatus {
    match e {
        ModelError::Parse { .. } => LfStatus::Parse,
        ModelError::Validation { .. } => LfStatus::Validation,
        ModelError::Scope { .. } => LfStatus::Scope,
    }
}

fn linking_status(e: &LinkingError) -> LfStatus {
    match e {
        LinkingError::GroupTooLarge { .. } | LinkingError::UnsupportedScope(_) => LfStatus::Scope,
        _ => LfStatus::Validation,
    }
}

fn triple_status(e: &TripleError) -> LfStatus {
    match e {
        TripleError::Linking(inner) => linking_status(inner),
        _ => LfStatus::Validation,
    }
}

fn clasper_status(e: &ClasperError) -> LfStatus {
    match e {
        ClasperError::Linking(inner) => linking_status(inner),
        _ => LfStatus::Validation,
    }
}

fn search_status(e: &SearchError) -> LfStatus {
    match e {
        SearchError::Linking(inner) => linking_status(inner),
        _ => LfStatus::Validation,
    }
}

fn obstruct_status(e: &ObstructError) -> LfStatus {
    match e {
        ObstructError::Linking(inner) => linking_status(inner),
        ObstructError::Triple(inner) => triple_status(inner),
    }
}

/// Runs a body under `catch_unwind`, translating panics to `Panic`.
fn guarded(body: impl FnOnce() -> LfStatus) -> LfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_owned())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_owned());
            fail(LfStatus::Panic, format_args!("internal panic: {message}"))
        }
    }
}

/// Hands a Rust string to the caller.
fn give_string(text: String, out: *mut *mut c_char) -> LfStatus {
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => return fail(LfStatus::Panic, "internal nul byte in result string"),
    };
    unsafe { *out = c.into_raw() };
    LfStatus::Ok
}

unsafe fn model_ref<'a>(model: *const LfModel) -> Option<&'a ManifoldModel> {
    model.as_ref().map(|m| &m.inner)
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, LfStatus> {
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(s),
        Err(e) => Err(fail(LfStatus::Parse, format_args!("argument is not UTF-8: {e}"))),
    }
}

/// Reads a coordinate vector argument of the model's rank.
unsafe fn coords_arg(
    model: &ManifoldModel,
    ptr: *const i64,
    len: usize,
) -> Result<linkform::abelian::GroupElement, LfStatus> {
    if ptr.is_null() {
        return Err(fail(LfStatus::NullArgument, "coordinate pointer is null"));
    }
    let rank = model.group().rank();
    if len != rank {
        return Err(fail(
            LfStatus::Validation,
            format_args!("coordinate vector has {len} entries, the group has rank {rank}"),
        ));
    }
    let coords = std::slice::from_raw_parts(ptr, len);
    Ok(model.group().element(coords))
}

/// Message of the current thread's most recent failed `lf_` call, or null
/// if none has failed yet.
///
/// # Safety
///
/// The pointer is borrowed from thread-local storage: it stays valid until
/// the next failing `lf_` call on the same thread and must not be freed.
#[no_mangle]
pub unsafe extern "C" fn lf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
///
/// `s` must be a pointer previously returned through a `char**`
/// out-parameter of this library (or null, which is a no-op), and must not
/// be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a model file (UTF-8 JSON text) into a handle.
///
/// # Safety
///
/// `json` must be a valid nul-terminated C string and `out` a valid
/// pointer. On success `*out` owns the model and must be released with
/// [`lf_model_free`].
#[no_mangle]
pub unsafe extern "C" fn lf_model_parse(json: *const c_char, out: *mut *mut LfModel) -> LfStatus {
    if json.is_null() || out.is_null() {
        return fail(LfStatus::NullArgument, "lf_model_parse: null argument");
    }
    guarded(|| {
        let text = match utf8_arg(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_model(text) {
            Ok(model) => {
                *out = Box::into_raw(Box::new(LfModel { inner: model }));
                LfStatus::Ok
            }
            Err(e) => fail(model_status(&e), e),
        }
    })
}

/// Releases a model handle (null is a no-op).
///
/// # Safety
///
/// `model` must have come from [`lf_model_parse`] and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn lf_model_free(model: *mut LfModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// The model's name.
///
/// # Safety
///
/// `model` must be a live handle and `out` a valid pointer; the returned
/// string is released with [`lf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn lf_model_name(model: *const LfModel, out: *mut *mut c_char) -> LfStatus {
    guarded(|| {
        let (Some(model), false) = (model_ref(model), out.is_null()) else {
            return fail(LfStatus::NullArgument, "lf_model_name: null argument");
        };
        give_string(model.name().to_owned(), out)
    })
}

/// Number of invariant-factor generators of the first homology group.
///
/// # Safety
///
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_model_rank(model: *const LfModel, out: *mut usize) -> LfStatus {
    guarded(|| {
        let (Some(model), false) = (model_ref(model), out.is_null()) else {
            return fail(LfStatus::NullArgument, "lf_model_rank: null argument");
        };
        *out = model.group().rank();
        LfStatus::Ok
    })
}

/// The group order, as a decimal string.
///
/// # Safety
///
/// `model` must be a live handle and `out` a valid pointer; the returned
/// string is released with [`lf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn lf_model_group_order(
    model: *const LfModel,
    out: *mut *mut c_char,
) -> LfStatus {
    guarded(|| {
        let (Some(model), false) = (model_ref(model), out.is_null()) else {
            return fail(LfStatus::NullArgument, "lf_model_group_order: null argument");
        };
        give_string(model.group().order().to_string(), out)
    })
}

/// Looks up a named element and writes its reduced coordinates.
///
/// `coords` must have space for exactly the group's rank (see
/// [`lf_model_rank`]).
///
/// # Safety
///
/// `model` must be a live handle, `name` a valid C string, and `coords` a
/// writable array of length `len`.
#[no_mangle]
pub unsafe extern "C" fn lf_model_element(
    model: *const LfModel,
    name: *const c_char,
    coords: *mut i64,
    len: usize,
) -> LfStatus {
    guarded(|| {
        let (Some(model), false, false) = (model_ref(model), name.is_null(), coords.is_null())
        else {
            return fail(LfStatus::NullArgument, "lf_model_element: null argument");
        };
        let name = match utf8_arg(name) {
            Ok(n) => n,
            Err(status) => return status,
        };
        let rank = model.group().rank();
        if len != rank {
            return fail(
                LfStatus::Validation,
                format_args!("coordinate buffer has {len} entries, the group has rank {rank}"),
            );
        }
        let Some(element) = model.element(name) else {
            return fail(
                LfStatus::Validation,
                format_args!("model {} has no element named {name:?}", model.name()),
            );
        };
        let out = std::slice::from_raw_parts_mut(coords, len);
        for (slot, coord) in out.iter_mut().zip(element.coords()) {
            // Reduced coordinates lie below the invariant factors, which
            // the model layer bounds well inside i64.
            *slot = i64::try_from(coord).expect("reduced coordinate fits in i64");
        }
        LfStatus::Ok
    })
}

/// Evaluates the linking form on two classes given by coordinates; the
/// result is a canonical rational string `"a/b"`.
///
/// # Safety
///
/// `model` must be a live handle, `x` and `y` readable arrays of length
/// `len`, and `out` a valid pointer; the returned string is released with
/// [`lf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn lf_lambda2_eval(
    model: *const LfModel,
    x: *const i64,
    y: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> LfStatus {
    guarded(|| {
        let (Some(model), false) = (model_ref(model), out.is_null()) else {
            return fail(LfStatus::NullArgument, "lf_lambda2_eval: null argument");
        };
        let (x, y) = match (coords_arg(model, x, len), coords_arg(model, y, len)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(status), _) | (_, Err(status)) => return status,
        };
        match model.form().eval(&x, &y) {
            Ok(value) => give_string(value.to_string(), out),
            Err(e) => fail(linking_status(&e), e),
        }
    })
}

/// Evaluates the triple form on three classes given by coordinates; the
/// result is a canonical rational string `"a/b"`. Fails with
/// `LF_STATUS_VALIDATION` if the model has no `lambda3` data or the
/// classes are not pairwise unlinked.
///
/// # Safety
///
/// `model` must be a live handle, `x`, `y`, `z` readable arrays of length
/// `len`, and `out` a valid pointer; the returned string is released with
/// [`lf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn lf_lambda3_eval(
    model: *const LfModel,
    x: *const i64,
    y: *const i64,
    z: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> LfStatus {
    guarded(|| {
        let (Some(model), false) = (model_ref(model), out.is_null()) else {
            return fail(LfStatus::NullArgument, "lf_lambda3_eval: null argument");
        };
        let Some(triple) = model.triple() else {
            return fail(
                LfStatus::Validation,
                format_args!("model {} has no lambda3 field", model.name()),
            );
        };
        let (x, y, z) = match (
            coords_arg(model, x, len),
            coords_arg(model, y, len),
            coords_arg(model, z, len),
        ) {
            (Ok(x), Ok(y), Ok(z)) => (x, y, z),
            (Err(status), _, _) | (_, Err(status), _) | (_, _, Err(status)) => return status,
        };
        match triple.evaluate(&x, &y, &z) {
            Ok(value) => give_string(value.to_string(), out),
            Err(e) => fail(triple_status(&e), e),
        }
    })
}

/// Number of Lagrangians of the model's linking form.
///
/// # Safety
///
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_lagrangian_count(
    model: *const LfModel,
    out: *mut usize,
) -> LfStatus {
    guarded(|| {
        let (Some(model), false) = (model_ref(model), out.is_null()) else {
            return fail(LfStatus::NullArgument, "lf_lagrangian_count: null argument");
        };
        match model.form().enumerate_lagrangians() {
            Ok(lagrangians) => {
                *out = lagrangians.len();
                LfStatus::Ok
            }
            Err(e) => fail(linking_status(&e), e),
        }
    })
}

/// Runs the rational-homology-ball obstruction and returns the summary
/// token: `"SomeLagrangianVanishes"`, `"NoLagrangianVanishes"`, or
/// `"NoLagrangiansExist"`.
///
/// # Safety
///
/// `model` must be a live handle and `out` a valid pointer; the returned
/// string is released with [`lf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn lf_obstruct_summary(
    model: *const LfModel,
    out: *mut *mut c_char,
) -> LfStatus {
    guarded(|| {
        let (Some(model), false) = (model_ref(model), out.is_null()) else {
            return fail(LfStatus::NullArgument, "lf_obstruct_summary: null argument");
        };
        let Some(triple) = model.triple() else {
            return fail(
                LfStatus::Validation,
                format_args!("model {} has no lambda3 field", model.name()),
            );
        };
        match obstruct(triple) {
            Ok(verdict) => give_string(verdict.summary.to_string(), out),
            Err(e) => fail(obstruct_status(&e), e),
        }
    })
}

/// Exhaustively sweeps the clasper family `fam(p, n)` and returns the
/// summary line `"total=... exceptions=..."`.
///
/// `workers` is the number of threads (0 means 1). The sweep runs to
/// completion; for interruptible or checkpointed runs use the `linkform`
/// CLI, which layers those on the same engine.
///
/// # Safety
///
/// `out` must be a valid pointer; the returned string is released with
/// [`lf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn lf_sweep_exhaustive(
    p: u64,
    n: usize,
    workers: usize,
    out: *mut *mut c_char,
) -> LfStatus {
    guarded(|| {
        if out.is_null() {
            return fail(LfStatus::NullArgument, "lf_sweep_exhaustive: null argument");
        }
        let fam = match family(p, n) {
            Ok(fam) => fam,
            Err(e) => return fail(clasper_status(&e), e),
        };
        let workers = workers.max(1);
        let options = SweepOptions {
            chunks: workers as u64,
            workers,
            ..SweepOptions::default()
        };
        let cancel = std::sync::atomic::AtomicBool::new(false);
        match sweep(&fam, &options, &cancel) {
            Ok(report) => give_string(report.summary_line(), out),
            Err(e) => fail(search_status(&e), e),
        }
    })
}

/// Draws `count` parameter vectors of `fam(p, n)` seeded by `seed` and
/// returns the summary line `"total=... exceptions=..."`.
///
/// # Safety
///
/// `out` must be a valid pointer; the returned string is released with
/// [`lf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn lf_sweep_sample(
    p: u64,
    n: usize,
    count: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> LfStatus {
    guarded(|| {
        if out.is_null() {
            return fail(LfStatus::NullArgument, "lf_sweep_sample: null argument");
        }
        let fam = match family(p, n) {
            Ok(fam) => fam,
            Err(e) => return fail(clasper_status(&e), e),
        };
        let options = SweepOptions {
            mode: SweepMode::Sample { count, seed },
            ..SweepOptions::default()
        };
        let cancel = std::sync::atomic::AtomicBool::new(false);
        match sweep(&fam, &options, &cancel) {
            Ok(report) => give_string(report.summary_line(), out),
            Err(e) => fail(search_status(&e), e),
        }
    })
}
