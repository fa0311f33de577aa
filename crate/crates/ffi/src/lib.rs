//! C ABI over the curveforms pipeline.
//!
//! Handles are opaque and owned by the caller; release them with the matching
//! `*_free` function. Every fallible call returns a [`CfStatus`], and the
//! message of the last failure on the calling thread is available from
//! [`cf_last_error`].

use curveforms::cartier::{cartier_manin_matrix, invariants, CartierManinMatrix};
use curveforms::cli::{parse_curve, run, Command, CurveSpec};
use curveforms::forms::{differential_basis_with, DifferentialBasis};
use curveforms::normalize::DEFAULT_LOOP_CAP;
use curveforms::{Error, Polynomial};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes; 1 to 5 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    Parse = 1,
    Validation = 2,
    Inseparable = 3,
    IterationLimit = 4,
    Internal = 5,
    NullPointer = 6,
    OutOfRange = 7,
}

/// Pipeline stage selector for [`cf_run_json`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfCommand {
    Normalize = 0,
    Conductor = 1,
    Forms = 2,
    Cartier = 3,
    Invariants = 4,
}

/// A parsed plane curve.
pub struct CfCurve {
    f: Polynomial,
}

/// A basis of regular differentials together with its Cartier–Manin matrix.
pub struct CfForms {
    basis: DifferentialBasis,
    matrix: CartierManinMatrix,
}

/// Invariants read off the Cartier–Manin matrix.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CfInvariants {
    pub genus: usize,
    pub a_number: usize,
    pub p_rank: usize,
    pub superspecial: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CfStatus {
    set_error(&format!("[{}] {e}", e.module()));
    match e.exit_code() {
        1 => CfStatus::Parse,
        2 => CfStatus::Validation,
        3 => CfStatus::Inseparable,
        4 => CfStatus::IterationLimit,
        _ => CfStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> CfStatus) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == CfStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => {
            set_error("internal panic");
            CfStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, CfStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(CfStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        CfStatus::Parse
    })
}

fn null_arg() -> CfStatus {
    set_error("null pointer argument");
    CfStatus::NullPointer
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses `text` as a curve over F_p and stores a new handle in `out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_parse(p: u64, text: *const c_char, out: *mut *mut CfCurve) -> CfStatus {
    guard(|| {
        if out.is_null() {
            return null_arg();
        }
        let text = match str_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_curve(text, p) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(CfCurve { f }));
                CfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `curve` must come from [`cf_curve_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_free(curve: *mut CfCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Computes the differential basis and Cartier–Manin matrix of `curve`.
/// A `loop_cap` of 0 selects the default.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_forms_compute(curve: *const CfCurve, loop_cap: usize, out: *mut *mut CfForms) -> CfStatus {
    guard(|| {
        if curve.is_null() || out.is_null() {
            return null_arg();
        }
        let cap = if loop_cap == 0 { DEFAULT_LOOP_CAP } else { loop_cap };
        let res = differential_basis_with(&(*curve).f, cap)
            .and_then(|basis| cartier_manin_matrix(&basis).map(|matrix| CfForms { basis, matrix }));
        match res {
            Ok(forms) => {
                *out = Box::into_raw(Box::new(forms));
                CfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `forms` must come from [`cf_forms_compute`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cf_forms_free(forms: *mut CfForms) {
    if !forms.is_null() {
        drop(Box::from_raw(forms));
    }
}

/// Genus, i.e. the number of numerators.
///
/// # Safety
/// `forms` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn cf_forms_genus(forms: *const CfForms) -> usize {
    forms.as_ref().map_or(0, |f| f.basis.genus)
}

/// Numerator `i` rendered as a string; free it with [`cf_string_free`].
///
/// # Safety
/// `forms` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_forms_numerator(forms: *const CfForms, i: usize, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let (Some(f), false) = (forms.as_ref(), out.is_null()) else {
            return null_arg();
        };
        match f.basis.numerators.get(i) {
            Some(p) => {
                *out = CString::new(p.render()).unwrap_or_default().into_raw();
                CfStatus::Ok
            }
            None => {
                set_error("numerator index out of range");
                CfStatus::OutOfRange
            }
        }
    })
}

/// The common denominator F_y; free it with [`cf_string_free`].
///
/// # Safety
/// `forms` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_forms_denominator(forms: *const CfForms, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let (Some(f), false) = (forms.as_ref(), out.is_null()) else {
            return null_arg();
        };
        *out = CString::new(f.basis.denominator.render()).unwrap_or_default().into_raw();
        CfStatus::Ok
    })
}

/// Copies the g×g Cartier–Manin matrix, row-major with columns as images,
/// into `buf`, which must hold at least `len` ≥ g² entries.
///
/// # Safety
/// `forms` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn cf_forms_cartier_matrix(forms: *const CfForms, buf: *mut u32, len: usize) -> CfStatus {
    guard(|| {
        let Some(f) = forms.as_ref() else {
            return null_arg();
        };
        let g = f.matrix.size();
        if g == 0 {
            return CfStatus::Ok;
        }
        if buf.is_null() {
            return null_arg();
        }
        if len < g * g {
            set_error("matrix buffer too small");
            return CfStatus::OutOfRange;
        }
        let out = std::slice::from_raw_parts_mut(buf, g * g);
        for (i, row) in f.matrix.entries.iter().enumerate() {
            out[i * g..(i + 1) * g].copy_from_slice(row);
        }
        CfStatus::Ok
    })
}

/// Genus, a-number, p-rank and superspeciality.
///
/// # Safety
/// `forms` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_forms_invariants(forms: *const CfForms, out: *mut CfInvariants) -> CfStatus {
    guard(|| {
        let (Some(f), false) = (forms.as_ref(), out.is_null()) else {
            return null_arg();
        };
        match invariants(&f.matrix) {
            Ok(inv) => {
                *out = CfInvariants {
                    genus: inv.genus,
                    a_number: inv.a_number,
                    p_rank: inv.p_rank,
                    superspecial: inv.superspecial,
                };
                CfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Runs one pipeline stage and returns the JSON report; free it with
/// [`cf_string_free`]. A `loop_cap` of 0 selects the default.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_run_json(
    command: CfCommand,
    p: u64,
    text: *const c_char,
    loop_cap: usize,
    out: *mut *mut c_char,
) -> CfStatus {
    guard(|| {
        if out.is_null() {
            return null_arg();
        }
        let text = match str_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let mut spec = CurveSpec::new(p, text);
        if loop_cap != 0 {
            spec.loop_cap = loop_cap;
        }
        let cmd = match command {
            CfCommand::Normalize => Command::Normalize,
            CfCommand::Conductor => Command::Conductor,
            CfCommand::Forms => Command::Forms,
            CfCommand::Cartier => Command::Cartier,
            CfCommand::Invariants => Command::Invariants,
        };
        match run(&spec, cmd) {
            Ok(r) => {
                *out = CString::new(r.to_json()).unwrap_or_default().into_raw();
                CfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
