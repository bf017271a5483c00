//! C ABI over the `fmlocal` library. Structures are opaque handles owned by
//! the caller and released with `fm_structure_free`. Every call returns an
//! `FmStatus`; on failure the message is kept per thread and read with
//! `fm_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fmlocal::games::{ef_equivalent, khom_equivalent};
use fmlocal::hom::{core, find_hom, tree_depth};
use fmlocal::structures::{is_isomorphic, parse_structure, serialize_structure, Structure};
use fmlocal::Error;

/// Opaque structure handle.
pub struct FmStructure(Structure);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed structure text.
    Syntax = 3,
    /// Well-formed input that the operation rejects, such as structures
    /// over different vocabularies.
    InvalidInput = 4,
    /// A search bound stopped the computation.
    BoundExceeded = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FmStatus {
    match e {
        Error::Syntax { .. } => FmStatus::Syntax,
        e if e.is_bound_related() => FmStatus::BoundExceeded,
        _ => FmStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), FmStatus>) -> FmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FmStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            FmStatus::Panic
        }
    }
}

fn fail(e: Error) -> FmStatus {
    set_error(&e.to_string());
    status_of(&e)
}

unsafe fn get<'a>(s: *const FmStructure) -> Result<&'a Structure, FmStatus> {
    if s.is_null() {
        set_error("null structure handle");
        return Err(FmStatus::NullPointer);
    }
    Ok(&(*s).0)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), FmStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(FmStatus::NullPointer);
    }
    *out = value;
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn fm_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// The library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses a structure from its text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn fm_structure_parse(text: *const c_char, out: *mut *mut FmStructure) -> FmStatus {
    guard(|| {
        if text.is_null() {
            set_error("null text");
            return Err(FmStatus::NullPointer);
        }
        let text = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("text is not UTF-8");
            FmStatus::InvalidUtf8
        })?;
        let s = parse_structure(text).map_err(fail)?;
        put(out, Box::into_raw(Box::new(FmStructure(s))))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fm_structure_free(s: *mut FmStructure) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn fm_structure_size(s: *const FmStructure, out: *mut usize) -> FmStatus {
    guard(|| put(out, get(s)?.size()))
}

/// Writes the canonical text of `s` as a new string, released with
/// `fm_string_free`.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn fm_structure_to_text(s: *const FmStructure, out: *mut *mut c_char) -> FmStatus {
    guard(|| {
        let text = serialize_structure(get(s)?);
        put(out, CString::new(text).unwrap_or_default().into_raw())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn fm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// Handles must be live and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn fm_is_isomorphic(a: *const FmStructure, b: *const FmStructure, out: *mut bool) -> FmStatus {
    guard(|| {
        let iso = is_isomorphic(get(a)?, get(b)?).map_err(fail)?;
        put(out, iso.is_some())
    })
}

/// Looks for a homomorphism `a -> b`. When one exists and `map` is not
/// null, its images are written to `map`, which must hold `size(a)`
/// entries (`map_len`).
///
/// # Safety
/// Handles must be live, `found` valid for writing and `map` null or valid
/// for `map_len` entries.
#[no_mangle]
pub unsafe extern "C" fn fm_find_hom(
    a: *const FmStructure,
    b: *const FmStructure,
    found: *mut bool,
    map: *mut usize,
    map_len: usize,
) -> FmStatus {
    guard(|| {
        let a = get(a)?;
        let h = find_hom(a, get(b)?).map_err(fail)?;
        if let (Some(h), false) = (&h, map.is_null()) {
            if map_len < a.size() {
                set_error(&format!("map buffer holds {map_len} entries, {} needed", a.size()));
                return Err(FmStatus::BufferTooSmall);
            }
            ptr::copy_nonoverlapping(h.map.as_ptr(), map, a.size());
        }
        put(found, h.is_some())
    })
}

/// The core of `s` as a new handle.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn fm_core(s: *const FmStructure, out: *mut *mut FmStructure) -> FmStatus {
    guard(|| {
        let c = core(get(s)?);
        put(out, Box::into_raw(Box::new(FmStructure(c))))
    })
}

/// # Safety
/// `s` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn fm_tree_depth(s: *const FmStructure, out: *mut usize) -> FmStatus {
    guard(|| put(out, tree_depth(get(s)?).map_err(fail)?))
}

/// Whether the forth game is won both ways for `k` rounds.
///
/// # Safety
/// Handles must be live and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn fm_khom_equivalent(
    a: *const FmStructure,
    b: *const FmStructure,
    k: usize,
    out: *mut bool,
) -> FmStatus {
    guard(|| put(out, khom_equivalent(get(a)?, get(b)?, k).map_err(fail)?))
}

/// Whether the duplicator wins the k-round Ehrenfeucht-Fraisse game.
///
/// # Safety
/// Handles must be live and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn fm_ef_equivalent(
    a: *const FmStructure,
    b: *const FmStructure,
    k: usize,
    out: *mut bool,
) -> FmStatus {
    guard(|| put(out, ef_equivalent(get(a)?, &[], get(b)?, &[], k).map_err(fail)?))
}

/// Runs the command line with `argc` arguments (the first is the program
/// name) and returns its exit code; -1 for unusable arguments.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn fm_cli_run(argc: c_int, argv: *const *const c_char) -> c_int {
    if argv.is_null() || argc < 0 {
        return -1;
    }
    let mut args = Vec::with_capacity(argc as usize);
    for i in 0..argc as usize {
        let p = *argv.add(i);
        if p.is_null() {
            return -1;
        }
        match CStr::from_ptr(p).to_str() {
            Ok(s) => args.push(s.to_string()),
            Err(_) => return -1,
        }
    }
    catch_unwind(|| fmlocal::cli::run(args)).unwrap_or(-1)
}
