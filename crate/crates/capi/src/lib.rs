//! C ABI over the core library: opaque table handles in, JSON documents out.
//!
//! Every returned string is heap-allocated and must be released with
//! `igt_string_free`; every handle with `igt_table_free`. Entry points
//! return `IgtStatus`; after any non-OK status `igt_last_error` carries a
//! message that stays valid on the calling thread until the next failure.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;

use igroupoid::analysis::{
    classify_relation, pip_elements, restriction_lattice, sop_detect,
};
use igroupoid::format::{table_from_json, table_to_json};
use igroupoid::validate::validate_table;
use igroupoid::{Error, MultiTable, Sign};

/// Result discipline for every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IgtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The document did not parse or did not satisfy the format contract.
    Parse = 3,
    /// The file could not be read.
    Io = 4,
    /// A label name is not in the table's alphabet.
    UnknownLabel = 5,
    /// The product is not available (window overflow or empty composition).
    Eval = 6,
}

/// Opaque handle to a loaded table.
pub struct IgtTable {
    inner: MultiTable,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: IgtStatus, message: &str) -> IgtStatus {
    let cleaned = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(cleaned).expect("nul stripped");
    });
    status
}

/// Message for the last failing call on this thread. The pointer stays
/// valid until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn igt_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Version of the library, as a static string. Do not free.
#[no_mangle]
pub extern "C" fn igt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, IgtStatus> {
    if p.is_null() {
        return Err(fail(IgtStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(IgtStatus::InvalidUtf8, &e.to_string()))
}

fn give_string(s: String, out: *mut *mut c_char) -> IgtStatus {
    if out.is_null() {
        return fail(IgtStatus::NullArgument, "null output pointer");
    }
    let c = CString::new(s).expect("documents never contain nul");
    unsafe { *out = c.into_raw() };
    IgtStatus::Ok
}

fn give_table(t: MultiTable, out: *mut *mut IgtTable) -> IgtStatus {
    if out.is_null() {
        return fail(IgtStatus::NullArgument, "null output pointer");
    }
    unsafe { *out = Box::into_raw(Box::new(IgtTable { inner: t })) };
    IgtStatus::Ok
}

unsafe fn table_arg<'a>(t: *const IgtTable) -> Result<&'a MultiTable, IgtStatus> {
    if t.is_null() {
        return Err(fail(IgtStatus::NullArgument, "null table handle"));
    }
    Ok(&(*t).inner)
}

/// Parse a table document. On success `*out` owns the new handle.
///
/// # Safety
/// `json` must be a valid nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn igt_table_from_json(
    json: *const c_char,
    out: *mut *mut IgtTable,
) -> IgtStatus {
    let text = match str_arg(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match table_from_json(text) {
        Ok(t) => give_table(t, out),
        Err(e) => fail(IgtStatus::Parse, &e.to_string()),
    }
}

/// Read and parse a table document from a file path.
///
/// # Safety
/// `path` must be a valid nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn igt_table_from_file(
    path: *const c_char,
    out: *mut *mut IgtTable,
) -> IgtStatus {
    let path = match str_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(IgtStatus::Io, &format!("{path}: {e}")),
    };
    match table_from_json(&text) {
        Ok(t) => give_table(t, out),
        Err(e) => fail(IgtStatus::Parse, &e.to_string()),
    }
}

/// Release a table handle. Null is a no-op.
///
/// # Safety
/// `t` must be a handle from this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn igt_table_free(t: *mut IgtTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be a string from this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn igt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Serialize the table back to its canonical document.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn igt_table_to_json(
    t: *const IgtTable,
    out: *mut *mut c_char,
) -> IgtStatus {
    let table = match table_arg(t) {
        Ok(t) => t,
        Err(s) => return s,
    };
    give_string(table_to_json(table), out)
}

/// Run the axiom battery. `*passed` becomes 1 when no check failed, else 0.
/// `report` may be null; otherwise it receives the report as JSON.
///
/// # Safety
/// `t` must be a live handle; `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn igt_table_validate(
    t: *const IgtTable,
    passed: *mut i32,
    report: *mut *mut c_char,
) -> IgtStatus {
    let table = match table_arg(t) {
        Ok(t) => t,
        Err(s) => return s,
    };
    if passed.is_null() {
        return fail(IgtStatus::NullArgument, "null passed pointer");
    }
    let result = validate_table(table);
    *passed = i32::from(result.passed());
    if report.is_null() {
        return IgtStatus::Ok;
    }
    let json = serde_json::to_string_pretty(&result).expect("report serialization");
    give_string(json + "\n", report)
}

/// Structural report: relation classification, order witness, restriction
/// lattice, and the potentially-unbounded part, as one JSON document.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn igt_table_analyze(
    t: *const IgtTable,
    out: *mut *mut c_char,
) -> IgtStatus {
    let table = match table_arg(t) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let a = table.alphabet();
    let eligible = a.ids().any(|u| a.sign(u) == Sign::Neg) && !table.unbounded().neg;
    let lattice = match restriction_lattice(table) {
        Ok(l) => serde_json::to_value(&l).expect("lattice"),
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    };
    let pip: Vec<&str> = pip_elements(table).iter().map(|u| a.name(u)).collect();
    let doc = serde_json::json!({
        "classify": classify_relation(table),
        "sop": { "eligible": eligible, "witness": sop_detect(table, 8) },
        "lattice": lattice,
        "pip": pip,
    });
    let json = serde_json::to_string_pretty(&doc).expect("analyze serialization");
    give_string(json + "\n", out)
}

/// Product of two labels by name. On success `*out` is a JSON array of
/// label names. Unknown names report `UnknownLabel`; window overflow and
/// empty compositions report `Eval`.
///
/// # Safety
/// `t` must be a live handle; `left`, `right`, `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn igt_table_product(
    t: *const IgtTable,
    left: *const c_char,
    right: *const c_char,
    out: *mut *mut c_char,
) -> IgtStatus {
    let table = match table_arg(t) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let (left, right) = match (str_arg(left), str_arg(right)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let resolve = |name: &str| {
        table
            .alphabet()
            .resolve(name)
            .map_err(|e| fail(IgtStatus::UnknownLabel, &e.to_string()))
    };
    let (u, v) = match (resolve(left), resolve(right)) {
        (Ok(u), Ok(v)) => (u, v),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match table.product(u, v) {
        Ok(set) => {
            let names: Vec<&str> = set.iter().map(|w| table.alphabet().name(w)).collect();
            let json = serde_json::to_string(&names).expect("name list");
            give_string(json, out)
        }
        Err(e @ (Error::WindowExceeded { .. } | Error::EmptyComposition { .. })) => {
            fail(IgtStatus::Eval, &e.to_string())
        }
        Err(e) => fail(IgtStatus::Eval, &e.to_string()),
    }
}
