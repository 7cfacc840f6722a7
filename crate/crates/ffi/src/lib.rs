//! C interface to `uniqsub`.
//!
//! Graphs cross the boundary as opaque `UsGraph` handles. Every fallible
//! call returns a `UsStatus`; on failure `us_last_error_message` describes
//! the error for the calling thread. Strings returned through `char **`
//! out-parameters are owned by the caller and released with
//! `us_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use uniqsub::error::Error;
use uniqsub::graph::Graph;

/// Opaque graph handle.
pub struct UsGraph(Graph);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Graph6 = 3,
    Domain = 4,
    Resource = 5,
    Io = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Fail {
    Null(&'static str),
    Utf8,
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> UsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UsStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            UsStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("input is not valid UTF-8".into());
            UsStatus::InvalidUtf8
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            match e {
                Error::Graph6 { .. } => UsStatus::Graph6,
                Error::Domain(_) => UsStatus::Domain,
                Error::Resource { .. } => UsStatus::Resource,
                Error::Ingest { .. } | Error::Io(_) => UsStatus::Io,
            }
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            UsStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(p: *const UsGraph, what: &'static str) -> Result<&'a Graph, Fail> {
    p.as_ref().map(|g| &g.0).ok_or(Fail::Null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn in_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null("input string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8)
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next `us_*` call on the same thread.
#[no_mangle]
pub extern "C" fn us_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn us_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn us_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn us_graph_from_graph6(text: *const c_char, out: *mut *mut UsGraph) -> UsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let g = uniqsub::graph6::parse_graph6_str(in_str(text)?)?;
        *out = Box::into_raw(Box::new(UsGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn us_graph_free(g: *mut UsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_graph_order(g: *const UsGraph, out: *mut u32) -> UsStatus {
    guard(|| {
        *out_ref(out, "out")? = graph_ref(g, "g")?.order() as u32;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_graph_edge_count(g: *const UsGraph, out: *mut u32) -> UsStatus {
    guard(|| {
        *out_ref(out, "out")? = graph_ref(g, "g")?.edge_count() as u32;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_graph_to_graph6(g: *const UsGraph, out: *mut *mut c_char) -> UsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = out_string(uniqsub::graph6::emit_graph6(graph_ref(g, "g")?));
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_graph_complement(g: *const UsGraph, out: *mut *mut UsGraph) -> UsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = Box::into_raw(Box::new(UsGraph(graph_ref(g, "g")?.complement())));
        Ok(())
    })
}

/// Canonical form as graph6 of the canonically relabelled graph.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_canonical_graph6(g: *const UsGraph, out: *mut *mut c_char) -> UsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let c = uniqsub::canon::canonical_graph(graph_ref(g, "g")?);
        *out = out_string(uniqsub::graph6::emit_graph6(&c));
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_aut_order(g: *const UsGraph, out: *mut u64) -> UsStatus {
    guard(|| {
        *out_ref(out, "out")? = uniqsub::canon::aut_order(graph_ref(g, "g")?);
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_are_isomorphic(a: *const UsGraph, b: *const UsGraph, out: *mut bool) -> UsStatus {
    guard(|| {
        *out_ref(out, "out")? = uniqsub::canon::are_isomorphic(graph_ref(a, "a")?, graph_ref(b, "b")?);
        Ok(())
    })
}

/// Exact number of embeddings of `g` into `h`, as a decimal string.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_count_embeddings(g: *const UsGraph, h: *const UsGraph, out: *mut *mut c_char) -> UsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let count = uniqsub::embed::count_embeddings(graph_ref(g, "g")?, graph_ref(h, "h")?, None);
        let exact = count.exact().expect("no early exit requested");
        *out = out_string(exact.to_string());
        Ok(())
    })
}

/// Whether `g` has exactly one embedding into `h` (equal orders required).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_has_unique_embedding(g: *const UsGraph, h: *const UsGraph, out: *mut bool) -> UsStatus {
    guard(|| {
        *out_ref(out, "out")? = uniqsub::embed::has_unique_embedding(graph_ref(g, "g")?, graph_ref(h, "h")?)?;
        Ok(())
    })
}

/// Whether `h` contains exactly one subgraph isomorphic to `g`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_is_unique_subgraph(g: *const UsGraph, h: *const UsGraph, out: *mut bool) -> UsStatus {
    guard(|| {
        *out_ref(out, "out")? = uniqsub::embed::is_unique_subgraph(graph_ref(g, "g")?, graph_ref(h, "h")?);
        Ok(())
    })
}

/// `f(h)` as a JSON object.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_f_of_h_json(
    h: *const UsGraph,
    spanning_only: bool,
    allow_large: bool,
    out: *mut *mut c_char,
) -> UsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let universe = if spanning_only {
            uniqsub::unique::Universe::SpanningOnly
        } else {
            uniqsub::unique::Universe::AllSizes
        };
        let f = uniqsub::unique::f_of_h(graph_ref(h, "h")?, universe, allow_large)?;
        *out = out_string(serde_json_string(&f));
        Ok(())
    })
}

/// Monte-Carlo estimate of the unique-embedding probability, as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_estimate_json(h: *const UsGraph, trials: u64, seed: u64, out: *mut *mut c_char) -> UsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let r = uniqsub::unique::estimate_unique_prob(graph_ref(h, "h")?, trials, seed)?;
        *out = out_string(serde_json_string(&r));
        Ok(())
    })
}

/// `exp(-2 t^2 / sum b_i^2)`.
///
/// # Safety
/// `b` must point to `len` doubles (it may be NULL when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn us_azuma_tail(t: f64, b: *const f64, len: usize, out: *mut f64) -> UsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let b = if len == 0 {
            &[][..]
        } else if b.is_null() {
            return Err(Fail::Null("b"));
        } else {
            std::slice::from_raw_parts(b, len)
        };
        *out = uniqsub::numeric::hp_to_f64(&uniqsub::bounds::azuma_tail(t, b)?);
        Ok(())
    })
}

/// `n! * 2^(e_h - N)` as an exact fraction string.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn us_expected_embeddings(n: u32, e_h: u32, out: *mut *mut c_char) -> UsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let v = uniqsub::bounds::expected_embeddings(n as usize, e_h as usize)?;
        *out = out_string(v.to_string());
        Ok(())
    })
}

fn serde_json_string<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("payloads serialize")
}
