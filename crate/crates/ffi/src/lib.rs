//! C ABI over `chordiso`. Graphs and groups are opaque handles released with
//! their `_free` functions. Every call returns a `ChordisoStatus`; the message
//! of the last failure on the calling thread is available from
//! `chordiso_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chordiso::error::Error;
use chordiso::graph::{Coloring, Graph};
use chordiso::group::PermGroup;
use chordiso::io::parse_graph;
use chordiso::pipeline::{aut, iso};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChordisoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    NotChordal = 4,
    BufferTooSmall = 5,
    Internal = 6,
    Panic = 7,
}

/// Opaque graph handle.
pub struct ChordisoGraph(Graph);

/// Opaque permutation group handle.
pub struct ChordisoGroup {
    group: PermGroup,
    threshold: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ChordisoStatus {
    match e {
        Error::Parse { .. } => ChordisoStatus::Parse,
        Error::NotChordal => ChordisoStatus::NotChordal,
        Error::InvalidGraph(_) | Error::DomainMismatch(_) | Error::Precondition(_) => ChordisoStatus::InvalidArgument,
        _ => ChordisoStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), ChordisoStatus>) -> ChordisoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChordisoStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside chordiso");
            ChordisoStatus::Panic
        }
    }
}

fn fail(e: Error) -> ChordisoStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null() -> ChordisoStatus {
    set_error("null pointer argument");
    ChordisoStatus::NullPointer
}

fn threshold(leafage_bound: usize) -> Option<usize> {
    (leafage_bound > 0).then_some(leafage_bound)
}

/// Message of the last failed call on this thread. Valid until the next call.
#[no_mangle]
pub extern "C" fn chordiso_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Graph on `n` vertices with `m` edges given as `2m` endpoints.
///
/// # Safety
/// `edges` must point to `2 * m` readable values, or be null when `m == 0`.
#[no_mangle]
pub unsafe extern "C" fn chordiso_graph_from_edges(
    n: usize,
    edges: *const usize,
    m: usize,
    out: *mut *mut ChordisoGraph,
) -> ChordisoStatus {
    guard(|| {
        if out.is_null() || (edges.is_null() && m > 0) {
            return Err(null());
        }
        let flat = if m == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * m) };
        let pairs: Vec<(usize, usize)> = flat.chunks(2).map(|c| (c[0], c[1])).collect();
        let g = Graph::from_edges(n, &pairs).map_err(fail)?;
        *out = Box::into_raw(Box::new(ChordisoGraph(g)));
        Ok(())
    })
}

/// Parses graph6 or edge-list text.
///
/// # Safety
/// `text` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn chordiso_graph_parse(text: *const c_char, out: *mut *mut ChordisoGraph) -> ChordisoStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("text is not UTF-8");
            ChordisoStatus::Parse
        })?;
        let g = parse_graph(s).map_err(fail)?;
        *out = Box::into_raw(Box::new(ChordisoGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn chordiso_graph_free(g: *mut ChordisoGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, 0 for null.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chordiso_graph_order(g: *const ChordisoGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Automorphism group of a chordal graph. `colors` may be null; otherwise it
/// holds one color per vertex. `leafage_bound == 0` selects the bound automatically.
///
/// # Safety
/// `g` must be a live handle; `colors`, when non-null, must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn chordiso_aut(
    g: *const ChordisoGraph,
    colors: *const usize,
    leafage_bound: usize,
    out: *mut *mut ChordisoGroup,
) -> ChordisoStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return Err(null());
        };
        let n = g.0.n();
        let pi = (!colors.is_null()).then(|| Coloring::from_labels(std::slice::from_raw_parts(colors, n)));
        let res = aut(&g.0, pi.as_ref(), threshold(leafage_bound)).map_err(fail)?;
        *out = Box::into_raw(Box::new(ChordisoGroup { group: res.group, threshold: res.threshold }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn chordiso_group_free(h: *mut ChordisoGroup) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chordiso_group_degree(h: *const ChordisoGroup) -> usize {
    h.as_ref().map_or(0, |h| h.group.degree())
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chordiso_group_num_generators(h: *const ChordisoGroup) -> usize {
    h.as_ref().map_or(0, |h| h.group.generators().len())
}

/// Leafage bound the computation settled on.
///
/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chordiso_group_leafage_bound(h: *const ChordisoGroup) -> usize {
    h.as_ref().map_or(0, |h| h.threshold)
}

/// Copies the images of generator `i` into `buf`, which holds `len` values.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn chordiso_group_generator(
    h: *const ChordisoGroup,
    i: usize,
    buf: *mut usize,
    len: usize,
) -> ChordisoStatus {
    guard(|| {
        let (Some(h), false) = (h.as_ref(), buf.is_null()) else {
            return Err(null());
        };
        let Some(p) = h.group.generators().get(i) else {
            set_error("generator index out of range");
            return Err(ChordisoStatus::InvalidArgument);
        };
        if len < p.len() {
            set_error("buffer too small");
            return Err(ChordisoStatus::BufferTooSmall);
        }
        ptr::copy_nonoverlapping(p.images().as_ptr(), buf, p.len());
        Ok(())
    })
}

/// Writes the group order as a nul-terminated decimal string. `needed`
/// receives the buffer size required, including the terminator.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `len` bytes or be null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn chordiso_group_order(
    h: *const ChordisoGroup,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> ChordisoStatus {
    guard(|| {
        let Some(h) = h.as_ref() else {
            return Err(null());
        };
        let s = h.group.order().to_string();
        if !needed.is_null() {
            *needed = s.len() + 1;
        }
        if buf.is_null() || len < s.len() + 1 {
            set_error("buffer too small");
            return Err(ChordisoStatus::BufferTooSmall);
        }
        ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, s.len());
        *buf.add(s.len()) = 0;
        Ok(())
    })
}

/// Isomorphism test. On success `*found` tells whether one exists and, if so,
/// `mapping` (holding `len` values) receives the images of the vertices of `a`.
///
/// # Safety
/// `a` and `b` must be live handles; `mapping` must hold `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn chordiso_iso(
    a: *const ChordisoGraph,
    b: *const ChordisoGraph,
    leafage_bound: usize,
    mapping: *mut usize,
    len: usize,
    found: *mut bool,
) -> ChordisoStatus {
    guard(|| {
        let (Some(a), Some(b), false) = (a.as_ref(), b.as_ref(), found.is_null()) else {
            return Err(null());
        };
        let m = iso(&a.0, &b.0, threshold(leafage_bound)).map_err(fail)?;
        *found = m.is_some();
        if let Some(p) = m {
            if mapping.is_null() || len < p.len() {
                set_error("buffer too small");
                return Err(ChordisoStatus::BufferTooSmall);
            }
            ptr::copy_nonoverlapping(p.images().as_ptr(), mapping, p.len());
        }
        Ok(())
    })
}
