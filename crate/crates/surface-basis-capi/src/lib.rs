//! C ABI for the surface-basis library.
//!
//! Handles are opaque pointers owned by the library; every `sb_*_new`-style
//! constructor has a matching `sb_*_free`. Functions return [`sb_status`];
//! on failure a thread-local message is retrievable with
//! [`sb_last_error_message`]. The header `include/surface_basis.h` is
//! generated by cbindgen at build time.

#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use surface_basis::embed::EmbeddedGraph;
use surface_basis::mcb::{minimum_cycle_basis, BasisCycle, McbError};
use surface_basis::mhb::minimum_homology_basis;
use surface_basis::{instance, oracle};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl AsRef<str>) {
    let c = CString::new(msg.as_ref().replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum sb_status {
    SB_OK = 0,
    /// Malformed instance text or an invalid embedding.
    SB_ERR_PARSE = 1,
    /// The operation does not apply (e.g. cycle basis of a non-orientable
    /// embedding, oracle verification beyond its size limits).
    SB_ERR_UNSUPPORTED = 2,
    /// Null pointer argument or output buffer too small.
    SB_ERR_ARGUMENT = 3,
    /// Internal invariant violation.
    SB_ERR_INTERNAL = 4,
}

/// Opaque parsed instance.
pub struct sb_graph {
    inner: EmbeddedGraph,
}

/// Opaque computed basis.
pub struct sb_basis {
    cycles: Vec<BasisCycle>,
    total_weight: f64,
}

/// Topological invariants of an instance.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct sb_stats {
    pub vertices: usize,
    pub edges: usize,
    /// Faces including those flagged as boundary components.
    pub faces: usize,
    pub boundary_components: usize,
    /// Euler characteristic of the capped surface.
    pub euler_characteristic: i64,
    pub genus: usize,
    /// 1 when orientable.
    pub orientable: i32,
    /// First Z2-homology rank.
    pub homology_rank: usize,
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(c"".as_ptr())
    })
}

fn parse_text(text: &str) -> Result<EmbeddedGraph, String> {
    let spec = instance::parse(text).map_err(|e| e.to_string())?;
    EmbeddedGraph::build(spec).map_err(|e| e.to_string())
}

/// Parses instance text (see the text format documentation) into a graph
/// handle. On success `*out` owns the graph; free it with [`sb_graph_free`].
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_graph_parse_text(
    text: *const c_char,
    out: *mut *mut sb_graph,
) -> sb_status {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return sb_status::SB_ERR_ARGUMENT;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("instance text is not valid UTF-8");
        return sb_status::SB_ERR_PARSE;
    };
    match parse_text(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(sb_graph { inner }));
            sb_status::SB_OK
        }
        Err(e) => {
            set_error(e);
            *out = ptr::null_mut();
            sb_status::SB_ERR_PARSE
        }
    }
}

/// Reads and parses an instance file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_graph_parse_file(
    path: *const c_char,
    out: *mut *mut sb_graph,
) -> sb_status {
    if path.is_null() || out.is_null() {
        set_error("null argument");
        return sb_status::SB_ERR_ARGUMENT;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_error("path is not valid UTF-8");
        return sb_status::SB_ERR_ARGUMENT;
    };
    match std::fs::read_to_string(Path::new(path)) {
        Err(e) => {
            set_error(format!("cannot read {path}: {e}"));
            *out = ptr::null_mut();
            sb_status::SB_ERR_PARSE
        }
        Ok(text) => {
            let c = CString::new(text).unwrap_or_default();
            sb_graph_parse_text(c.as_ptr(), out)
        }
    }
}

/// # Safety
/// `g` must come from a parse function and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sb_graph_free(g: *mut sb_graph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_graph_stats(g: *const sb_graph, out: *mut sb_stats) -> sb_status {
    if g.is_null() || out.is_null() {
        set_error("null argument");
        return sb_status::SB_ERR_ARGUMENT;
    }
    let s = (*g).inner.stats();
    *out = sb_stats {
        vertices: s.n,
        edges: s.m,
        faces: s.faces,
        boundary_components: s.boundary,
        euler_characteristic: s.chi,
        genus: s.genus,
        orientable: s.orientable as i32,
        homology_rank: s.beta,
    };
    sb_status::SB_OK
}

/// Computes a minimum cycle basis. Fails with `SB_ERR_UNSUPPORTED` on
/// non-orientable embeddings.
///
/// # Safety
/// `g` must be a live graph handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_minimum_cycle_basis(
    g: *const sb_graph,
    out: *mut *mut sb_basis,
) -> sb_status {
    if g.is_null() || out.is_null() {
        set_error("null argument");
        return sb_status::SB_ERR_ARGUMENT;
    }
    match minimum_cycle_basis(&(*g).inner) {
        Ok(basis) => {
            *out = Box::into_raw(Box::new(sb_basis {
                cycles: basis.cycles,
                total_weight: basis.total_weight,
            }));
            sb_status::SB_OK
        }
        Err(McbError::NonOrientable) => {
            set_error("minimum cycle basis requires an orientable embedding");
            *out = ptr::null_mut();
            sb_status::SB_ERR_UNSUPPORTED
        }
        Err(e) => {
            set_error(e.to_string());
            *out = ptr::null_mut();
            sb_status::SB_ERR_INTERNAL
        }
    }
}

/// Computes a minimum homology basis (orientable or not).
///
/// # Safety
/// `g` must be a live graph handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_minimum_homology_basis(
    g: *const sb_graph,
    out: *mut *mut sb_basis,
) -> sb_status {
    if g.is_null() || out.is_null() {
        set_error("null argument");
        return sb_status::SB_ERR_ARGUMENT;
    }
    match minimum_homology_basis(&(*g).inner) {
        Ok(basis) => {
            *out = Box::into_raw(Box::new(sb_basis {
                cycles: basis.cycles,
                total_weight: basis.total_weight,
            }));
            sb_status::SB_OK
        }
        Err(e) => {
            set_error(e.to_string());
            *out = ptr::null_mut();
            sb_status::SB_ERR_INTERNAL
        }
    }
}

/// Checks a computed basis against the brute-force oracle. Writes 1 to
/// `*matches` when the total weights agree exactly. Fails with
/// `SB_ERR_UNSUPPORTED` when the instance is too large to verify.
///
/// # Safety
/// All pointers must be valid; `homology` selects which basis kind.
#[no_mangle]
pub unsafe extern "C" fn sb_basis_verify(
    g: *const sb_graph,
    b: *const sb_basis,
    homology: i32,
    matches: *mut i32,
) -> sb_status {
    if g.is_null() || b.is_null() || matches.is_null() {
        set_error("null argument");
        return sb_status::SB_ERR_ARGUMENT;
    }
    let graph = &(*g).inner;
    let dim = graph.cycle_space_dim();
    let expect = if dim <= 16 {
        let r = if homology != 0 { oracle::greedy_mhb(graph) } else { oracle::greedy_mcb(graph) };
        r.map(|o| o.total_weight).ok()
    } else if graph.vertex_count() <= 600 {
        Some(if homology != 0 {
            oracle::greedy_mhb_horton(graph).total_weight
        } else {
            oracle::greedy_mcb_horton(graph).total_weight
        })
    } else {
        None
    };
    match expect {
        None => {
            set_error("instance too large for oracle verification");
            sb_status::SB_ERR_UNSUPPORTED
        }
        Some(w) => {
            *matches = (w == (*b).total_weight) as i32;
            sb_status::SB_OK
        }
    }
}

/// # Safety
/// `b` must be a live basis handle.
#[no_mangle]
pub unsafe extern "C" fn sb_basis_free(b: *mut sb_basis) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// # Safety
/// `b` must be a live basis handle.
#[no_mangle]
pub unsafe extern "C" fn sb_basis_cycle_count(b: *const sb_basis) -> usize {
    if b.is_null() {
        return 0;
    }
    (*b).cycles.len()
}

/// # Safety
/// `b` must be a live basis handle.
#[no_mangle]
pub unsafe extern "C" fn sb_basis_total_weight(b: *const sb_basis) -> f64 {
    if b.is_null() {
        return f64::NAN;
    }
    (*b).total_weight
}

/// Weight of one basis cycle, or NaN when out of range.
///
/// # Safety
/// `b` must be a live basis handle.
#[no_mangle]
pub unsafe extern "C" fn sb_basis_cycle_weight(b: *const sb_basis, index: usize) -> f64 {
    if b.is_null() || index >= (*b).cycles.len() {
        return f64::NAN;
    }
    (&(*b).cycles)[index].weight
}

/// Number of edges of one basis cycle, or 0 when out of range.
///
/// # Safety
/// `b` must be a live basis handle.
#[no_mangle]
pub unsafe extern "C" fn sb_basis_cycle_edge_count(b: *const sb_basis, index: usize) -> usize {
    if b.is_null() || index >= (*b).cycles.len() {
        return 0;
    }
    (&(*b).cycles)[index].edges.len()
}

/// Copies the edge ids of one basis cycle into `buf` and stores the count
/// written in `*written`. Fails with `SB_ERR_ARGUMENT` when the buffer is
/// too small (query the size with [`sb_basis_cycle_edge_count`]).
///
/// # Safety
/// `buf` must point to at least `buf_len` writable `uint32_t`s.
#[no_mangle]
pub unsafe extern "C" fn sb_basis_cycle_edges(
    b: *const sb_basis,
    index: usize,
    buf: *mut u32,
    buf_len: usize,
    written: *mut usize,
) -> sb_status {
    if b.is_null() || buf.is_null() || written.is_null() {
        set_error("null argument");
        return sb_status::SB_ERR_ARGUMENT;
    }
    if index >= (*b).cycles.len() {
        set_error("cycle index out of range");
        return sb_status::SB_ERR_ARGUMENT;
    }
    let cycles = &(*b).cycles;
    let edges = &cycles[index].edges;
    if buf_len < edges.len() {
        set_error("buffer too small");
        return sb_status::SB_ERR_ARGUMENT;
    }
    ptr::copy_nonoverlapping(edges.as_ptr(), buf, edges.len());
    *written = edges.len();
    sb_status::SB_OK
}
