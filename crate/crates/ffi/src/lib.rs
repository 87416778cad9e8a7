//! C bindings for graph construction, label encoding, serialization and
//! queries.
//!
//! Every function returns a [`CfmlStatus`] and writes results through out
//! pointers. Handles are opaque and owned by the caller, who releases them
//! with the matching `_free` function. After a failure,
//! [`cfml_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cfml::codec::{FileFormat, LabelKind, LabelSet};
use cfml::dist::EncodeOptions;
use cfml::generators::GenSpec;
use cfml::recognize::check_cube_free_median;
use cfml::rout::encode_labels;
use cfml::{Error, PortedGraph, VertexId};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfmlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Graph text, generator spec or label file could not be parsed.
    Parse = 2,
    /// The graph is not a cube-free median graph.
    ClassViolation = 3,
    /// A vertex id is out of range.
    InvalidVertex = 4,
    /// The graph is too large for the exhaustive check.
    SizeGuard = 5,
    /// Decoding failed; the labels are inconsistent.
    Decode = 6,
    /// A bug was caught at the boundary.
    Panic = 7,
    Other = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfmlLabelKind {
    Distance = 0,
    Routing = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfmlFormat {
    Text = 0,
    Binary = 1,
}

/// An immutable graph with port numbering.
pub struct CfmlGraph(PortedGraph);

/// Distance or routing labels for all vertices of one graph.
pub struct CfmlLabels(LabelSet);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CfmlStatus {
    match e {
        _ if e.is_class_violation() => CfmlStatus::ClassViolation,
        Error::Parse { .. } | Error::Format(_) => CfmlStatus::Parse,
        Error::InvalidVertex(_) => CfmlStatus::InvalidVertex,
        Error::SizeGuard { .. } => CfmlStatus::SizeGuard,
        Error::NoCommonSeparator | Error::ForeignLabel | Error::SlotMismatch { .. } => CfmlStatus::Decode,
        _ => CfmlStatus::Other,
    }
}

/// Runs `f`, recording errors and turning panics into [`CfmlStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), CfmlStatus>) -> CfmlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CfmlStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            CfmlStatus::Panic
        }
    }
}

fn fail(e: Error) -> CfmlStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null() -> CfmlStatus {
    set_error("null argument".into());
    CfmlStatus::NullArgument
}

/// # Safety
/// `p` must be null or valid for reads of `T`.
unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, CfmlStatus> {
    p.as_ref().ok_or_else(null)
}

/// # Safety
/// `s` must be null or a NUL-terminated string.
unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, CfmlStatus> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(Error::Format("string is not UTF-8".into())))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn put<T>(out: *mut T, value: T) -> Result<(), CfmlStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn boxed_graph(g: PortedGraph) -> *mut CfmlGraph {
    Box::into_raw(Box::new(CfmlGraph(g)))
}

/// Message of the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cfml_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a graph from `edge_count` pairs stored flat in `edges`
/// (`u0 v0 u1 v1 ...`). Ports follow the edge order.
///
/// # Safety
/// `edges` must point to `2 * edge_count` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_graph_from_edges(
    vertex_count: u32,
    edges: *const u32,
    edge_count: usize,
    out: *mut *mut CfmlGraph,
) -> CfmlStatus {
    guard(|| {
        let flat = if edge_count == 0 {
            &[][..]
        } else if edges.is_null() {
            return Err(null());
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let pairs: Vec<(VertexId, VertexId)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        let g = PortedGraph::from_edges(vertex_count as usize, &pairs).map_err(fail)?;
        put(out, boxed_graph(g))
    })
}

/// Parses the text graph format (`n m` header, one `u v` edge per line).
///
/// # Safety
/// `source` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_graph_parse(source: *const c_char, out: *mut *mut CfmlGraph) -> CfmlStatus {
    guard(|| {
        let g = PortedGraph::parse(text(source)?).map_err(fail)?;
        put(out, boxed_graph(g))
    })
}

/// Builds a graph from a generator spec such as `grid:8x8`.
///
/// # Safety
/// `spec` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_graph_generate(spec: *const c_char, out: *mut *mut CfmlGraph) -> CfmlStatus {
    guard(|| {
        let spec: GenSpec = text(spec)?.parse().map_err(fail)?;
        put(out, boxed_graph(spec.build().map_err(fail)?))
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_graph_vertex_count(graph: *const CfmlGraph, out: *mut u32) -> CfmlStatus {
    guard(|| put(out, deref(graph)?.0.vertex_count() as u32))
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_graph_edge_count(graph: *const CfmlGraph, out: *mut usize) -> CfmlStatus {
    guard(|| put(out, deref(graph)?.0.edge_count()))
}

/// Neighbor of `v` behind `port` (1-based).
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_graph_neighbor(graph: *const CfmlGraph, v: u32, port: u32, out: *mut u32) -> CfmlStatus {
    guard(|| {
        let g = &deref(graph)?.0;
        g.check_vertex(v).map_err(fail)?;
        let w = g
            .neighbor_at(v, port)
            .ok_or_else(|| fail(Error::Format(format!("vertex {v} has no port {port}"))))?;
        put(out, w)
    })
}

/// Exhaustive class check for graphs up to `bound` vertices.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cfml_graph_check(graph: *const CfmlGraph, bound: usize) -> CfmlStatus {
    guard(|| check_cube_free_median(&deref(graph)?.0, bound).map_err(fail))
}

/// # Safety
/// `graph` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cfml_graph_free(graph: *mut CfmlGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Encodes labels of one kind for every vertex. With `skip_check` the
/// caller vouches that the graph is cube-free median.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_encode(
    graph: *const CfmlGraph,
    kind: CfmlLabelKind,
    skip_check: bool,
    out: *mut *mut CfmlLabels,
) -> CfmlStatus {
    guard(|| {
        let g = &deref(graph)?.0;
        let opts = EncodeOptions {
            skip_check,
            ..Default::default()
        };
        let (dist, rout) = encode_labels(g, &opts).map_err(fail)?;
        let set = match kind {
            CfmlLabelKind::Distance => LabelSet::Dist(dist),
            CfmlLabelKind::Routing => LabelSet::Rout(rout),
        };
        put(out, Box::into_raw(Box::new(CfmlLabels(set))))
    })
}

/// # Safety
/// `labels` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_labels_kind(labels: *const CfmlLabels, out: *mut CfmlLabelKind) -> CfmlStatus {
    guard(|| {
        let kind = match deref(labels)?.0.kind() {
            LabelKind::Dist => CfmlLabelKind::Distance,
            LabelKind::Rout => CfmlLabelKind::Routing,
        };
        put(out, kind)
    })
}

/// # Safety
/// `labels` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_labels_len(labels: *const CfmlLabels, out: *mut u32) -> CfmlStatus {
    guard(|| put(out, deref(labels)?.0.len() as u32))
}

/// Distance (distance labels) or port toward `v` (routing labels, 0 when
/// `u == v`).
///
/// # Safety
/// `labels` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_query(labels: *const CfmlLabels, u: u32, v: u32, out: *mut u32) -> CfmlStatus {
    guard(|| put(out, deref(labels)?.0.query(u, v).map_err(fail)?))
}

/// Serializes labels into a new buffer, released with [`cfml_buffer_free`].
///
/// # Safety
/// `labels` must be a live handle; `out_data` and `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_labels_save(
    labels: *const CfmlLabels,
    format: CfmlFormat,
    out_data: *mut *mut u8,
    out_len: *mut usize,
) -> CfmlStatus {
    guard(|| {
        let set = &deref(labels)?.0;
        if out_data.is_null() || out_len.is_null() {
            return Err(null());
        }
        let format = match format {
            CfmlFormat::Text => FileFormat::Text,
            CfmlFormat::Binary => FileFormat::Binary,
        };
        let bytes = set.save(format).into_boxed_slice();
        put(out_len, bytes.len())?;
        put(out_data, Box::into_raw(bytes).cast::<u8>())
    })
}

/// # Safety
/// `data`/`len` must come from one [`cfml_labels_save`] call, or be null.
#[no_mangle]
pub unsafe extern "C" fn cfml_buffer_free(data: *mut u8, len: usize) {
    if !data.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(data, len)));
    }
}

/// Loads a label file of either kind and format.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cfml_labels_load(data: *const u8, len: usize, out: *mut *mut CfmlLabels) -> CfmlStatus {
    guard(|| {
        let bytes = if len == 0 {
            &[][..]
        } else if data.is_null() {
            return Err(null());
        } else {
            std::slice::from_raw_parts(data, len)
        };
        let set = LabelSet::load(bytes).map_err(fail)?;
        put(out, Box::into_raw(Box::new(CfmlLabels(set))))
    })
}

/// # Safety
/// `labels` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cfml_labels_free(labels: *mut CfmlLabels) {
    if !labels.is_null() {
        drop(Box::from_raw(labels));
    }
}
