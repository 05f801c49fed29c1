//! C ABI over `nchroma`.
//!
//! Graphs are opaque `NcGraph` handles created by `nc_graph_new` or
//! `nc_graph_from_text` and released with `nc_graph_free`. Every fallible
//! call returns an `NcStatus`; on failure `nc_last_error` describes the most
//! recent error on the calling thread. Strings returned through `char **`
//! out-parameters are owned by the caller and released with `nc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nchroma::bounds::{self, AuditOutcome, BoundsError};
use nchroma::exact::{self, ExactError, SolveOptions, SolveResult};
use nchroma::graph::{Graph, GraphError};
use nchroma::io::{self, IoError};
use nchroma::palette::{self, Coloring, PaletteError};

/// Result codes shared by every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    Disconnected = 4,
    OracleCapExceeded = 5,
    /// The solver stopped at its node budget; the result is a lower bound.
    Incomplete = 6,
    InvalidColoring = 7,
    Parse = 8,
    Internal = 9,
}

/// Opaque graph handle.
pub struct NcGraph {
    graph: Graph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NcSolveResult {
    pub value: usize,
    pub nodes: u64,
    pub complete: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl ToString) {
    let text = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn fail(status: NcStatus, msg: impl ToString) -> NcStatus {
    set_error(msg);
    status
}

fn graph_status(e: &GraphError) -> NcStatus {
    match e {
        GraphError::Disconnected(_) => NcStatus::Disconnected,
        GraphError::EmptyGraph => NcStatus::InvalidArgument,
        _ => NcStatus::InvalidGraph,
    }
}

fn exact_status(e: &ExactError) -> NcStatus {
    match e {
        ExactError::OracleCapExceeded(_) => NcStatus::OracleCapExceeded,
        ExactError::Graph(g) => graph_status(g),
        _ => NcStatus::InvalidArgument,
    }
}

fn palette_status(e: &PaletteError) -> NcStatus {
    match e {
        PaletteError::InvalidColoring { .. } | PaletteError::NonPositiveColor(_) => {
            NcStatus::InvalidColoring
        }
        PaletteError::Graph(g) => graph_status(g),
        _ => NcStatus::InvalidArgument,
    }
}

fn bounds_status(e: &BoundsError) -> NcStatus {
    match e {
        BoundsError::Graph(g) => graph_status(g),
        BoundsError::Exact(x) => exact_status(x),
        BoundsError::Palette(p) => palette_status(p),
        BoundsError::SoundBoundViolated { .. } | BoundsError::PsiViolated { .. } => {
            NcStatus::Internal
        }
        _ => NcStatus::InvalidArgument,
    }
}

fn io_status(e: &IoError) -> NcStatus {
    match e {
        IoError::Graph(g) => graph_status(g),
        IoError::Coloring(p) => palette_status(p),
        _ => NcStatus::Parse,
    }
}

/// Runs `f`, turning a panic into `NcStatus::Internal`.
fn guard(f: impl FnOnce() -> NcStatus) -> NcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(NcStatus::Internal, "internal panic"),
    }
}

unsafe fn graph_ref<'a>(g: *const NcGraph) -> Option<&'a Graph> {
    g.as_ref().map(|h| &h.graph)
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> NcStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            NcStatus::Ok
        }
        Err(_) => fail(NcStatus::Internal, "output contains a NUL byte"),
    }
}

/// Message for the most recent failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn nc_status_str(status: NcStatus) -> *const c_char {
    let s: &'static CStr = match status {
        NcStatus::Ok => c"ok",
        NcStatus::NullPointer => c"null pointer",
        NcStatus::InvalidArgument => c"invalid argument",
        NcStatus::InvalidGraph => c"invalid graph",
        NcStatus::Disconnected => c"graph is disconnected",
        NcStatus::OracleCapExceeded => c"oracle vertex cap exceeded",
        NcStatus::Incomplete => c"search budget exhausted",
        NcStatus::InvalidColoring => c"invalid coloring",
        NcStatus::Parse => c"parse error",
        NcStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Builds a graph on `n` vertices from `m` edges given as `2m` endpoint ids.
///
/// # Safety
/// `edges` must point to `2 * m` readable values (it may be null when
/// `m == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_new(
    n: usize,
    edges: *const usize,
    m: usize,
    out: *mut *mut NcGraph,
) -> NcStatus {
    guard(|| {
        if out.is_null() || (edges.is_null() && m > 0) {
            return fail(NcStatus::NullPointer, "null argument");
        }
        let flat: &[usize] = if m == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(edges, 2 * m)
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        match Graph::build(n, &pairs) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(NcGraph { graph }));
                NcStatus::Ok
            }
            Err(e) => fail(graph_status(&e), e),
        }
    })
}

/// Parses graph JSON or a plain edge list.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_from_text(
    text: *const c_char,
    out: *mut *mut NcGraph,
) -> NcStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(NcStatus::NullPointer, "null argument");
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(NcStatus::Parse, "text is not UTF-8");
        };
        match io::parse_graph(s).and_then(|d| d.to_graph()) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(NcGraph { graph }));
                NcStatus::Ok
            }
            Err(e) => fail(io_status(&e), e),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_free(g: *mut NcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_order(g: *const NcGraph) -> usize {
    graph_ref(g).map_or(0, Graph::n)
}

/// Number of edges, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_edge_count(g: *const NcGraph) -> usize {
    graph_ref(g).map_or(0, Graph::edge_count)
}

unsafe fn report_solve(res: SolveResult, out: *mut NcSolveResult, witness: *mut u32) -> NcStatus {
    *out = NcSolveResult {
        value: res.value,
        nodes: res.nodes,
        complete: res.complete,
    };
    if !witness.is_null() {
        ptr::copy_nonoverlapping(res.witness.as_slice().as_ptr(), witness, res.witness.len());
    }
    if res.complete {
        NcStatus::Ok
    } else {
        fail(
            NcStatus::Incomplete,
            "node budget exhausted before optimality was proved",
        )
    }
}

/// Computes t_i with the branch-and-bound solver. A `node_budget` of 0 uses
/// the library default. On `NC_STATUS_INCOMPLETE` the result still holds the
/// best coloring found.
///
/// # Safety
/// `g` must be a live handle, `out` writable, and `witness` null or writable
/// for `nc_graph_order(g)` values.
#[no_mangle]
pub unsafe extern "C" fn nc_solve(
    g: *const NcGraph,
    i: usize,
    node_budget: u64,
    parallel: bool,
    out: *mut NcSolveResult,
    witness: *mut u32,
) -> NcStatus {
    guard(|| {
        let (Some(graph), false) = (graph_ref(g), out.is_null()) else {
            return fail(NcStatus::NullPointer, "null argument");
        };
        let opts = SolveOptions {
            node_budget: if node_budget == 0 {
                exact::DEFAULT_NODE_BUDGET
            } else {
                node_budget
            },
            parallel,
        };
        match exact::solve_ti_with(graph, i, opts) {
            Ok(res) => report_solve(res, out, witness),
            Err(e) => fail(exact_status(&e), e),
        }
    })
}

/// Computes t_i by exhaustive enumeration (at most 11 vertices).
///
/// # Safety
/// As for `nc_solve`.
#[no_mangle]
pub unsafe extern "C" fn nc_oracle(
    g: *const NcGraph,
    i: usize,
    out: *mut NcSolveResult,
    witness: *mut u32,
) -> NcStatus {
    guard(|| {
        let (Some(graph), false) = (graph_ref(g), out.is_null()) else {
            return fail(NcStatus::NullPointer, "null argument");
        };
        match exact::oracle_ti(graph, i) {
            Ok(res) => report_solve(res, out, witness),
            Err(e) => fail(exact_status(&e), e),
        }
    })
}

/// Checks a coloring. Returns `NC_STATUS_OK` when valid and
/// `NC_STATUS_INVALID_COLORING` otherwise; `violations` (nullable) receives
/// the number of vertices seeing more than `i` colors.
///
/// # Safety
/// `colors` must point to `len` readable values; `violations` must be null
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn nc_verify(
    g: *const NcGraph,
    colors: *const u32,
    len: usize,
    i: usize,
    violations: *mut usize,
) -> NcStatus {
    guard(|| {
        let (Some(graph), false) = (graph_ref(g), colors.is_null() && len > 0) else {
            return fail(NcStatus::NullPointer, "null argument");
        };
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(colors, len)
        };
        let verdict = Coloring::new(slice.to_vec()).and_then(|f| palette::verify(graph, &f, i));
        match verdict {
            Ok(v) => {
                if !violations.is_null() {
                    *violations = v.violations.len();
                }
                if v.valid {
                    NcStatus::Ok
                } else {
                    fail(
                        NcStatus::InvalidColoring,
                        format!("{} vertices see more than {i} colors", v.violations.len()),
                    )
                }
            }
            Err(e) => fail(palette_status(&e), e),
        }
    })
}

/// Writes the bound report as a JSON string.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_bounds_json(
    g: *const NcGraph,
    i: usize,
    out: *mut *mut c_char,
) -> NcStatus {
    guard(|| {
        let (Some(graph), false) = (graph_ref(g), out.is_null()) else {
            return fail(NcStatus::NullPointer, "null argument");
        };
        match bounds::report(graph, i) {
            Ok(rep) => put_string(out, serde_json::to_string(&rep).expect("report serializes")),
            Err(e) => fail(bounds_status(&e), e),
        }
    })
}

/// Audits one graph and writes the discrepancy CSV (header row included).
/// `label` (nullable) names the graph in the rows. Returns
/// `NC_STATUS_INCOMPLETE` without output when the exact value is out of reach.
///
/// # Safety
/// `g` must be a live handle, `label` null or NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nc_audit_csv(
    g: *const NcGraph,
    i: usize,
    label: *const c_char,
    out: *mut *mut c_char,
) -> NcStatus {
    guard(|| {
        let (Some(graph), false) = (graph_ref(g), out.is_null()) else {
            return fail(NcStatus::NullPointer, "null argument");
        };
        let name = if label.is_null() {
            String::from("graph")
        } else {
            CStr::from_ptr(label).to_string_lossy().into_owned()
        };
        match bounds::audit(graph, i, &name) {
            Ok(AuditOutcome::Conclusive { discrepancies, .. }) => {
                match io::discrepancies_csv(&discrepancies) {
                    Ok(text) => put_string(out, text),
                    Err(e) => fail(NcStatus::Internal, e),
                }
            }
            Ok(AuditOutcome::Inconclusive { .. }) => fail(
                NcStatus::Incomplete,
                "exact value not reached within budget",
            ),
            Err(e) => fail(bounds_status(&e), e),
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
