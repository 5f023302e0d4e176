//! C ABI for `bisat`.
//!
//! Graphs are opaque `BisatGraph` handles owned by the caller and released
//! with `bisat_graph_free`. Every fallible call returns a `BisatStatus`; on
//! failure the message is kept per thread and read back with
//! `bisat_last_error_message`. Strings returned by the library are released
//! with `bisat_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bisat::biclique::{greedy_saturate, is_saturated, is_weakly_saturated, Orientation, SatParams};
use bisat::bounds::{self, BoundKind};
use bisat::constructions::{build_family, build_k23_extremal, build_ordered_star, FamilySpec};
use bisat::search::{search_sat, search_wsat, SearchConfig};
use bisat::{BipartiteGraph, Error};

/// Opaque graph handle.
pub struct BisatGraph(BipartiteGraph);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BisatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    ParseError = 4,
    Infeasible = 5,
    Panic = 6,
}

/// Values accepted by the `orientation` parameters.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BisatOrientation {
    Unordered = 0,
    Ordered = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BisatBound {
    Ehm = 0,
    Ordered = 1,
    Conjecture = 2,
    Theorem = 3,
    Prop1 = 4,
    WsatEnvelope = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BisatStatus {
    match e {
        Error::VertexOutOfRange { .. } | Error::TooLarge { .. } => BisatStatus::OutOfRange,
        Error::Parse { .. } => BisatStatus::ParseError,
        Error::Infeasible { .. } | Error::CanonicalBudget { .. } => BisatStatus::Infeasible,
        _ => BisatStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), (BisatStatus, String)>) -> BisatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BisatStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BisatStatus::Panic
        }
    }
}

fn lift(e: Error) -> (BisatStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (BisatStatus, String) {
    (BisatStatus::NullPointer, format!("{what} is null"))
}

unsafe fn graph_ref<'a>(g: *const BisatGraph) -> Result<&'a BipartiteGraph, (BisatStatus, String)> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null("graph"))
}

unsafe fn graph_mut<'a>(
    g: *mut BisatGraph,
) -> Result<&'a mut BipartiteGraph, (BisatStatus, String)> {
    g.as_mut().map(|g| &mut g.0).ok_or_else(|| null("graph"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (BisatStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn boxed(g: BipartiteGraph) -> *mut BisatGraph {
    Box::into_raw(Box::new(BisatGraph(g)))
}

fn params(s: usize, t: usize, orientation: i32) -> Result<SatParams, (BisatStatus, String)> {
    let o = match orientation {
        x if x == BisatOrientation::Unordered as i32 => Orientation::Unordered,
        x if x == BisatOrientation::Ordered as i32 => Orientation::Ordered,
        x => {
            return Err((
                BisatStatus::InvalidArgument,
                format!("unknown orientation {x}"),
            ))
        }
    };
    SatParams::new(s, t, o).map_err(lift)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bisat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Empty graph with the given side sizes.
///
/// # Safety
/// `out` must be a valid pointer to write a handle to.
#[no_mangle]
pub unsafe extern "C" fn bisat_graph_new(
    n_left: usize,
    n_right: usize,
    out: *mut *mut BisatGraph,
) -> BisatStatus {
    guard(|| {
        let g = BipartiteGraph::new(n_left, n_right).map_err(lift)?;
        write_out(out, boxed(g))
    })
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bisat_graph_free(g: *mut BisatGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bisat_graph_clone(
    g: *const BisatGraph,
    out: *mut *mut BisatGraph,
) -> BisatStatus {
    guard(|| {
        let g = graph_ref(g)?.clone();
        write_out(out, boxed(g))
    })
}

/// Adds `uv`; `changed` (may be null) receives whether it was absent.
///
/// # Safety
/// `g` must be a live handle; `changed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_graph_add_edge(
    g: *mut BisatGraph,
    u: usize,
    v: usize,
    changed: *mut bool,
) -> BisatStatus {
    guard(|| {
        let c = graph_mut(g)?.add_edge(u, v).map_err(lift)?;
        if !changed.is_null() {
            changed.write(c);
        }
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `changed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_graph_remove_edge(
    g: *mut BisatGraph,
    u: usize,
    v: usize,
    changed: *mut bool,
) -> BisatStatus {
    guard(|| {
        let c = graph_mut(g)?.remove_edge(u, v).map_err(lift)?;
        if !changed.is_null() {
            changed.write(c);
        }
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_graph_has_edge(
    g: *const BisatGraph,
    u: usize,
    v: usize,
    out: *mut bool,
) -> BisatStatus {
    guard(|| {
        let e = graph_ref(g)?.has_edge(u, v).map_err(lift)?;
        write_out(out, e)
    })
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bisat_graph_edge_count(g: *const BisatGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bisat_graph_n_left(g: *const BisatGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n_left())
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bisat_graph_n_right(g: *const BisatGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n_right())
}

/// Parses bmat text.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_parse_bmat(
    text: *const c_char,
    out: *mut *mut BisatGraph,
) -> BisatStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (BisatStatus::ParseError, format!("text is not UTF-8: {e}")))?;
        let g = BipartiteGraph::parse_bmat(s).map_err(lift)?;
        write_out(out, boxed(g))
    })
}

/// bmat text of `g`; release with `bisat_string_free`.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_graph_to_bmat(
    g: *const BisatGraph,
    out: *mut *mut c_char,
) -> BisatStatus {
    guard(|| {
        let s = CString::new(graph_ref(g)?.to_bmat()).expect("bmat has no nul");
        write_out(out, s.into_raw())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bisat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_is_saturated(
    g: *const BisatGraph,
    s: usize,
    t: usize,
    orientation: i32,
    out: *mut bool,
) -> BisatStatus {
    guard(|| {
        let p = params(s, t, orientation)?;
        write_out(out, is_saturated(graph_ref(g)?, p).is_saturated())
    })
}

/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_is_weakly_saturated(
    g: *const BisatGraph,
    s: usize,
    t: usize,
    orientation: i32,
    out: *mut bool,
) -> BisatStatus {
    guard(|| {
        let p = params(s, t, orientation)?;
        write_out(out, is_weakly_saturated(graph_ref(g)?, p))
    })
}

/// Block family with default anchors and zero seeds.
///
/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_build_family(
    s: usize,
    t: usize,
    n: usize,
    l: usize,
    out: *mut *mut BisatGraph,
) -> BisatStatus {
    guard(|| {
        let spec = FamilySpec::new(s, t, n, l).map_err(lift)?;
        let g = build_family(&spec).map_err(lift)?;
        write_out(out, boxed(g))
    })
}

/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_build_ordered_star(
    s: usize,
    t: usize,
    n: usize,
    out: *mut *mut BisatGraph,
) -> BisatStatus {
    guard(|| {
        let g = build_ordered_star(s, t, n).map_err(lift)?;
        write_out(out, boxed(g))
    })
}

/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_build_k23_extremal(
    n: usize,
    out: *mut *mut BisatGraph,
) -> BisatStatus {
    guard(|| {
        let g = build_k23_extremal(n).map_err(lift)?;
        write_out(out, boxed(g))
    })
}

/// Greedy saturation of a copy-free seed graph into a new handle.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_greedy_saturate(
    g: *const BisatGraph,
    s: usize,
    t: usize,
    orientation: i32,
    seed: u64,
    out: *mut *mut BisatGraph,
) -> BisatStatus {
    guard(|| {
        let p = params(s, t, orientation)?;
        let h = greedy_saturate(graph_ref(g)?, p, seed).map_err(lift)?;
        write_out(out, boxed(h))
    })
}

unsafe fn search(
    weak: bool,
    n: usize,
    s: usize,
    t: usize,
    orientation: i32,
    minimum: *mut usize,
    witness: *mut *mut BisatGraph,
) -> BisatStatus {
    guard(|| {
        let p = params(s, t, orientation)?;
        let config = SearchConfig::default().with_witness_cap(Some(1));
        let o = if weak {
            search_wsat(n, p, &config)
        } else {
            search_sat(n, p, &config)
        }
        .map_err(lift)?;
        let m = o.minimum.ok_or_else(|| {
            (
                BisatStatus::Infeasible,
                "no graph on this host has the property".to_string(),
            )
        })?;
        write_out(minimum, m)?;
        if !witness.is_null() {
            let w = o
                .witnesses
                .into_iter()
                .next()
                .expect("minimum has a witness");
            witness.write(boxed(w));
        }
        Ok(())
    })
}

/// Exact saturation number on an `n x n` host. `witness` may be null;
/// otherwise it receives a new handle holding one minimum graph.
///
/// # Safety
/// `minimum` writable; `witness` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_search_sat(
    n: usize,
    s: usize,
    t: usize,
    orientation: i32,
    minimum: *mut usize,
    witness: *mut *mut BisatGraph,
) -> BisatStatus {
    search(false, n, s, t, orientation, minimum, witness)
}

/// Exact weak saturation number on an `n x n` host.
///
/// # Safety
/// `minimum` writable; `witness` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_search_wsat(
    n: usize,
    s: usize,
    t: usize,
    orientation: i32,
    minimum: *mut usize,
    witness: *mut *mut BisatGraph,
) -> BisatStatus {
    search(true, n, s, t, orientation, minimum, witness)
}

/// Closed-form value for a `BisatBound` kind; `in_range` (may be null) receives whether the inputs are
/// inside the range the formula is stated for.
///
/// # Safety
/// `value` writable; `in_range` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bisat_bound(
    kind: i32,
    s: usize,
    t: usize,
    n: usize,
    value: *mut i64,
    in_range: *mut bool,
) -> BisatStatus {
    guard(|| {
        let kind = [
            (BisatBound::Ehm, BoundKind::Ehm),
            (BisatBound::Ordered, BoundKind::Ordered),
            (BisatBound::Conjecture, BoundKind::Conjecture),
            (BisatBound::Theorem, BoundKind::Theorem),
            (BisatBound::Prop1, BoundKind::Prop1),
            (BisatBound::WsatEnvelope, BoundKind::WsatEnvelope),
        ]
        .into_iter()
        .find(|(b, _)| *b as i32 == kind)
        .map(|(_, k)| k)
        .ok_or_else(|| {
            (
                BisatStatus::InvalidArgument,
                format!("unknown bound {kind}"),
            )
        })?;
        let r = bounds::report(kind, s, t, n);
        write_out(value, r.value)?;
        if !in_range.is_null() {
            in_range.write(r.in_range);
        }
        Ok(())
    })
}
