//! C ABI over `nbc-core`.
//!
//! Graphs and complexes are opaque handles created by `*_new` and
//! released by `*_free`. Every call returns an [`NbcStatus`]; on failure
//! the message is kept per thread and read with
//! [`nbc_last_error_message`]. Array outputs use caller buffers: pass the
//! capacity, receive the needed length, and get
//! `NBC_STATUS_BUFFER_TOO_SMALL` (with the length still written) when the
//! buffer is short.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use nbc_core::chain::{down_up_matrix, local_spectral_profile, spectral_gap, FacetComplex};
use nbc_core::cli::parse_graph_spec;
use nbc_core::graph::chromatic_polynomial;
use nbc_core::{ElementOrder, Error, Guard, Matroid, MatroidOracle, MultiGraph};

/// Pass as `truncate` to keep the full graphic matroid (`SIZE_MAX` in C).
pub const NBC_NO_TRUNCATION: usize = usize::MAX;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbcStatus {
    Ok = 0,
    Null = 1,
    Invalid = 2,
    Precondition = 3,
    SizeGuard = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

pub struct NbcGraph {
    inner: MultiGraph,
}

pub struct NbcComplex {
    inner: nbc_core::NbcComplex,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> NbcStatus {
    match e {
        Error::InvalidInput(_) => NbcStatus::Invalid,
        Error::Precondition(_) => NbcStatus::Precondition,
        Error::SizeGuard { .. } => NbcStatus::SizeGuard,
    }
}

/// Runs `f`, converting errors and panics into statuses.
fn guarded(f: impl FnOnce() -> Result<(), (NbcStatus, String)>) -> NbcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            NbcStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NbcStatus::Panic
        }
    }
}

fn core<T>(r: nbc_core::Result<T>) -> Result<T, (NbcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (NbcStatus, String) {
    (NbcStatus::Null, format!("{what} is null"))
}

fn guard(force: bool) -> Guard {
    if force {
        Guard::Force
    } else {
        Guard::Enforce
    }
}

/// # Safety
/// `ptr` must be null or point to `len` readable elements.
unsafe fn input<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], (NbcStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(ptr, len))
}

/// # Safety
/// `out` must be null or point to `cap` writable elements; `len` must be
/// valid for writes.
unsafe fn output<T: Copy>(values: &[T], out: *mut T, cap: usize, len: *mut usize) -> Result<(), (NbcStatus, String)> {
    if len.is_null() {
        return Err(null("length pointer"));
    }
    *len = values.len();
    if values.len() > cap {
        return Err((
            NbcStatus::BufferTooSmall,
            format!("buffer holds {cap}, need {}", values.len()),
        ));
    }
    if !values.is_empty() {
        if out.is_null() {
            return Err(null("output buffer"));
        }
        std::ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nbc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message (NUL-terminated) into
/// `buf`. `needed` receives the size including the terminator.
///
/// # Safety
/// `buf` must be null or hold `cap` bytes; `needed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_last_error_message(buf: *mut c_char, cap: usize, needed: *mut usize) -> NbcStatus {
    if needed.is_null() {
        return NbcStatus::Null;
    }
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    let bytes = msg.as_bytes();
    *needed = bytes.len() + 1;
    if cap < bytes.len() + 1 {
        return NbcStatus::BufferTooSmall;
    }
    if buf.is_null() {
        return NbcStatus::Null;
    }
    std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, bytes.len());
    *buf.add(bytes.len()) = 0;
    NbcStatus::Ok
}

/// `edges` holds `edge_count` pairs as `2·edge_count` vertex ids.
///
/// # Safety
/// `edges` must hold `2 * edge_count` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_graph_new(
    vertices: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut NbcGraph,
) -> NbcStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let flat = input(edges, edge_count.checked_mul(2).ok_or_else(|| null("edges"))?, "edges")?;
        let pairs = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        let g = core(MultiGraph::new(vertices, pairs))?;
        *out = Box::into_raw(Box::new(NbcGraph { inner: g }));
        Ok(())
    })
}

/// Builds a generator graph such as `"complete:4"` or `"bipartite:2:3"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_graph_named(spec: *const c_char, out: *mut *mut NbcGraph) -> NbcStatus {
    guarded(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = CStr::from_ptr(spec)
            .to_str()
            .map_err(|_| (NbcStatus::Invalid, "spec is not UTF-8".to_string()))?;
        let g = core(parse_graph_spec(spec))?;
        *out = Box::into_raw(Box::new(NbcGraph { inner: g }));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn nbc_graph_free(g: *mut NbcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_graph_size(g: *const NbcGraph, vertices: *mut usize, edges: *mut usize) -> NbcStatus {
    guarded(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        if vertices.is_null() || edges.is_null() {
            return Err(null("out"));
        }
        *vertices = g.inner.vertex_count();
        *edges = g.inner.edge_count();
        Ok(())
    })
}

/// NBC complex of the graph's matroid, optionally truncated. `order` is a
/// ranking of edge ids, smallest first; null means the identity.
///
/// # Safety
/// `g` must be a live handle; `order` must be null or hold `order_len`
/// values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_complex_new(
    g: *const NbcGraph,
    order: *const usize,
    order_len: usize,
    truncate: usize,
    out: *mut *mut NbcComplex,
) -> NbcStatus {
    guarded(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut matroid = Matroid::graphic(g.inner.clone());
        if truncate != NBC_NO_TRUNCATION {
            matroid = core(matroid.truncate(truncate))?;
        }
        let order = if order.is_null() {
            ElementOrder::identity(matroid.ground_size())
        } else {
            core(ElementOrder::new(input(order, order_len, "order")?.to_vec()))?
        };
        let x = core(nbc_core::NbcComplex::new(matroid, order))?;
        *out = Box::into_raw(Box::new(NbcComplex { inner: x }));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn nbc_complex_free(c: *mut NbcComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_complex_rank(c: *const NbcComplex, out: *mut usize) -> NbcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("complex"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = c.inner.rank();
        Ok(())
    })
}

/// Face numbers `n_0 .. n_rank`.
///
/// # Safety
/// `c` must be a live handle; `out` must hold `cap` values; `len` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_face_numbers(
    c: *const NbcComplex,
    force: bool,
    out: *mut u64,
    cap: usize,
    len: *mut usize,
) -> NbcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("complex"))?;
        let f = core(c.inner.face_numbers(guard(force)))?;
        output(f.counts(), out, cap, len)
    })
}

/// # Safety
/// `c` must be a live handle; `set` must hold `len` values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_is_nbc(c: *const NbcComplex, set: *const usize, len: usize, out: *mut bool) -> NbcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("complex"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = input(set, len, "set")?;
        core(c.inner.matroid().check_set(s))?;
        *out = core(c.inner.is_nbc(s))?;
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_count_bases(c: *const NbcComplex, force: bool, out: *mut u64) -> NbcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("complex"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = core(c.inner.enumerate_nbc_bases(guard(force)))?.len() as u64;
        Ok(())
    })
}

/// Spectral gap of the down-up walk on NBC bases.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_down_up_gap(c: *const NbcComplex, force: bool, out: *mut f64) -> NbcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("complex"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let fc = core(FacetComplex::from_nbc(&c.inner, guard(force)))?;
        *out = core(spectral_gap(&down_up_matrix(&fc)))?;
        Ok(())
    })
}

/// `γ_0 .. γ_{rank−2}` of the NBC complex.
///
/// # Safety
/// `c` must be a live handle; `out` must hold `cap` values; `len` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_local_profile(
    c: *const NbcComplex,
    force: bool,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> NbcStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("complex"))?;
        let fc = core(FacetComplex::from_nbc(&c.inner, guard(force)))?;
        let profile = core(local_spectral_profile(&fc, guard(force)))?;
        output(profile.gammas(), out, cap, len)
    })
}

/// Chromatic polynomial coefficients, constant term first.
///
/// # Safety
/// `g` must be a live handle; `out` must hold `cap` values; `len` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn nbc_chromatic_polynomial(
    g: *const NbcGraph,
    force: bool,
    out: *mut i64,
    cap: usize,
    len: *mut usize,
) -> NbcStatus {
    guarded(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        let chi = core(chromatic_polynomial(&g.inner, guard(force)))?;
        let coeffs: Vec<i64> = chi
            .coefficients()
            .iter()
            .map(|c| i64::try_from(c).map_err(|_| (NbcStatus::Invalid, format!("coefficient {c} exceeds int64"))))
            .collect::<Result<_, _>>()?;
        output(&coeffs, out, cap, len)
    })
}
