//! C ABI for `spectral-layers`.
//!
//! Graphs and decompositions are opaque handles created by `sl_*` functions
//! and released with the matching `*_free`. Every fallible call returns an
//! [`SlStatus`]; on failure [`sl_last_error_message`] describes the error
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spectral_layers::automorphism::{check_family_preserving, check_spherically_symmetric};
use spectral_layers::decomposition::{
    antitree_closed_form, reconcile, tree_cs_closed_form, tridiagonalize, Decomposition,
};
use spectral_layers::jacobi::{eigenvalues_tridiagonal, spectrum_union, JacobiMatrix};
use spectral_layers::lgf::{parse_lgf, serialize_lgf};
use spectral_layers::operator::dense_eigenvalues;
use spectral_layers::paths::{check_path_commuting, check_strongly_path_commuting};
use spectral_layers::{
    build_antitree, build_tree_complete_spheres, compress_operator, Error, LayeredGraph, OperatorKind,
    SequenceSpec,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    InvalidSequence = 4,
    InvalidGraph = 5,
    Parse = 6,
    OutOfRange = 7,
    ZeroDegree = 8,
    Overflow = 9,
    NumericalFailure = 10,
    NotAntitree = 11,
    InvalidArgument = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlOperatorKind {
    Adjacency = 0,
    Laplacian = 1,
    Normalized = 2,
}

impl From<SlOperatorKind> for OperatorKind {
    fn from(k: SlOperatorKind) -> Self {
        match k {
            SlOperatorKind::Adjacency => OperatorKind::Adjacency,
            SlOperatorKind::Laplacian => OperatorKind::Laplacian,
            SlOperatorKind::Normalized => OperatorKind::Normalized,
        }
    }
}

/// Verification properties accepted by [`sl_graph_check`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlCheck {
    PathCommuting = 0,
    StronglyPathCommuting = 1,
    SphericallySymmetric = 2,
    FamilyPreserving = 3,
}

/// Opaque rooted layered graph.
pub struct SlGraph {
    inner: LayeredGraph,
}

/// Opaque list of Jacobi blocks.
pub struct SlDecomposition {
    inner: Decomposition,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SlBlockInfo {
    pub start_sphere: usize,
    /// Length of the diagonal; the off-diagonal has `len - 1` entries.
    pub len: usize,
    pub multiplicity: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::SequenceExhausted { .. } | Error::InvalidSequence(_) => SlStatus::InvalidSequence,
            Error::InvalidGraph(_)
            | Error::SelfLoop { .. }
            | Error::DisconnectedVertex { .. }
            | Error::MismatchedSpheres(..) => SlStatus::InvalidGraph,
            Error::Parse { .. } => SlStatus::Parse,
            Error::OutOfRange(_) | Error::RadiusOutOfRange { .. } => SlStatus::OutOfRange,
            Error::ZeroDegree { .. } => SlStatus::ZeroDegree,
            Error::Overflow => SlStatus::Overflow,
            Error::ResidualViolation { .. } | Error::JointDiagonalization { .. } => SlStatus::NumericalFailure,
            Error::NotAntitree(_) => SlStatus::NotAntitree,
            Error::InvalidArgument(_) => SlStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: SlStatus, msg: &str) -> Failure {
    Failure(status, msg.to_owned())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SlStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(fail(SlStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(SlStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn read_spec(s: *const c_char) -> Result<SequenceSpec, Failure> {
    Ok(read_str(s)?.parse::<SequenceSpec>()?)
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(SlStatus::NullPointer, "null handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(SlStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Copies `values` into `buf` of capacity `len`, storing the required
/// length in `written` when it is non-null.
unsafe fn write_slice(values: &[f64], buf: *mut f64, len: usize, written: *mut usize) -> Result<(), Failure> {
    if !written.is_null() {
        written.write(values.len());
    }
    if values.len() > len {
        return Err(Failure(
            SlStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(fail(SlStatus::NullPointer, "null output buffer"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

fn boxed_graph(g: LayeredGraph) -> *mut SlGraph {
    Box::into_raw(Box::new(SlGraph { inner: g }))
}

fn boxed_decomposition(d: Decomposition) -> *mut SlDecomposition {
    Box::into_raw(Box::new(SlDecomposition { inner: d }))
}

/// Message for the last failed call on this thread, or null after a
/// successful one. Valid until the next `sl_*` call on the same thread.
#[no_mangle]
pub extern "C" fn sl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Antitree ball of radius `depth` with sphere sizes `spec`
/// (`"prefix;tail"`, e.g. `"1;2,3"`).
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_antitree(spec: *const c_char, depth: usize, out: *mut *mut SlGraph) -> SlStatus {
    guard(|| {
        let g = build_antitree(&read_spec(spec)?, depth)?;
        write_out(out, boxed_graph(g))
    })
}

/// Tree with complete spheres: branching `k`, complete-sphere bits `gamma`.
///
/// # Safety
/// `k` and `gamma` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_tree_cs(
    k: *const c_char,
    gamma: *const c_char,
    depth: usize,
    out: *mut *mut SlGraph,
) -> SlStatus {
    guard(|| {
        let g = build_tree_complete_spheres(&read_spec(k)?, &read_spec(gamma)?, depth)?;
        write_out(out, boxed_graph(g))
    })
}

/// Parses layered-graph text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_from_lgf(text: *const c_char, out: *mut *mut SlGraph) -> SlStatus {
    guard(|| {
        let g = parse_lgf(read_str(text)?)?;
        write_out(out, boxed_graph(g))
    })
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_free(g: *mut SlGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices in the ball, 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_vertex_count(g: *const SlGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.vertex_count())
}

/// Radius of the ball, 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_depth(g: *const SlGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.depth())
}

/// Serializes the graph; release the string with [`sl_string_free`].
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_to_lgf(g: *const SlGraph, out: *mut *mut c_char) -> SlStatus {
    guard(|| {
        let text = serialize_lgf(&deref(g)?.inner);
        let c = CString::new(text).map_err(|_| fail(SlStatus::InvalidGraph, "serialized text contains NUL"))?;
        write_out(out, c.into_raw())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes the compressed operator as a row-major `n x n` matrix,
/// `n = sl_graph_vertex_count(g)`. `written` receives `n * n`.
///
/// # Safety
/// `g` must be a live graph handle; `buf` must hold `len` doubles;
/// `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_compress(
    g: *const SlGraph,
    kind: SlOperatorKind,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> SlStatus {
    guard(|| {
        let m = compress_operator(&deref(g)?.inner, kind.into())?;
        let row_major: Vec<f64> = m.transpose().as_slice().to_vec();
        write_slice(&row_major, buf, len, written)
    })
}

/// Ascending eigenvalues of the compressed operator by dense eigensolve.
///
/// # Safety
/// As for [`sl_graph_compress`].
#[no_mangle]
pub unsafe extern "C" fn sl_graph_eigenvalues(
    g: *const SlGraph,
    kind: SlOperatorKind,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> SlStatus {
    guard(|| {
        let m = compress_operator(&deref(g)?.inner, kind.into())?;
        write_slice(&dense_eigenvalues(&m), buf, len, written)
    })
}

/// Runs one verification. `n_max` and `k_max` bound the path-count checks
/// and `n_max` the family-preserving check; both are clamped to the depth.
///
/// # Safety
/// `g` must be a live graph handle; `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_check(
    g: *const SlGraph,
    check: SlCheck,
    n_max: usize,
    k_max: usize,
    passed: *mut bool,
) -> SlStatus {
    guard(|| {
        let g = &deref(g)?.inner;
        let n = n_max.min(g.depth());
        let verdict = match check {
            SlCheck::PathCommuting => check_path_commuting(g, n, k_max)?.verdict,
            SlCheck::StronglyPathCommuting => check_strongly_path_commuting(g, n, k_max)?.verdict,
            SlCheck::SphericallySymmetric => check_spherically_symmetric(g).verdict,
            SlCheck::FamilyPreserving => check_family_preserving(g, n).verdict(),
        };
        write_out(passed, verdict.passed())
    })
}

/// Generic tridiagonalization of the compressed operator.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_decompose(
    g: *const SlGraph,
    kind: SlOperatorKind,
    tol: f64,
    out: *mut *mut SlDecomposition,
) -> SlStatus {
    guard(|| {
        let d = tridiagonalize(&deref(g)?.inner, kind.into(), tol)?;
        write_out(out, boxed_decomposition(d))
    })
}

/// Closed-form antitree decomposition.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_closed_form_antitree(
    spec: *const c_char,
    depth: usize,
    kind: SlOperatorKind,
    out: *mut *mut SlDecomposition,
) -> SlStatus {
    guard(|| {
        let d = antitree_closed_form(&read_spec(spec)?, depth, kind.into())?;
        write_out(out, boxed_decomposition(d))
    })
}

/// Closed-form Laplacian decomposition of a tree with complete spheres.
///
/// # Safety
/// `k` and `gamma` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_closed_form_tree_cs(
    k: *const c_char,
    gamma: *const c_char,
    depth: usize,
    out: *mut *mut SlDecomposition,
) -> SlStatus {
    guard(|| {
        let d = tree_cs_closed_form(&read_spec(k)?, &read_spec(gamma)?, depth)?;
        write_out(out, boxed_decomposition(d))
    })
}

/// # Safety
/// `d` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_decomposition_free(d: *mut SlDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of distinct blocks, 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn sl_decomposition_block_count(d: *const SlDecomposition) -> usize {
    d.as_ref().map_or(0, |d| d.inner.blocks.len())
}

/// # Safety
/// `d` must be a live decomposition handle; `info` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_decomposition_block(
    d: *const SlDecomposition,
    index: usize,
    info: *mut SlBlockInfo,
) -> SlStatus {
    guard(|| {
        let d = &deref(d)?.inner;
        let b = d
            .blocks
            .get(index)
            .ok_or_else(|| Failure(SlStatus::OutOfRange, format!("block {index} of {}", d.blocks.len())))?;
        write_out(
            info,
            SlBlockInfo {
                start_sphere: b.start_sphere,
                len: b.len(),
                multiplicity: b.multiplicity,
            },
        )
    })
}

/// Copies the off-diagonal `a` (`len - 1` values) and diagonal `b`
/// (`len` values) of one block.
///
/// # Safety
/// `d` must be a live decomposition handle; `a` must hold `a_len` and
/// `b` `b_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sl_decomposition_block_coefficients(
    d: *const SlDecomposition,
    index: usize,
    a: *mut f64,
    a_len: usize,
    b: *mut f64,
    b_len: usize,
) -> SlStatus {
    guard(|| {
        let d = &deref(d)?.inner;
        let blk = d
            .blocks
            .get(index)
            .ok_or_else(|| Failure(SlStatus::OutOfRange, format!("block {index} of {}", d.blocks.len())))?;
        write_slice(&blk.a, a, a_len, ptr::null_mut())?;
        write_slice(&blk.b, b, b_len, ptr::null_mut())
    })
}

/// Ascending eigenvalues of all blocks, each repeated by its multiplicity.
///
/// # Safety
/// `d` must be a live decomposition handle; `buf` must hold `len` doubles;
/// `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn sl_decomposition_spectrum(
    d: *const SlDecomposition,
    tol: f64,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> SlStatus {
    guard(|| {
        let table = spectrum_union(&deref(d)?.inner, tol)?;
        let total = usize::try_from(table.total()).map_err(|_| Failure::from(Error::Overflow))?;
        if total > len {
            if !written.is_null() {
                written.write(total);
            }
            return Err(Failure(
                SlStatus::BufferTooSmall,
                format!("buffer holds {len} values, {total} needed"),
            ));
        }
        write_slice(&table.values(), buf, len, written)
    })
}

/// Compares two decompositions up to block order, grouping and signs.
///
/// # Safety
/// `d1` and `d2` must be live handles; `passed` must be writable;
/// `max_deviation` may be null.
#[no_mangle]
pub unsafe extern "C" fn sl_reconcile(
    d1: *const SlDecomposition,
    d2: *const SlDecomposition,
    tol: f64,
    passed: *mut bool,
    max_deviation: *mut f64,
) -> SlStatus {
    guard(|| {
        let r = reconcile(&deref(d1)?.inner, &deref(d2)?.inner, tol);
        if !max_deviation.is_null() {
            max_deviation.write(r.max_deviation);
        }
        write_out(passed, r.verdict.passed())
    })
}

/// Eigenvalues of the Jacobi matrix with diagonal `b[0..n]` and
/// off-diagonal `a[0..n-1]` by Sturm bisection, written to `out[0..n]`.
///
/// # Safety
/// `b` and `out` must hold `n` doubles, `a` `n - 1` (may be null if
/// `n <= 1`).
#[no_mangle]
pub unsafe extern "C" fn sl_tridiagonal_eigenvalues(
    b: *const f64,
    a: *const f64,
    n: usize,
    tol: f64,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        if n == 0 {
            return Ok(());
        }
        if b.is_null() || out.is_null() || (n > 1 && a.is_null()) {
            return Err(fail(SlStatus::NullPointer, "null coefficient or output buffer"));
        }
        let bv = std::slice::from_raw_parts(b, n).to_vec();
        let av = if n > 1 {
            std::slice::from_raw_parts(a, n - 1).to_vec()
        } else {
            Vec::new()
        };
        let j = JacobiMatrix::new(bv, av)?;
        write_slice(&eigenvalues_tridiagonal(&j, tol), out, n, ptr::null_mut())
    })
}
