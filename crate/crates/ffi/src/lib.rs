//! C ABI over `qnc-core`.
//!
//! Every fallible function returns a [`QncStatus`] and writes results
//! through out-pointers. On failure the message is kept per thread and can
//! be read with [`qnc_last_error_message`]. Sources and search results are
//! opaque handles released with their `_free` function.
//!
//! Decimal strings are written NUL-terminated. If `cap` is too small the
//! call returns `QNC_STATUS_BUFFER_TOO_SMALL` and stores the length needed
//! (without the terminator) in `*len`; pass `buf = NULL, cap = 0` to query.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigUint;
use qnc_core::codec::{measured_rate, shannon_entropy_bits};
use qnc_core::pipeline::{run_on_source, PipelineParams};
use qnc_core::search::{exact_solutions, minimal_block_length, waste, SearchRanges, SolutionRow};
use qnc_core::source::{bell_source, load_source, parse_source, DecomposableSource};
use qnc_core::split::entropy_decomposition;
use qnc_core::typical::{d_lambda, fidelity_majority, SiteWeights};
use qnc_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QncStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    TooLarge = 5,
    Infeasible = 6,
    BufferTooSmall = 7,
    OracleMismatch = 8,
    Internal = 9,
}

impl From<&Error> for QncStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Io { .. } => QncStatus::Io,
            Error::SourceFile { .. } => QncStatus::Parse,
            Error::TooLarge(_) | Error::DimensionOutOfRange(_) => QncStatus::TooLarge,
            Error::Infeasible { .. } => QncStatus::Infeasible,
            Error::OracleMismatch(_) => QncStatus::OracleMismatch,
            _ => QncStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: QncStatus, msg: impl Into<String>) -> QncStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), QncStatus>) -> QncStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QncStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(QncStatus::Internal, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, QncStatus>;
}

impl<T> OrStatus<T> for qnc_core::Result<T> {
    fn or_status(self) -> Result<T, QncStatus> {
        self.map_err(|e| fail(QncStatus::from(&e), e.to_string()))
    }
}

fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, QncStatus> {
    // SAFETY: caller passes either NULL or a valid, aligned, writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| fail(QncStatus::NullPointer, format!("{name} is NULL")))
}

fn c_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, QncStatus> {
    if p.is_null() {
        return Err(fail(QncStatus::NullPointer, format!("{name} is NULL")));
    }
    // SAFETY: non-null, and the caller guarantees NUL termination.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| fail(QncStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

fn write_decimal(value: &BigUint, buf: *mut c_char, cap: usize, len: *mut usize) -> Result<(), QncStatus> {
    let text = value.to_string();
    *out(len, "len")? = text.len();
    if cap <= text.len() {
        return Err(fail(QncStatus::BufferTooSmall, format!("need {} bytes plus terminator", text.len())));
    }
    if buf.is_null() {
        return Err(fail(QncStatus::NullPointer, "buf is NULL"));
    }
    // SAFETY: buf holds at least cap > text.len() bytes.
    unsafe {
        std::ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
        *buf.add(text.len()) = 0;
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qnc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `cap > 0`). Returns the full message length.
///
/// # Safety
/// `buf` must be NULL or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qnc_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Typical-subspace dimension `D_Λ(d, N)` as a decimal string.
///
/// # Safety
/// `buf` must be NULL or point to `cap` writable bytes; `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnc_d_lambda(d: u32, n: u32, buf: *mut c_char, cap: usize, len: *mut usize) -> QncStatus {
    guard(|| write_decimal(&d_lambda(d, n).or_status()?, buf, cap, len))
}

/// Smallest `M` with `q^M ≥ D_Λ(d, N)`.
///
/// # Safety
/// `m` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qnc_minimal_block_length(d: u32, n: u32, q: u32, m: *mut u32) -> QncStatus {
    guard(|| {
        let dl = d_lambda(d, n).or_status()?;
        *out(m, "m")? = minimal_block_length(&dl, q).or_status()?;
        Ok(())
    })
}

/// Relative excess capacity `(q^M - D_Λ) / D_Λ`. Fails with
/// `QNC_STATUS_INFEASIBLE` when `q^M < D_Λ`.
///
/// # Safety
/// `excess` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qnc_waste(d: u32, n: u32, q: u32, m: u32, excess: *mut f64) -> QncStatus {
    guard(|| {
        let dl = d_lambda(d, n).or_status()?;
        *out(excess, "excess")? = waste(&dl, q, m).or_status()?;
        Ok(())
    })
}

/// Majority-subspace fidelity for per-site weights `q_s` (most probable
/// retained state), `q_r[0..r_len]` (other retained states) and
/// `q_ext[0..ext_len]` (states outside the retained span).
///
/// # Safety
/// `q_r` and `q_ext` must point to the given number of doubles (or be NULL
/// when the length is 0); `fidelity` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnc_fidelity_majority(
    q_s: f64,
    q_r: *const f64,
    r_len: usize,
    q_ext: *const f64,
    ext_len: usize,
    n: u32,
    fidelity: *mut f64,
) -> QncStatus {
    guard(|| {
        let slice = |p: *const f64, len: usize, name: &str| -> Result<Vec<f64>, QncStatus> {
            if len == 0 {
                Ok(Vec::new())
            } else if p.is_null() {
                Err(fail(QncStatus::NullPointer, format!("{name} is NULL")))
            } else {
                Ok(std::slice::from_raw_parts(p, len).to_vec())
            }
        };
        let w = SiteWeights::new(q_s, slice(q_r, r_len, "q_r")?, slice(q_ext, ext_len, "q_ext")?).or_status()?;
        *out(fidelity, "fidelity")? = fidelity_majority(&w, n).or_status()?;
        Ok(())
    })
}

/// Binary entropy `H(P1)` in bits.
///
/// # Safety
/// `bits` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qnc_shannon_entropy_bits(p1: f64, bits: *mut f64) -> QncStatus {
    guard(|| {
        *out(bits, "bits")? = shannon_entropy_bits(p1).or_status()?;
        Ok(())
    })
}

/// Expected Huffman bits per membership bit for blocks of `k` bits.
///
/// # Safety
/// `rate` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qnc_measured_rate(p1: f64, k: u32, rate: *mut f64) -> QncStatus {
    guard(|| {
        *out(rate, "rate")? = measured_rate(p1, k).or_status()?;
        Ok(())
    })
}

/// A two-subspace source. Opaque.
pub struct QncSource(DecomposableSource);

fn put_source(src: DecomposableSource, handle: *mut *mut QncSource) -> Result<(), QncStatus> {
    *out(handle, "handle")? = Box::into_raw(Box::new(QncSource(src)));
    Ok(())
}

/// Loads a decomposable source from a JSON file.
///
/// # Safety
/// `path` must be NUL-terminated; `handle` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnc_source_load(path: *const c_char, handle: *mut *mut QncSource) -> QncStatus {
    guard(|| {
        let src = load_source(c_str(path, "path")?).and_then(|s| s.into_decomposable()).or_status()?;
        put_source(src, handle)
    })
}

/// Parses a decomposable source from JSON text.
///
/// # Safety
/// `json` must be NUL-terminated; `handle` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnc_source_parse(json: *const c_char, handle: *mut *mut QncSource) -> QncStatus {
    guard(|| {
        let src = parse_source(c_str(json, "json")?, "<ffi>").and_then(|s| s.into_decomposable()).or_status()?;
        put_source(src, handle)
    })
}

/// Two-qubit Bell source: the singlet with probability `p1`, the three
/// triplet Bell states sharing `1 - p1` equally.
///
/// # Safety
/// `handle` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnc_source_bell(p1: f64, handle: *mut *mut QncSource) -> QncStatus {
    guard(|| put_source(bell_source(p1).or_status()?, handle))
}

/// # Safety
/// `handle` must be NULL or come from a `qnc_source_*` constructor, and
/// must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qnc_source_free(handle: *mut QncSource) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

fn source<'a>(handle: *const QncSource) -> Result<&'a DecomposableSource, QncStatus> {
    // SAFETY: caller passes NULL or a live handle.
    unsafe { handle.as_ref() }
        .map(|s| &s.0)
        .ok_or_else(|| fail(QncStatus::NullPointer, "source handle is NULL"))
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QncEntropyReport {
    pub p1: f64,
    pub p2: f64,
    pub s_total: f64,
    pub h_x: f64,
    pub s1: f64,
    pub s2: f64,
    pub residual: f64,
}

/// # Safety
/// `handle` must be live; `report` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnc_source_entropy(handle: *const QncSource, report: *mut QncEntropyReport) -> QncStatus {
    guard(|| {
        let r = entropy_decomposition(source(handle)?);
        *out(report, "report")? = QncEntropyReport {
            p1: r.p1,
            p2: r.p2,
            s_total: r.s_total,
            h_x: r.h_x,
            s1: r.s1,
            s2: r.s2,
            residual: r.residual,
        };
        Ok(())
    })
}

/// Scalar results of a pipeline run.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QncPipelineSummary {
    pub n1: u64,
    pub n2: u64,
    pub h_x: f64,
    pub classical_bits_per_signal: f64,
    pub realized_bits_per_signal: f64,
    pub stream_bytes: u64,
    pub round_trip_ok: bool,
    pub s_rho: f64,
    pub m1: u32,
    pub m2: u32,
    pub fidelity1: f64,
    pub fidelity2: f64,
    pub quantum_qubits: f64,
    pub total_per_signal: f64,
}

/// Samples `n` signals with `seed` and runs the hybrid accounting with
/// classical block length `k` and q-ary carriers.
///
/// # Safety
/// `handle` must be live; `summary` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnc_source_run_pipeline(
    handle: *const QncSource,
    n: u64,
    k: u32,
    q: u32,
    seed: u64,
    summary: *mut QncPipelineSummary,
) -> QncStatus {
    guard(|| {
        let n = usize::try_from(n).map_err(|_| fail(QncStatus::TooLarge, "n exceeds address space"))?;
        let r = run_on_source(source(handle)?, &PipelineParams { n, k, q, seed }).or_status()?;
        *out(summary, "summary")? = QncPipelineSummary {
            n1: r.n1 as u64,
            n2: r.n2 as u64,
            h_x: r.h_x_bound,
            classical_bits_per_signal: r.classical_bits_per_signal,
            realized_bits_per_signal: r.realized_bits_per_signal,
            stream_bytes: r.stream_bytes as u64,
            round_trip_ok: r.round_trip_ok,
            s_rho: r.s_rho,
            m1: r.subspaces[0].m,
            m2: r.subspaces[1].m,
            fidelity1: r.subspaces[0].fidelity,
            fidelity2: r.subspaces[1].fidelity,
            quantum_qubits: r.quantum_qubits,
            total_per_signal: r.total_per_signal,
        };
        Ok(())
    })
}

/// Inclusive search bounds.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QncSearchRanges {
    pub d_min: u32,
    pub d_max: u32,
    pub n_min: u32,
    pub n_max: u32,
    pub q_min: u32,
    pub q_max: u32,
    pub m_min: u32,
    pub m_max: u32,
}

impl From<SearchRanges> for QncSearchRanges {
    fn from(r: SearchRanges) -> Self {
        QncSearchRanges {
            d_min: r.d_min,
            d_max: r.d_max,
            n_min: r.n_min,
            n_max: r.n_max,
            q_min: r.q_min,
            q_max: r.q_max,
            m_min: r.m_min,
            m_max: r.m_max,
        }
    }
}

/// Default bounds: `2 ≤ d, q, M ≤ 32`, `3 ≤ N ≤ 32`.
#[no_mangle]
pub extern "C" fn qnc_search_ranges_default() -> QncSearchRanges {
    SearchRanges::default().into()
}

/// Rows of a zero-waste search. Opaque.
pub struct QncSolutionList(Vec<SolutionRow>);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QncSolution {
    pub d: u32,
    pub n: u32,
    pub q: u32,
    pub m: u32,
}

/// All `(d, N, q, M)` in range with `q^M = D_Λ(d, N)`, sorted.
///
/// # Safety
/// `ranges` and `handle` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnc_search(ranges: *const QncSearchRanges, handle: *mut *mut QncSolutionList) -> QncStatus {
    guard(|| {
        let r = *ranges.as_ref().ok_or_else(|| fail(QncStatus::NullPointer, "ranges is NULL"))?;
        let ranges = SearchRanges {
            d_min: r.d_min,
            d_max: r.d_max,
            n_min: r.n_min,
            n_max: r.n_max,
            q_min: r.q_min,
            q_max: r.q_max,
            m_min: r.m_min,
            m_max: r.m_max,
        };
        let rows = exact_solutions(&ranges).or_status()?;
        *out(handle, "handle")? = Box::into_raw(Box::new(QncSolutionList(rows)));
        Ok(())
    })
}

/// Number of rows; 0 for NULL.
///
/// # Safety
/// `list` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn qnc_solution_list_len(list: *const QncSolutionList) -> usize {
    list.as_ref().map_or(0, |l| l.0.len())
}

fn row<'a>(list: *const QncSolutionList, index: usize) -> Result<&'a SolutionRow, QncStatus> {
    // SAFETY: caller passes NULL or a live handle.
    let l = unsafe { list.as_ref() }.ok_or_else(|| fail(QncStatus::NullPointer, "list is NULL"))?;
    l.0.get(index)
        .ok_or_else(|| fail(QncStatus::InvalidArgument, format!("index {index} out of range 0..{}", l.0.len())))
}

/// # Safety
/// `list` must be live; `solution` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnc_solution_list_get(
    list: *const QncSolutionList,
    index: usize,
    solution: *mut QncSolution,
) -> QncStatus {
    guard(|| {
        let r = row(list, index)?;
        *out(solution, "solution")? = QncSolution { d: r.d, n: r.n, q: r.q, m: r.m };
        Ok(())
    })
}

/// `D_Λ` of row `index` as a decimal string.
///
/// # Safety
/// `list` must be live; see [`qnc_d_lambda`] for the buffer contract.
#[no_mangle]
pub unsafe extern "C" fn qnc_solution_list_d_lambda(
    list: *const QncSolutionList,
    index: usize,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> QncStatus {
    guard(|| write_decimal(&row(list, index)?.d_lambda, buf, cap, len))
}

/// # Safety
/// `list` must be NULL or come from [`qnc_search`], and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn qnc_solution_list_free(list: *mut QncSolutionList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    fn last_error() -> String {
        let mut buf = [0 as c_char; 256];
        unsafe { qnc_last_error_message(buf.as_mut_ptr(), buf.len()) };
        unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn decimal_buffer_contract() {
        let mut len = 0usize;
        let s = unsafe { qnc_d_lambda(4, 4, ptr::null_mut(), 0, &mut len) };
        assert_eq!((s, len), (QncStatus::BufferTooSmall, 2));
        let mut buf = [0 as c_char; 3];
        let s = unsafe { qnc_d_lambda(4, 4, buf.as_mut_ptr(), buf.len(), &mut len) };
        assert_eq!(s, QncStatus::Ok);
        assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "49");
    }

    #[test]
    fn errors_set_message() {
        let mut len = 0usize;
        let s = unsafe { qnc_d_lambda(1, 4, ptr::null_mut(), 0, &mut len) };
        assert_eq!(s, QncStatus::InvalidArgument);
        assert!(last_error().contains("at least 2"), "{}", last_error());
        let s = unsafe { qnc_measured_rate(0.5, 2, ptr::null_mut()) };
        assert_eq!(s, QncStatus::NullPointer);
        let mut w = 0.0;
        assert_eq!(unsafe { qnc_waste(2, 5, 2, 3, &mut w) }, QncStatus::Infeasible);
        assert_eq!(unsafe { qnc_measured_rate(0.5, 2, &mut w) }, QncStatus::Ok);
        assert_eq!(last_error(), "");
    }

    #[test]
    fn status_codes_follow_error_kind() {
        let mut h = ptr::null_mut();
        let path = CString::new("/nonexistent/source.json").unwrap();
        assert_eq!(unsafe { qnc_source_load(path.as_ptr(), &mut h) }, QncStatus::Io);
        let bad = CString::new("{").unwrap();
        assert_eq!(unsafe { qnc_source_parse(bad.as_ptr(), &mut h) }, QncStatus::Parse);
        assert!(h.is_null());
    }

    #[test]
    fn version_is_crate_version() {
        let v = unsafe { CStr::from_ptr(qnc_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
