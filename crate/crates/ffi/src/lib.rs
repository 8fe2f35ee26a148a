//! C interface to the `sqgt` library.
//!
//! Every call returns an [`SqgtStatus`]. Codes live behind opaque
//! [`SqgtCode`] handles that must be released with [`sqgt_code_free`].
//! Subject indices crossing this boundary are 1-based. After a failing call,
//! [`sqgt_last_error`] copies a human-readable message.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::ptr;

use sqgt::capacity::capacity_search;
use sqgt::cli::io::{format_matrix, parse_matrix};
use sqgt::construct::{construct2, construct3, construct5, construct9, ChainPolicy, ConcatSpec, LindstromSpec, RowCount};
use sqgt::decode::{
    bp_decode, decode_construct3, decode_construct9, decode_disjunct, decode_ml, select_threshold, select_topd, BpConfig,
};
use sqgt::model::{apply_noise, CodeMatrix, CodeParams, DefectiveSet, NoiseModel, Syndrome};
use sqgt::verify::{
    is_binary_disjunct_cgt, is_binary_separable_cgt, is_binary_separable_qgt, is_sq_disjunct, is_sq_separable,
};
use sqgt::Error;

/// Result of every call. Nonzero values other than `SQGT_BUFFER_TOO_SMALL`
/// name the library error that occurred.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqgtStatus {
    SqgtOk = 0,
    SqgtNullPointer,
    SqgtBufferTooSmall,
    SqgtBadArgument,
    SqgtPanic,
    SqgtThresholdNotIncreasing,
    SqgtSentinelTooSmall,
    SqgtBadRange,
    SqgtSumOutOfRange,
    SqgtLengthMismatch,
    SqgtTooFewColumns,
    SqgtExplosionGuard,
    SqgtNotBinary,
    SqgtAlphabetTooSmall,
    SqgtBadDistribution,
    SqgtNotPrime,
    SqgtOverflow,
    SqgtBadThreshold,
    SqgtDensityOutOfRange,
    SqgtBadKappa,
    SqgtInconsistentSpec,
    SqgtNonBinaryResidue,
    SqgtNoConsistentSet,
    SqgtNumericalUnderflow,
    SqgtBadD,
    SqgtBadPartition,
    SqgtBudgetExceeded,
    SqgtBadEta,
    SqgtEntryOutOfAlphabet,
    SqgtBadNoise,
    SqgtBadSubject,
    SqgtParseError,
    SqgtConfigError,
    SqgtIo,
}

impl From<&Error> for SqgtStatus {
    fn from(e: &Error) -> Self {
        use SqgtStatus::*;
        match e {
            Error::ThresholdNotIncreasing => SqgtThresholdNotIncreasing,
            Error::SentinelTooSmall { .. } => SqgtSentinelTooSmall,
            Error::BadRange { .. } => SqgtBadRange,
            Error::SumOutOfRange { .. } => SqgtSumOutOfRange,
            Error::LengthMismatch { .. } => SqgtLengthMismatch,
            Error::TooFewColumns { .. } => SqgtTooFewColumns,
            Error::ExplosionGuard { .. } => SqgtExplosionGuard,
            Error::NotBinary => SqgtNotBinary,
            Error::AlphabetTooSmall { .. } => SqgtAlphabetTooSmall,
            Error::BadDistribution { .. } => SqgtBadDistribution,
            Error::NotPrime(_) => SqgtNotPrime,
            Error::Overflow(_) => SqgtOverflow,
            Error::BadThreshold(_) => SqgtBadThreshold,
            Error::DensityOutOfRange(_) => SqgtDensityOutOfRange,
            Error::BadKappa(_) => SqgtBadKappa,
            Error::InconsistentSpec(_) => SqgtInconsistentSpec,
            Error::NonBinaryResidue { .. } => SqgtNonBinaryResidue,
            Error::NoConsistentSet => SqgtNoConsistentSet,
            Error::NumericalUnderflow(_) => SqgtNumericalUnderflow,
            Error::BadD { .. } => SqgtBadD,
            Error::BadPartition { .. } => SqgtBadPartition,
            Error::BudgetExceeded { .. } => SqgtBudgetExceeded,
            Error::BadEta { .. } => SqgtBadEta,
            Error::EntryOutOfAlphabet { .. } => SqgtEntryOutOfAlphabet,
            Error::BadNoise { .. } => SqgtBadNoise,
            Error::BadSubject { .. } => SqgtBadSubject,
            Error::ParseError { .. } => SqgtParseError,
            Error::ConfigError(_) => SqgtConfigError,
            Error::Io(_) => SqgtIo,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqgtAlgorithm {
    SqgtDecodeDisjunct = 0,
    SqgtDecodeConcat,
    SqgtDecodeLindstrom,
    SqgtDecodeMl,
    SqgtDecodeBpThreshold,
    SqgtDecodeBpTopD,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqgtProperty {
    SqgtSqDisjunct = 0,
    SqgtSqSeparable,
    SqgtBinDisjunct,
    SqgtBinSepCgt,
    SqgtBinSepQgt,
}

enum Layout {
    Plain,
    Concat(ConcatSpec),
    Lindstrom(Box<LindstromSpec>),
}

/// A test matrix, its claimed parameters and, for structured codes, what
/// their dedicated decoder needs.
pub struct SqgtCode {
    matrix: CodeMatrix,
    params: CodeParams,
    layout: Layout,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: SqgtStatus, message: String) -> SqgtStatus {
    LAST_ERROR.with(|m| *m.borrow_mut() = message);
    status
}

fn guard(f: impl FnOnce() -> Result<(), SqgtStatus>) -> SqgtStatus {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(Ok(())) => SqgtStatus::SqgtOk,
        Ok(Err(s)) => s,
        Err(_) => fail(SqgtStatus::SqgtPanic, "internal panic".into()),
    }
}

fn lib<T>(r: sqgt::Result<T>) -> Result<T, SqgtStatus> {
    r.map_err(|e| fail(SqgtStatus::from(&e), format!("{}: {e}", e.name())))
}

fn bad(msg: &str) -> SqgtStatus {
    fail(SqgtStatus::SqgtBadArgument, msg.into())
}

fn null(what: &str) -> SqgtStatus {
    fail(SqgtStatus::SqgtNullPointer, format!("{what} is null"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], SqgtStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn code_ref<'a>(code: *const SqgtCode) -> Result<&'a SqgtCode, SqgtStatus> {
    code.as_ref().ok_or_else(|| null("code"))
}

unsafe fn emit(code: SqgtCode, out: *mut *mut SqgtCode) -> Result<(), SqgtStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(code));
    Ok(())
}

unsafe fn write_out<T: Copy>(values: &[T], out: *mut T, cap: usize, out_len: *mut usize) -> Result<(), SqgtStatus> {
    if out_len.is_null() {
        return Err(null("out_len"));
    }
    *out_len = values.len();
    if values.len() > cap {
        return Err(fail(SqgtStatus::SqgtBufferTooSmall, format!("need room for {} values", values.len())));
    }
    if !values.is_empty() {
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
    Ok(())
}

/// Copies the message of the last failure on this thread, NUL-terminated and
/// truncated to `cap` bytes. Returns the untruncated length.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be null when `cap` is 0.
#[no_mangle]
pub unsafe extern "C" fn sqgt_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|m| {
        let msg = m.borrow();
        if cap > 0 && !buf.is_null() {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Parses the text matrix format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqgt_code_parse(text: *const c_char, out: *mut *mut SqgtCode) -> SqgtStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|_| bad("text is not UTF-8"))?;
        let (matrix, params) = lib(parse_matrix(text))?;
        emit(SqgtCode { matrix, params, layout: Layout::Plain }, out)
    })
}

/// Writes the code in the text matrix format. `*out_len` receives the byte
/// count without the terminating NUL.
///
/// # Safety
/// `code` must come from this library; `buf` must hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn sqgt_code_format(
    code: *const SqgtCode,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> SqgtStatus {
    guard(|| {
        let code = code_ref(code)?;
        let mut bytes = format_matrix(&code.matrix, &code.params).into_bytes();
        let len = bytes.len();
        bytes.push(0);
        let r = write_out(&bytes, buf as *mut u8, cap, out_len);
        *out_len = len;
        r
    })
}

/// # Safety
/// `code` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sqgt_code_free(code: *mut SqgtCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// # Safety
/// `code` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn sqgt_code_rows(code: *const SqgtCode) -> usize {
    code.as_ref().map_or(0, |c| c.matrix.rows())
}

/// # Safety
/// `code` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn sqgt_code_cols(code: *const SqgtCode) -> usize {
    code.as_ref().map_or(0, |c| c.matrix.cols())
}

/// Copies the matrix in row-major order.
///
/// # Safety
/// `out` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn sqgt_code_entries(
    code: *const SqgtCode,
    out: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> SqgtStatus {
    guard(|| {
        let code = code_ref(code)?;
        let flat: Vec<u32> = code.matrix.to_rows().concat();
        write_out(&flat, out, cap, out_len)
    })
}

/// Concatenated scaled copies of a binary `m x nb` base given in row-major order.
///
/// # Safety
/// `base` must hold `m * nb` values.
#[no_mangle]
pub unsafe extern "C" fn sqgt_construct_concat(
    base: *const u32,
    m: usize,
    nb: usize,
    q: u64,
    eta1: u64,
    d: usize,
    e: usize,
    out: *mut *mut SqgtCode,
) -> SqgtStatus {
    guard(|| {
        let entries = slice(base, m.checked_mul(nb).ok_or_else(|| bad("m * nb overflows"))?, "base")?;
        let cb = lib(CodeMatrix::from_row_major(2, m, nb, entries))?;
        let (matrix, spec, params) = lib(construct3(&cb, e, q, eta1, d))?;
        emit(SqgtCode { matrix, params, layout: Layout::Concat(spec) }, out)
    })
}

/// Generalized Lindstrom code with the default chains. `n = 0` keeps every column.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqgt_construct_lindstrom(
    kappa: u32,
    q: u64,
    eta1: u64,
    n: usize,
    out: *mut *mut SqgtCode,
) -> SqgtStatus {
    guard(|| {
        let keep = (n > 0).then_some(n);
        let (matrix, spec, params) = lib(construct9(kappa, q, eta1, &ChainPolicy::default(), keep))?;
        emit(SqgtCode { matrix, params, layout: Layout::Lindstrom(Box::new(spec)) }, out)
    })
}

/// Random SQ-disjunct code with `m` rows drawn from `seed`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqgt_construct_random(
    n: usize,
    d: usize,
    e: usize,
    q: u64,
    eta1: u64,
    m: usize,
    seed: u64,
    out: *mut *mut SqgtCode,
) -> SqgtStatus {
    guard(|| {
        let (matrix, params) = lib(construct2(n, d, e, q, eta1, None, RowCount::Fixed(m), seed))?;
        emit(SqgtCode { matrix, params, layout: Layout::Plain }, out)
    })
}

/// Exactly-`d` separable code from a Bose-Chowla set.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqgt_construct_bose_chowla(
    n: usize,
    d: usize,
    q: u64,
    eta1: u64,
    out: *mut *mut SqgtCode,
) -> SqgtStatus {
    guard(|| {
        let (matrix, params, _) = lib(construct5(n, d, q, eta1))?;
        emit(SqgtCode { matrix, params, layout: Layout::Plain }, out)
    })
}

/// Test outcomes for the 1-based `defectives`, passed through the noise
/// channel when either rate is positive.
///
/// # Safety
/// `defectives` must hold `k` values and `out` `cap` values.
#[no_mangle]
pub unsafe extern "C" fn sqgt_encode(
    code: *const SqgtCode,
    defectives: *const usize,
    k: usize,
    gamma_p: f64,
    gamma_n: f64,
    seed: u64,
    out: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> SqgtStatus {
    guard(|| {
        let code = code_ref(code)?;
        let set = lib(DefectiveSet::from_one_based(slice(defectives, k, "defectives")?, code.matrix.cols()))?;
        let y = lib(code.matrix.syndrome(set.indices(), &code.params.eta))?;
        let nm = lib(NoiseModel::new(gamma_p, gamma_n))?;
        let z = if nm.is_noiseless() { y } else { apply_noise(&y, code.params.levels(), &nm, seed) };
        write_out(z.values(), out, cap, out_len)
    })
}

/// Decodes `z` into 1-based subject indices. `d` bounds the set size for
/// ML and BP; 0 means the code's own bound. The noise rates only affect
/// ML and BP.
///
/// # Safety
/// `z` must hold `len` values and `out` `cap` values.
#[no_mangle]
pub unsafe extern "C" fn sqgt_decode(
    code: *const SqgtCode,
    algorithm: SqgtAlgorithm,
    z: *const u32,
    len: usize,
    d: usize,
    gamma_p: f64,
    gamma_n: f64,
    out: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> SqgtStatus {
    guard(|| {
        let code = code_ref(code)?;
        let z = Syndrome(slice(z, len, "z")?.to_vec());
        let d = if d == 0 { code.params.u } else { d };
        let nm = lib(NoiseModel::new(gamma_p, gamma_n))?;
        let (c, p) = (&code.matrix, &code.params);
        let set = match (algorithm, &code.layout) {
            (SqgtAlgorithm::SqgtDecodeDisjunct, _) => lib(decode_disjunct(c, p, &z))?,
            (SqgtAlgorithm::SqgtDecodeConcat, Layout::Concat(spec)) => lib(decode_construct3(spec, p, &z))?,
            (SqgtAlgorithm::SqgtDecodeLindstrom, Layout::Lindstrom(spec)) => lib(decode_construct9(spec, &z))?,
            (SqgtAlgorithm::SqgtDecodeConcat | SqgtAlgorithm::SqgtDecodeLindstrom, _) => {
                return Err(fail(SqgtStatus::SqgtInconsistentSpec, "code was not built by that construction".into()))
            }
            (SqgtAlgorithm::SqgtDecodeMl, _) => lib(decode_ml(c, &p.eta, &z, p.l.min(d), d, &nm))?,
            (SqgtAlgorithm::SqgtDecodeBpThreshold | SqgtAlgorithm::SqgtDecodeBpTopD, _) => {
                let mg = lib(bp_decode(c, &p.eta, &z, d, &nm, &BpConfig::default()))?;
                if algorithm == SqgtAlgorithm::SqgtDecodeBpTopD {
                    lib(select_topd(&mg, d))?
                } else {
                    select_threshold(&mg)
                }
            }
        };
        write_out(&set.one_based(), out, cap, out_len)
    })
}

/// Belief-propagation marginals, one per subject.
///
/// # Safety
/// `z` must hold `len` values and `out` `cap` values.
#[no_mangle]
pub unsafe extern "C" fn sqgt_bp_marginals(
    code: *const SqgtCode,
    z: *const u32,
    len: usize,
    d: usize,
    gamma_p: f64,
    gamma_n: f64,
    iterations: usize,
    out: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> SqgtStatus {
    guard(|| {
        let code = code_ref(code)?;
        let z = Syndrome(slice(z, len, "z")?.to_vec());
        let nm = lib(NoiseModel::new(gamma_p, gamma_n))?;
        let cfg = BpConfig { max_iter: iterations, ..BpConfig::default() };
        let mg = lib(bp_decode(&code.matrix, &code.params.eta, &z, d, &nm, &cfg))?;
        write_out(&mg.probs, out, cap, out_len)
    })
}

/// Exhaustively checks `property` at the code's claimed parameters.
/// `*passed` is 1 on success and 0 when a witness exists.
///
/// # Safety
/// `passed` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqgt_verify(code: *const SqgtCode, property: SqgtProperty, passed: *mut i32) -> SqgtStatus {
    guard(|| {
        let code = code_ref(code)?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let (c, p) = (&code.matrix, &code.params);
        let verdict = lib(match property {
            SqgtProperty::SqgtSqDisjunct => is_sq_disjunct(c, p),
            SqgtProperty::SqgtSqSeparable => is_sq_separable(c, p),
            SqgtProperty::SqgtBinDisjunct => is_binary_disjunct_cgt(c, p.u, p.e),
            SqgtProperty::SqgtBinSepCgt => is_binary_separable_cgt(c, p.u, p.e),
            SqgtProperty::SqgtBinSepQgt => is_binary_separable_qgt(c, p.u, p.e),
        })?;
        *passed = verdict.is_pass() as i32;
        Ok(())
    })
}

/// Best objective found by the capacity search.
///
/// # Safety
/// `alpha` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqgt_capacity(d: usize, q: usize, levels: usize, grid_step: f64, alpha: *mut f64) -> SqgtStatus {
    guard(|| {
        if alpha.is_null() {
            return Err(null("alpha"));
        }
        *alpha = lib(capacity_search(d, q, levels, grid_step))?.alpha;
        Ok(())
    })
}
