//! Code constructions. Every builder returns the matrix together with the
//! parameters it claims, so the result can be handed straight to `verify`.

mod bose_chowla;
mod concat;
pub mod fixtures;
mod lindstrom;
mod random;

pub use bose_chowla::{bose_chowla, construct5, is_prime, next_prime, sidon_search, ColumnIntegers};
pub use concat::{concat_scales, construct3, construct6, ConcatSpec};
pub use lindstrom::{construct9, subset_labels, ChainPolicy, LindstromSpec};
pub(crate) use random::floor_log2_ratio;
pub use random::{
    construct2, construct7, gamma_i, optimize_p0, pi_i, ratio_limit, ratio_m1_over_mi, rho, rows_construct2,
    rows_construct7, construct7_layout, LevelDistribution, RowCount,
};

use crate::error::{Error, Result};
use crate::model::{CodeMatrix, CodeParams};

fn scale_binary(cb: &CodeMatrix, q: u64, eta: &[u64]) -> Result<CodeMatrix> {
    if !cb.is_binary() {
        return Err(Error::NotBinary);
    }
    let eta1 = eta.get(1).copied().unwrap_or(0);
    if q < 2 || q - 1 < eta1 {
        return Err(Error::AlphabetTooSmall { q_minus_1: q.saturating_sub(1), needed: eta1 });
    }
    cb.scaled(q - 1, q)
}

/// `(q-1) * Cb` for a binary `d`-disjunct `Cb`; claims `[q;Q;eta;(1:d);e]`-SQ-disjunct.
pub fn construct1(cb: &CodeMatrix, d: usize, e: usize, q: u64, eta: &[u64]) -> Result<(CodeMatrix, CodeParams)> {
    let c = scale_binary(cb, q, eta)?;
    Ok((c, CodeParams::new(q, eta.to_vec(), 1, d, e)?))
}

/// `(q-1) * Cb` for a binary `d`-separable `Cb`; claims `[q;Q;eta;(1:d);e]`-SQ-separable.
pub fn construct4(cb: &CodeMatrix, d: usize, e: usize, q: u64, eta: &[u64]) -> Result<(CodeMatrix, CodeParams)> {
    let c = scale_binary(cb, q, eta)?;
    Ok((c, CodeParams::new(q, eta.to_vec(), 1, d, e)?))
}

/// Rounds every entry down to a multiple of `eta`.
pub fn reduce_alphabet(c: &CodeMatrix, eta: u64) -> Result<CodeMatrix> {
    if eta == 0 {
        return Err(Error::ThresholdNotIncreasing);
    }
    let rows: Vec<Vec<u32>> =
        c.to_rows().into_iter().map(|r| r.into_iter().map(|v| (v as u64 / eta * eta) as u32).collect()).collect();
    CodeMatrix::from_rows(c.q(), &rows)
}
