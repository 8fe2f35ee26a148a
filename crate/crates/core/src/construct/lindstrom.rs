//! Generalized Lindstrom codes over a `q'`-ary alphabet.
//!
//! Rows and blocks are both labelled by the nonempty subsets of
//! `{1, ..., kappa}`, stored as bit masks (bit `b` is element `b + 1`).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{CodeMatrix, CodeParams};

pub const MAX_KAPPA: u32 = 10;

/// How the nested sets `T_{i,k}` are picked for the chain columns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ChainPolicy {
    /// Drop the largest remaining element at every step.
    #[default]
    DropLargest,
    DropSmallest,
    /// Chains keyed by 0-based block. Blocks without an entry use `DropLargest`.
    Explicit(BTreeMap<usize, Vec<u32>>),
}

/// Nonempty subsets of `{1, ..., kappa}` ordered by size, then colexicographically.
pub fn subset_labels(kappa: u32) -> Vec<u32> {
    let mut labels: Vec<u32> = (1..(1u32 << kappa)).collect();
    labels.sort_by_key(|&s| (s.count_ones(), s));
    labels
}

fn drop_chain(s: u32, largest: bool) -> Vec<u32> {
    let mut chain = Vec::new();
    let mut t = s;
    while t.count_ones() > 1 {
        t = if largest { t & !(1 << (31 - t.leading_zeros())) } else { t & (t - 1) };
        chain.push(t);
    }
    chain
}

fn check_chain(block: usize, s: u32, chain: &[u32]) -> Result<()> {
    let bad = |why: &str| Err(Error::InconsistentSpec(format!("chain for block {block}: {why}")));
    if chain.len() + 1 != s.count_ones() as usize {
        return bad("wrong length");
    }
    let mut prev = s;
    for &t in chain {
        if t & !prev != 0 || t.count_ones() + 1 != prev.count_ones() {
            return bad("sets are not nested with sizes dropping by one");
        }
        prev = t;
    }
    Ok(())
}

/// Everything the recursive decoder needs to know about a generalized Lindstrom code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LindstromSpec {
    pub kappa: u32,
    /// `q'' = floor(log2 floor((q-1)/eta))`.
    pub q2: u32,
    pub eta: u64,
    pub subsets: Vec<u32>,
    /// `T_{i, q''+2}, ..., T_{i, q''+|S_i|}` for each block.
    pub chains: Vec<Vec<u32>>,
    /// First column of each block in the untruncated code.
    pub offsets: Vec<usize>,
    /// Untruncated block widths `q'' + |S_i|`.
    pub widths: Vec<usize>,
    /// Unscaled matrix, after truncation.
    pub base: CodeMatrix,
}

/// Signed row combination that isolates one block, with the resulting
/// coefficient of every column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationEquation {
    pub rows: Vec<(usize, i64)>,
    pub coeffs: Vec<i64>,
}

impl LindstromSpec {
    pub fn rows(&self) -> usize {
        self.subsets.len()
    }

    pub fn n(&self) -> usize {
        self.base.cols()
    }

    pub fn full_n(&self) -> usize {
        self.widths.iter().sum()
    }

    /// Columns of `block` that survived truncation.
    pub fn block_columns(&self, block: usize) -> std::ops::Range<usize> {
        let start = self.offsets[block].min(self.n());
        let end = (self.offsets[block] + self.widths[block]).min(self.n());
        start..end
    }

    pub fn elimination_equation(&self, block: usize) -> EliminationEquation {
        let s = self.subsets[block];
        let rows: Vec<(usize, i64)> = self
            .subsets
            .iter()
            .enumerate()
            .filter(|&(_, &sj)| sj & !s == 0)
            .map(|(j, &sj)| (j, if sj.count_ones() % 2 == 1 { 1 } else { -1 }))
            .collect();
        let coeffs = (0..self.n())
            .map(|c| {
                let col = self.base.column(c);
                rows.iter().map(|&(j, sign)| sign * col[j] as i64).sum()
            })
            .collect();
        EliminationEquation { rows, coeffs }
    }
}

fn block_columns(s: u32, subsets: &[u32], q2: u32, chain: &[u32]) -> Vec<Vec<u32>> {
    let odd = |a: u32, b: u32| (a & b).count_ones() % 2 == 1;
    let mut cols: Vec<Vec<u32>> = (0..=q2)
        .map(|k| subsets.iter().map(|&sj| if odd(s, sj) { 1u32 << (q2 - k) } else { 0 }).collect())
        .collect();
    for &t in chain {
        let prev = cols.last().expect("at least one column");
        let next = subsets.iter().zip(prev).map(|(&sj, &p)| (p > 0 && odd(sj, t)) as u32).collect();
        cols.push(next);
    }
    cols
}

/// Generalized Lindstrom code of length `2^kappa - 1`, scaled by `eta`,
/// optionally truncated to its first `n` columns.
pub fn construct9(
    kappa: u32,
    q: u64,
    eta: u64,
    policy: &ChainPolicy,
    n: Option<usize>,
) -> Result<(CodeMatrix, LindstromSpec, CodeParams)> {
    if !(1..=MAX_KAPPA).contains(&kappa) {
        return Err(Error::BadKappa(kappa));
    }
    if eta == 0 {
        return Err(Error::ThresholdNotIncreasing);
    }
    let span = q.saturating_sub(1) / eta;
    if span == 0 {
        return Err(Error::AlphabetTooSmall { q_minus_1: q.saturating_sub(1), needed: eta });
    }
    let q2 = 63 - span.leading_zeros();
    let subsets = subset_labels(kappa);
    let mut chains = Vec::with_capacity(subsets.len());
    for (i, &s) in subsets.iter().enumerate() {
        let chain = match policy {
            ChainPolicy::DropLargest => drop_chain(s, true),
            ChainPolicy::DropSmallest => drop_chain(s, false),
            ChainPolicy::Explicit(map) => map.get(&i).cloned().unwrap_or_else(|| drop_chain(s, true)),
        };
        check_chain(i, s, &chain)?;
        chains.push(chain);
    }
    if let ChainPolicy::Explicit(map) = policy {
        if let Some(&bad) = map.keys().find(|&&k| k >= subsets.len()) {
            return Err(Error::InconsistentSpec(format!("chain given for missing block {bad}")));
        }
    }
    let mut columns = Vec::new();
    let mut offsets = Vec::with_capacity(subsets.len());
    let mut widths = Vec::with_capacity(subsets.len());
    for (&s, chain) in subsets.iter().zip(&chains) {
        offsets.push(columns.len());
        let block = block_columns(s, &subsets, q2, chain);
        widths.push(block.len());
        columns.extend(block);
    }
    let full = columns.len();
    let n = n.unwrap_or(full);
    if n == 0 || n > full {
        return Err(Error::InconsistentSpec(format!("cannot keep {n} of {full} columns")));
    }
    columns.truncate(n);
    let m = subsets.len();
    let base = CodeMatrix::from_columns(span + 1, m, &columns)?;
    let c = base.scaled(eta, q)?;
    let params = CodeParams::equidistant(q, eta, 1, n, 0)?;
    let spec = LindstromSpec { kappa, q2, eta, subsets, chains, offsets, widths, base };
    Ok((c, spec, params))
}
