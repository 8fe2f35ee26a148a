//! Exhaustive checkers for the disjunct and separable properties.
//!
//! Each checker enumerates subsets in colexicographic order, stops at the
//! first violation and returns it as a [`Witness`]. Disjunct checkers count,
//! for every `(d+1)`-subset and every pivot, the rows where the pivot alone
//! reads strictly higher than the rest of the subset. Row sets for different
//! pivots are not checked for disjointness; distinctness of such rows follows
//! from the counting condition itself.

use std::collections::HashMap;

use crate::combin::{binomial, count_subsets, subsets_by_size, Colex};
use crate::error::{Error, Result};
use crate::model::{quantize, validate_params, CodeMatrix, CodeParams};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    SqDisjunct,
    SqSeparable,
    BinaryDisjunctCgt,
    BinarySeparableCgt,
    BinarySeparableQgt,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::SqDisjunct => "sq-disjunct",
            Property::SqSeparable => "sq-separable",
            Property::BinaryDisjunctCgt => "bin-disjunct",
            Property::BinarySeparableCgt => "bin-sep-cgt",
            Property::BinarySeparableQgt => "bin-sep-qgt",
        }
    }
}

/// A concrete violation.
///
/// Disjunct properties report `sets = [X, [pivot]]` and `detail = [rows]`,
/// the number of rows where the pivot dominates. Separable properties report
/// `sets = [X, Z]` and `detail = [distance]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: Property,
    pub sets: Vec<Vec<usize>>,
    pub detail: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Witness),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}

struct Lut {
    table: Vec<u32>,
}

impl Lut {
    fn new(eta: &[u64], max_sum: u64) -> Self {
        let top = max_sum.min(eta[eta.len() - 1]);
        let mut table = Vec::with_capacity(top as usize + 1);
        for s in 0..=top {
            table.push(quantize(eta, s).unwrap_or(u32::MAX));
        }
        Lut { table }
    }

    fn get(&self, eta: &[u64], s: u64) -> Result<u32> {
        match self.table.get(s as usize) {
            Some(&v) if v != u32::MAX => Ok(v),
            _ => quantize(eta, s),
        }
    }
}

fn check_alphabet(c: &CodeMatrix, q: u64) -> Result<()> {
    let max = c.max_entry() as u64;
    if max >= q {
        return Err(Error::EntryOutOfAlphabet { value: max, q });
    }
    Ok(())
}

fn disjunct_core<F>(c: &CodeMatrix, d: usize, e: usize, budget: u64, kind: Property, dominates: F) -> Result<Verdict>
where
    F: Fn(u64, u64) -> Result<bool>,
{
    let (m, n) = (c.rows(), c.cols());
    if n <= d {
        return Err(Error::TooFewColumns { n, d });
    }
    let need = 2 * e + 1;
    let total = binomial(n as u64, d as u64 + 1);
    if need <= m && total > budget as u128 {
        return Err(Error::ExplosionGuard { count: total, budget });
    }
    for set in Colex::new(n, d + 1) {
        let sums = c.raw_sums(&set);
        for &pivot in &set {
            let col = c.column(pivot);
            let mut count = 0;
            for k in 0..m {
                let own = col[k] as u64;
                if dominates(own, sums[k] - own)? {
                    count += 1;
                }
            }
            if count < need {
                return Ok(Verdict::Fail(Witness { kind, sets: vec![set.clone(), vec![pivot]], detail: vec![count] }));
            }
        }
    }
    Ok(Verdict::Pass)
}

fn separable_core<F>(
    c: &CodeMatrix,
    lo: usize,
    hi: usize,
    e: usize,
    budget: u64,
    kind: Property,
    key: F,
) -> Result<Verdict>
where
    F: Fn(u64) -> Result<u32>,
{
    let n = c.cols();
    let need = 2 * e + 1;
    let total = count_subsets(n, lo, hi);
    if total > budget as u128 {
        return Err(Error::ExplosionGuard { count: total, budget });
    }
    let syndrome = |set: &[usize]| -> Result<Vec<u32>> { c.raw_sums(set).into_iter().map(&key).collect() };
    if e == 0 {
        let mut seen: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        for set in subsets_by_size(n, lo, hi) {
            let y = syndrome(&set)?;
            if let Some(prev) = seen.get(&y) {
                return Ok(Verdict::Fail(Witness { kind, sets: vec![prev.clone(), set], detail: vec![0] }));
            }
            seen.insert(y, set);
        }
        return Ok(Verdict::Pass);
    }
    let mut all: Vec<(Vec<usize>, Vec<u32>)> = Vec::new();
    for set in subsets_by_size(n, lo, hi) {
        let y = syndrome(&set)?;
        for (prev, py) in &all {
            let dist = py.iter().zip(&y).filter(|(a, b)| a != b).count();
            if dist < need {
                return Ok(Verdict::Fail(Witness { kind, sets: vec![prev.clone(), set], detail: vec![dist] }));
            }
        }
        all.push((set, y));
    }
    Ok(Verdict::Pass)
}

/// SQ-disjunct check for `(1:u)` with `e` correctable errors.
pub fn is_sq_disjunct(c: &CodeMatrix, p: &CodeParams) -> Result<Verdict> {
    is_sq_disjunct_with_budget(c, p, DEFAULT_BUDGET)
}

pub fn is_sq_disjunct_with_budget(c: &CodeMatrix, p: &CodeParams, budget: u64) -> Result<Verdict> {
    validate_params(p)?;
    check_alphabet(c, p.q)?;
    let d = p.u;
    let lut = Lut::new(&p.eta, (d as u64 + 1) * c.max_entry() as u64);
    let eta = &p.eta;
    disjunct_core(c, d, p.e, budget, Property::SqDisjunct, |own, rest| {
        Ok(lut.get(eta, own)? > lut.get(eta, rest)?)
    })
}

/// SQ-separable check over index sets with sizes in `l..=u`.
pub fn is_sq_separable(c: &CodeMatrix, p: &CodeParams) -> Result<Verdict> {
    is_sq_separable_with_budget(c, p, DEFAULT_BUDGET)
}

pub fn is_sq_separable_with_budget(c: &CodeMatrix, p: &CodeParams, budget: u64) -> Result<Verdict> {
    validate_params(p)?;
    check_alphabet(c, p.q)?;
    let hi = p.u.min(c.cols());
    let lut = Lut::new(&p.eta, hi as u64 * c.max_entry() as u64);
    let eta = &p.eta;
    separable_core(c, p.l, hi, p.e, budget, Property::SqSeparable, |s| lut.get(eta, s))
}

fn require_binary(c: &CodeMatrix) -> Result<()> {
    if c.is_binary() {
        Ok(())
    } else {
        Err(Error::NotBinary)
    }
}

/// Classical `d`-disjunct check: every column keeps `2e+1` private rows
/// against any `d` other columns.
pub fn is_binary_disjunct_cgt(c: &CodeMatrix, d: usize, e: usize) -> Result<Verdict> {
    require_binary(c)?;
    disjunct_core(c, d, e, DEFAULT_BUDGET, Property::BinaryDisjunctCgt, |own, rest| Ok(own > rest.min(1)))
}

/// Classical `d`-separable check with Boolean sums.
pub fn is_binary_separable_cgt(c: &CodeMatrix, d: usize, e: usize) -> Result<Verdict> {
    require_binary(c)?;
    separable_core(c, 1, d, e, DEFAULT_BUDGET, Property::BinarySeparableCgt, |s| Ok(s.min(1) as u32))
}

/// Adder-channel `d`-separable check with arithmetic sums.
pub fn is_binary_separable_qgt(c: &CodeMatrix, d: usize, e: usize) -> Result<Verdict> {
    require_binary(c)?;
    separable_core(c, 1, d, e, DEFAULT_BUDGET, Property::BinarySeparableQgt, |s| Ok(s as u32))
}
