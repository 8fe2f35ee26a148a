//! Core types and the quantized adder channel.
//!
//! Subject indices are 0-based everywhere in the library. The command-line
//! tool and the C API convert to and from 1-based indices at the boundary.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Bracket parameters `[q; Q; eta; (l:u); e]` of a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParams {
    pub q: u64,
    /// `eta[0] = 0 < eta[1] < ... < eta[Q]`; the last entry is the sentinel.
    pub eta: Vec<u64>,
    pub l: usize,
    pub u: usize,
    pub e: usize,
}

impl CodeParams {
    pub fn new(q: u64, eta: Vec<u64>, l: usize, u: usize, e: usize) -> Result<Self> {
        let p = CodeParams { q, eta, l, u, e };
        validate_params(&p)?;
        Ok(p)
    }

    /// Equidistant thresholds `eta_r = r * eta1` with the smallest `Q`
    /// whose sentinel exceeds `(q-1)*u`.
    pub fn equidistant(q: u64, eta1: u64, l: usize, u: usize, e: usize) -> Result<Self> {
        if eta1 == 0 {
            return Err(Error::ThresholdNotIncreasing);
        }
        let levels = min_equidistant_levels(q, eta1, u as u64);
        CodeParams::new(q, equidistant_thresholds(eta1, levels), l, u, e)
    }

    /// Output alphabet size `Q`.
    pub fn levels(&self) -> usize {
        self.eta.len() - 1
    }

    pub fn sentinel(&self) -> u64 {
        self.eta[self.eta.len() - 1]
    }

    pub fn is_equidistant(&self) -> bool {
        is_equidistant(&self.eta)
    }
}

pub fn equidistant_thresholds(eta1: u64, levels: usize) -> Vec<u64> {
    (0..=levels as u64).map(|r| r * eta1).collect()
}

/// Smallest `Q` with `Q * eta1 > (q-1) * u`, and at least 2.
pub fn min_equidistant_levels(q: u64, eta1: u64, u: u64) -> usize {
    let top = q.saturating_sub(1) * u;
    ((top / eta1 + 1) as usize).max(2)
}

pub fn is_equidistant(eta: &[u64]) -> bool {
    eta.len() >= 2 && eta.iter().enumerate().all(|(r, &t)| t == r as u64 * eta[1])
}

pub fn validate_thresholds(eta: &[u64]) -> Result<()> {
    if eta.len() < 3 || eta[0] != 0 || eta.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ThresholdNotIncreasing);
    }
    Ok(())
}

pub fn validate_params(p: &CodeParams) -> Result<()> {
    if p.q < 2 {
        return Err(Error::AlphabetTooSmall { q_minus_1: p.q.saturating_sub(1), needed: 1 });
    }
    validate_thresholds(&p.eta)?;
    if p.l < 1 || p.l > p.u {
        return Err(Error::BadRange { l: p.l, u: p.u });
    }
    let bound = (p.q - 1).checked_mul(p.u as u64).ok_or_else(|| Error::Overflow("(q-1)*u".into()))?;
    let sentinel = p.sentinel();
    if sentinel <= bound {
        return Err(Error::SentinelTooSmall { sentinel, bound });
    }
    Ok(())
}

/// Level `r` with `eta[r] <= s < eta[r+1]`.
pub fn quantize(eta: &[u64], s: u64) -> Result<u32> {
    let sentinel = eta[eta.len() - 1];
    if s >= sentinel {
        return Err(Error::SumOutOfRange { sum: s, sentinel });
    }
    Ok((eta.partition_point(|&t| t <= s) - 1) as u32)
}

/// `m x n` test matrix over `{0, ..., q-1}`, stored column by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    q: u64,
    m: usize,
    n: usize,
    data: Vec<u32>,
}

impl CodeMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(q: u64, m: usize, n: usize, rows: &[u32]) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InconsistentSpec(format!("matrix must be non-empty, got {m}x{n}")));
        }
        if rows.len() != m * n {
            return Err(Error::LengthMismatch { expected: m * n, got: rows.len() });
        }
        let mut data = vec![0u32; m * n];
        for r in 0..m {
            for c in 0..n {
                let v = rows[r * n + c];
                if v as u64 >= q {
                    return Err(Error::EntryOutOfAlphabet { value: v as u64, q });
                }
                data[c * m + r] = v;
            }
        }
        Ok(CodeMatrix { q, m, n, data })
    }

    pub fn from_rows(q: u64, rows: &[Vec<u32>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut flat = Vec::with_capacity(m * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: row.len() });
            }
            flat.extend_from_slice(row);
        }
        CodeMatrix::from_row_major(q, m, n, &flat)
    }

    pub fn from_columns(q: u64, m: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let n = columns.len();
        if m == 0 || n == 0 {
            return Err(Error::InconsistentSpec(format!("matrix must be non-empty, got {m}x{n}")));
        }
        let mut data = Vec::with_capacity(m * n);
        for col in columns {
            if col.len() != m {
                return Err(Error::LengthMismatch { expected: m, got: col.len() });
            }
            if let Some(&v) = col.iter().find(|&&v| v as u64 >= q) {
                return Err(Error::EntryOutOfAlphabet { value: v as u64, q });
            }
            data.extend_from_slice(col);
        }
        Ok(CodeMatrix { q, m, n, data })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.data[col * self.m + row]
    }

    pub fn column(&self, col: usize) -> &[u32] {
        &self.data[col * self.m..(col + 1) * self.m]
    }

    pub fn row(&self, row: usize) -> Vec<u32> {
        (0..self.n).map(|c| self.get(row, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.m).map(|r| self.row(r)).collect()
    }

    pub fn max_entry(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|&v| v <= 1)
    }

    /// Every entry multiplied by `factor`, over the alphabet of size `q`.
    pub fn scaled(&self, factor: u64, q: u64) -> Result<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for &v in &self.data {
            let s = v as u64 * factor;
            if s >= q {
                return Err(Error::EntryOutOfAlphabet { value: s, q });
            }
            data.push(s as u32);
        }
        Ok(CodeMatrix { q, m: self.m, n: self.n, data })
    }

    /// Same entries over a different alphabet.
    pub fn with_alphabet(&self, q: u64) -> Result<Self> {
        if self.max_entry() as u64 >= q {
            return Err(Error::EntryOutOfAlphabet { value: self.max_entry() as u64, q });
        }
        Ok(CodeMatrix { q, ..self.clone() })
    }

    /// Horizontal concatenation.
    pub fn hconcat(blocks: &[CodeMatrix], q: u64) -> Result<Self> {
        let m = blocks.first().map_or(0, |b| b.m);
        let mut cols = Vec::new();
        for b in blocks {
            if b.m != m {
                return Err(Error::LengthMismatch { expected: m, got: b.m });
            }
            for c in 0..b.n {
                cols.push(b.column(c).to_vec());
            }
        }
        CodeMatrix::from_columns(q, m, &cols)
    }

    /// Vertical stacking.
    pub fn vstack(blocks: &[CodeMatrix]) -> Result<Self> {
        let n = blocks.first().map_or(0, |b| b.n);
        let q = blocks.iter().map(|b| b.q).max().unwrap_or(2);
        let mut rows = Vec::new();
        for b in blocks {
            if b.n != n {
                return Err(Error::LengthMismatch { expected: n, got: b.n });
            }
            rows.extend(b.to_rows());
        }
        CodeMatrix::from_rows(q, &rows)
    }

    /// Keeps the first `n` columns.
    pub fn truncate_columns(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n {
            return Err(Error::BadD { d: n, n: self.n });
        }
        Ok(CodeMatrix { q: self.q, m: self.m, n, data: self.data[..n * self.m].to_vec() })
    }

    /// Integer row sums of the given columns.
    pub fn raw_sums(&self, set: &[usize]) -> Vec<u64> {
        let mut acc = vec![0u64; self.m];
        for &c in set {
            for (a, &v) in acc.iter_mut().zip(self.column(c)) {
                *a += v as u64;
            }
        }
        acc
    }

    /// Syndrome of the subjects in `set`.
    pub fn syndrome(&self, set: &[usize], eta: &[u64]) -> Result<Syndrome> {
        for &c in set {
            if c >= self.n {
                return Err(Error::BadSubject { index: c + 1, n: self.n });
            }
        }
        sq_sum(self.m, set.iter().map(|&c| self.column(c)), eta)
    }
}

/// Test results, one value in `{0, ..., Q-1}` per test.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syndrome(pub Vec<u32>);

impl Syndrome {
    pub fn zeros(m: usize) -> Self {
        Syndrome(vec![0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }
}

/// Quantized coordinate-wise sum of a set of codewords.
pub fn sq_sum<'a, I>(m: usize, columns: I, eta: &[u64]) -> Result<Syndrome>
where
    I: IntoIterator<Item = &'a [u32]>,
{
    validate_thresholds(eta)?;
    let mut acc = vec![0u64; m];
    for col in columns {
        if col.len() != m {
            return Err(Error::LengthMismatch { expected: m, got: col.len() });
        }
        for (a, &v) in acc.iter_mut().zip(col) {
            *a += v as u64;
        }
    }
    let mut out = Vec::with_capacity(m);
    for s in acc {
        out.push(quantize(eta, s)?);
    }
    Ok(Syndrome(out))
}

/// `a` is included in `b` when `a(i) <= b(i)` for every coordinate.
pub fn includes(a: &Syndrome, b: &Syndrome) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    Ok(a.0.iter().zip(&b.0).all(|(x, y)| x <= y))
}

/// Sorted, duplicate-free set of 0-based subject indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DefectiveSet(Vec<usize>);

impl DefectiveSet {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::BadSubject { index: bad + 1, n });
        }
        Ok(DefectiveSet(indices))
    }

    pub fn from_one_based(indices: &[usize], n: usize) -> Result<Self> {
        let mut v = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::BadSubject { index: i, n });
            }
            v.push(i - 1);
        }
        DefectiveSet::new(v, n)
    }

    pub fn from_indicator(w: &[bool]) -> Self {
        DefectiveSet(w.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut w = vec![false; n];
        for &i in &self.0 {
            w[i] = true;
        }
        w
    }
}

/// Substitution noise: `+1` with probability `gamma_p`, `-1` with `gamma_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub gamma_p: f64,
    pub gamma_n: f64,
}

impl NoiseModel {
    pub fn new(gamma_p: f64, gamma_n: f64) -> Result<Self> {
        let ok = gamma_p.is_finite()
            && gamma_n.is_finite()
            && gamma_p >= 0.0
            && gamma_n >= 0.0
            && gamma_p + gamma_n <= 1.0;
        if !ok {
            return Err(Error::BadNoise { gamma_p, gamma_n });
        }
        Ok(NoiseModel { gamma_p, gamma_n })
    }

    pub fn noiseless() -> Self {
        NoiseModel { gamma_p: 0.0, gamma_n: 0.0 }
    }

    pub fn is_noiseless(&self) -> bool {
        self.gamma_p == 0.0 && self.gamma_n == 0.0
    }

    /// `P(Z = z | Y = y)` over an output alphabet of size `levels`.
    pub fn transition(&self, y: u32, z: u32, levels: usize) -> f64 {
        let top = levels as u32 - 1;
        let up = if y < top { self.gamma_p } else { 0.0 };
        let down = if y > 0 { self.gamma_n } else { 0.0 };
        if z == y {
            1.0 - up - down
        } else if z == y + 1 {
            up
        } else if y > 0 && z == y - 1 {
            down
        } else {
            0.0
        }
    }
}

/// Passes a syndrome through the substitution channel.
pub fn apply_noise(y: &Syndrome, levels: usize, nm: &NoiseModel, seed: u64) -> Syndrome {
    let mut rng = rng_from_seed(seed);
    let top = levels as u32 - 1;
    let out = y
        .0
        .iter()
        .map(|&v| {
            let u: f64 = rng.gen();
            if v < top && u < nm.gamma_p {
                v + 1
            } else if v > 0 && u >= 1.0 - nm.gamma_n {
                v - 1
            } else {
                v
            }
        })
        .collect();
    Syndrome(out)
}
