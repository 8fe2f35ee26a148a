//! Bose-Chowla sets through discrete logarithms in `GF(L^d)`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{CodeMatrix, CodeParams};

const MAX_FIELD: u64 = 1 << 32;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut p = n.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Element of `GF(L)[x] / f` as coefficients of `1, x, ..., x^{d-1}`.
struct Field {
    l: u64,
    /// Low coefficients of the monic modulus `x^d + f[d-1] x^{d-1} + ... + f[0]`.
    f: Vec<u64>,
}

impl Field {
    fn times_x(&self, a: &mut [u64]) {
        let d = a.len();
        let top = a[d - 1];
        for k in (1..d).rev() {
            a[k] = a[k - 1];
        }
        a[0] = 0;
        for (coef, &fk) in a.iter_mut().zip(&self.f) {
            *coef = (*coef + self.l - (top * fk) % self.l) % self.l;
        }
    }

    /// Multiplicative order of `x` when it is `L^d - 1`, found by walking powers.
    fn x_is_primitive(&self, order: u64) -> bool {
        let d = self.f.len();
        let mut a = vec![0u64; d];
        a[0] = 1;
        for step in 1..=order {
            self.times_x(&mut a);
            let is_one = a[0] == 1 && a[1..].iter().all(|&c| c == 0);
            if is_one {
                return step == order;
            }
        }
        false
    }
}

/// `L` integers in `[1, L^d - 2]` whose `d`-element multiset sums are
/// pairwise distinct modulo `L^d - 1`. `L` must be prime.
pub fn bose_chowla(l: u64, d: u32) -> Result<Vec<u64>> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    if d < 2 {
        return Err(Error::BadD { d: d as usize, n: l as usize });
    }
    let size = l.checked_pow(d).filter(|&s| s <= MAX_FIELD).ok_or_else(|| Error::Overflow(format!("{l}^{d}")))?;
    let order = size - 1;
    let du = d as usize;
    let mut field = None;
    let mut coeffs = vec![0u64; du];
    'search: loop {
        if coeffs[0] != 0 {
            let candidate = Field { l, f: coeffs.clone() };
            if candidate.x_is_primitive(order) {
                field = Some(candidate);
                break 'search;
            }
        }
        let mut k = 0;
        loop {
            if k == du {
                break 'search;
            }
            coeffs[k] += 1;
            if coeffs[k] < l {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
    }
    let field = field.ok_or_else(|| Error::InconsistentSpec(format!("no primitive polynomial for {l}^{d}")))?;
    let mut a = vec![0u64; du];
    a[0] = 1;
    let mut out = Vec::with_capacity(l as usize);
    for exp in 0..order {
        let linear = a[1] == 1 && a[2..].iter().all(|&c| c == 0);
        if linear {
            out.push(exp);
        }
        field.times_x(&mut a);
    }
    out.sort_unstable();
    debug_assert_eq!(out.len(), l as usize);
    Ok(out)
}

fn multiset_sums_distinct(set: &[u64], d: usize, modulus: u64) -> bool {
    fn walk(set: &[u64], left: usize, start: usize, acc: u64, modulus: u64, seen: &mut HashSet<u64>) -> bool {
        if left == 0 {
            return seen.insert(acc % modulus);
        }
        (start..set.len()).all(|i| walk(set, left - 1, i, acc + set[i], modulus, seen))
    }
    walk(set, d, 0, 0, modulus, &mut HashSet::new())
}

/// Depth-first search for `l` integers in `[1, l^d - 2]` with distinct
/// `d`-multiset sums modulo `l^d - 1`, exploring at most `node_budget` nodes.
pub fn sidon_search(l: u64, d: u32, node_budget: u64) -> Option<Vec<u64>> {
    let modulus = l.checked_pow(d)? - 1;
    let mut set = Vec::new();
    let mut nodes = 0u64;
    fn dfs(set: &mut Vec<u64>, start: u64, l: u64, d: usize, modulus: u64, nodes: &mut u64, budget: u64) -> bool {
        if set.len() as u64 == l {
            return true;
        }
        for a in start..modulus {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            set.push(a);
            if multiset_sums_distinct(set, d, modulus) && dfs(set, a + 1, l, d, modulus, nodes, budget) {
                return true;
            }
            set.pop();
        }
        false
    }
    if dfs(&mut set, 1, l, d as usize, modulus, &mut nodes, node_budget) {
        Some(set)
    } else {
        None
    }
}

/// Integers carried by the columns of a Bose-Chowla code, with the digit base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnIntegers {
    pub values: Vec<u64>,
    pub base: u64,
    pub digits: usize,
}

impl ColumnIntegers {
    pub fn from_matrix(c: &CodeMatrix, eta: u64, base: u64) -> Self {
        let values = (0..c.cols())
            .map(|j| c.column(j).iter().rev().fold(0u64, |acc, &v| acc * base + v as u64 / eta))
            .collect();
        ColumnIntegers { values, base, digits: c.rows() }
    }
}

/// Exactly-`d` separable code from the base-`q'` digits of a Bose-Chowla set,
/// `q' = floor((q-1)/eta) + 1`, scaled by `eta`.
pub fn construct5(n: usize, d: usize, q: u64, eta: u64) -> Result<(CodeMatrix, CodeParams, ColumnIntegers)> {
    if eta == 0 {
        return Err(Error::ThresholdNotIncreasing);
    }
    let base = q.saturating_sub(1) / eta + 1;
    if base < 2 {
        return Err(Error::AlphabetTooSmall { q_minus_1: q.saturating_sub(1), needed: eta });
    }
    if d < 2 || d > n {
        return Err(Error::BadD { d, n });
    }
    let l = next_prime(n as u64);
    let mut values = bose_chowla(l, d as u32)?;
    values.truncate(n);
    let span = l.pow(d as u32) as u128;
    let mut m = 0usize;
    let mut reach: u128 = 1;
    while reach < span {
        reach *= base as u128;
        m += 1;
    }
    let cols: Vec<Vec<u32>> = values
        .iter()
        .map(|&v| {
            let mut x = v;
            (0..m)
                .map(|_| {
                    let digit = x % base;
                    x /= base;
                    (digit * eta) as u32
                })
                .collect()
        })
        .collect();
    let c = CodeMatrix::from_columns(q, m, &cols)?;
    let params = CodeParams::equidistant(q, eta, d, d, 0)?;
    Ok((c, params, ColumnIntegers { values, base, digits: m }))
}
