//! Subset enumeration in colexicographic order and binomial helpers.

/// `C(n, k)` as `u128`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of subsets with sizes in `lo..=hi`.
pub fn count_subsets(n: usize, lo: usize, hi: usize) -> u128 {
    (lo..=hi.min(n)).fold(0u128, |acc, k| acc.saturating_add(binomial(n as u64, k as u64)))
}

/// All `k`-subsets of `0..n` in colexicographic order.
#[derive(Debug, Clone)]
pub struct Colex {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Colex {
    pub fn new(n: usize, k: usize) -> Self {
        Colex { n, cur: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { self.cur[i + 1] } else { self.n };
            if self.cur[i] + 1 < limit {
                self.cur[i] += 1;
                for (j, slot) in self.cur.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
        if i == k {
            self.done = true;
        }
        Some(out)
    }
}

/// Subsets with sizes `lo..=hi`, smaller sizes first, colex within a size.
pub fn subsets_by_size(n: usize, lo: usize, hi: usize) -> impl Iterator<Item = Vec<usize>> {
    (lo..=hi.min(n)).flat_map(move |k| Colex::new(n, k))
}
