//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use sqgt::model::{quantize, CodeMatrix, NoiseModel, Syndrome};
use sqgt::rng::rng_from_seed;

/// Posterior `P(w_i = 1 | z)` under an i.i.d. Bernoulli(`prior`) model, by
/// summing over all `2^n` indicator vectors.
pub fn exact_marginals(c: &CodeMatrix, eta: &[u64], z: &Syndrome, prior: f64, nm: &NoiseModel) -> Vec<f64> {
    let n = c.cols();
    let levels = eta.len() - 1;
    let mut post = vec![0.0; n];
    let mut total = 0.0;
    for mask in 0u64..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let mut p = prior.powi(set.len() as i32) * (1.0 - prior).powi((n - set.len()) as i32);
        for (s, &zt) in c.raw_sums(&set).iter().zip(z.values()) {
            p *= match quantize(eta, *s) {
                Ok(y) => nm.transition(y, zt, levels),
                Err(_) => 0.0,
            };
            if p == 0.0 {
                break;
            }
        }
        total += p;
        for &i in &set {
            post[i] += p;
        }
    }
    post.iter().map(|v| v / total).collect()
}

/// Matrix whose factor graph is a tree: every new variable joins exactly one
/// existing factor, and every new factor touches exactly one existing variable.
pub fn random_tree(seed: u64, n: usize, q: u32) -> CodeMatrix {
    let mut rng = rng_from_seed(seed);
    let mut factors: Vec<Vec<(usize, u32)>> = Vec::new();
    let mut vars = 1;
    while vars < n || factors.is_empty() {
        if factors.is_empty() || rng.gen_bool(0.4) {
            let v = rng.gen_range(0..vars);
            factors.push(vec![(v, rng.gen_range(1..q))]);
        } else {
            let f = rng.gen_range(0..factors.len());
            factors[f].push((vars, rng.gen_range(1..q)));
            vars += 1;
        }
    }
    let rows: Vec<Vec<u32>> = factors
        .iter()
        .map(|f| {
            let mut row = vec![0; n];
            for &(v, x) in f {
                row[v] = x;
            }
            row
        })
        .collect();
    CodeMatrix::from_rows(q as u64, &rows).unwrap()
}

/// Every `d`-element multiset sum of `set` is distinct modulo `modulus`.
pub fn multiset_sums_distinct(set: &[u64], d: usize, modulus: u64) -> bool {
    fn rec(set: &[u64], d: usize, start: usize, acc: u64, modulus: u64, out: &mut Vec<u64>) {
        if d == 0 {
            out.push(acc % modulus);
            return;
        }
        for i in start..set.len() {
            rec(set, d - 1, i, acc + set[i], modulus, out);
        }
    }
    let mut sums = Vec::new();
    rec(set, d, 0, 0, modulus, &mut sums);
    let total = sums.len();
    sums.sort_unstable();
    sums.dedup();
    sums.len() == total
}

/// `c` stacked on itself three times, tripling every row count.
pub fn tripled(c: &CodeMatrix) -> CodeMatrix {
    CodeMatrix::vstack(&[c.clone(), c.clone(), c.clone()]).unwrap()
}
