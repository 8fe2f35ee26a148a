use rand::Rng;
use statrs::function::factorial::{binomial as binom_f64, ln_binomial, ln_factorial};

use crate::error::{Error, Result};
use crate::model::{CodeMatrix, CodeParams};
use crate::rng::{derive_seed, rng_from_seed};

/// Row success probability of the random `{0, eta, ..., I*eta}` ensemble
/// with `P(0) = p0` and the remaining mass spread evenly over the `I` levels.
pub fn pi_i(d: u64, levels: u64, p0: f64) -> f64 {
    let i = levels as f64;
    let ratio = p0 * i / (1.0 - p0);
    let mut sum = 0.0;
    for k in 0..d {
        let top = d - k + 1;
        if top > levels {
            continue;
        }
        sum += binom_f64(d, k) * ratio.powi(k as i32) * binom_f64(levels, top);
    }
    (1.0 - p0) * p0.powi(d as i32) + (1.0 - p0).powi(d as i32 + 1) * i.powi(-(d as i32 + 1)) * sum
}

/// Gain `pi_I - pi_1` at `p0 = d/(d+1)`.
pub fn gamma_i(d: u64, levels: u64) -> f64 {
    let mut sum = 0.0;
    for k in 0..d {
        let top = d - k + 1;
        if top > levels {
            continue;
        }
        sum += binom_f64(d, k) * binom_f64(levels, top) * ((levels * d) as f64).powi(k as i32);
    }
    sum / ((levels as f64).powi(d as i32 + 1) * ((d + 1) as f64).powi(d as i32 + 1))
}

/// Row-count ratio `m_1 / m_I` at `p0 = d/(d+1)`, evaluated in log space.
pub fn ratio_m1_over_mi(d: u64, levels: u64) -> f64 {
    let (df, lf) = (d as f64, levels as f64);
    let mut sum = 0.0;
    for k in 0..d {
        let top = d - k + 1;
        if top > levels {
            continue;
        }
        let ln_term = ln_binomial(d, k) + ln_binomial(levels, top) + k as f64 * (lf * df).ln()
            - (df + 1.0) * lf.ln()
            - df * df.ln();
        sum += ln_term.exp();
    }
    1.0 + sum
}

/// Large-`d` limit of [`ratio_m1_over_mi`].
pub fn ratio_limit(levels: u64) -> f64 {
    let lf = levels as f64;
    let mut sum = 0.0;
    for k in 0..levels.saturating_sub(1) {
        let gap = levels - k;
        sum += binom_f64(levels, k) * lf.powi(-(gap as i32)) / ln_factorial(gap - 1).exp();
    }
    1.0 + sum
}

/// Grid search with golden-section refinement for the `p0` maximizing `pi_i`.
pub fn optimize_p0(d: u64, levels: u64, grid: usize) -> (f64, f64) {
    let grid = grid.max(4);
    let mut best = (0.5, pi_i(d, levels, 0.5));
    for g in 1..grid {
        let p0 = g as f64 / grid as f64;
        let v = pi_i(d, levels, p0);
        if v > best.1 {
            best = (p0, v);
        }
    }
    let h = 1.0 / grid as f64;
    let (mut lo, mut hi) = ((best.0 - h).max(1e-12), (best.0 + h).min(1.0 - 1e-12));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if pi_i(d, levels, a) < pi_i(d, levels, b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    let mid = 0.5 * (lo + hi);
    let v = pi_i(d, levels, mid);
    if v > best.1 {
        (mid, v)
    } else {
        best
    }
}

/// `P(0) = p0` and `P(j * eta) = p1` for `j = 1..=I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelDistribution {
    pub p0: f64,
    pub p1: f64,
}

impl LevelDistribution {
    pub fn standard(d: u64, levels: u64) -> Self {
        LevelDistribution { p0: d as f64 / (d + 1) as f64, p1: 1.0 / (levels * (d + 1)) as f64 }
    }

    pub fn from_p0(p0: f64, levels: u64) -> Self {
        LevelDistribution { p0, p1: (1.0 - p0) / levels as f64 }
    }

    fn check(&self, levels: u64) -> Result<()> {
        let total = self.p0 + levels as f64 * self.p1;
        let ok = self.p0 > 0.0 && self.p0 < 1.0 && self.p1 >= 0.0 && (total - 1.0).abs() <= 1e-12;
        if !ok {
            return Err(Error::BadDistribution { total });
        }
        Ok(())
    }
}

/// How many rows a random construction should draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowCount {
    /// Asymptotic formula with slack `delta`, scaled by `multiplier`.
    Formula { delta: f64, multiplier: f64 },
    Fixed(usize),
}

/// Unrounded row count for the random SQ-disjunct ensemble.
pub fn rows_construct2(n: usize, d: usize, e: usize, pi: f64, delta: f64) -> f64 {
    let log = (n as f64 / d as f64).ln();
    let df = d as f64;
    if e == 0 {
        ((df + 1.0) / pi + delta) * log
    } else {
        (2.0 * (df + 1.0) / pi + delta) * log + 4.0 * e as f64 / pi
    }
}

fn resolve_rows(rows: RowCount, formula: f64) -> usize {
    match rows {
        RowCount::Fixed(m) => m.max(1),
        RowCount::Formula { multiplier, .. } => ((formula * multiplier).ceil() as usize).max(1),
    }
}

fn delta_of(rows: RowCount) -> f64 {
    match rows {
        RowCount::Formula { delta, .. } => delta,
        RowCount::Fixed(_) => 0.0,
    }
}

/// Random SQ-disjunct code with i.i.d. entries over `{0, eta, ..., I*eta}`,
/// `I = floor((q-1)/eta)`.
#[allow(clippy::too_many_arguments)]
pub fn construct2(
    n: usize,
    d: usize,
    e: usize,
    q: u64,
    eta: u64,
    dist: Option<LevelDistribution>,
    rows: RowCount,
    seed: u64,
) -> Result<(CodeMatrix, CodeParams)> {
    if eta == 0 {
        return Err(Error::ThresholdNotIncreasing);
    }
    let levels = q.saturating_sub(1) / eta;
    if levels == 0 {
        return Err(Error::AlphabetTooSmall { q_minus_1: q.saturating_sub(1), needed: eta });
    }
    if d == 0 || d > n {
        return Err(Error::BadD { d, n });
    }
    let dist = dist.unwrap_or_else(|| LevelDistribution::standard(d as u64, levels));
    dist.check(levels)?;
    let params = CodeParams::equidistant(q, eta, 1, d, e)?;
    let pi = pi_i(d as u64, levels, dist.p0);
    let m = resolve_rows(rows, rows_construct2(n, d, e, pi, delta_of(rows)));
    let mut rng = rng_from_seed(seed);
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        let col: Vec<u32> = (0..m)
            .map(|_| {
                let u: f64 = rng.gen();
                if u < dist.p0 {
                    0
                } else {
                    let j = (((u - dist.p0) / dist.p1) as u64 + 1).min(levels);
                    (j * eta) as u32
                }
            })
            .collect();
        cols.push(col);
    }
    Ok((CodeMatrix::from_columns(q, m, &cols)?, params))
}

/// Chernoff exponent `rho` of the stacked binary ensemble for the threshold
/// prefix `eta_1..eta_alpha`.
pub fn rho(d: u64, eta_prefix: &[u64]) -> Result<f64> {
    let top = *eta_prefix.last().ok_or(Error::BadThreshold(0))?;
    if let Some(&bad) = eta_prefix.iter().find(|&&t| t < 2) {
        return Err(Error::BadThreshold(bad));
    }
    if top > d || d < 2 {
        return Err(Error::BadEta { eta: top, d });
    }
    let mu = (1.0 - 1.0 / top as f64) / 8.0;
    let sum: f64 = eta_prefix
        .iter()
        .map(|&b| {
            let b1 = (b - 1) as f64;
            (mu / b1).powi(b as i32) * b1 / (d - 1) as f64
        })
        .sum();
    Ok(0.5 * sum)
}

/// Largest `k` with `den * 2^k <= num`.
pub(crate) fn floor_log2_ratio(num: u64, den: u64) -> u32 {
    let mut k = 0;
    while (den as u128) << (k + 1) <= num as u128 {
        k += 1;
    }
    k
}

/// Unrounded rows per block of the stacked binary ensemble.
pub fn rows_construct7(n: usize, d: usize, e: usize, rho: f64, delta: f64) -> f64 {
    let log = (n as f64 / d as f64).ln();
    let df = d as f64;
    if e == 0 {
        (2.0 * df / rho + delta) * log
    } else {
        (4.0 * df / rho + delta) * log + 4.0 * e as f64 / rho
    }
}

/// Stack of `r` Bernoulli blocks with densities `1 / (2^{i+2} eta_alpha)`;
/// claims `[2;Q;eta;(eta_alpha:d);e]`-SQ-separable.
#[allow(clippy::too_many_arguments)]
pub fn construct7(
    n: usize,
    d: usize,
    e: usize,
    eta: &[u64],
    alpha: usize,
    rows: RowCount,
    seed: u64,
) -> Result<(CodeMatrix, CodeParams)> {
    if alpha == 0 || alpha >= eta.len() {
        return Err(Error::BadThreshold(0));
    }
    if d == 0 || 2 * d > n {
        return Err(Error::BadD { d, n });
    }
    let top = eta[alpha];
    let r = rho(d as u64, &eta[1..=alpha])?;
    let params = CodeParams::new(2, eta.to_vec(), top as usize, d, e)?;
    let blocks = floor_log2_ratio(d as u64, top) + 1;
    let per_block = match rows {
        RowCount::Fixed(m) => m.div_ceil(blocks as usize).max(1),
        _ => resolve_rows(rows, rows_construct7(n, d, e, r, delta_of(rows))),
    };
    let mut cols = vec![Vec::with_capacity(per_block * blocks as usize); n];
    for i in 1..=blocks {
        let density = 1.0 / (2f64.powi(i as i32 + 2) * top as f64);
        if !(density > 0.0 && density < 1.0) {
            return Err(Error::DensityOutOfRange(density));
        }
        let mut rng = rng_from_seed(derive_seed(seed, i as u64, 0));
        for col in cols.iter_mut() {
            for _ in 0..per_block {
                col.push(rng.gen_bool(density) as u32);
            }
        }
    }
    Ok((CodeMatrix::from_columns(2, per_block * blocks as usize, &cols)?, params))
}

/// Number of stacked blocks and their densities, for inspection.
pub fn construct7_layout(d: u64, eta_alpha: u64) -> Vec<f64> {
    let blocks = floor_log2_ratio(d, eta_alpha) + 1;
    (1..=blocks).map(|i| 1.0 / (2f64.powi(i as i32 + 2) * eta_alpha as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_examples() {
        assert!((pi_i(1, 1, 0.5) - 0.25).abs() < 1e-15);
        assert!((pi_i(1, 2, 0.5) - 5.0 / 16.0).abs() < 1e-15);
        for d in 1..8u64 {
            let p0 = d as f64 / (d + 1) as f64;
            let closed = (d as f64).powi(d as i32) / ((d + 1) as f64).powi(d as i32 + 1);
            assert!((pi_i(d, 1, p0) - closed).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_is_the_gain_over_binary() {
        let p0 = 2.0 / 3.0;
        let lhs = pi_i(2, 2, p0) - pi_i(2, 1, p0);
        assert!((lhs - gamma_i(2, 2)).abs() < 1e-15);
    }

    #[test]
    fn ratio_matches_direct_quotient() {
        for d in 1..=6u64 {
            for i in 1..=6u64 {
                let p0 = d as f64 / (d + 1) as f64;
                let direct = pi_i(d, i, p0) / pi_i(d, 1, p0);
                assert!((direct - ratio_m1_over_mi(d, i)).abs() < 1e-12, "d={d} I={i}");
            }
        }
    }

    #[test]
    fn ratio_limit_close_at_large_d() {
        for i in 1..=4u64 {
            let finite = ratio_m1_over_mi(200, i);
            let lim = ratio_limit(i);
            assert!((finite - lim).abs() / lim < 0.01, "I={i}: {finite} vs {lim}");
        }
    }

    #[test]
    fn optimized_p0_beats_default() {
        for (d, i) in [(1, 2), (2, 2), (3, 3), (5, 2)] {
            let (p0, v) = optimize_p0(d, i, 1000);
            assert!(p0 > 0.0 && p0 < 1.0);
            assert!(v >= pi_i(d, i, d as f64 / (d + 1) as f64) - 1e-15);
        }
    }

    #[test]
    fn construct2_row_formula() {
        let (c, _) =
            construct2(32, 1, 0, 3, 2, None, RowCount::Formula { delta: 1.0, multiplier: 1.0 }, 3).unwrap();
        let expected = ((2.0 / 0.25 + 1.0) * 32f64.ln()).ceil() as usize;
        assert_eq!(c.rows(), expected);
        assert!(c.to_rows().iter().flatten().all(|&v| v == 0 || v == 2));
    }

    #[test]
    fn construct2_is_deterministic() {
        let a = construct2(10, 2, 0, 5, 2, None, RowCount::Fixed(20), 11).unwrap();
        let b = construct2(10, 2, 0, 5, 2, None, RowCount::Fixed(20), 11).unwrap();
        assert_eq!(a, b);
        let c = construct2(10, 2, 0, 5, 2, None, RowCount::Fixed(20), 12).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn construct2_rejects_bad_distribution() {
        let dist = LevelDistribution { p0: 0.5, p1: 0.3 };
        let err = construct2(10, 2, 0, 5, 2, Some(dist), RowCount::Fixed(5), 0).unwrap_err();
        assert!(matches!(err, Error::BadDistribution { .. }));
    }

    #[test]
    fn rho_examples() {
        assert!((rho(3, &[2]).unwrap() - 1.0 / 1024.0).abs() < 1e-18);
        assert!(rho(5, &[2, 3]).unwrap() > rho(5, &[2]).unwrap());
        assert_eq!(rho(3, &[1]), Err(Error::BadThreshold(1)));
    }

    #[test]
    fn rho_dual_implementation() {
        for d in 2..12u64 {
            for top in 2..=d {
                let prefix: Vec<u64> = (2..=top).collect();
                let mu = (top as f64 - 1.0) / (8.0 * top as f64);
                let mut acc = 0.0;
                for &b in &prefix {
                    let mut term = 1.0;
                    for _ in 0..b {
                        term *= mu / (b as f64 - 1.0);
                    }
                    acc += term * (b as f64 - 1.0);
                }
                let alt = acc / (2.0 * (d as f64 - 1.0));
                assert!((rho(d, &prefix).unwrap() - alt).abs() <= 1e-15 * alt.max(1e-300));
            }
        }
    }

    #[test]
    fn construct7_layout_examples() {
        assert_eq!(construct7_layout(4, 2), vec![1.0 / 16.0, 1.0 / 32.0]);
        assert_eq!(construct7_layout(5, 5).len(), 1);
        assert_eq!(floor_log2_ratio(8, 2), 2);
        assert_eq!(floor_log2_ratio(7, 2), 1);
    }

    #[test]
    fn construct7_is_binary() {
        let (c, p) = construct7(12, 3, 0, &[0, 2, 4, 5], 1, RowCount::Fixed(40), 1).unwrap();
        assert!(c.is_binary());
        assert_eq!((p.l, p.u), (2, 3));
    }
}
