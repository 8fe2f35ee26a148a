//! Noiseless mutual information of the quantized adder channel, the capacity
//! objective and the test-count bounds built from it.

use rayon::prelude::*;
use statrs::function::factorial::ln_binomial;

use crate::combin::binomial;
use crate::construct::floor_log2_ratio;
use crate::error::{Error, Result};

pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// Distribution of one sample amount over `{0, ..., q-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDistribution(Vec<f64>);

impl InputDistribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        let total: f64 = p.iter().sum();
        if p.len() < 2 || p.iter().any(|&v| v.is_nan() || v < 0.0 || !v.is_finite()) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadDistribution { total });
        }
        Ok(InputDistribution(p))
    }

    pub fn uniform(q: usize) -> Self {
        InputDistribution(vec![1.0 / q as f64; q])
    }

    pub fn q(&self) -> usize {
        self.0.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }
}

/// Contiguous partition of `{0, ..., (q-1)d}`: region `r` is `eta[r]..eta[r+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantizer {
    eta: Vec<u64>,
}

impl Quantizer {
    pub fn new(eta: Vec<u64>, q: usize, d: usize) -> Result<Self> {
        let top = ((q - 1) * d + 1) as u64;
        let ok = eta.len() >= 2 && eta[0] == 0 && eta.windows(2).all(|w| w[0] < w[1]) && eta[eta.len() - 1] == top;
        if !ok {
            return Err(Error::ThresholdNotIncreasing);
        }
        Ok(Quantizer { eta })
    }

    pub fn identity(q: usize, d: usize) -> Self {
        Quantizer { eta: (0..=((q - 1) * d + 1) as u64).collect() }
    }

    pub fn eta(&self) -> &[u64] {
        &self.eta
    }

    pub fn levels(&self) -> usize {
        self.eta.len() - 1
    }

    fn region_table(&self) -> Vec<usize> {
        let mut table = Vec::with_capacity(self.eta[self.eta.len() - 1] as usize);
        for r in 0..self.levels() {
            for _ in self.eta[r]..self.eta[r + 1] {
                table.push(r);
            }
        }
        table
    }
}

/// `d`-fold convolution of `pt`.
pub fn sum_pmf(pt: &InputDistribution, d: usize) -> Vec<f64> {
    let p = pt.probs();
    let mut out = vec![1.0];
    for _ in 0..d {
        let mut next = vec![0.0; out.len() + p.len() - 1];
        for (s, &a) in out.iter().enumerate() {
            for (t, &b) in p.iter().enumerate() {
                next[s + t] += a * b;
            }
        }
        out = next;
    }
    out
}

pub fn output_pmf(pt: &InputDistribution, d: usize, quant: &Quantizer) -> Vec<f64> {
    let mut out = vec![0.0; quant.levels()];
    for (s, &p) in sum_pmf(pt, d).iter().enumerate() {
        out[quant.region_table()[s]] += p;
    }
    out
}

/// Shannon entropy in bits.
pub fn entropy(p: &[f64]) -> f64 {
    (-p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.log2()).sum::<f64>()).max(0.0)
}

fn check_partition(i: usize, d: usize) -> Result<()> {
    if i == 0 || i > d {
        return Err(Error::BadPartition { i, d });
    }
    Ok(())
}

/// `I(t_1; t_2, z)` in bits for `i` symbols on one side and `d - i` on the
/// other, computed as `H(z | t_2)`.
pub fn mutual_info(pt: &InputDistribution, d: usize, i: usize, quant: &Quantizer) -> Result<f64> {
    check_partition(i, d)?;
    let regions = quant.region_table();
    let own = sum_pmf(pt, i);
    let other = sum_pmf(pt, d - i);
    let mut total = 0.0;
    let mut cond = vec![0.0; quant.levels()];
    for (s2, &p2) in other.iter().enumerate() {
        if p2 == 0.0 {
            continue;
        }
        cond.iter_mut().for_each(|v| *v = 0.0);
        for (s1, &p1) in own.iter().enumerate() {
            cond[regions[s1 + s2]] += p1;
        }
        total += p2 * entropy(&cond);
    }
    Ok(total)
}

/// Same quantity from the full joint of all `q^d` input tuples.
pub fn mutual_info_joint(pt: &InputDistribution, d: usize, i: usize, quant: &Quantizer) -> Result<f64> {
    check_partition(i, d)?;
    let p = pt.probs();
    let q = p.len();
    let regions = quant.region_table();
    let levels = quant.levels();
    let tuples = |k: usize| -> Vec<(f64, usize)> {
        let count = q.pow(k as u32);
        (0..count)
            .map(|mut code| {
                let mut prob = 1.0;
                let mut sum = 0;
                for _ in 0..k {
                    let t = code % q;
                    code /= q;
                    prob *= p[t];
                    sum += t;
                }
                (prob, sum)
            })
            .collect()
    };
    let first = tuples(i);
    let second = tuples(d - i);
    let mut info = 0.0;
    for &(p2, s2) in &second {
        let mut joint_t2_z = vec![0.0; levels];
        for &(p1, s1) in &first {
            joint_t2_z[regions[s1 + s2]] += p1 * p2;
        }
        for &(p1, s1) in &first {
            let pj = p1 * p2;
            if pj > 0.0 {
                info += pj * (pj / (p1 * joint_t2_z[regions[s1 + s2]])).log2();
            }
        }
    }
    Ok(info)
}

/// `I(i) / i` for `i = 1..=d`.
pub fn alpha_profile(pt: &InputDistribution, d: usize, quant: &Quantizer) -> Vec<f64> {
    (1..=d).map(|i| mutual_info(pt, d, i, quant).expect("valid partition") / i as f64).collect()
}

/// `min_i I(i) / i`, with the minimizing `i`.
pub fn alpha(d: usize, pt: &InputDistribution, quant: &Quantizer) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (k, v) in alpha_profile(pt, d, quant).into_iter().enumerate() {
        if v < best.0 {
            best = (v, k + 1);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub pt: InputDistribution,
    pub quant: Quantizer,
    pub alpha: f64,
}

/// All quantizers of `{0, ..., top-1}` into `levels` nonempty contiguous regions.
pub fn all_quantizers(q: usize, d: usize, levels: usize) -> Vec<Quantizer> {
    let top = (q - 1) * d + 1;
    let levels = levels.clamp(1, top);
    let mut out = Vec::new();
    let mut cuts = Vec::with_capacity(levels - 1);
    fn rec(start: usize, left: usize, top: usize, cuts: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(cuts.clone());
            return;
        }
        for c in start..=(top - left) {
            cuts.push(c as u64);
            rec(c + 1, left - 1, top, cuts, out);
            cuts.pop();
        }
    }
    let mut raw = Vec::new();
    rec(1, levels - 1, top, &mut cuts, &mut raw);
    for c in raw {
        let mut eta = vec![0];
        eta.extend(c);
        eta.push(top as u64);
        out.push(Quantizer { eta });
    }
    out
}

fn simplex_grid(q: usize, steps: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(left - v, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(steps, q, &mut Vec::new(), &mut out);
    out
}

fn alpha_of(p: &[f64], d: usize, quant: &Quantizer) -> f64 {
    alpha(d, &InputDistribution(p.to_vec()), quant).0
}

/// Grid search over the simplex and every contiguous quantizer, followed by
/// a pattern search around the best grid point. The result is a lower bound
/// on the capacity.
pub fn capacity_search(d: usize, q: usize, levels: usize, grid_step: f64) -> Result<CapacityResult> {
    capacity_search_with_budget(d, q, levels, grid_step, DEFAULT_SEARCH_BUDGET)
}

pub fn capacity_search_with_budget(
    d: usize,
    q: usize,
    levels: usize,
    grid_step: f64,
    budget: u64,
) -> Result<CapacityResult> {
    if d == 0 || q < 2 || levels == 0 {
        return Err(Error::ConfigError(format!("need d >= 1, q >= 2, Q >= 1; got d={d} q={q} Q={levels}")));
    }
    let steps = (1.0 / grid_step).round();
    if grid_step.is_nan() || grid_step <= 0.0 || (steps * grid_step - 1.0).abs() > 1e-9 {
        return Err(Error::ConfigError(format!("grid step {grid_step} does not divide 1")));
    }
    let steps = steps as usize;
    let quants = all_quantizers(q, d, levels);
    let points = binomial((steps + q - 1) as u64, (q - 1) as u64);
    let needed = points.saturating_mul(quants.len() as u128);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let grid = simplex_grid(q, steps);
    let best = grid
        .par_iter()
        .enumerate()
        .map(|(gi, point)| {
            let p: Vec<f64> = point.iter().map(|&k| k as f64 / steps as f64).collect();
            let mut local = (f64::NEG_INFINITY, gi, 0usize);
            for (qi, quant) in quants.iter().enumerate() {
                let a = alpha_of(&p, d, quant);
                if a > local.0 {
                    local = (a, gi, qi);
                }
            }
            local
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX, usize::MAX),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) { b } else { a },
        );
    let (mut best_alpha, gi, qi) = best;
    let quant = quants[qi].clone();
    let mut p: Vec<f64> = grid[gi].iter().map(|&k| k as f64 / steps as f64).collect();
    let mut step = grid_step / 2.0;
    while step > 1e-9 {
        let mut improved = true;
        while improved {
            improved = false;
            for a in 0..q {
                for b in 0..q {
                    if a == b || p[b] < step {
                        continue;
                    }
                    let mut cand = p.clone();
                    cand[a] += step;
                    cand[b] -= step;
                    let v = alpha_of(&cand, d, &quant);
                    if v > best_alpha + 1e-15 {
                        best_alpha = v;
                        p = cand;
                        improved = true;
                    }
                }
            }
        }
        step /= 2.0;
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    let alpha = alpha_of(&p, d, &quant);
    Ok(CapacityResult { pt: InputDistribution(p), quant, alpha })
}

fn info_terms(d: usize, pt: &InputDistribution, quant: &Quantizer) -> Vec<f64> {
    (1..=d).map(|i| mutual_info(pt, d, i, quant).expect("valid partition")).collect()
}

fn log2_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_binomial(n, k) / std::f64::consts::LN_2
}

fn ratio(num: f64, den: f64) -> f64 {
    if num <= 0.0 {
        0.0
    } else if den <= 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Tests sufficient for vanishing error: `max_i log2(C(n-d, i) C(d, i)) / I(i)`.
pub fn sufficient_tests(n: usize, d: usize, pt: &InputDistribution, quant: &Quantizer) -> f64 {
    let info = info_terms(d, pt, quant);
    (1..=d)
        .map(|i| {
            let num = log2_binomial((n - d) as u64, i as u64) + log2_binomial(d as u64, i as u64);
            ratio(num, info[i - 1])
        })
        .fold(0.0, f64::max)
}

/// Tests necessary for vanishing error: `max_i log2 C(n-d+i, i) / I(i)`.
pub fn necessary_tests(n: usize, d: usize, pt: &InputDistribution, quant: &Quantizer) -> f64 {
    let info = info_terms(d, pt, quant);
    (1..=d)
        .map(|i| ratio(log2_binomial((n - d + i) as u64, i as u64), info[i - 1]))
        .fold(0.0, f64::max)
}

fn check_eta(d: u64, eta: u64) -> Result<()> {
    if eta < 2 || eta > d {
        return Err(Error::BadEta { eta, d });
    }
    Ok(())
}

/// Row-count factor of threshold disjunct codes at threshold `eta`:
/// `(floor(log2(d/eta)) + 1) (d-1)/(eta-1) (8 eta)^eta`.
pub fn td_rate_f(d: u64, eta: u64) -> Result<f64> {
    check_eta(d, eta)?;
    let blocks = (floor_log2_ratio(d, eta) + 1) as f64;
    Ok(blocks * (d - 1) as f64 / (eta - 1) as f64 * (8.0 * eta as f64).powi(eta as i32))
}

/// Lower bound on the rate gain of the stacked binary ensemble over the
/// best threshold disjunct code, for thresholds `eta_1..eta_alpha`.
pub fn rate_ratio_sq7_td(d: u64, eta_prefix: &[u64]) -> Result<f64> {
    let eta1 = *eta_prefix.first().ok_or(Error::BadThreshold(0))?;
    let top = *eta_prefix.last().expect("nonempty");
    for &b in eta_prefix {
        check_eta(d, b)?;
    }
    let blocks = |eta: u64| (floor_log2_ratio(d, eta) + 1) as f64;
    let mu = (1.0 - 1.0 / top as f64) / 8.0;
    let mu1 = (1.0 - 1.0 / eta1 as f64) / 8.0;
    let term = |m: f64, b: u64| (m / (b - 1) as f64).powi(b as i32) * (b - 1) as f64;
    let num: f64 = eta_prefix.iter().map(|&b| term(mu, b)).sum();
    Ok(blocks(eta1) / blocks(top) * num / term(mu1, eta1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_row() -> (InputDistribution, Quantizer) {
        (InputDistribution::new(vec![0.33, 0.34, 0.33]).unwrap(), Quantizer::new(vec![0, 2, 3, 5], 3, 2).unwrap())
    }

    #[test]
    fn sum_pmf_examples() {
        let point = InputDistribution::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(sum_pmf(&point, 3)[0], 1.0);
        let coin = InputDistribution::uniform(2);
        assert_eq!(sum_pmf(&coin, 2), vec![0.25, 0.5, 0.25]);
        let u3 = InputDistribution::uniform(3);
        let expect = [1.0, 2.0, 3.0, 2.0, 1.0].map(|v| v / 9.0);
        for (a, b) in sum_pmf(&u3, 2).iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn output_pmf_buckets() {
        let (pt, qz) = table_row();
        let s = sum_pmf(&pt, 2);
        let o = output_pmf(&pt, 2, &qz);
        assert!((o[0] - (s[0] + s[1])).abs() < 1e-15);
        assert!((o[1] - s[2]).abs() < 1e-15);
        assert!((o[2] - (s[3] + s[4])).abs() < 1e-15);
        let single = Quantizer::new(vec![0, 5], 3, 2).unwrap();
        assert_eq!(entropy(&output_pmf(&pt, 2, &single)), 0.0);
        assert_eq!(output_pmf(&pt, 2, &Quantizer::identity(3, 2)), s);
    }

    #[test]
    fn mutual_info_examples() {
        let coin = InputDistribution::uniform(2);
        let id = Quantizer::identity(2, 1);
        assert!((mutual_info(&coin, 1, 1, &id).unwrap() - 1.0).abs() < 1e-15);
        let point = InputDistribution::new(vec![0.0, 1.0, 0.0]).unwrap();
        for i in 1..=3 {
            assert_eq!(mutual_info(&point, 3, i, &Quantizer::identity(3, 3)).unwrap(), 0.0);
        }
        assert_eq!(mutual_info(&coin, 2, 3, &Quantizer::identity(2, 2)), Err(Error::BadPartition { i: 3, d: 2 }));
    }

    #[test]
    fn two_paths_agree() {
        let (pt, qz) = table_row();
        for i in 1..=2 {
            let a = mutual_info(&pt, 2, i, &qz).unwrap();
            let b = mutual_info_joint(&pt, 2, i, &qz).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        let h = entropy(&output_pmf(&pt, 2, &qz));
        assert!((mutual_info(&pt, 2, 2, &qz).unwrap() - h).abs() < 1e-12);
        let pt4 = InputDistribution::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        for qz in all_quantizers(4, 3, 4).iter().step_by(7) {
            for i in 1..=3 {
                let a = mutual_info(&pt4, 3, i, qz).unwrap();
                let b = mutual_info_joint(&pt4, 3, i, qz).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn alpha_minimum_at_d() {
        let (pt, qz) = table_row();
        let (a, at) = alpha(2, &pt, &qz);
        assert_eq!(at, 2);
        assert!((a - mutual_info(&pt, 2, 2, &qz).unwrap() / 2.0).abs() < 1e-15);
        let (a1, _) = alpha(1, &pt, &Quantizer::identity(3, 1));
        assert!((a1 - mutual_info(&pt, 1, 1, &Quantizer::identity(3, 1)).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn quantizer_enumeration() {
        assert_eq!(all_quantizers(3, 2, 3).len(), 6);
        assert_eq!(all_quantizers(3, 2, 1).len(), 1);
        assert_eq!(all_quantizers(3, 2, 9), vec![Quantizer::identity(3, 2)]);
    }

    #[test]
    fn search_edge_cases() {
        let one = capacity_search(2, 3, 1, 0.1).unwrap();
        assert_eq!(one.alpha, 0.0);
        let full = capacity_search(1, 2, 5, 0.01).unwrap();
        assert!((full.alpha - 1.0).abs() < 1e-9);
        assert!(matches!(capacity_search(2, 3, 3, 0.3), Err(Error::ConfigError(_))));
        assert!(matches!(
            capacity_search_with_budget(2, 3, 3, 0.01, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn bounds() {
        let (pt, qz) = table_row();
        assert_eq!(sufficient_tests(2, 1, &pt, &Quantizer::identity(3, 1)), 0.0);
        let s = sufficient_tests(100, 2, &pt, &qz);
        assert!(s.is_finite() && s > 0.0);
        assert_eq!(necessary_tests(2, 2, &pt, &qz), 0.0);
        let mut prev = 0.0;
        for n in 3..60 {
            let v = sufficient_tests(n, 2, &pt, &qz);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn necessary_within_slack_of_sufficient() {
        use crate::rng::rng_from_seed;
        use rand::Rng;
        let mut rng = rng_from_seed(21);
        for _ in 0..50 {
            let q = rng.gen_range(2..=4);
            let d = rng.gen_range(1..=3);
            let n = rng.gen_range(4 * d..400);
            let raw: Vec<f64> = (0..q).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let pt = InputDistribution::new(raw.iter().map(|v| v / total).collect()).unwrap();
            let quants = all_quantizers(q, d, rng.gen_range(2..=(q - 1) * d + 1));
            let qz = &quants[rng.gen_range(0..quants.len())];
            let info = info_terms(d, &pt, qz);
            let slack = (1..=d)
                .map(|i| {
                    let r = ((n - d + i) as f64 / (n - d - i + 1) as f64).log2() * i as f64;
                    ratio(r, info[i - 1])
                })
                .fold(0.0, f64::max);
            let nec = necessary_tests(n, d, &pt, qz);
            let suf = sufficient_tests(n, d, &pt, qz);
            assert!(nec <= suf + slack + 1e-9, "n={n} d={d}: {nec} > {suf} + {slack}");
        }
    }

    #[test]
    fn necessary_grows_like_log_n_over_alpha() {
        let (pt, qz) = table_row();
        let (a, _) = alpha(2, &pt, &qz);
        let xs: Vec<f64> = (6..=12).map(|k| k as f64).collect();
        let ys: Vec<f64> = (6..=12).map(|k| necessary_tests(1 << k, 2, &pt, &qz)).collect();
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let my = ys.iter().sum::<f64>() / ys.len() as f64;
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!((slope * a - 1.0).abs() < 0.1, "slope {slope}, 1/alpha {}", 1.0 / a);
    }

    #[test]
    fn td_rate_values() {
        assert_eq!(td_rate_f(4, 2).unwrap(), 1536.0);
        let direct = ((3f64 / 2.0).log2().floor() + 1.0) * 2.0 / 1.0 * 16f64.powi(2);
        assert_eq!(td_rate_f(3, 2).unwrap(), direct);
        assert_eq!(td_rate_f(3, 1), Err(Error::BadEta { eta: 1, d: 3 }));
        assert_eq!(td_rate_f(3, 4), Err(Error::BadEta { eta: 4, d: 3 }));
    }

    #[test]
    fn rate_gain_example() {
        let r = rate_ratio_sq7_td(8, &[2, 4, 8]).unwrap();
        assert!(r > 3.0);
        assert!(rate_ratio_sq7_td(8, &[2, 8]).unwrap() > 3.0);
    }
}
